#pragma once

#include <cstdint>
#include <filesystem>

#include "idlink/corpus.hpp"

namespace idlink {

struct SynthConfig {
  std::size_t n_users = 500;
  std::size_t attachment_m = 4;  // preferential-attachment edges per new user
  double edge_drop_p = 0.1;
  double attr_drop_p = 0.2;   // per attribute item (a name, a phrase, a post)
  double char_noise_p = 0.05; // per-character substitution in names
  double word_swap_p = 0.1;   // per-word replacement in phrases
  std::size_t planted_topics = 10;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

struct SyntheticPair {
  Network source;
  Network target;
  MatchedPairs truth;  // source index -> target index, a bijection
};

// Source network: Barabasi-Albert graph with synthetic names, phrases drawn
// from a shared word pool and posts drawn from planted topics. Target network:
// a user-permuted copy with edges, items, characters and words perturbed.
SyntheticPair generate_pair(const SynthConfig& cfg);

struct SyntheticFiles {
  std::filesystem::path users_x, edges_x, users_y, edges_y, pairs;
};

SyntheticFiles write_synthetic(const SyntheticPair& data, const std::filesystem::path& dir);

}  // namespace idlink
