#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idlink/char_embed.hpp"
#include "idlink/feature_matrix.hpp"
#include "idlink/struct_embed.hpp"
#include "idlink/word_embed.hpp"

namespace idlink {

enum class Variant {
  kFull,          // all four levels + RCCA
  kAttrsOnly,     // char, word, topic + RCCA
  kStructOnly,    // structure + RCCA
  kNoProjection,  // all four levels, matched without RCCA
};

enum class CandidatePool { kAll, kTest };

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

// Levels fused for a variant, in stacking order.
std::vector<Level> variant_levels(Variant v);

struct ExperimentConfig {
  std::filesystem::path users_x, edges_x, users_y, edges_y, pairs;
  Variant variant = Variant::kFull;
  std::uint64_t seed = 1;

  std::vector<std::string> stop_words = {"the", "with", "of", "and", "a", "an",
                                         "in",  "on",   "at", "for", "to"};
  std::size_t min_word_count = 10;
  std::vector<int> q_values = {2, 3};

  std::size_t char_dim = 100;
  SgdConfig char_opt;

  std::size_t word_dim = 100;
  CbowConfig cbow;
  double lambda = 0.1;
  std::filesystem::path word_vectors_x, word_vectors_y;  // optional imports

  std::size_t topic_dim = 100;
  std::optional<double> alpha, beta;  // default 1/topic_dim
  std::size_t topic_iters = 200;

  std::size_t struct_dim = 100;
  LineConfig line;

  std::size_t k_proj = 25;
  double reg = 1e5;

  std::size_t n_train = 200;
  std::size_t n_test = 500;  // capped at the pairs left after training
  std::size_t top_k = 3;
  std::size_t repetitions = 10;
  CandidatePool pool = CandidatePool::kAll;

  double topic_alpha() const { return alpha.value_or(1.0 / static_cast<double>(topic_dim)); }
  double topic_beta() const { return beta.value_or(1.0 / static_cast<double>(topic_dim)); }
  std::size_t level_dim(Level level) const;
  std::size_t fused_dim() const;

  // Throws ConfigError on any out-of-range value. Does not touch the filesystem.
  void validate() const;

  // Every key with its resolved value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  // Applies one "section.key" setting; throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
};

// Environment overrides use IDLINK_<SECTION>__<KEY>, e.g. IDLINK_RCCA__K_PROJ.
std::string env_var_for(const std::string& key);

// Parses a flat "section.key = value" file ('#' starts a comment). Relative
// data paths resolve against the file's directory. Environment overrides are
// applied after the file.
ExperimentConfig load_config(const std::filesystem::path& path);

// Parses config text; `base_dir` anchors relative paths.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

void apply_env_overrides(ExperimentConfig& cfg);

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

// Settings for generated networks, which come with a small anchor set. Data
// paths point at the file names written by write_synthetic inside `dir`.
ExperimentConfig synthetic_benchmark_config(const std::filesystem::path& dir = {});

}  // namespace idlink
