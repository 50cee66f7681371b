#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "idlink/corpus.hpp"
#include "idlink/feature_matrix.hpp"

namespace idlink {

struct WordVectors {
  std::vector<std::string> words;
  std::unordered_map<std::string, std::size_t> index;
  Eigen::MatrixXd vectors;  // |vocab| x dim

  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  std::size_t size() const { return words.size(); }
  std::optional<std::size_t> find(const std::string& word) const;
};

struct CbowConfig {
  std::size_t window = 5;
  std::size_t negative = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of its start value
  std::size_t min_count = 1;
};

struct SmoothingConfig {
  double lambda = 0.1;
};

// CBOW with negative sampling over the documents; context windows never
// cross document boundaries. Single-threaded and deterministic in `seed`.
WordVectors train_cbow(std::span<const TokenStream> docs, std::size_t dim, const CbowConfig& cfg,
                       std::uint64_t seed);

// Sum of the vectors of in-vocabulary tokens; OOV tokens contribute zero.
Eigen::VectorXd embed_user_words(const TokenStream& doc, const WordVectors& wv);

FeatureMatrix embed_words(std::span<const TokenStream> docs, const WordVectors& wv);

// One pass of p_i <- (1 - lambda) p_i + (lambda / s_i) sum_{j in N(i)} p*_j,
// where p* is the frozen input. Isolated users are left unchanged.
FeatureMatrix smooth_with_neighbors(const FeatureMatrix& raw, const Network& net,
                                    const SmoothingConfig& cfg);

// Text format: "count dim" header, then "word v_1 ... v_dim" per line.
void save_word_vectors(const WordVectors& wv, const std::filesystem::path& path);
WordVectors load_word_vectors(const std::filesystem::path& path);

}  // namespace idlink
