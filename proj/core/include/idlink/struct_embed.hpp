#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "idlink/corpus.hpp"
#include "idlink/feature_matrix.hpp"

namespace idlink {

struct LineConfig {
  std::size_t negative = 5;
  std::size_t samples_per_edge = 100;  // total samples = samples_per_edge * |E|
  double learning_rate = 0.025;        // decays linearly to 1e-4 of its start value
};

// Second-order LINE vectors, one row per user.
struct StructEmbedding {
  Eigen::MatrixXd vertex;   // n x d_s
  Eigen::MatrixXd context;  // n x d_s
};

// Throws DataError for an edgeless network; attribute-only pipelines should
// not request the structure level in that case.
StructEmbedding train_line(const Network& net, std::size_t dim, const LineConfig& cfg,
                           std::uint64_t seed);

// d_s x n matrix of vertex vectors.
FeatureMatrix embed_structure(const Network& net, std::size_t dim, const LineConfig& cfg,
                              std::uint64_t seed);

}  // namespace idlink
