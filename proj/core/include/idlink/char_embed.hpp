#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "idlink/corpus.hpp"
#include "idlink/feature_matrix.hpp"

namespace idlink {

// Token-by-user count matrix; vocabulary rows are in lexicographic order.
struct CountMatrix {
  Eigen::MatrixXd data;  // m x n, nonnegative integral values
  std::vector<std::string> vocab;
  std::unordered_map<std::string, std::size_t> rows;

  std::size_t tokens() const { return vocab.size(); }
  std::size_t users() const { return static_cast<std::size_t>(data.cols()); }
};

CountMatrix count_vectorize(std::span<const TokenStream> streams);

// z = W x + b,  y = W* z + b*. Decoder is untied from the encoder.
struct LinearAutoencoder {
  Eigen::MatrixXd encoder_weights;  // d_c x m
  Eigen::VectorXd encoder_bias;     // d_c
  Eigen::MatrixXd decoder_weights;  // m x d_c
  Eigen::VectorXd decoder_bias;     // m

  std::size_t input_dim() const { return static_cast<std::size_t>(encoder_weights.cols()); }
  std::size_t code_dim() const { return static_cast<std::size_t>(encoder_weights.rows()); }
};

struct SgdConfig {
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  std::size_t max_epochs = 200;
  double min_relative_improvement = 1e-5;
  std::size_t patience = 10;
};

struct AutoencoderTrace {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::size_t epochs_run = 0;
  std::vector<double> epoch_losses;  // loss after each accepted epoch
};

LinearAutoencoder init_autoencoder(std::size_t input_dim, std::size_t code_dim, std::uint64_t seed);

// L = (1/n) sum_i ||x_i - y_i||^2 over the columns of `x`.
double reconstruction_loss(const LinearAutoencoder& model, const Eigen::MatrixXd& x);

// Analytic gradient of reconstruction_loss, in the same layout as the model.
LinearAutoencoder reconstruction_gradient(const LinearAutoencoder& model, const Eigen::MatrixXd& x);

// Mini-batch gradient descent from a seeded uniform(-1/sqrt(m), 1/sqrt(m))
// initialization. An epoch that raises the full-data loss is rolled back and
// the learning rate halved, so the recorded loss never increases.
LinearAutoencoder train_autoencoder(const CountMatrix& counts, std::size_t code_dim,
                                    const SgdConfig& opt, std::uint64_t seed,
                                    AutoencoderTrace* trace = nullptr);

FeatureMatrix encode_chars(const LinearAutoencoder& model, const CountMatrix& counts);

}  // namespace idlink
