#include "idlink/char_embed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "idlink/error.hpp"
#include "idlink/random.hpp"

namespace idlink {

CountMatrix count_vectorize(std::span<const TokenStream> streams) {
  if (streams.empty()) throw DataError("count_vectorize: no token streams");
  std::map<std::string, std::size_t> ordered;
  for (const auto& s : streams) {
    for (const auto& t : s.tokens) ordered.emplace(t, 0);
  }
  CountMatrix counts;
  counts.vocab.reserve(ordered.size());
  for (auto& [token, row] : ordered) {
    row = counts.vocab.size();
    counts.vocab.push_back(token);
    counts.rows.emplace(token, row);
  }
  counts.data = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ordered.size()),
                                      static_cast<Eigen::Index>(streams.size()));
  for (std::size_t col = 0; col < streams.size(); ++col) {
    for (const auto& t : streams[col].tokens) {
      counts.data(static_cast<Eigen::Index>(ordered.at(t)), static_cast<Eigen::Index>(col)) += 1.0;
    }
  }
  return counts;
}

LinearAutoencoder init_autoencoder(std::size_t input_dim, std::size_t code_dim, std::uint64_t seed) {
  const auto m = static_cast<Eigen::Index>(input_dim);
  const auto d = static_cast<Eigen::Index>(code_dim);
  const double bound = 1.0 / std::sqrt(static_cast<double>(input_dim));
  Rng rng(seed);
  LinearAutoencoder model;
  model.encoder_weights.resize(d, m);
  model.decoder_weights.resize(m, d);
  for (Eigen::Index i = 0; i < model.encoder_weights.size(); ++i) {
    model.encoder_weights.data()[i] = rng.uniform(-bound, bound);
  }
  for (Eigen::Index i = 0; i < model.decoder_weights.size(); ++i) {
    model.decoder_weights.data()[i] = rng.uniform(-bound, bound);
  }
  model.encoder_bias = Eigen::VectorXd::Zero(d);
  model.decoder_bias = Eigen::VectorXd::Zero(m);
  return model;
}

namespace {

Eigen::MatrixXd reconstruct(const LinearAutoencoder& model, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd z = (model.encoder_weights * x).colwise() + model.encoder_bias;
  return (model.decoder_weights * z).colwise() + model.decoder_bias;
}

// Gradient of (1/cols) sum ||x - y||^2; written into `grad`.
void gradient_into(const LinearAutoencoder& model, const Eigen::MatrixXd& x,
                   LinearAutoencoder& grad) {
  const double scale = 2.0 / static_cast<double>(x.cols());
  const Eigen::MatrixXd z = (model.encoder_weights * x).colwise() + model.encoder_bias;
  const Eigen::MatrixXd err =
      scale * (((model.decoder_weights * z).colwise() + model.decoder_bias) - x);
  grad.decoder_weights.noalias() = err * z.transpose();
  grad.decoder_bias = err.rowwise().sum();
  const Eigen::MatrixXd dz = model.decoder_weights.transpose() * err;
  grad.encoder_weights.noalias() = dz * x.transpose();
  grad.encoder_bias = dz.rowwise().sum();
}

void step(LinearAutoencoder& model, const LinearAutoencoder& grad, double lr) {
  model.encoder_weights -= lr * grad.encoder_weights;
  model.encoder_bias -= lr * grad.encoder_bias;
  model.decoder_weights -= lr * grad.decoder_weights;
  model.decoder_bias -= lr * grad.decoder_bias;
}

}  // namespace

double reconstruction_loss(const LinearAutoencoder& model, const Eigen::MatrixXd& x) {
  if (x.cols() == 0) return 0.0;
  return (reconstruct(model, x) - x).squaredNorm() / static_cast<double>(x.cols());
}

LinearAutoencoder reconstruction_gradient(const LinearAutoencoder& model, const Eigen::MatrixXd& x) {
  LinearAutoencoder grad;
  gradient_into(model, x, grad);
  return grad;
}

LinearAutoencoder train_autoencoder(const CountMatrix& counts, std::size_t code_dim,
                                    const SgdConfig& opt, std::uint64_t seed,
                                    AutoencoderTrace* trace) {
  const std::size_t m = counts.tokens();
  const std::size_t n = counts.users();
  if (m == 0 || n == 0) {
    throw DataError("train_autoencoder: empty corpus (m=" + std::to_string(m) +
                    ", n=" + std::to_string(n) + ")");
  }
  if (code_dim == 0) throw ConfigError("train_autoencoder: code dimension must be >= 1");
  if (opt.batch_size == 0) throw ConfigError("train_autoencoder: batch size must be >= 1");

  LinearAutoencoder model = init_autoencoder(m, code_dim, seed);
  Rng rng(mix_seed(seed, 1));
  LinearAutoencoder grad;
  const Eigen::MatrixXd& x = counts.data;

  double loss = reconstruction_loss(model, x);
  if (!std::isfinite(loss)) throw NumericalError("train_autoencoder: initial loss is not finite");
  AutoencoderTrace local;
  local.initial_loss = loss;
  double lr = opt.learning_rate;
  std::size_t stale_epochs = 0;

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Eigen::MatrixXd batch;

  for (std::size_t epoch = 0; epoch < opt.max_epochs; ++epoch) {
    const LinearAutoencoder snapshot = model;
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += opt.batch_size) {
      const std::size_t stop = std::min(n, start + opt.batch_size);
      batch.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(stop - start));
      for (std::size_t k = start; k < stop; ++k) {
        batch.col(static_cast<Eigen::Index>(k - start)) = x.col(order[k]);
      }
      gradient_into(model, batch, grad);
      step(model, grad, lr);
    }
    const double next = reconstruction_loss(model, x);
    ++local.epochs_run;
    if (!std::isfinite(next) || next > loss) {
      model = snapshot;
      lr *= 0.5;
      if (lr < opt.learning_rate * 1e-9) {
        throw NumericalError("train_autoencoder: loss diverged at epoch " + std::to_string(epoch) +
                             " and learning-rate halving did not recover");
      }
      local.epoch_losses.push_back(loss);
      continue;
    }
    const double improvement = loss > 0.0 ? (loss - next) / loss : 0.0;
    loss = next;
    local.epoch_losses.push_back(loss);
    if (improvement < opt.min_relative_improvement) {
      if (++stale_epochs >= opt.patience) break;
    } else {
      stale_epochs = 0;
    }
  }

  local.final_loss = loss;
  if (trace) *trace = std::move(local);
  return model;
}

FeatureMatrix encode_chars(const LinearAutoencoder& model, const CountMatrix& counts) {
  if (counts.tokens() != model.input_dim()) {
    throw DataError("encode_chars: dimension mismatch, model expects m=" +
                    std::to_string(model.input_dim()) + " but counts have m=" +
                    std::to_string(counts.tokens()));
  }
  Eigen::MatrixXd codes = (model.encoder_weights * counts.data).colwise() + model.encoder_bias;
  return FeatureMatrix(std::move(codes), Level::kChar);
}

}  // namespace idlink
