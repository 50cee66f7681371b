#include "idlink/struct_embed.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "idlink/error.hpp"
#include "idlink/random.hpp"

namespace idlink {
namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

StructEmbedding train_line(const Network& net, std::size_t dim, const LineConfig& cfg,
                           std::uint64_t seed) {
  if (dim == 0) throw ConfigError("embed_structure: dimension must be >= 1");
  if (net.edges().empty()) {
    throw DataError("embed_structure: network '" + net.name() +
                    "' has no edges; use variant=attrs_only to skip the structure level");
  }
  const std::size_t n = net.size();

  // Network::edges() is already sorted, so sampling does not depend on file order.
  std::vector<std::pair<UserIndex, UserIndex>> arcs;
  arcs.reserve(net.edges().size() * 2);
  for (const Edge& e : net.edges()) {
    arcs.emplace_back(e.first, e.second);
    arcs.emplace_back(e.second, e.first);
  }
  const std::vector<double> arc_weights(arcs.size(), 1.0);
  std::vector<double> noise_weights(n);
  for (UserIndex i = 0; i < n; ++i) {
    noise_weights[i] = std::pow(static_cast<double>(net.degree(i)), 0.75);
  }
  const AliasTable arc_table(arc_weights);
  const AliasTable noise_table(noise_weights);

  Rng rng(seed);
  std::vector<double> vertex(n * dim);
  std::vector<double> context(n * dim, 0.0);
  for (double& v : vertex) v = (rng.uniform() - 0.5) / static_cast<double>(dim);

  const std::size_t total = cfg.samples_per_edge * net.edges().size();
  std::vector<double> error(dim);
  for (std::size_t s = 0; s < total; ++s) {
    const double rho = cfg.learning_rate *
                       std::max(1.0 - static_cast<double>(s) / static_cast<double>(total + 1), 1e-4);
    const auto [u, v] = arcs[arc_table.sample(rng)];
    double* src = &vertex[static_cast<std::size_t>(u) * dim];
    std::fill(error.begin(), error.end(), 0.0);
    for (std::size_t k = 0; k <= cfg.negative; ++k) {
      std::size_t target = v;
      double label = 1.0;
      if (k > 0) {
        target = noise_table.sample(rng);
        if (target == v || target == u) continue;
        label = 0.0;
      }
      double* ctx = &context[target * dim];
      double score = 0.0;
      for (std::size_t c = 0; c < dim; ++c) score += src[c] * ctx[c];
      const double g = (label - sigmoid(score)) * rho;
      for (std::size_t c = 0; c < dim; ++c) error[c] += g * ctx[c];
      for (std::size_t c = 0; c < dim; ++c) ctx[c] += g * src[c];
    }
    for (std::size_t c = 0; c < dim; ++c) src[c] += error[c];
  }

  StructEmbedding out;
  out.vertex = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      vertex.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  out.context = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      context.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  return out;
}

FeatureMatrix embed_structure(const Network& net, std::size_t dim, const LineConfig& cfg,
                              std::uint64_t seed) {
  StructEmbedding emb = train_line(net, dim, cfg, seed);
  return FeatureMatrix(emb.vertex.transpose(), Level::kStructure);
}

}  // namespace idlink
