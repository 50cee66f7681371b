#include "idlink/word_embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "idlink/error.hpp"
#include "idlink/random.hpp"

namespace idlink {

std::optional<std::size_t> WordVectors::find(const std::string& word) const {
  const auto it = index.find(word);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

WordVectors train_cbow(std::span<const TokenStream> docs, std::size_t dim, const CbowConfig& cfg,
                       std::uint64_t seed) {
  if (dim == 0) throw ConfigError("train_cbow: dimension must be >= 1");

  std::map<std::string, std::size_t> counts;
  for (const auto& doc : docs) {
    for (const auto& t : doc.tokens) ++counts[t];
  }
  WordVectors wv;
  std::vector<double> frequency;
  for (const auto& [word, count] : counts) {
    if (count < cfg.min_count) continue;
    wv.index.emplace(word, wv.words.size());
    wv.words.push_back(word);
    frequency.push_back(std::pow(static_cast<double>(count), 0.75));
  }
  if (wv.words.empty()) throw DataError("train_cbow: empty corpus");

  const std::size_t vocab = wv.words.size();
  std::vector<std::vector<std::size_t>> encoded;
  encoded.reserve(docs.size());
  std::size_t total_tokens = 0;
  for (const auto& doc : docs) {
    auto& ids = encoded.emplace_back();
    for (const auto& t : doc.tokens) {
      if (auto it = wv.index.find(t); it != wv.index.end()) ids.push_back(it->second);
    }
    total_tokens += ids.size();
  }

  Rng rng(seed);
  std::vector<double> input(vocab * dim);
  std::vector<double> output(vocab * dim, 0.0);
  for (double& v : input) v = (rng.uniform() - 0.5) / static_cast<double>(dim);
  const AliasTable noise(frequency);

  const double total_work = static_cast<double>(total_tokens * cfg.epochs) + 1.0;
  std::size_t processed = 0;
  std::vector<double> hidden(dim);
  std::vector<double> hidden_grad(dim);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& ids : encoded) {
      const std::size_t len = ids.size();
      for (std::size_t pos = 0; pos < len; ++pos, ++processed) {
        const double alpha = cfg.learning_rate *
                             std::max(1.0 - static_cast<double>(processed) / total_work, 1e-4);
        const std::size_t shrink = cfg.window > 0 ? rng.below(cfg.window) : 0;
        const std::size_t reach = cfg.window - shrink;
        const std::size_t lo = pos >= reach ? pos - reach : 0;
        const std::size_t hi = std::min(len - 1, pos + reach);

        std::fill(hidden.begin(), hidden.end(), 0.0);
        std::size_t context = 0;
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const double* src = &input[ids[c] * dim];
          for (std::size_t k = 0; k < dim; ++k) hidden[k] += src[k];
          ++context;
        }
        if (context == 0) continue;
        for (double& h : hidden) h /= static_cast<double>(context);

        std::fill(hidden_grad.begin(), hidden_grad.end(), 0.0);
        for (std::size_t s = 0; s <= cfg.negative; ++s) {
          std::size_t target = ids[pos];
          double label = 1.0;
          if (s > 0) {
            target = noise.sample(rng);
            if (target == ids[pos]) continue;
            label = 0.0;
          }
          double* out = &output[target * dim];
          double score = 0.0;
          for (std::size_t k = 0; k < dim; ++k) score += hidden[k] * out[k];
          const double g = (label - sigmoid(score)) * alpha;
          for (std::size_t k = 0; k < dim; ++k) hidden_grad[k] += g * out[k];
          for (std::size_t k = 0; k < dim; ++k) out[k] += g * hidden[k];
        }
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          double* dst = &input[ids[c] * dim];
          for (std::size_t k = 0; k < dim; ++k) dst[k] += hidden_grad[k];
        }
      }
    }
  }

  wv.vectors.resize(static_cast<Eigen::Index>(vocab), static_cast<Eigen::Index>(dim));
  for (std::size_t w = 0; w < vocab; ++w) {
    for (std::size_t k = 0; k < dim; ++k) {
      wv.vectors(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(k)) = input[w * dim + k];
    }
  }
  return wv;
}

Eigen::VectorXd embed_user_words(const TokenStream& doc, const WordVectors& wv) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(wv.dim()));
  for (const auto& t : doc.tokens) {
    if (auto it = wv.index.find(t); it != wv.index.end()) {
      sum += wv.vectors.row(static_cast<Eigen::Index>(it->second)).transpose();
    }
  }
  return sum;
}

FeatureMatrix embed_words(std::span<const TokenStream> docs, const WordVectors& wv) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(wv.dim()), static_cast<Eigen::Index>(docs.size()));
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = embed_user_words(docs[i], wv);
  }
  return FeatureMatrix(std::move(out), Level::kWord);
}

FeatureMatrix smooth_with_neighbors(const FeatureMatrix& raw, const Network& net,
                                    const SmoothingConfig& cfg) {
  if (!(cfg.lambda >= 0.0 && cfg.lambda <= 1.0)) {
    throw ConfigError("smoothing lambda must lie in [0, 1], got " + std::to_string(cfg.lambda));
  }
  if (raw.users() != net.size()) {
    throw DataError("smooth_with_neighbors: matrix has " + std::to_string(raw.users()) +
                    " columns but network has " + std::to_string(net.size()) + " users");
  }
  FeatureMatrix out = raw;
  const Eigen::MatrixXd& frozen = raw.data;
  for (UserIndex i = 0; i < net.size(); ++i) {
    const auto nbrs = net.neighbors(i);
    if (nbrs.empty()) continue;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(frozen.rows());
    for (UserIndex j : nbrs) acc += frozen.col(j);
    out.data.col(i) = (1.0 - cfg.lambda) * frozen.col(i) +
                      (cfg.lambda / static_cast<double>(nbrs.size())) * acc;
  }
  return out;
}

void save_word_vectors(const WordVectors& wv, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << wv.size() << ' ' << wv.dim() << '\n' << std::setprecision(17);
  for (std::size_t w = 0; w < wv.size(); ++w) {
    out << wv.words[w];
    for (std::size_t k = 0; k < wv.dim(); ++k) {
      out << ' ' << wv.vectors(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(k));
    }
    out << '\n';
  }
}

WordVectors load_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::size_t count = 0;
  std::size_t dim = 0;
  std::string header;
  if (!std::getline(in, header) || !(std::istringstream(header) >> count >> dim) || dim == 0) {
    throw DataError(path.string() + ":1: expected header \"count dim\"");
  }
  WordVectors wv;
  wv.vectors.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
  std::string line;
  for (std::size_t w = 0; w < count; ++w) {
    if (!std::getline(in, line)) {
      throw DataError(path.string() + ": expected " + std::to_string(count) + " vectors, found " +
                      std::to_string(w));
    }
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    for (std::size_t k = 0; k < dim; ++k) {
      double v = 0.0;
      if (!(fields >> v)) {
        throw DataError(path.string() + ":" + std::to_string(w + 2) + ": expected " +
                        std::to_string(dim) + " values");
      }
      wv.vectors(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(k)) = v;
    }
    if (!wv.index.emplace(word, w).second) {
      throw DataError(path.string() + ":" + std::to_string(w + 2) + ": duplicate word " + word);
    }
    wv.words.push_back(std::move(word));
  }
  return wv;
}

}  // namespace idlink
