#include "idlink/topic_embed.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>

#include "idlink/error.hpp"

namespace idlink {

bool LdaState::counters_consistent() const {
  const auto k = static_cast<Eigen::Index>(topics());
  Eigen::MatrixXi wt = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(vocab_size()), k);
  Eigen::MatrixXi dt = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(num_docs()), k);
  Eigen::VectorXi totals = Eigen::VectorXi::Zero(k);
  if (assignments.size() != docs.size()) return false;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (assignments[d].size() != docs[d].size()) return false;
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const auto z = static_cast<Eigen::Index>(assignments[d][i]);
      if (z >= k) return false;
      ++wt(docs[d][i], z);
      ++dt(static_cast<Eigen::Index>(d), z);
      ++totals(z);
    }
  }
  return wt == word_topic && dt == doc_topic && totals == topic_totals;
}

LdaSampler::LdaSampler(std::span<const TokenStream> docs, std::size_t topics, double alpha,
                       double beta, std::uint64_t seed)
    : rng_(seed), weights_(topics) {
  if (topics < 2) throw ConfigError("LDA needs at least 2 topics, got " + std::to_string(topics));
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw ConfigError("LDA priors must be positive (alpha=" + std::to_string(alpha) +
                      ", beta=" + std::to_string(beta) + ")");
  }
  if (docs.empty()) throw DataError("LDA: no documents");

  std::map<std::string, std::uint32_t> ids;
  for (const auto& doc : docs) {
    for (const auto& t : doc.tokens) ids.emplace(t, 0);
  }
  if (ids.empty()) throw DataError("LDA: empty vocabulary");
  for (auto& [word, id] : ids) {
    id = static_cast<std::uint32_t>(state_.vocab.size());
    state_.vocab.push_back(word);
  }

  const auto k = static_cast<Eigen::Index>(topics);
  state_.alpha = alpha;
  state_.beta = beta;
  state_.word_topic = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(ids.size()), k);
  state_.doc_topic = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(docs.size()), k);
  state_.topic_totals = Eigen::VectorXi::Zero(k);
  state_.docs.resize(docs.size());
  state_.assignments.resize(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    auto& words = state_.docs[d];
    auto& z = state_.assignments[d];
    words.reserve(docs[d].size());
    z.reserve(docs[d].size());
    for (const auto& t : docs[d].tokens) {
      const std::uint32_t w = ids.at(t);
      const auto topic = static_cast<std::uint32_t>(rng_.below(topics));
      words.push_back(w);
      z.push_back(topic);
      ++state_.word_topic(w, topic);
      ++state_.doc_topic(static_cast<Eigen::Index>(d), topic);
      ++state_.topic_totals(topic);
    }
  }
}

void LdaSampler::conditional(std::size_t doc, std::size_t pos, std::span<double> out) const {
  const std::size_t k = state_.topics();
  const std::uint32_t w = state_.docs[doc][pos];
  const std::uint32_t current = state_.assignments[doc][pos];
  const double vocab_beta = static_cast<double>(state_.vocab_size()) * state_.beta;
  // The document-side denominator is constant in j and cancels on normalization.
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const int self = j == current ? 1 : 0;
    const double wt = state_.word_topic(w, static_cast<Eigen::Index>(j)) - self;
    const double tt = state_.topic_totals(static_cast<Eigen::Index>(j)) - self;
    const double dt = state_.doc_topic(static_cast<Eigen::Index>(doc), static_cast<Eigen::Index>(j)) - self;
    out[j] = (wt + state_.beta) / (tt + vocab_beta) * (dt + state_.alpha);
    total += out[j];
  }
  for (std::size_t j = 0; j < k; ++j) out[j] /= total;
}

void LdaSampler::sweep() {
  const std::size_t k = state_.topics();
  const double beta = state_.beta;
  const double alpha = state_.alpha;
  const double vocab_beta = static_cast<double>(state_.vocab_size()) * beta;
  for (std::size_t d = 0; d < state_.docs.size(); ++d) {
    const auto di = static_cast<Eigen::Index>(d);
    const auto& words = state_.docs[d];
    auto& z = state_.assignments[d];
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::uint32_t w = words[i];
      const std::uint32_t old = z[i];
      --state_.word_topic(w, old);
      --state_.doc_topic(di, old);
      --state_.topic_totals(old);

      double total = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        total += (state_.word_topic(w, jj) + beta) / (state_.topic_totals(jj) + vocab_beta) *
                 (state_.doc_topic(di, jj) + alpha);
        weights_[j] = total;
      }
      const double u = rng_.uniform() * total;
      auto chosen = static_cast<std::uint32_t>(
          std::upper_bound(weights_.begin(), weights_.end(), u) - weights_.begin());
      if (chosen >= k) chosen = static_cast<std::uint32_t>(k - 1);

      z[i] = chosen;
      ++state_.word_topic(w, chosen);
      ++state_.doc_topic(di, chosen);
      ++state_.topic_totals(chosen);
    }
  }
  ++sweeps_;
}

LdaState gibbs_sample(std::span<const TokenStream> docs, std::size_t topics, double alpha,
                      double beta, std::size_t iters, std::uint64_t seed) {
  if (iters == 0) throw ConfigError("gibbs_sample: iters must be >= 1");
  LdaSampler sampler(docs, topics, alpha, beta, seed);
  for (std::size_t it = 0; it < iters; ++it) sampler.sweep();
  return sampler.state();
}

Eigen::VectorXd estimate_theta(const LdaState& state, std::size_t doc_index) {
  const auto k = static_cast<Eigen::Index>(state.topics());
  const Eigen::VectorXd counts =
      state.doc_topic.row(static_cast<Eigen::Index>(doc_index)).transpose().cast<double>();
  const double denom = counts.sum() + static_cast<double>(k) * state.alpha;
  return (counts.array() + state.alpha) / denom;
}

Eigen::MatrixXd estimate_phi(const LdaState& state) {
  const auto k = static_cast<Eigen::Index>(state.topics());
  Eigen::MatrixXd phi(k, static_cast<Eigen::Index>(state.vocab_size()));
  const double vocab_beta = static_cast<double>(state.vocab_size()) * state.beta;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double denom = state.topic_totals(j) + vocab_beta;
    phi.row(j) = (state.word_topic.col(j).cast<double>().array() + state.beta).transpose() / denom;
  }
  return phi;
}

FeatureMatrix topic_features(const LdaState& state) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(state.topics()),
                      static_cast<Eigen::Index>(state.num_docs()));
  for (std::size_t d = 0; d < state.num_docs(); ++d) {
    out.col(static_cast<Eigen::Index>(d)) = estimate_theta(state, d);
  }
  return FeatureMatrix(std::move(out), Level::kTopic);
}

FeatureMatrix embed_topics(std::span<const TokenStream> docs, std::size_t topics, double alpha,
                           double beta, std::size_t iters, std::uint64_t seed) {
  return topic_features(gibbs_sample(docs, topics, alpha, beta, iters, seed));
}

void write_topic_report(const LdaState& state, const std::filesystem::path& path,
                        std::size_t top_n) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  const Eigen::MatrixXd phi = estimate_phi(state);
  std::vector<std::size_t> order(state.vocab_size());
  out << std::fixed << std::setprecision(4);
  for (Eigen::Index j = 0; j < phi.rows(); ++j) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t shown = std::min(top_n, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(shown), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double pa = phi(j, static_cast<Eigen::Index>(a));
                        const double pb = phi(j, static_cast<Eigen::Index>(b));
                        return pa != pb ? pa > pb : a < b;
                      });
    out << "topic " << j << ':';
    for (std::size_t r = 0; r < shown; ++r) {
      out << ' ' << state.vocab[order[r]] << '(' << phi(j, static_cast<Eigen::Index>(order[r])) << ')';
    }
    out << '\n';
  }
}

}  // namespace idlink
