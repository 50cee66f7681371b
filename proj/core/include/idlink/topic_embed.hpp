#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "idlink/corpus.hpp"
#include "idlink/feature_matrix.hpp"
#include "idlink/random.hpp"

namespace idlink {

// Collapsed-Gibbs LDA state. Counters are derived data: they must always equal
// what recount() would rebuild from the assignments.
struct LdaState {
  std::vector<std::string> vocab;                // lexicographic
  std::vector<std::vector<std::uint32_t>> docs;  // word ids per document
  std::vector<std::vector<std::uint32_t>> assignments;
  Eigen::MatrixXi word_topic;  // |vocab| x topics
  Eigen::MatrixXi doc_topic;   // docs x topics
  Eigen::VectorXi topic_totals;
  double alpha = 0.0;
  double beta = 0.0;

  std::size_t topics() const { return static_cast<std::size_t>(word_topic.cols()); }
  std::size_t vocab_size() const { return vocab.size(); }
  std::size_t num_docs() const { return docs.size(); }

  // True when word_topic, doc_topic and topic_totals match the assignments.
  bool counters_consistent() const;
};

class LdaSampler {
 public:
  // Assigns every token a uniformly random topic. Throws ConfigError on
  // topics < 2 or non-positive priors, DataError on an empty vocabulary.
  LdaSampler(std::span<const TokenStream> docs, std::size_t topics, double alpha, double beta,
             std::uint64_t seed);

  // One full sweep resampling every token from its collapsed conditional.
  void sweep();

  // Normalized p(z = j | rest) for token `pos` of document `doc`, with that
  // token's own assignment excluded from the counts.
  void conditional(std::size_t doc, std::size_t pos, std::span<double> out) const;

  const LdaState& state() const { return state_; }
  std::size_t sweeps_done() const { return sweeps_; }

 private:
  LdaState state_;
  Rng rng_;
  std::vector<double> weights_;
  std::size_t sweeps_ = 0;
};

LdaState gibbs_sample(std::span<const TokenStream> docs, std::size_t topics, double alpha,
                      double beta, std::size_t iters, std::uint64_t seed);

// theta_j = (DT_j + alpha) / (sum_k DT_k + topics * alpha)
Eigen::VectorXd estimate_theta(const LdaState& state, std::size_t doc_index);

// phi_j(w) = (WT_w,j + beta) / (sum_w WT_w,j + |vocab| * beta); topics x |vocab|.
Eigen::MatrixXd estimate_phi(const LdaState& state);

FeatureMatrix embed_topics(std::span<const TokenStream> docs, std::size_t topics, double alpha,
                           double beta, std::size_t iters, std::uint64_t seed);

FeatureMatrix topic_features(const LdaState& state);

// Writes the `top_n` most probable words of every topic.
void write_topic_report(const LdaState& state, const std::filesystem::path& path,
                        std::size_t top_n = 10);

}  // namespace idlink
