#include "idlink/eval.hpp"

#include <numeric>
#include <unordered_map>

#include "idlink/error.hpp"
#include "idlink/random.hpp"

namespace idlink {

std::pair<MatchedPairs, MatchedPairs> split_pairs(const MatchedPairs& all, const SplitSpec& spec) {
  if (spec.n_train + spec.n_test > all.size()) {
    throw DataError("split_pairs: requested " + std::to_string(spec.n_train) + " train + " +
                    std::to_string(spec.n_test) + " test pairs but only " +
                    std::to_string(all.size()) + " are available");
  }
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  rng.shuffle(order);
  std::vector<MatchedPairs::Pair> train;
  std::vector<MatchedPairs::Pair> test;
  train.reserve(spec.n_train);
  test.reserve(spec.n_test);
  for (std::size_t i = 0; i < spec.n_train; ++i) train.push_back(all.pairs()[order[i]]);
  for (std::size_t i = 0; i < spec.n_test; ++i) test.push_back(all.pairs()[order[spec.n_train + i]]);
  return {MatchedPairs(std::move(train)), MatchedPairs(std::move(test))};
}

MetricReport hit_precision(std::span<const MatchRanking> rankings, const MatchedPairs& truth,
                           std::size_t top_k) {
  if (top_k == 0) throw ConfigError("hit_precision: top_k must be >= 1");
  std::unordered_map<UserIndex, const MatchRanking*> by_query;
  for (const auto& r : rankings) by_query.emplace(r.query, &r);

  MetricReport report;
  report.top_k = top_k;
  report.per_query_scores.reserve(truth.size());
  const double k = static_cast<double>(top_k);
  for (const auto& [x, y] : truth) {
    const auto it = by_query.find(x);
    if (it == by_query.end()) {
      throw DataError("hit_precision: no ranking for query " + std::to_string(x));
    }
    const auto& cands = it->second->candidates;
    double score = 0.0;
    for (std::size_t pos = 0; pos < std::min(top_k, cands.size()); ++pos) {
      if (cands[pos].target == y) {
        score = (k - static_cast<double>(pos)) / k;
        break;
      }
    }
    report.per_query_scores.push_back(score);
  }
  if (!report.per_query_scores.empty()) {
    report.hit_precision =
        std::accumulate(report.per_query_scores.begin(), report.per_query_scores.end(), 0.0) /
        static_cast<double>(report.per_query_scores.size());
  }
  return report;
}

}  // namespace idlink
