#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "idlink/corpus.hpp"
#include "idlink/matcher.hpp"

namespace idlink {

struct SplitSpec {
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
};

// Disjoint uniform-random train and test subsets. Throws DataError when
// n_train + n_test exceeds the available pairs.
std::pair<MatchedPairs, MatchedPairs> split_pairs(const MatchedPairs& all, const SplitSpec& spec);

struct MetricReport {
  double hit_precision = 0.0;
  std::size_t top_k = 0;
  std::vector<double> per_query_scores;
};

// Per query h = (k - (pos - 1)) / k when the true counterpart sits at 1-based
// position pos <= k of its ranking, else 0. Throws DataError if a truth query
// has no ranking.
MetricReport hit_precision(std::span<const MatchRanking> rankings, const MatchedPairs& truth,
                           std::size_t top_k);

}  // namespace idlink
