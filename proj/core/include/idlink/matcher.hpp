#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <vector>

#include "idlink/corpus.hpp"
#include "idlink/feature_matrix.hpp"

namespace idlink {

struct Candidate {
  UserIndex target = 0;
  double distance = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Candidates sorted by ascending distance, ties by ascending target index.
struct MatchRanking {
  UserIndex query = 0;
  std::vector<Candidate> candidates;
};

// Squared Euclidean distance. Throws DataError on a length mismatch.
double distance(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

// The `top_k` nearest columns of `zy` to column `query` of `zx`; all of them
// when top_k exceeds the pool. Throws ConfigError for top_k == 0.
MatchRanking rank_candidates(const FeatureMatrix& zx, const FeatureMatrix& zy, UserIndex query,
                             std::size_t top_k);

// Same, restricted to the target columns listed in `pool`.
MatchRanking rank_candidates(const FeatureMatrix& zx, const FeatureMatrix& zy, UserIndex query,
                             std::size_t top_k, std::span<const UserIndex> pool);

// Each source column mapped to its nearest target column (not necessarily a bijection).
std::vector<std::pair<UserIndex, UserIndex>> predict_pairs(const FeatureMatrix& zx,
                                                           const FeatureMatrix& zy);

// TSV lines: query id, 1-based rank, candidate id, distance.
void write_rankings(std::span<const MatchRanking> rankings, const Network& source,
                    const Network& target, const std::filesystem::path& path);

std::vector<MatchRanking> read_rankings(const std::filesystem::path& path, const Network& source,
                                        const Network& target);

}  // namespace idlink
