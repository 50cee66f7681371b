#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <utility>

#include "idlink/feature_matrix.hpp"

namespace idlink {

// Row-stacks the present levels in the order char, word, topic, structure.
// Throws ConfigError when empty and DataError on a column-count mismatch.
FeatureMatrix fuse(const std::map<Level, FeatureMatrix>& levels);

// Recovers the rows recorded for `level` in the manifest.
FeatureMatrix slice_level(const FeatureMatrix& fused, Level level);

struct StandardizeStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;  // population convention; 1 for constant rows
};

// Per-row (per-feature) centering and scaling. With `stats` supplied the given
// statistics are applied instead of being recomputed.
std::pair<FeatureMatrix, StandardizeStats> standardize(
    const FeatureMatrix& fused, const std::optional<StandardizeStats>& stats = std::nullopt);

}  // namespace idlink
