#include "idlink/fusion.hpp"

#include <cmath>
#include <string>

#include "idlink/error.hpp"

namespace idlink {

FeatureMatrix fuse(const std::map<Level, FeatureMatrix>& levels) {
  if (levels.empty()) throw ConfigError("fuse: at least one feature level is required");
  constexpr Level kOrder[] = {Level::kChar, Level::kWord, Level::kTopic, Level::kStructure};

  std::optional<Eigen::Index> users;
  Eigen::Index rows = 0;
  for (const auto& [level, fm] : levels) {
    if (level == Level::kFused || level == Level::kProjected) {
      throw ConfigError("fuse: cannot stack a '" + std::string(level_name(level)) + "' matrix");
    }
    if (!users) users = fm.data.cols();
    if (fm.data.cols() != *users) {
      throw DataError("fuse: level '" + std::string(level_name(level)) + "' has " +
                      std::to_string(fm.data.cols()) + " columns, expected " +
                      std::to_string(*users));
    }
    rows += fm.data.rows();
  }

  FeatureMatrix out;
  out.level = Level::kFused;
  out.data.resize(rows, *users);
  std::size_t cursor = 0;
  for (Level level : kOrder) {
    const auto it = levels.find(level);
    if (it == levels.end()) continue;
    const auto& block = it->second.data;
    out.data.middleRows(static_cast<Eigen::Index>(cursor), block.rows()) = block;
    out.manifest.push_back({level, cursor, cursor + static_cast<std::size_t>(block.rows())});
    cursor += static_cast<std::size_t>(block.rows());
  }
  return out;
}

FeatureMatrix slice_level(const FeatureMatrix& fused, Level level) {
  for (const auto& e : fused.manifest) {
    if (e.level == level) {
      return FeatureMatrix(fused.data.middleRows(static_cast<Eigen::Index>(e.begin),
                                                 static_cast<Eigen::Index>(e.rows())),
                           level);
    }
  }
  throw DataError("slice_level: level '" + std::string(level_name(level)) +
                  "' is not in the manifest");
}

std::pair<FeatureMatrix, StandardizeStats> standardize(
    const FeatureMatrix& fused, const std::optional<StandardizeStats>& stats) {
  StandardizeStats s;
  const Eigen::Index d = fused.data.rows();
  if (stats) {
    if (stats->mean.size() != d || stats->stddev.size() != d) {
      throw DataError("standardize: statistics have " + std::to_string(stats->mean.size()) +
                      " rows, matrix has " + std::to_string(d));
    }
    s = *stats;
  } else {
    if (fused.data.cols() < 2) throw DataError("standardize: need at least 2 columns to compute statistics");
    const double n = static_cast<double>(fused.data.cols());
    s.mean = fused.data.rowwise().mean();
    s.stddev.resize(d);
    for (Eigen::Index r = 0; r < d; ++r) {
      const double var = (fused.data.row(r).array() - s.mean(r)).square().sum() / n;
      const double sd = std::sqrt(var);
      // Rows that are constant up to round-off are only centered.
      const double scale = std::max(1.0, std::abs(s.mean(r)));
      s.stddev(r) = sd > 1e-12 * scale ? sd : 1.0;
    }
  }
  FeatureMatrix out = fused;
  out.data = (fused.data.colwise() - s.mean).array().colwise() / s.stddev.array();
  return {std::move(out), std::move(s)};
}

}  // namespace idlink
