#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace idlink {

enum class Level : std::uint32_t {
  kChar = 0,
  kWord = 1,
  kTopic = 2,
  kStructure = 3,
  kFused = 4,
  kProjected = 5,
};

std::string_view level_name(Level level);
std::optional<Level> parse_level(std::string_view name);

// Half-open row range [begin, end) occupied by one level inside a fused matrix.
struct ManifestEntry {
  Level level = Level::kChar;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t rows() const { return end - begin; }
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

// d x n feature matrix, one column per user.
struct FeatureMatrix {
  Eigen::MatrixXd data;
  Level level = Level::kFused;
  std::vector<ManifestEntry> manifest;

  FeatureMatrix() = default;
  FeatureMatrix(Eigen::MatrixXd values, Level tag);

  std::size_t dims() const { return static_cast<std::size_t>(data.rows()); }
  std::size_t users() const { return static_cast<std::size_t>(data.cols()); }
  bool all_finite() const { return data.allFinite(); }
};

// Binary layout (little-endian):
//   char[8] magic "IDLFEAT1"
//   u32 level, u64 rows, u64 cols
//   u32 manifest_count, then per entry { u32 level, u64 begin, u64 end }
//   rows*cols f64, row-major
void save_feature_matrix(const FeatureMatrix& fm, const std::filesystem::path& path);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

// Inspection export: a '#' header line then one CSV line per feature row.
void export_feature_csv(const FeatureMatrix& fm, const std::filesystem::path& path);

}  // namespace idlink
