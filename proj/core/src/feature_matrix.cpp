#include "idlink/feature_matrix.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "binary_io.hpp"
#include "idlink/error.hpp"

namespace idlink {
namespace {

constexpr std::array<char, 8> kMagic = {'I', 'D', 'L', 'F', 'E', 'A', 'T', '1'};
constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 32;

Level checked_level(std::uint32_t raw, const std::string& what) {
  if (raw > static_cast<std::uint32_t>(Level::kProjected)) {
    throw DataError("invalid level tag " + std::to_string(raw) + " in " + what);
  }
  return static_cast<Level>(raw);
}

}  // namespace

std::string_view level_name(Level level) {
  switch (level) {
    case Level::kChar: return "char";
    case Level::kWord: return "word";
    case Level::kTopic: return "topic";
    case Level::kStructure: return "structure";
    case Level::kFused: return "fused";
    case Level::kProjected: return "projected";
  }
  return "unknown";
}

std::optional<Level> parse_level(std::string_view name) {
  for (Level l : {Level::kChar, Level::kWord, Level::kTopic, Level::kStructure, Level::kFused,
                  Level::kProjected}) {
    if (level_name(l) == name) return l;
  }
  return std::nullopt;
}

FeatureMatrix::FeatureMatrix(Eigen::MatrixXd values, Level tag)
    : data(std::move(values)), level(tag) {
  manifest.push_back({tag, 0, static_cast<std::size_t>(data.rows())});
}

void save_feature_matrix(const FeatureMatrix& fm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  detail::write_pod(out, static_cast<std::uint32_t>(fm.level));
  detail::write_pod(out, static_cast<std::uint64_t>(fm.data.rows()));
  detail::write_pod(out, static_cast<std::uint64_t>(fm.data.cols()));
  detail::write_pod(out, static_cast<std::uint32_t>(fm.manifest.size()));
  for (const auto& e : fm.manifest) {
    detail::write_pod(out, static_cast<std::uint32_t>(e.level));
    detail::write_pod(out, static_cast<std::uint64_t>(e.begin));
    detail::write_pod(out, static_cast<std::uint64_t>(e.end));
  }
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = fm.data;
  out.write(reinterpret_cast<const char*>(row_major.data()),
            static_cast<std::streamsize>(row_major.size() * sizeof(double)));
  if (!out) throw DataError("write failed for " + path.string());
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::string what = "feature matrix " + path.string();
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw DataError(what + " has a bad magic header");

  FeatureMatrix fm;
  fm.level = checked_level(detail::read_pod<std::uint32_t>(in, what), what);
  const auto rows = detail::read_pod<std::uint64_t>(in, what);
  const auto cols = detail::read_pod<std::uint64_t>(in, what);
  if (rows >= kMaxDim || cols >= kMaxDim) throw DataError(what + " has implausible dimensions");
  const auto entries = detail::read_pod<std::uint32_t>(in, what);
  for (std::uint32_t k = 0; k < entries; ++k) {
    ManifestEntry e;
    e.level = checked_level(detail::read_pod<std::uint32_t>(in, what), what);
    e.begin = detail::read_pod<std::uint64_t>(in, what);
    e.end = detail::read_pod<std::uint64_t>(in, what);
    if (e.begin > e.end || e.end > rows) throw DataError(what + " has an invalid manifest range");
    fm.manifest.push_back(e);
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major(
      static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(row_major.data()),
          static_cast<std::streamsize>(row_major.size() * sizeof(double)));
  if (!in) throw DataError("truncated " + what);
  fm.data = row_major;
  return fm;
}

void export_feature_csv(const FeatureMatrix& fm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "# level=" << level_name(fm.level) << " rows=" << fm.data.rows()
      << " cols=" << fm.data.cols();
  for (const auto& e : fm.manifest) {
    out << ' ' << level_name(e.level) << '=' << e.begin << ".." << e.end;
  }
  out << '\n' << std::setprecision(17);
  for (Eigen::Index r = 0; r < fm.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < fm.data.cols(); ++c) {
      if (c) out << ',';
      out << fm.data(r, c);
    }
    out << '\n';
  }
}

}  // namespace idlink
