#include "idlink/matcher.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>

#include "idlink/error.hpp"

namespace idlink {
namespace {

bool closer(const Candidate& a, const Candidate& b) {
  return a.distance != b.distance ? a.distance < b.distance : a.target < b.target;
}

void check_dims(const FeatureMatrix& zx, const FeatureMatrix& zy, UserIndex query) {
  if (zx.data.rows() != zy.data.rows()) {
    throw DataError("matcher: source has " + std::to_string(zx.data.rows()) +
                    " dimensions, target has " + std::to_string(zy.data.rows()));
  }
  if (query >= zx.users()) {
    throw DataError("matcher: query " + std::to_string(query) + " out of range");
  }
}

}  // namespace

double distance(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) {
    throw DataError("distance: vectors have " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()) + " entries");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double diff = a(i) - b(i);
    sum += diff * diff;
  }
  return sum;
}

MatchRanking rank_candidates(const FeatureMatrix& zx, const FeatureMatrix& zy, UserIndex query,
                             std::size_t top_k, std::span<const UserIndex> pool) {
  if (top_k == 0) throw ConfigError("rank_candidates: top_k must be >= 1");
  check_dims(zx, zy, query);
  MatchRanking ranking;
  ranking.query = query;
  ranking.candidates.reserve(pool.size());
  const auto source = zx.data.col(query);
  for (UserIndex t : pool) {
    if (t >= zy.users()) throw DataError("rank_candidates: target " + std::to_string(t) + " out of range");
    ranking.candidates.push_back({t, distance(source, zy.data.col(t))});
  }
  const std::size_t keep = std::min(top_k, ranking.candidates.size());
  std::partial_sort(ranking.candidates.begin(),
                    ranking.candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    ranking.candidates.end(), closer);
  ranking.candidates.resize(keep);
  return ranking;
}

MatchRanking rank_candidates(const FeatureMatrix& zx, const FeatureMatrix& zy, UserIndex query,
                             std::size_t top_k) {
  std::vector<UserIndex> pool(zy.users());
  std::iota(pool.begin(), pool.end(), UserIndex{0});
  return rank_candidates(zx, zy, query, top_k, pool);
}

std::vector<std::pair<UserIndex, UserIndex>> predict_pairs(const FeatureMatrix& zx,
                                                           const FeatureMatrix& zy) {
  std::vector<std::pair<UserIndex, UserIndex>> out;
  if (zy.users() == 0) return out;
  out.reserve(zx.users());
  for (UserIndex q = 0; q < zx.users(); ++q) {
    out.emplace_back(q, rank_candidates(zx, zy, q, 1).candidates.front().target);
  }
  return out;
}

void write_rankings(std::span<const MatchRanking> rankings, const Network& source,
                    const Network& target, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << std::setprecision(17);
  for (const auto& r : rankings) {
    for (std::size_t pos = 0; pos < r.candidates.size(); ++pos) {
      const auto& c = r.candidates[pos];
      out << source.user(r.query).id << '\t' << pos + 1 << '\t' << target.user(c.target).id << '\t'
          << c.distance << '\n';
    }
  }
}

std::vector<MatchRanking> read_rankings(const std::filesystem::path& path, const Network& source,
                                        const Network& target) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<MatchRanking> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string qid;
    std::string cid;
    std::size_t rank = 0;
    double dist = 0.0;
    if (!std::getline(fields, qid, '\t') || !(fields >> rank) || !(fields >> cid) || !(fields >> dist)) {
      throw DataError("parse error at " + path.string() + ":" + std::to_string(line_no));
    }
    const auto q = source.find(qid);
    const auto c = target.find(cid);
    if (!q || !c) throw DataError("unknown id at " + path.string() + ":" + std::to_string(line_no));
    if (out.empty() || out.back().query != *q || rank == 1) out.push_back(MatchRanking{*q, {}});
    if (rank != out.back().candidates.size() + 1) {
      throw DataError("rank out of sequence at " + path.string() + ":" + std::to_string(line_no));
    }
    out.back().candidates.push_back({*c, dist});
  }
  return out;
}

}  // namespace idlink
