#include "idlink/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "idlink/error.hpp"

namespace idlink {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string location(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

}  // namespace

Network Network::build(std::string name, std::vector<UserRecord> users,
                       std::span<const std::pair<UserIndex, UserIndex>> raw_edges,
                       LoadDiagnostics* diagnostics) {
  Network net;
  net.name_ = std::move(name);
  net.users_ = std::move(users);
  const std::size_t n = net.users_.size();

  net.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& id = net.users_[i].id;
    if (id.empty()) throw DataError("user " + std::to_string(i) + " has an empty id");
    if (!net.index_.emplace(id, static_cast<UserIndex>(i)).second) {
      throw DataError("duplicate user id " + id);
    }
  }

  LoadDiagnostics diag;
  net.edges_.reserve(raw_edges.size());
  for (const auto& [a, b] : raw_edges) {
    if (a >= n || b >= n) {
      throw DataError("edge endpoint out of range: (" + std::to_string(a) + ", " +
                      std::to_string(b) + ")");
    }
    if (a == b) {
      ++diag.self_loops_dropped;
      continue;
    }
    net.edges_.push_back(Edge{std::min(a, b), std::max(a, b)});
  }
  std::sort(net.edges_.begin(), net.edges_.end());
  const auto last = std::unique(net.edges_.begin(), net.edges_.end());
  diag.duplicate_edges_dropped = static_cast<std::size_t>(net.edges_.end() - last);
  net.edges_.erase(last, net.edges_.end());

  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : net.edges_) {
    ++degree[e.first];
    ++degree[e.second];
  }
  net.adjacency_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    net.adjacency_offsets_[i + 1] = net.adjacency_offsets_[i] + degree[i];
  }
  net.adjacency_.resize(net.adjacency_offsets_[n]);
  std::vector<std::size_t> cursor(net.adjacency_offsets_.begin(),
                                  net.adjacency_offsets_.end() - 1);
  for (const Edge& e : net.edges_) {
    net.adjacency_[cursor[e.first]++] = e.second;
    net.adjacency_[cursor[e.second]++] = e.first;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.adjacency_offsets_[i]),
              net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.adjacency_offsets_[i + 1]));
  }

  if (diagnostics) *diagnostics = diag;
  return net;
}

std::span<const UserIndex> Network::neighbors(UserIndex i) const {
  const std::size_t lo = adjacency_offsets_[i];
  const std::size_t hi = adjacency_offsets_[i + 1];
  return {adjacency_.data() + lo, hi - lo};
}

std::optional<UserIndex> Network::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

MatchedPairs::MatchedPairs(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  std::unordered_set<UserIndex> left;
  std::unordered_set<UserIndex> right;
  for (const auto& [x, y] : pairs_) {
    if (!left.insert(x).second) {
      throw DataError("matched pairs are not one-to-one: source index " + std::to_string(x) +
                      " appears twice");
    }
    if (!right.insert(y).second) {
      throw DataError("matched pairs are not one-to-one: target index " + std::to_string(y) +
                      " appears twice");
    }
  }
}

Network load_network(const std::filesystem::path& users_path,
                     const std::filesystem::path& edges_path, LoadDiagnostics* diagnostics) {
  std::vector<UserRecord> users;
  std::unordered_map<std::string, UserIndex> index;
  {
    auto in = open_input(users_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(line);
      if (line.empty()) continue;
      auto fields = split_tabs(line);
      if (fields.size() > 4) {
        throw DataError("parse error at " + location(users_path, line_no) + ": expected at most 4 tab-separated fields, got " +
                        std::to_string(fields.size()));
      }
      fields.resize(4);
      if (fields[0].empty()) {
        throw DataError("parse error at " + location(users_path, line_no) + ": empty user id");
      }
      const auto idx = static_cast<UserIndex>(users.size());
      if (!index.emplace(fields[0], idx).second) {
        throw DataError("parse error at " + location(users_path, line_no) + ": duplicate id " +
                        fields[0]);
      }
      users.push_back(UserRecord{std::move(fields[0]), std::move(fields[1]),
                                 std::move(fields[2]), std::move(fields[3])});
    }
  }

  std::vector<std::pair<UserIndex, UserIndex>> raw_edges;
  {
    auto in = open_input(edges_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(line);
      if (is_blank(line)) continue;
      std::istringstream fields(line);
      std::string a;
      std::string b;
      std::string extra;
      if (!(fields >> a >> b) || (fields >> extra)) {
        throw DataError("parse error at " + location(edges_path, line_no) +
                        ": expected two whitespace-separated ids");
      }
      const auto ia = index.find(a);
      if (ia == index.end()) throw DataError("unknown id " + a + " at " + location(edges_path, line_no));
      const auto ib = index.find(b);
      if (ib == index.end()) throw DataError("unknown id " + b + " at " + location(edges_path, line_no));
      raw_edges.emplace_back(ia->second, ib->second);
    }
  }

  return Network::build(users_path.stem().string(), std::move(users), raw_edges, diagnostics);
}

void save_network(const Network& net, const std::filesystem::path& users_path,
                  const std::filesystem::path& edges_path) {
  auto users = open_output(users_path);
  for (const auto& u : net.users()) {
    for (const std::string* field : {&u.id, &u.char_attr, &u.word_attr, &u.topic_attr}) {
      if (field->find_first_of("\t\n") != std::string::npos) {
        throw DataError("user " + u.id + " has a tab or newline in an attribute");
      }
    }
    users << u.id << '\t' << u.char_attr << '\t' << u.word_attr << '\t' << u.topic_attr << '\n';
  }
  auto edges = open_output(edges_path);
  for (const Edge& e : net.edges()) {
    edges << net.user(e.first).id << ' ' << net.user(e.second).id << '\n';
  }
}

MatchedPairs load_pairs(const std::filesystem::path& path, const Network& source,
                        const Network& target) {
  auto in = open_input(path);
  std::vector<MatchedPairs::Pair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      throw DataError("parse error at " + location(path, line_no) + ": expected idX<TAB>idY");
    }
    const auto x = source.find(fields[0]);
    if (!x) throw DataError("unknown id " + fields[0] + " at " + location(path, line_no));
    const auto y = target.find(fields[1]);
    if (!y) throw DataError("unknown id " + fields[1] + " at " + location(path, line_no));
    pairs.emplace_back(*x, *y);
  }
  return MatchedPairs(std::move(pairs));
}

void save_pairs(const MatchedPairs& pairs, const Network& source, const Network& target,
                const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& [x, y] : pairs) {
    out << source.user(x).id << '\t' << target.user(y).id << '\n';
  }
}

}  // namespace idlink
