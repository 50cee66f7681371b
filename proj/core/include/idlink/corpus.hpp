#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace idlink {

using UserIndex = std::uint32_t;

struct UserRecord {
  std::string id;
  std::string char_attr;   // username-like
  std::string word_attr;   // short phrases (affiliation, location)
  std::string topic_attr;  // long text (posts, titles)

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

// Undirected edge stored with first < second.
struct Edge {
  UserIndex first = 0;
  UserIndex second = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct LoadDiagnostics {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges_dropped = 0;
};

// Attributed undirected network. Immutable once built; user indices are dense
// in [0, size()), edges are canonical (sorted, deduplicated, no self-loops).
class Network {
 public:
  Network() = default;

  // Validates endpoints; drops self-loops and duplicate or reversed edges.
  static Network build(std::string name, std::vector<UserRecord> users,
                       std::span<const std::pair<UserIndex, UserIndex>> raw_edges,
                       LoadDiagnostics* diagnostics = nullptr);

  const std::string& name() const { return name_; }
  std::size_t size() const { return users_.size(); }
  const std::vector<UserRecord>& users() const { return users_; }
  const UserRecord& user(UserIndex i) const { return users_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const UserIndex> neighbors(UserIndex i) const;
  std::size_t degree(UserIndex i) const { return neighbors(i).size(); }

  std::optional<UserIndex> find(std::string_view id) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.name_ == b.name_ && a.users_ == b.users_ && a.edges_ == b.edges_;
  }

 private:
  std::string name_;
  std::vector<UserRecord> users_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<UserIndex> adjacency_;
  std::unordered_map<std::string, UserIndex> index_;
};

// One-to-one correspondence between users of two networks.
class MatchedPairs {
 public:
  using Pair = std::pair<UserIndex, UserIndex>;

  MatchedPairs() = default;
  // Throws DataError if any index repeats on either side.
  explicit MatchedPairs(std::vector<Pair> pairs);

  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  friend bool operator==(const MatchedPairs&, const MatchedPairs&) = default;

 private:
  std::vector<Pair> pairs_;
};

struct TokenStream {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

// ---------------------------------------------------------------------------
// File formats.
//
//   users: id \t char_attr \t word_attr \t topic_attr   (trailing fields optional)
//   edges: idA <whitespace> idB
//   pairs: idX \t idY
// ---------------------------------------------------------------------------

Network load_network(const std::filesystem::path& users_path,
                     const std::filesystem::path& edges_path,
                     LoadDiagnostics* diagnostics = nullptr);

void save_network(const Network& net, const std::filesystem::path& users_path,
                  const std::filesystem::path& edges_path);

MatchedPairs load_pairs(const std::filesystem::path& path, const Network& source,
                        const Network& target);

void save_pairs(const MatchedPairs& pairs, const Network& source, const Network& target,
                const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Text preprocessing and tokenization.
// ---------------------------------------------------------------------------

using Stemmer = std::function<std::string(std::string_view)>;

struct PreprocessConfig {
  std::unordered_set<std::string> stop_words;
  Stemmer stemmer;  // empty means no stemming
  std::size_t min_word_count = 10;
};

// Lowercases, strips diacritics from Latin letters, removes stop words and
// applies the stemmer. Words are re-joined with single spaces.
std::string preprocess_text(std::string_view raw, const PreprocessConfig& cfg);

// Emits each character (UTF-8 code point) of every whitespace-delimited word,
// followed by that word's contiguous q-grams for each q in ascending order.
// q-grams never span whitespace. Throws std::invalid_argument if any q < 2.
TokenStream char_tokenize(std::string_view attr, std::span<const int> q_values);

// Splits on whitespace and ASCII punctuation; bytes >= 0x80 are word characters.
TokenStream word_tokenize(std::string_view attr);

// Corpus-level pass: removes every token whose total count across `docs` is
// below `min_count`. Returns the number of distinct tokens removed.
std::size_t remove_rare_words(std::span<TokenStream> docs, std::size_t min_count);

}  // namespace idlink
