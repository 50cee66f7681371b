#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "idlink/corpus.hpp"
#include "idlink/error.hpp"

using namespace idlink;
using testing_util::TempDir;
using testing_util::write_file;

namespace {

std::vector<std::string> tokens(const TokenStream& s) { return s.tokens; }

std::map<std::string, int> counts(const TokenStream& s) {
  std::map<std::string, int> out;
  for (const auto& t : s.tokens) ++out[t];
  return out;
}

const std::string kThreeUsers = "u0\tAlice\tacme corp\tposts\nu1\tBob\t\t\nu2\tCarol\n";

}  // namespace

TEST(LoadNetwork, SymmetricDuplicateEdgeCollapses) {
  TempDir dir;
  write_file(dir / "users.tsv", kThreeUsers);
  write_file(dir / "edges.tsv", "u0 u1\nu1 u0\n");
  LoadDiagnostics diag;
  const Network net = load_network(dir / "users.tsv", dir / "edges.tsv", &diag);
  EXPECT_EQ(net.size(), 3u);
  ASSERT_EQ(net.edges().size(), 1u);
  EXPECT_EQ(net.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(diag.duplicate_edges_dropped, 1u);
}

TEST(LoadNetwork, SelfLoopDroppedWithWarningCount) {
  TempDir dir;
  write_file(dir / "users.tsv", kThreeUsers);
  write_file(dir / "edges.tsv", "u0 u0\n");
  LoadDiagnostics diag;
  const Network net = load_network(dir / "users.tsv", dir / "edges.tsv", &diag);
  EXPECT_TRUE(net.edges().empty());
  EXPECT_EQ(diag.self_loops_dropped, 1u);
}

TEST(LoadNetwork, UnknownIdIsNamed) {
  TempDir dir;
  write_file(dir / "users.tsv", kThreeUsers);
  write_file(dir / "edges.tsv", "u0 u1\nu0 u9\n");
  try {
    load_network(dir / "users.tsv", dir / "edges.tsv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown id u9"), std::string::npos) << e.what();
  }
}

TEST(LoadNetwork, MalformedLineReportsLineNumber) {
  TempDir dir;
  write_file(dir / "users.tsv", kThreeUsers);
  write_file(dir / "edges.tsv", "u0 u1\nu2\n");
  try {
    load_network(dir / "users.tsv", dir / "edges.tsv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("edges.tsv:2:"), std::string::npos) << e.what();
  }
}

TEST(LoadNetwork, MissingFieldsAreEmpty) {
  TempDir dir;
  write_file(dir / "users.tsv", kThreeUsers);
  write_file(dir / "edges.tsv", "");
  const Network net = load_network(dir / "users.tsv", dir / "edges.tsv");
  EXPECT_EQ(net.user(2).char_attr, "Carol");
  EXPECT_EQ(net.user(2).word_attr, "");
  EXPECT_EQ(net.user(2).topic_attr, "");
  EXPECT_EQ(net.user(1).word_attr, "");
}

TEST(LoadNetwork, DuplicateUserIdRejected) {
  TempDir dir;
  write_file(dir / "users.tsv", "u0\ta\nu0\tb\n");
  write_file(dir / "edges.tsv", "");
  EXPECT_THROW(load_network(dir / "users.tsv", dir / "edges.tsv"), DataError);
}

TEST(LoadNetwork, SaveReloadIsIdempotent) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 5; ++trial) {
    TempDir dir;
    const std::size_t n = 3 + gen() % 20;
    std::vector<UserRecord> users(n);
    for (std::size_t i = 0; i < n; ++i) {
      users[i].id = "id" + std::to_string(i * 7 + trial);
      users[i].char_attr = "name " + std::to_string(gen() % 1000);
      if (gen() % 2) users[i].word_attr = "w" + std::to_string(gen() % 10);
      if (gen() % 2) users[i].topic_attr = "some topic text";
    }
    std::vector<std::pair<UserIndex, UserIndex>> edges;
    for (int e = 0; e < 40; ++e) {
      edges.emplace_back(static_cast<UserIndex>(gen() % n), static_cast<UserIndex>(gen() % n));
    }
    const Network a = Network::build("users", users, edges);
    save_network(a, dir / "users.tsv", dir / "edges.tsv");
    const Network b = load_network(dir / "users.tsv", dir / "edges.tsv");
    EXPECT_EQ(a, b);
    save_network(b, dir / "users.tsv", dir / "edges.tsv");
    EXPECT_EQ(load_network(dir / "users.tsv", dir / "edges.tsv"), b);
  }
}

TEST(Network, InvariantsHoldForRandomEdgeLists) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + gen() % 30;
    std::vector<UserRecord> users(n);
    for (std::size_t i = 0; i < n; ++i) users[i].id = "u" + std::to_string(i);
    std::vector<std::pair<UserIndex, UserIndex>> raw;
    for (std::size_t e = 0; e < 3 * n; ++e) {
      raw.emplace_back(static_cast<UserIndex>(gen() % n), static_cast<UserIndex>(gen() % n));
    }
    const Network net = Network::build("g", users, raw);
    std::size_t degree_sum = 0;
    for (std::size_t i = 0; i < net.edges().size(); ++i) {
      const Edge& e = net.edges()[i];
      EXPECT_LT(e.first, e.second);
      EXPECT_LT(e.second, n);
      if (i > 0) EXPECT_LT(net.edges()[i - 1], e);
    }
    for (UserIndex u = 0; u < n; ++u) {
      degree_sum += net.degree(u);
      for (UserIndex v : net.neighbors(u)) {
        const auto back = net.neighbors(v);
        EXPECT_NE(std::find(back.begin(), back.end(), u), back.end());
      }
    }
    EXPECT_EQ(degree_sum, 2 * net.edges().size());
  }
}

TEST(Network, OutOfRangeEndpointRejected) {
  std::vector<UserRecord> users(2);
  users[0].id = "a";
  users[1].id = "b";
  const std::vector<std::pair<UserIndex, UserIndex>> raw = {{0, 2}};
  EXPECT_THROW(Network::build("g", users, raw), DataError);
}

TEST(MatchedPairs, RejectsRepeatedIndexOnEitherSide) {
  EXPECT_NO_THROW(MatchedPairs({{0, 1}, {1, 0}}));
  EXPECT_THROW(MatchedPairs({{0, 1}, {0, 2}}), DataError);
  EXPECT_THROW(MatchedPairs({{0, 1}, {2, 1}}), DataError);
}

TEST(Pairs, LoadAndSaveRoundTrip) {
  TempDir dir;
  write_file(dir / "x.tsv", "a\nb\nc\n");
  write_file(dir / "ex.tsv", "");
  write_file(dir / "y.tsv", "p\nq\nr\n");
  const Network x = load_network(dir / "x.tsv", dir / "ex.tsv");
  const Network y = load_network(dir / "y.tsv", dir / "ex.tsv");
  write_file(dir / "pairs.tsv", "a\tq\nc\tp\n");
  const MatchedPairs pairs = load_pairs(dir / "pairs.tsv", x, y);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs.pairs()[0], (MatchedPairs::Pair{0, 1}));
  EXPECT_EQ(pairs.pairs()[1], (MatchedPairs::Pair{2, 0}));
  save_pairs(pairs, x, y, dir / "again.tsv");
  EXPECT_EQ(load_pairs(dir / "again.tsv", x, y), pairs);
  write_file(dir / "bad.tsv", "a\tzz\n");
  EXPECT_THROW(load_pairs(dir / "bad.tsv", x, y), DataError);
}

TEST(PreprocessText, StripsDiacritics) {
  EXPECT_EQ(preprocess_text("Montréal", {}), "montreal");
  EXPECT_EQ(preprocess_text("Ångström Ærø straße", {}), "angstrom aero strasse");
}

TEST(PreprocessText, RemovesStopWords) {
  PreprocessConfig cfg;
  cfg.stop_words = {"the"};
  EXPECT_EQ(preprocess_text("The University", cfg), "university");
}

TEST(PreprocessText, EmptyInput) { EXPECT_EQ(preprocess_text("", {}), ""); }

TEST(PreprocessText, AppliesStemmer) {
  PreprocessConfig cfg;
  cfg.stemmer = [](std::string_view w) {
    std::string s(w);
    if (s.size() > 1 && s.back() == 's') s.pop_back();
    return s;
  };
  EXPECT_EQ(preprocess_text("Networks  and   Graphs", cfg), "network and graph");
}

TEST(PreprocessText, IsIdempotent) {
  PreprocessConfig cfg;
  cfg.stop_words = {"of", "the"};
  for (const char* raw : {"Université de Montréal", "The Dept. OF Science", "  ÉCOLE  "}) {
    const std::string once = preprocess_text(raw, cfg);
    EXPECT_EQ(preprocess_text(once, cfg), once) << raw;
  }
}

TEST(CharTokenize, SinglesOnlyCountCharacters) {
  const std::vector<int> none;
  const auto c = counts(char_tokenize(preprocess_text("Yoshua Bengio", {}), none));
  EXPECT_EQ(c.at("a"), 1);
  EXPECT_EQ(c.at("b"), 1);
  EXPECT_EQ(c.at("o"), 2);
  EXPECT_EQ(c.count("c"), 0u);
}

TEST(CharTokenize, EnumeratesBigrams) {
  const std::vector<int> q = {2};
  EXPECT_EQ(tokens(char_tokenize("ab", q)), (std::vector<std::string>{"a", "b", "ab"}));
}

TEST(CharTokenize, NoBigramAcrossSpace) {
  const std::vector<int> q = {2};
  EXPECT_EQ(tokens(char_tokenize("a b", q)), (std::vector<std::string>{"a", "b"}));
}

TEST(CharTokenize, CountsForAllQ) {
  const std::vector<int> q = {2, 3};
  const auto t = char_tokenize("abcd", q);
  // 4 singles + 3 bigrams + 2 trigrams
  EXPECT_EQ(t.size(), 9u);
  const std::vector<int> bad = {1};
  EXPECT_THROW(char_tokenize("abc", bad), std::invalid_argument);
}

TEST(CharTokenize, MultibyteCharactersAreSingleTokens) {
  const std::vector<int> q = {2};
  EXPECT_EQ(tokens(char_tokenize("né", q)), (std::vector<std::string>{"n", "é", "né"}));
}

TEST(CharTokenize, DeterministicFunctionOfText) {
  std::mt19937_64 gen(3);
  const std::vector<int> q = {2, 3};
  for (int i = 0; i < 50; ++i) {
    std::string s;
    const std::size_t len = gen() % 20;
    for (std::size_t k = 0; k < len; ++k) s += "ab c"[gen() % 4];
    EXPECT_EQ(char_tokenize(s, q), char_tokenize(s, q));
    for (const auto& t : char_tokenize(s, q).tokens) {
      EXPECT_FALSE(t.empty());
      EXPECT_EQ(t.find(' '), std::string::npos);
    }
  }
}

TEST(WordTokenize, Examples) {
  EXPECT_EQ(tokens(word_tokenize("university of montreal")),
            (std::vector<std::string>{"university", "of", "montreal"}));
  EXPECT_EQ(tokens(word_tokenize("dept., computer science")),
            (std::vector<std::string>{"dept", "computer", "science"}));
  EXPECT_TRUE(word_tokenize("").empty());
}

TEST(RemoveRareWords, SurvivorsMeetThreshold) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TokenStream> docs(30);
    for (auto& d : docs) {
      const std::size_t len = gen() % 15;
      for (std::size_t k = 0; k < len; ++k) d.tokens.push_back("w" + std::to_string(gen() % 40));
    }
    const auto before = docs;
    remove_rare_words(docs, 10);
    std::map<std::string, int> freq;
    for (const auto& d : docs) {
      for (const auto& t : d.tokens) ++freq[t];
    }
    for (const auto& [w, c] : freq) EXPECT_GE(c, 10) << w;
    // Order of surviving tokens is preserved within each document.
    for (std::size_t i = 0; i < docs.size(); ++i) {
      std::vector<std::string> kept;
      for (const auto& t : before[i].tokens) {
        if (freq.count(t)) kept.push_back(t);
      }
      EXPECT_EQ(docs[i].tokens, kept);
    }
  }
}
