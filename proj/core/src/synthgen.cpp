#include "idlink/synthgen.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <string>

#include "idlink/error.hpp"
#include "idlink/random.hpp"

namespace idlink {
namespace {

constexpr std::string_view kOnsets[] = {"b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n",
                                        "p", "r", "s", "t", "v", "w", "z", "br", "ch", "st", "tr"};
constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ei", "ou"};
constexpr std::string_view kCodas[] = {"", "", "", "n", "r", "s", "l", "m", "k"};

constexpr std::size_t kInstitutions = 25;
constexpr std::size_t kLocations = 15;
constexpr std::size_t kSwapPool = 120;
constexpr std::size_t kTopicWords = 25;
constexpr std::size_t kPostsPerUser = 5;
constexpr std::size_t kWordsPerPost = 8;
constexpr double kPrimaryTopicWeight = 0.8;

template <std::size_t N>
std::string_view pick(Rng& rng, const std::string_view (&options)[N]) {
  return options[rng.below(N)];
}

std::string syllables(Rng& rng, std::size_t count) {
  std::string out;
  for (std::size_t s = 0; s < count; ++s) {
    out += pick(rng, kOnsets);
    out += pick(rng, kVowels);
    out += pick(rng, kCodas);
  }
  return out;
}

// Distinct pseudo-words; `taken` keeps pools disjoint.
std::vector<std::string> word_pool(Rng& rng, std::size_t size, std::set<std::string>& taken) {
  std::vector<std::string> pool;
  while (pool.size() < size) {
    std::string w = syllables(rng, 2 + rng.below(2));
    if (taken.insert(w).second) pool.push_back(std::move(w));
  }
  return pool;
}

std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, std::string_view sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = s.find(sep, start);
    if (at == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, at - start));
    start = at + sep.size();
  }
}

std::vector<std::pair<UserIndex, UserIndex>> preferential_attachment(std::size_t n, std::size_t m,
                                                                      Rng& rng) {
  std::vector<std::pair<UserIndex, UserIndex>> edges;
  // Every endpoint occurrence; sampling from it is degree-proportional.
  std::vector<UserIndex> endpoints;
  const std::size_t seed_nodes = m + 1;
  for (UserIndex a = 0; a < seed_nodes; ++a) {
    for (UserIndex b = a + 1; b < seed_nodes; ++b) {
      edges.emplace_back(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }
  std::vector<UserIndex> chosen;
  for (auto v = static_cast<UserIndex>(seed_nodes); v < n; ++v) {
    chosen.clear();
    while (chosen.size() < m) {
      const UserIndex t = endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (UserIndex t : chosen) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return edges;
}

}  // namespace

void SynthConfig::validate() const {
  for (double p : {edge_drop_p, attr_drop_p, char_noise_p, word_swap_p}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("synth: probabilities must lie in [0, 1]");
  }
  if (attachment_m < 1) throw ConfigError("synth: attachment_m must be >= 1");
  if (n_users < attachment_m + 1) {
    throw ConfigError("synth: n_users must be at least attachment_m + 1");
  }
  if (planted_topics < 1) throw ConfigError("synth: planted_topics must be >= 1");
}

SyntheticPair generate_pair(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_users;
  Rng rng(cfg.seed);

  std::set<std::string> taken;
  // Affiliation phrases: fixed multi-word institution and location names.
  const auto phrases_of = [&](std::size_t count, std::size_t min_words) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(join(word_pool(rng, min_words + rng.below(2), taken), " "));
    }
    return out;
  };
  const auto institutions = phrases_of(kInstitutions, 2);
  const auto locations = phrases_of(kLocations, 1);
  const auto swap_pool = word_pool(rng, kSwapPool, taken);
  std::vector<std::vector<std::string>> topics;
  for (std::size_t t = 0; t < cfg.planted_topics; ++t) {
    topics.push_back(word_pool(rng, kTopicWords, taken));
  }

  std::vector<UserRecord> users(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& u = users[i];
    char id[32];
    std::snprintf(id, sizeof id, "a%05zu", i);
    u.id = id;
    u.char_attr = capitalized(syllables(rng, 1 + rng.below(2))) + " " +
                  capitalized(syllables(rng, 2 + rng.below(2)));

    u.word_attr = institutions[rng.below(institutions.size())] + "; " +
                  locations[rng.below(locations.size())];

    const std::size_t primary = rng.below(topics.size());
    const std::size_t secondary = rng.below(topics.size());
    std::vector<std::string> posts;
    for (std::size_t p = 0; p < kPostsPerUser; ++p) {
      std::vector<std::string> words;
      for (std::size_t w = 0; w < kWordsPerPost; ++w) {
        const auto& topic = rng.bernoulli(kPrimaryTopicWeight) ? topics[primary] : topics[secondary];
        words.push_back(topic[rng.below(topic.size())]);
      }
      posts.push_back(join(words, " "));
    }
    u.topic_attr = join(posts, "; ");
  }

  const auto edges = preferential_attachment(n, cfg.attachment_m, rng);
  SyntheticPair out;
  out.source = Network::build("synthetic_x", users, edges);

  // Target position of each source user.
  std::vector<UserIndex> position(n);
  std::iota(position.begin(), position.end(), UserIndex{0});
  rng.shuffle(position);

  std::vector<UserRecord> target_users(n);
  for (std::size_t i = 0; i < n; ++i) {
    UserRecord u = users[i];
    char id[32];
    std::snprintf(id, sizeof id, "b%05u", position[i]);
    u.id = id;

    if (rng.bernoulli(cfg.attr_drop_p)) {
      u.char_attr.clear();
    } else {
      for (char& c : u.char_attr) {
        if (c != ' ' && rng.bernoulli(cfg.char_noise_p)) c = static_cast<char>('a' + rng.below(26));
      }
    }

    std::vector<std::string> kept;
    for (const auto& phrase : split(u.word_attr, "; ")) {
      if (rng.bernoulli(cfg.attr_drop_p)) continue;
      auto words = split(phrase, " ");
      for (auto& w : words) {
        if (rng.bernoulli(cfg.word_swap_p)) w = swap_pool[rng.below(swap_pool.size())];
      }
      kept.push_back(join(words, " "));
    }
    u.word_attr = join(kept, "; ");

    kept.clear();
    for (const auto& post : split(u.topic_attr, "; ")) {
      if (!rng.bernoulli(cfg.attr_drop_p)) kept.push_back(post);
    }
    u.topic_attr = join(kept, "; ");
    target_users[position[i]] = std::move(u);
  }

  std::vector<std::pair<UserIndex, UserIndex>> target_edges;
  for (const Edge& e : out.source.edges()) {
    if (!rng.bernoulli(cfg.edge_drop_p)) target_edges.emplace_back(position[e.first], position[e.second]);
  }
  out.target = Network::build("synthetic_y", std::move(target_users), target_edges);

  std::vector<MatchedPairs::Pair> truth;
  truth.reserve(n);
  for (std::size_t i = 0; i < n; ++i) truth.emplace_back(static_cast<UserIndex>(i), position[i]);
  out.truth = MatchedPairs(std::move(truth));
  return out;
}

SyntheticFiles write_synthetic(const SyntheticPair& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  SyntheticFiles files{dir / "users_x.tsv", dir / "edges_x.tsv", dir / "users_y.tsv",
                       dir / "edges_y.tsv", dir / "pairs.tsv"};
  save_network(data.source, files.users_x, files.edges_x);
  save_network(data.target, files.users_y, files.edges_y);
  save_pairs(data.truth, data.source, data.target, files.pairs);
  return files;
}

}  // namespace idlink
