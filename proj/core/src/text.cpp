#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_map>

#include "idlink/corpus.hpp"

namespace idlink {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

// Decodes one UTF-8 code point starting at `pos`; returns its byte length.
// Invalid sequences decode as a single byte so that nothing is lost.
std::size_t utf8_length(std::string_view s, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = 1;
  if (lead >= 0xF0) {
    len = 4;
  } else if (lead >= 0xE0) {
    len = 3;
  } else if (lead >= 0xC0) {
    len = 2;
  }
  if (pos + len > s.size()) return 1;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(s[pos + k]) & 0xC0) != 0x80) return 1;
  }
  return len;
}

char32_t utf8_decode(std::string_view s, std::size_t pos, std::size_t len) {
  const auto b = [&](std::size_t k) { return static_cast<char32_t>(static_cast<unsigned char>(s[pos + k])); };
  switch (len) {
    case 2: return ((b(0) & 0x1F) << 6) | (b(1) & 0x3F);
    case 3: return ((b(0) & 0x0F) << 12) | ((b(1) & 0x3F) << 6) | (b(2) & 0x3F);
    case 4: return ((b(0) & 0x07) << 18) | ((b(1) & 0x3F) << 12) | ((b(2) & 0x3F) << 6) | (b(3) & 0x3F);
    default: return b(0);
  }
}

// Lowercase ASCII folding for U+00C0..U+017F; nullptr when the code point is
// not a letter with a plain-Latin base (e.g. multiplication sign).
const char* fold_latin(char32_t cp) {
  static constexpr const char* kLatin1[64] = {
      "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
      "d", "n", "o", "o", "o", "o", "o", nullptr, "o", "u", "u", "u", "u", "y", "th", "ss",
      "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
      "d", "n", "o", "o", "o", "o", "o", nullptr, "o", "u", "u", "u", "u", "y", "th", "y"};
  if (cp >= 0xC0 && cp <= 0xFF) return kLatin1[cp - 0xC0];
  struct Range {
    char32_t lo, hi;
    const char* base;
  };
  static constexpr Range kExtendedA[] = {
      {0x100, 0x105, "a"}, {0x106, 0x10D, "c"}, {0x10E, 0x111, "d"}, {0x112, 0x11B, "e"},
      {0x11C, 0x123, "g"}, {0x124, 0x127, "h"}, {0x128, 0x131, "i"}, {0x132, 0x133, "ij"},
      {0x134, 0x135, "j"}, {0x136, 0x138, "k"}, {0x139, 0x142, "l"}, {0x143, 0x14B, "n"},
      {0x14C, 0x151, "o"}, {0x152, 0x153, "oe"}, {0x154, 0x159, "r"}, {0x15A, 0x161, "s"},
      {0x162, 0x167, "t"}, {0x168, 0x173, "u"}, {0x174, 0x175, "w"}, {0x176, 0x178, "y"},
      {0x179, 0x17E, "z"}, {0x17F, 0x17F, "s"}};
  for (const Range& r : kExtendedA) {
    if (cp >= r.lo && cp <= r.hi) return r.base;
  }
  return nullptr;
}

bool is_combining_mark(char32_t cp) { return cp >= 0x300 && cp <= 0x36F; }

std::string fold_case_and_marks(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t pos = 0; pos < raw.size();) {
    const std::size_t len = utf8_length(raw, pos);
    if (len == 1) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(raw[pos]))));
    } else {
      const char32_t cp = utf8_decode(raw, pos, len);
      if (is_combining_mark(cp)) {
        // dropped
      } else if (const char* folded = fold_latin(cp)) {
        out += folded;
      } else {
        out.append(raw.substr(pos, len));
      }
    }
    pos += len;
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !is_space(text[pos])) ++pos;
    if (pos > start) words.push_back(text.substr(start, pos - start));
  }
  return words;
}

std::string_view trim_punct(std::string_view word) {
  while (!word.empty() && is_ascii_punct(word.front())) word.remove_prefix(1);
  while (!word.empty() && is_ascii_punct(word.back())) word.remove_suffix(1);
  return word;
}

}  // namespace

std::string preprocess_text(std::string_view raw, const PreprocessConfig& cfg) {
  const std::string folded = fold_case_and_marks(raw);
  std::string out;
  out.reserve(folded.size());
  for (std::string_view word : split_whitespace(folded)) {
    if (!cfg.stop_words.empty() && cfg.stop_words.contains(std::string(trim_punct(word)))) {
      continue;
    }
    std::string kept = cfg.stemmer ? cfg.stemmer(word) : std::string(word);
    if (kept.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += kept;
  }
  return out;
}

TokenStream char_tokenize(std::string_view attr, std::span<const int> q_values) {
  std::vector<int> qs(q_values.begin(), q_values.end());
  for (int q : qs) {
    if (q < 2) throw std::invalid_argument("q-gram length must be >= 2, got " + std::to_string(q));
  }
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

  TokenStream out;
  std::vector<std::string_view> chars;
  for (std::string_view word : split_whitespace(attr)) {
    chars.clear();
    for (std::size_t pos = 0; pos < word.size();) {
      const std::size_t len = utf8_length(word, pos);
      chars.push_back(word.substr(pos, len));
      pos += len;
    }
    for (std::string_view c : chars) out.tokens.emplace_back(c);
    for (int q : qs) {
      const auto width = static_cast<std::size_t>(q);
      if (chars.size() < width) continue;
      for (std::size_t i = 0; i + width <= chars.size(); ++i) {
        // Code points of a word are contiguous in the source buffer.
        const char* begin = chars[i].data();
        const char* end = chars[i + width - 1].data() + chars[i + width - 1].size();
        out.tokens.emplace_back(begin, end);
      }
    }
  }
  return out;
}

TokenStream word_tokenize(std::string_view attr) {
  TokenStream out;
  std::size_t pos = 0;
  const auto is_delim = [](char c) { return is_space(c) || is_ascii_punct(c); };
  while (pos < attr.size()) {
    while (pos < attr.size() && is_delim(attr[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < attr.size() && !is_delim(attr[pos])) ++pos;
    if (pos > start) out.tokens.emplace_back(attr.substr(start, pos - start));
  }
  return out;
}

std::size_t remove_rare_words(std::span<TokenStream> docs, std::size_t min_count) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : docs) {
    for (const auto& t : doc.tokens) ++counts[t];
  }
  std::size_t removed = 0;
  for (const auto& [token, count] : counts) {
    if (count < min_count) ++removed;
  }
  if (removed == 0) return 0;
  for (auto& doc : docs) {
    std::erase_if(doc.tokens, [&](const std::string& t) { return counts[t] < min_count; });
  }
  return removed;
}

}  // namespace idlink
