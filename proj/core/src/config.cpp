#include "idlink/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "idlink/error.hpp"

namespace idlink {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ConfigError("config: " + key + " expects a number, got '" + value + "'");
  }
  return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ConfigError("config: " + key + " expects a non-negative integer, got '" + value + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
std::string join_list(const std::vector<T>& items) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "," : "") << items[i];
  return out.str();
}

struct KeySpec {
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
};

template <typename Field>
KeySpec size_key(const char* key, Field field) {
  return {key, [field](const ExperimentConfig& c) { return std::to_string(field(const_cast<ExperimentConfig&>(c))); },
          [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
            field(c) = static_cast<std::size_t>(to_uint(k, v));
          }};
}

template <typename Field>
KeySpec double_key(const char* key, Field field) {
  return {key, [field](const ExperimentConfig& c) { return fmt_double(field(const_cast<ExperimentConfig&>(c))); },
          [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
            field(c) = to_double(k, v);
          }};
}

template <typename Field>
KeySpec path_key(const char* key, Field field) {
  return {key, [field](const ExperimentConfig& c) { return field(const_cast<ExperimentConfig&>(c)).string(); },
          [field](ExperimentConfig& c, const std::string&, const std::string& v) { field(c) = v; }};
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      path_key("data.users_x", [](ExperimentConfig& c) -> auto& { return c.users_x; }),
      path_key("data.edges_x", [](ExperimentConfig& c) -> auto& { return c.edges_x; }),
      path_key("data.users_y", [](ExperimentConfig& c) -> auto& { return c.users_y; }),
      path_key("data.edges_y", [](ExperimentConfig& c) -> auto& { return c.edges_y; }),
      path_key("data.pairs", [](ExperimentConfig& c) -> auto& { return c.pairs; }),
      {"pipeline.variant", [](const ExperimentConfig& c) { return std::string(variant_name(c.variant)); },
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const auto parsed = parse_variant(v);
         if (!parsed) throw ConfigError("config: " + k + " must be one of full, attrs_only, struct_only, no_projection; got '" + v + "'");
         c.variant = *parsed;
       }},
      {"pipeline.seed", [](const ExperimentConfig& c) { return std::to_string(c.seed); },
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.seed = to_uint(k, v); }},
      {"preprocess.stop_words", [](const ExperimentConfig& c) { return join_list(c.stop_words); },
       [](ExperimentConfig& c, const std::string&, const std::string& v) { c.stop_words = split_list(v); }},
      size_key("preprocess.min_word_count", [](ExperimentConfig& c) -> auto& { return c.min_word_count; }),
      {"preprocess.q_values", [](const ExperimentConfig& c) { return join_list(c.q_values); },
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.q_values.clear();
         for (const auto& item : split_list(v)) c.q_values.push_back(static_cast<int>(to_uint(k, item)));
       }},
      size_key("char.dim", [](ExperimentConfig& c) -> auto& { return c.char_dim; }),
      size_key("char.batch_size", [](ExperimentConfig& c) -> auto& { return c.char_opt.batch_size; }),
      double_key("char.learning_rate", [](ExperimentConfig& c) -> auto& { return c.char_opt.learning_rate; }),
      size_key("char.max_epochs", [](ExperimentConfig& c) -> auto& { return c.char_opt.max_epochs; }),
      double_key("char.min_relative_improvement", [](ExperimentConfig& c) -> auto& { return c.char_opt.min_relative_improvement; }),
      size_key("char.patience", [](ExperimentConfig& c) -> auto& { return c.char_opt.patience; }),
      size_key("word.dim", [](ExperimentConfig& c) -> auto& { return c.word_dim; }),
      size_key("word.window", [](ExperimentConfig& c) -> auto& { return c.cbow.window; }),
      size_key("word.negative", [](ExperimentConfig& c) -> auto& { return c.cbow.negative; }),
      size_key("word.epochs", [](ExperimentConfig& c) -> auto& { return c.cbow.epochs; }),
      double_key("word.learning_rate", [](ExperimentConfig& c) -> auto& { return c.cbow.learning_rate; }),
      double_key("word.lambda", [](ExperimentConfig& c) -> auto& { return c.lambda; }),
      path_key("word.vectors_x", [](ExperimentConfig& c) -> auto& { return c.word_vectors_x; }),
      path_key("word.vectors_y", [](ExperimentConfig& c) -> auto& { return c.word_vectors_y; }),
      size_key("topic.dim", [](ExperimentConfig& c) -> auto& { return c.topic_dim; }),
      {"topic.alpha", [](const ExperimentConfig& c) { return fmt_double(c.topic_alpha()); },
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.alpha = to_double(k, v); }},
      {"topic.beta", [](const ExperimentConfig& c) { return fmt_double(c.topic_beta()); },
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.beta = to_double(k, v); }},
      size_key("topic.iters", [](ExperimentConfig& c) -> auto& { return c.topic_iters; }),
      size_key("struct.dim", [](ExperimentConfig& c) -> auto& { return c.struct_dim; }),
      size_key("struct.negative", [](ExperimentConfig& c) -> auto& { return c.line.negative; }),
      size_key("struct.samples_per_edge", [](ExperimentConfig& c) -> auto& { return c.line.samples_per_edge; }),
      double_key("struct.learning_rate", [](ExperimentConfig& c) -> auto& { return c.line.learning_rate; }),
      size_key("rcca.k_proj", [](ExperimentConfig& c) -> auto& { return c.k_proj; }),
      double_key("rcca.reg", [](ExperimentConfig& c) -> auto& { return c.reg; }),
      size_key("eval.n_train", [](ExperimentConfig& c) -> auto& { return c.n_train; }),
      size_key("eval.n_test", [](ExperimentConfig& c) -> auto& { return c.n_test; }),
      size_key("eval.top_k", [](ExperimentConfig& c) -> auto& { return c.top_k; }),
      size_key("eval.repetitions", [](ExperimentConfig& c) -> auto& { return c.repetitions; }),
      {"eval.pool", [](const ExperimentConfig& c) { return std::string(c.pool == CandidatePool::kAll ? "all" : "test"); },
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "all") {
           c.pool = CandidatePool::kAll;
         } else if (v == "test") {
           c.pool = CandidatePool::kTest;
         } else {
           throw ConfigError("config: " + k + " must be 'all' or 'test', got '" + v + "'");
         }
       }},
  };
  return table;
}

bool is_path_key(const std::string& key) {
  return key.starts_with("data.") || key == "word.vectors_x" || key == "word.vectors_y";
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kAttrsOnly: return "attrs_only";
    case Variant::kStructOnly: return "struct_only";
    case Variant::kNoProjection: return "no_projection";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : {Variant::kFull, Variant::kAttrsOnly, Variant::kStructOnly, Variant::kNoProjection}) {
    if (variant_name(v) == name) return v;
  }
  return std::nullopt;
}

std::vector<Level> variant_levels(Variant v) {
  switch (v) {
    case Variant::kAttrsOnly: return {Level::kChar, Level::kWord, Level::kTopic};
    case Variant::kStructOnly: return {Level::kStructure};
    case Variant::kFull:
    case Variant::kNoProjection: break;
  }
  return {Level::kChar, Level::kWord, Level::kTopic, Level::kStructure};
}

std::size_t ExperimentConfig::level_dim(Level level) const {
  switch (level) {
    case Level::kChar: return char_dim;
    case Level::kWord: return word_dim;
    case Level::kTopic: return topic_dim;
    case Level::kStructure: return struct_dim;
    default: return 0;
  }
}

std::size_t ExperimentConfig::fused_dim() const {
  std::size_t d = 0;
  for (Level l : variant_levels(variant)) d += level_dim(l);
  return d;
}

void ExperimentConfig::validate() const {
  const auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  require(char_dim >= 1 && word_dim >= 1 && struct_dim >= 1, "feature dimensions must be >= 1");
  require(topic_dim >= 2, "topic.dim must be >= 2");
  for (int q : q_values) require(q >= 2, "preprocess.q_values entries must be >= 2");
  require(char_opt.batch_size >= 1, "char.batch_size must be >= 1");
  require(char_opt.learning_rate > 0.0, "char.learning_rate must be positive");
  require(lambda >= 0.0 && lambda <= 1.0, "word.lambda must lie in [0, 1]");
  require(cbow.learning_rate > 0.0, "word.learning_rate must be positive");
  require(topic_alpha() > 0.0 && topic_beta() > 0.0, "topic.alpha and topic.beta must be positive");
  require(topic_iters >= 1, "topic.iters must be >= 1");
  require(line.learning_rate > 0.0, "struct.learning_rate must be positive");
  require(line.samples_per_edge >= 1, "struct.samples_per_edge must be >= 1");
  require(reg >= 0.0, "rcca.reg must be >= 0");
  require(top_k >= 1, "eval.top_k must be >= 1");
  require(repetitions >= 1, "eval.repetitions must be >= 1");
  require(n_test >= 1, "eval.n_test must be >= 1");
  if (variant != Variant::kNoProjection) {
    require(n_train >= 1, "eval.n_train must be >= 1");
    require(k_proj >= 1 && k_proj <= fused_dim(),
            "rcca.k_proj=" + std::to_string(k_proj) + " must lie in [1, " +
                std::to_string(fused_dim()) + "] for variant " + std::string(variant_name(variant)));
  }
  require(word_vectors_x.empty() == word_vectors_y.empty(),
          "word.vectors_x and word.vectors_y must be given together");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& spec : key_table()) out.emplace_back(spec.key, spec.get(*this));
  return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  for (const auto& spec : key_table()) {
    if (key == spec.key) {
      spec.set(*this, key, value);
      return;
    }
  }
  throw ConfigError("config: unknown key '" + key + "'");
}

std::string env_var_for(const std::string& key) {
  std::string out = "IDLINK_";
  for (char c : key) {
    if (c == '.') {
      out += "__";
    } else {
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (is_path_key(key) && !value.empty() && std::filesystem::path(value).is_relative()) {
      value = (base_dir / value).lexically_normal().string();
    }
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

void apply_env_overrides(ExperimentConfig& cfg) {
  for (const auto& spec : key_table()) {
    if (const char* v = std::getenv(env_var_for(spec.key).c_str())) cfg.set(spec.key, trim(v));
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = parse_config(buf.str(), path.parent_path());
  apply_env_overrides(cfg);
  return cfg;
}

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  std::string section;
  for (const auto& [key, value] : cfg.entries()) {
    const std::string head = key.substr(0, key.find('.'));
    if (head != section) {
      if (!section.empty()) out << '\n';
      section = head;
    }
    out << key << " = " << value << '\n';
  }
}

ExperimentConfig synthetic_benchmark_config(const std::filesystem::path& dir) {
  ExperimentConfig cfg;
  cfg.users_x = dir / "users_x.tsv";
  cfg.edges_x = dir / "edges_x.tsv";
  cfg.users_y = dir / "users_y.tsv";
  cfg.edges_y = dir / "edges_y.tsv";
  cfg.pairs = dir / "pairs.tsv";
  cfg.n_train = 100;
  cfg.n_test = 200;
  cfg.k_proj = 80;
  cfg.reg = 10.0;
  cfg.char_opt.learning_rate = 0.02;
  return cfg;
}

}  // namespace idlink
