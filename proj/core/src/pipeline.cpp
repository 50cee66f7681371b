#include "idlink/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "idlink/char_embed.hpp"
#include "idlink/error.hpp"
#include "idlink/fusion.hpp"
#include "idlink/random.hpp"
#include "idlink/struct_embed.hpp"
#include "idlink/word_embed.hpp"
#include "json.hpp"

namespace idlink {
namespace fs = std::filesystem;

namespace {

void emit(const LogSink& log, const std::string& msg) {
  if (log) log(msg);
}

PreprocessConfig preprocess_config(const ExperimentConfig& cfg, bool with_stop_words) {
  PreprocessConfig pc;
  if (with_stop_words) pc.stop_words.insert(cfg.stop_words.begin(), cfg.stop_words.end());
  pc.min_word_count = cfg.min_word_count;
  return pc;
}

std::vector<UserIndex> test_targets(const MatchedPairs& test) {
  std::vector<UserIndex> pool;
  pool.reserve(test.size());
  for (const auto& [x, y] : test) pool.push_back(y);
  std::sort(pool.begin(), pool.end());
  return pool;
}

double mean_of(const std::vector<RepetitionRecord>& recs, double RepetitionRecord::*field) {
  double sum = 0.0;
  for (const auto& r : recs) sum += r.*field;
  return recs.empty() ? 0.0 : sum / static_cast<double>(recs.size());
}

// --- content addressing -----------------------------------------------------

class Fingerprint {
 public:
  Fingerprint& add(std::string_view s) {
    for (unsigned char c : s) {
      hash_ ^= c;
      hash_ *= 0x100000001B3ULL;
    }
    hash_ ^= 0xFF;  // field separator
    hash_ *= 0x100000001B3ULL;
    return *this;
  }

  Fingerprint& add_file(const fs::path& path) {
    if (path.empty()) return add("<none>");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return add(buf.str());
  }

  Fingerprint& add_keys(const ExperimentConfig& cfg, std::initializer_list<std::string_view> prefixes) {
    for (const auto& [key, value] : cfg.entries()) {
      for (std::string_view p : prefixes) {
        if (key.starts_with(p)) {
          add(key).add(value);
          break;
        }
      }
    }
    return *this;
  }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

void mark_done(const fs::path& dir) { std::ofstream(dir / "DONE") << "ok\n"; }
bool is_done(const fs::path& dir) { return fs::exists(dir / "DONE"); }

std::string rep_dir_name(std::size_t r) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "rep-%02zu", r);
  return buf;
}

}  // namespace

Dataset load_dataset(const ExperimentConfig& cfg, const LogSink& log) {
  for (const auto* p : {&cfg.users_x, &cfg.edges_x, &cfg.users_y, &cfg.edges_y, &cfg.pairs}) {
    if (p->empty()) throw ConfigError("config: all data.* paths are required");
    if (!fs::exists(*p)) throw ConfigError("config: data file does not exist: " + p->string());
  }
  Dataset data;
  LoadDiagnostics dx;
  LoadDiagnostics dy;
  data.x = load_network(cfg.users_x, cfg.edges_x, &dx);
  data.y = load_network(cfg.users_y, cfg.edges_y, &dy);
  for (const auto& [net, d] : {std::pair{&data.x, dx}, std::pair{&data.y, dy}}) {
    if (d.self_loops_dropped > 0) {
      emit(log, "warning: dropped " + std::to_string(d.self_loops_dropped) + " self-loops from " +
                    net->name());
    }
    emit(log, "loaded " + net->name() + ": " + std::to_string(net->size()) + " users, " +
                  std::to_string(net->edges().size()) + " edges");
  }
  data.truth = load_pairs(cfg.pairs, data.x, data.y);
  emit(log, "loaded " + std::to_string(data.truth.size()) + " matched pairs");
  return data;
}

std::uint64_t embedding_seed(std::uint64_t master, Level level, Side side) {
  return mix_seed(master, 16 * static_cast<std::uint64_t>(level) + (side == Side::kX ? 1 : 2));
}

std::uint64_t repetition_seed(std::uint64_t master, std::size_t repetition) {
  return mix_seed(master, 1000 + repetition);
}

std::vector<TokenStream> level_documents(const Network& net, Level level,
                                         const ExperimentConfig& cfg) {
  std::vector<TokenStream> docs;
  docs.reserve(net.size());
  switch (level) {
    case Level::kChar: {
      const PreprocessConfig pc = preprocess_config(cfg, false);
      for (const auto& u : net.users()) {
        docs.push_back(char_tokenize(preprocess_text(u.char_attr, pc), cfg.q_values));
      }
      return docs;
    }
    case Level::kWord:
    case Level::kTopic: {
      const PreprocessConfig pc = preprocess_config(cfg, true);
      for (const auto& u : net.users()) {
        docs.push_back(word_tokenize(preprocess_text(level == Level::kWord ? u.word_attr : u.topic_attr, pc)));
      }
      remove_rare_words(docs, cfg.min_word_count);
      return docs;
    }
    default:
      throw ConfigError("level_documents: '" + std::string(level_name(level)) + "' is not an attribute level");
  }
}

FeatureMatrix embed_level(const Network& net, Level level, const ExperimentConfig& cfg,
                          std::uint64_t seed, const fs::path& vectors_path, LdaState* lda) {
  switch (level) {
    case Level::kChar: {
      const auto docs = level_documents(net, level, cfg);
      const CountMatrix counts = count_vectorize(docs);
      const LinearAutoencoder model = train_autoencoder(counts, cfg.char_dim, cfg.char_opt, seed);
      return encode_chars(model, counts);
    }
    case Level::kWord: {
      const auto docs = level_documents(net, level, cfg);
      const WordVectors wv = vectors_path.empty() ? train_cbow(docs, cfg.word_dim, cfg.cbow, seed)
                                                  : load_word_vectors(vectors_path);
      return smooth_with_neighbors(embed_words(docs, wv), net, SmoothingConfig{cfg.lambda});
    }
    case Level::kTopic: {
      const auto docs = level_documents(net, level, cfg);
      LdaState state = gibbs_sample(docs, cfg.topic_dim, cfg.topic_alpha(), cfg.topic_beta(),
                                    cfg.topic_iters, seed);
      FeatureMatrix out = topic_features(state);
      if (lda) *lda = std::move(state);
      return out;
    }
    case Level::kStructure:
      return embed_structure(net, cfg.struct_dim, cfg.line, seed);
    default:
      throw ConfigError("embed_level: cannot embed level '" + std::string(level_name(level)) + "'");
  }
}

std::pair<LevelMap, LevelMap> embed_both(const Dataset& data, std::span<const Level> levels,
                                         const ExperimentConfig& cfg) {
  const auto side = [&](const Network& net, Side s, const fs::path& vectors) {
    LevelMap out;
    for (Level l : levels) out.emplace(l, embed_level(net, l, cfg, embedding_seed(cfg.seed, l, s), vectors));
    return out;
  };
  auto fx = std::async(std::launch::async, side, std::cref(data.x), Side::kX, cfg.word_vectors_x);
  LevelMap y = side(data.y, Side::kY, cfg.word_vectors_y);
  return {fx.get(), std::move(y)};
}

std::pair<FeatureMatrix, FeatureMatrix> build_features(const LevelMap& x_levels,
                                                       const LevelMap& y_levels, Variant variant) {
  LevelMap xs;
  LevelMap ys;
  for (Level l : variant_levels(variant)) {
    const auto ix = x_levels.find(l);
    const auto iy = y_levels.find(l);
    if (ix == x_levels.end() || iy == y_levels.end()) {
      throw ConfigError("build_features: level '" + std::string(level_name(l)) + "' was not embedded");
    }
    xs.emplace(l, ix->second);
    ys.emplace(l, iy->second);
  }
  return {standardize(fuse(xs)).first, standardize(fuse(ys)).first};
}

std::size_t ranking_depth(const ExperimentConfig& cfg) { return std::max<std::size_t>(cfg.top_k, 5); }

std::pair<MatchedPairs, MatchedPairs> repetition_split(const MatchedPairs& truth,
                                                       const ExperimentConfig& cfg,
                                                       std::size_t repetition) {
  const std::size_t n_train = cfg.variant == Variant::kNoProjection ? std::min(cfg.n_train, truth.size())
                                                                    : cfg.n_train;
  if (n_train >= truth.size()) {
    throw DataError("eval: n_train=" + std::to_string(n_train) + " leaves no test pairs out of " +
                    std::to_string(truth.size()));
  }
  const std::size_t n_test = std::min(cfg.n_test, truth.size() - n_train);
  return split_pairs(truth, SplitSpec{n_train, n_test, repetition_seed(cfg.seed, repetition)});
}

std::optional<CcaModel> train_projection(const FeatureMatrix& x, const FeatureMatrix& y,
                                         const MatchedPairs& train, const ExperimentConfig& cfg,
                                         std::vector<std::string>* warnings) {
  if (cfg.variant == Variant::kNoProjection) return std::nullopt;
  FeatureMatrix xt;
  FeatureMatrix yt;
  xt.data.resize(x.data.rows(), static_cast<Eigen::Index>(train.size()));
  yt.data.resize(y.data.rows(), static_cast<Eigen::Index>(train.size()));
  Eigen::Index col = 0;
  for (const auto& [a, b] : train) {
    xt.data.col(col) = x.data.col(a);
    yt.data.col(col) = y.data.col(b);
    ++col;
  }
  return fit_rcca(xt, yt, cfg.k_proj, cfg.reg, cfg.reg, warnings);
}

std::vector<MatchRanking> rank_test_queries(const FeatureMatrix& x, const FeatureMatrix& y,
                                            const std::optional<CcaModel>& model,
                                            const MatchedPairs& test, const ExperimentConfig& cfg) {
  const FeatureMatrix zx = model ? project(*model, x, Side::kX) : x;
  const FeatureMatrix zy = model ? project(*model, y, Side::kY) : y;
  std::vector<UserIndex> pool;
  if (cfg.pool == CandidatePool::kTest) {
    pool = test_targets(test);
  } else {
    pool.resize(zy.users());
    std::iota(pool.begin(), pool.end(), UserIndex{0});
  }
  std::vector<MatchRanking> rankings;
  rankings.reserve(test.size());
  for (const auto& [q, truth] : test) {
    rankings.push_back(rank_candidates(zx, zy, q, ranking_depth(cfg), pool));
  }
  return rankings;
}

RepetitionOutput run_repetition(const FeatureMatrix& x, const FeatureMatrix& y,
                                const MatchedPairs& truth, const ExperimentConfig& cfg,
                                std::size_t repetition, std::vector<std::string>* warnings) {
  RepetitionOutput out;
  std::tie(out.train, out.test) = repetition_split(truth, cfg, repetition);
  out.model = train_projection(x, y, out.train, cfg, warnings);
  out.rankings = rank_test_queries(x, y, out.model, out.test, cfg);
  return out;
}

RepetitionRecord score_repetition(std::span<const MatchRanking> rankings, const MatchedPairs& test,
                                  const ExperimentConfig& cfg, std::size_t repetition,
                                  std::size_t n_train) {
  RepetitionRecord rec;
  rec.index = repetition;
  rec.seed = repetition_seed(cfg.seed, repetition);
  rec.n_train = n_train;
  rec.n_test = test.size();
  rec.hp1 = hit_precision(rankings, test, 1).hit_precision;
  rec.hp3 = hit_precision(rankings, test, 3).hit_precision;
  rec.hp5 = hit_precision(rankings, test, 5).hit_precision;
  rec.hp_top_k = hit_precision(rankings, test, cfg.top_k).hit_precision;
  return rec;
}

ExperimentReport summarize(Variant variant, const ExperimentConfig& cfg,
                           std::vector<RepetitionRecord> records, std::vector<std::string> warnings) {
  ExperimentReport report;
  report.variant = variant;
  report.top_k = cfg.top_k;
  report.mean = mean_of(records, &RepetitionRecord::hp_top_k);
  if (records.size() > 1) {
    double ss = 0.0;
    for (const auto& r : records) ss += (r.hp_top_k - report.mean) * (r.hp_top_k - report.mean);
    report.stddev = std::sqrt(ss / static_cast<double>(records.size() - 1));
  }
  report.repetitions = std::move(records);
  ExperimentConfig resolved = cfg;
  resolved.variant = variant;
  report.config = resolved.entries();
  report.warnings = std::move(warnings);
  return report;
}

std::vector<ExperimentReport> run_variants(const ExperimentConfig& cfg,
                                           std::span<const Variant> variants, const LogSink& log) {
  std::vector<Level> needed;
  for (Variant v : variants) {
    ExperimentConfig check = cfg;
    check.variant = v;
    check.validate();
    for (Level l : variant_levels(v)) {
      if (std::find(needed.begin(), needed.end(), l) == needed.end()) needed.push_back(l);
    }
  }
  std::sort(needed.begin(), needed.end());
  const Dataset data = load_dataset(cfg, log);
  emit(log, "embedding " + std::to_string(needed.size()) + " levels for both networks");
  const auto [x_levels, y_levels] = embed_both(data, needed, cfg);

  std::vector<ExperimentReport> reports;
  for (Variant v : variants) {
    ExperimentConfig vc = cfg;
    vc.variant = v;
    const auto [x, y] = build_features(x_levels, y_levels, v);
    std::vector<RepetitionRecord> records;
    std::vector<std::string> warnings;
    for (std::size_t r = 0; r < vc.repetitions; ++r) {
      const RepetitionOutput out = run_repetition(x, y, data.truth, vc, r, &warnings);
      records.push_back(score_repetition(out.rankings, out.test, vc, r, out.train.size()));
    }
    reports.push_back(summarize(v, vc, std::move(records), std::move(warnings)));
    emit(log, std::string(variant_name(v)) + ": hit-precision@" + std::to_string(vc.top_k) + " = " +
                  std::to_string(reports.back().mean));
  }
  return reports;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const LogSink& log) {
  const Variant v = cfg.variant;
  return run_variants(cfg, std::span<const Variant>(&v, 1), log).front();
}

std::string report_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["variant"] = variant_name(report.variant);
  j["top_k"] = report.top_k;
  j["hit_precision_mean"] = report.mean;
  j["hit_precision_std"] = report.stddev;
  nlohmann::ordered_json reps = nlohmann::ordered_json::array();
  for (const auto& r : report.repetitions) {
    reps.push_back({{"repetition", r.index},
                    {"seed", r.seed},
                    {"n_train", r.n_train},
                    {"n_test", r.n_test},
                    {"hit_precision@1", r.hp1},
                    {"hit_precision@3", r.hp3},
                    {"hit_precision@5", r.hp5}});
  }
  j["repetitions"] = std::move(reps);
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  j["config"] = std::move(config);
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string report_table(std::span<const ExperimentReport> reports) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(16) << "Variant" << std::right << std::setw(10) << "HP@1"
      << std::setw(10) << "HP@3" << std::setw(10) << "HP@5" << std::setw(18) << "HP@k (mean)"
      << std::setw(10) << "std" << std::setw(6) << "reps" << '\n';
  for (const auto& r : reports) {
    out << std::left << std::setw(16) << variant_name(r.variant) << std::right << std::setw(10)
        << mean_of(r.repetitions, &RepetitionRecord::hp1) << std::setw(10)
        << mean_of(r.repetitions, &RepetitionRecord::hp3) << std::setw(10)
        << mean_of(r.repetitions, &RepetitionRecord::hp5) << std::setw(18) << r.mean
        << std::setw(10) << r.stddev << std::setw(6) << r.repetitions.size() << '\n';
  }
  return out.str();
}

// --- staged runner ----------------------------------------------------------

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::kEmbed: return "embed";
    case Stage::kFuse: return "fuse";
    case Stage::kTrain: return "train";
    case Stage::kMatch: return "match";
    case Stage::kEval: return "eval";
  }
  return "unknown";
}

std::optional<Stage> parse_stage(std::string_view name) {
  if (name == "rcca") return Stage::kTrain;
  for (Stage s : {Stage::kEmbed, Stage::kFuse, Stage::kTrain, Stage::kMatch, Stage::kEval}) {
    if (stage_name(s) == name) return s;
  }
  return std::nullopt;
}

namespace {

struct StagePaths {
  std::map<Level, fs::path> embed;
  fs::path fuse;
  fs::path train;
  fs::path match;
};

StagePaths stage_paths(const ExperimentConfig& cfg, const fs::path& out) {
  Fingerprint data;
  data.add_file(cfg.users_x).add_file(cfg.edges_x).add_file(cfg.users_y).add_file(cfg.edges_y);
  const std::string data_hash = data.hex();

  StagePaths p;
  Fingerprint fuse;
  fuse.add(variant_name(cfg.variant));
  for (Level l : variant_levels(cfg.variant)) {
    Fingerprint f;
    f.add(level_name(l)).add(data_hash).add(std::to_string(cfg.seed));
    switch (l) {
      case Level::kChar: f.add_keys(cfg, {"preprocess.q_values", "char."}); break;
      case Level::kWord:
        f.add_keys(cfg, {"preprocess.stop_words", "preprocess.min_word_count", "word."});
        f.add_file(cfg.word_vectors_x).add_file(cfg.word_vectors_y);
        break;
      case Level::kTopic: f.add_keys(cfg, {"preprocess.stop_words", "preprocess.min_word_count", "topic."}); break;
      default: f.add_keys(cfg, {"struct."}); break;
    }
    p.embed[l] = out / "embed" / (std::string(level_name(l)) + "-" + f.hex());
    fuse.add(f.hex());
  }
  p.fuse = out / ("fuse-" + fuse.hex());

  Fingerprint train;
  train.add(fuse.hex()).add(std::to_string(cfg.seed)).add_file(cfg.pairs);
  train.add_keys(cfg, {"pipeline.variant", "rcca.", "eval.n_train", "eval.n_test", "eval.repetitions"});
  p.train = out / ("train-" + train.hex());

  Fingerprint match;
  match.add(train.hex()).add_keys(cfg, {"eval.top_k", "eval.pool"});
  p.match = out / ("match-" + match.hex());
  return p;
}

void require_upstream(const fs::path& dir, Stage needed, Stage requested) {
  if (!is_done(dir)) {
    throw DataError("stage '" + std::string(stage_name(requested)) + "' needs cached artifacts from stage '" +
                    std::string(stage_name(needed)) + "' (missing " + dir.string() + "); run '" +
                    std::string(stage_name(needed)) + "' first");
  }
}

}  // namespace

std::optional<ExperimentReport> run_pipeline(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const LogSink& log = opts.log;
  for (const auto& [k, v] : cfg.entries()) emit(log, "config " + k + " = " + v);

  const Dataset data = load_dataset(cfg, log);
  const StagePaths paths = stage_paths(cfg, opts.out_dir);
  const auto runs = [&](Stage s) { return !opts.only || *opts.only == s; };
  const auto fresh = [&](Stage s, const fs::path& dir) {
    // Explicitly requested stages always recompute; otherwise reuse finished caches.
    if (opts.only && *opts.only == s) return true;
    if (is_done(dir)) {
      emit(log, std::string(stage_name(s)) + ": reusing " + dir.string());
      return false;
    }
    return true;
  };
  const std::vector<Level> levels = variant_levels(cfg.variant);

  if (runs(Stage::kEmbed)) {
    for (Level l : levels) {
      const fs::path& dir = paths.embed.at(l);
      if (!fresh(Stage::kEmbed, dir)) continue;
      fs::create_directories(dir);
      emit(log, "embed: " + std::string(level_name(l)) + " level");
      LdaState lda_x;
      LdaState lda_y;
      auto fx = std::async(std::launch::async, [&] {
        return embed_level(data.x, l, cfg, embedding_seed(cfg.seed, l, Side::kX), cfg.word_vectors_x, &lda_x);
      });
      const FeatureMatrix y = embed_level(data.y, l, cfg, embedding_seed(cfg.seed, l, Side::kY),
                                          cfg.word_vectors_y, &lda_y);
      save_feature_matrix(fx.get(), dir / "x.fm");
      save_feature_matrix(y, dir / "y.fm");
      if (l == Level::kTopic) {
        write_topic_report(lda_x, dir / "topics_x.txt");
        write_topic_report(lda_y, dir / "topics_y.txt");
      }
      mark_done(dir);
    }
  }

  if (runs(Stage::kFuse) && fresh(Stage::kFuse, paths.fuse)) {
    LevelMap xs;
    LevelMap ys;
    for (Level l : levels) {
      require_upstream(paths.embed.at(l), Stage::kEmbed, Stage::kFuse);
      xs.emplace(l, load_feature_matrix(paths.embed.at(l) / "x.fm"));
      ys.emplace(l, load_feature_matrix(paths.embed.at(l) / "y.fm"));
    }
    const auto [x, y] = build_features(xs, ys, cfg.variant);
    fs::create_directories(paths.fuse);
    save_feature_matrix(x, paths.fuse / "x.fm");
    save_feature_matrix(y, paths.fuse / "y.fm");
    emit(log, "fuse: " + std::to_string(x.dims()) + " features per user");
    mark_done(paths.fuse);
  }

  std::vector<std::string> warnings;
  if (runs(Stage::kTrain) && fresh(Stage::kTrain, paths.train)) {
    require_upstream(paths.fuse, Stage::kFuse, Stage::kTrain);
    const FeatureMatrix x = load_feature_matrix(paths.fuse / "x.fm");
    const FeatureMatrix y = load_feature_matrix(paths.fuse / "y.fm");
    for (std::size_t r = 0; r < cfg.repetitions; ++r) {
      const fs::path dir = paths.train / rep_dir_name(r);
      fs::create_directories(dir);
      const auto [train, test] = repetition_split(data.truth, cfg, r);
      save_pairs(train, data.x, data.y, dir / "train.tsv");
      save_pairs(test, data.x, data.y, dir / "test.tsv");
      if (const auto model = train_projection(x, y, train, cfg, &warnings)) {
        save_cca_model(*model, dir / "model.cca");
      }
    }
    std::ofstream(paths.train / "warnings.txt") << [&] {
      std::string s;
      for (const auto& w : warnings) s += w + "\n";
      return s;
    }();
    emit(log, "train: " + std::to_string(cfg.repetitions) + " repetitions");
    mark_done(paths.train);
  }

  if (runs(Stage::kMatch) && fresh(Stage::kMatch, paths.match)) {
    require_upstream(paths.train, Stage::kTrain, Stage::kMatch);
    const FeatureMatrix x = load_feature_matrix(paths.fuse / "x.fm");
    const FeatureMatrix y = load_feature_matrix(paths.fuse / "y.fm");
    for (std::size_t r = 0; r < cfg.repetitions; ++r) {
      const fs::path train_dir = paths.train / rep_dir_name(r);
      const fs::path dir = paths.match / rep_dir_name(r);
      fs::create_directories(dir);
      const MatchedPairs test = load_pairs(train_dir / "test.tsv", data.x, data.y);
      std::optional<CcaModel> model;
      if (cfg.variant != Variant::kNoProjection) model = load_cca_model(train_dir / "model.cca");
      const auto rankings = rank_test_queries(x, y, model, test, cfg);
      write_rankings(rankings, data.x, data.y, dir / "rankings.tsv");
      std::ofstream pred(dir / "predictions.tsv", std::ios::trunc);
      for (const auto& rk : rankings) {
        if (rk.candidates.empty()) continue;
        pred << data.x.user(rk.query).id << '\t' << data.y.user(rk.candidates.front().target).id << '\n';
      }
    }
    emit(log, "match: rankings written to " + paths.match.string());
    mark_done(paths.match);
  }

  if (!runs(Stage::kEval)) return std::nullopt;
  require_upstream(paths.match, Stage::kMatch, Stage::kEval);
  warnings.clear();  // the train stage's file is authoritative, whether fresh or cached
  if (fs::exists(paths.train / "warnings.txt")) {
    std::ifstream in(paths.train / "warnings.txt");
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) warnings.push_back(line);
    }
    warnings.erase(std::unique(warnings.begin(), warnings.end()), warnings.end());
  }
  std::vector<RepetitionRecord> records;
  for (std::size_t r = 0; r < cfg.repetitions; ++r) {
    const MatchedPairs train = load_pairs(paths.train / rep_dir_name(r) / "train.tsv", data.x, data.y);
    const MatchedPairs test = load_pairs(paths.train / rep_dir_name(r) / "test.tsv", data.x, data.y);
    const auto rankings = read_rankings(paths.match / rep_dir_name(r) / "rankings.tsv", data.x, data.y);
    records.push_back(score_repetition(rankings, test, cfg, r, train.size()));
  }
  ExperimentReport report = summarize(cfg.variant, cfg, std::move(records), std::move(warnings));
  fs::create_directories(opts.out_dir);
  std::ofstream(opts.out_dir / "report.json", std::ios::trunc) << report_json(report);
  std::ofstream(opts.out_dir / "report.txt", std::ios::trunc)
      << report_table(std::span<const ExperimentReport>(&report, 1));
  emit(log, "eval: hit-precision@" + std::to_string(cfg.top_k) + " = " + std::to_string(report.mean) +
                " (std " + std::to_string(report.stddev) + ")");
  return report;
}

}  // namespace idlink
