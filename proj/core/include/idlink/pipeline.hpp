#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idlink/config.hpp"
#include "idlink/corpus.hpp"
#include "idlink/eval.hpp"
#include "idlink/feature_matrix.hpp"
#include "idlink/matcher.hpp"
#include "idlink/rcca.hpp"
#include "idlink/topic_embed.hpp"

namespace idlink {

using LogSink = std::function<void(const std::string&)>;

struct Dataset {
  Network x;
  Network y;
  MatchedPairs truth;
};

Dataset load_dataset(const ExperimentConfig& cfg, const LogSink& log = {});

// Seed for one level of one network, derived from the master seed.
std::uint64_t embedding_seed(std::uint64_t master, Level level, Side side);
std::uint64_t repetition_seed(std::uint64_t master, std::size_t repetition);

// Token streams for one attribute level after preprocessing (and the
// per-network rare-word pass for word and topic levels).
std::vector<TokenStream> level_documents(const Network& net, Level level,
                                         const ExperimentConfig& cfg);

// Embeds one network at one level. `vectors_path` optionally replaces CBOW
// training with imported word vectors; `lda` receives the final sampler state.
FeatureMatrix embed_level(const Network& net, Level level, const ExperimentConfig& cfg,
                          std::uint64_t seed, const std::filesystem::path& vectors_path = {},
                          LdaState* lda = nullptr);

using LevelMap = std::map<Level, FeatureMatrix>;

// Embeds both networks at the given levels; the two sides run concurrently.
std::pair<LevelMap, LevelMap> embed_both(const Dataset& data, std::span<const Level> levels,
                                         const ExperimentConfig& cfg);

// Fuses the variant's levels and standardizes each network with its own statistics.
std::pair<FeatureMatrix, FeatureMatrix> build_features(const LevelMap& x_levels,
                                                       const LevelMap& y_levels, Variant variant);

struct RepetitionOutput {
  MatchedPairs train;
  MatchedPairs test;
  std::optional<CcaModel> model;  // absent for no_projection
  std::vector<MatchRanking> rankings;
};

// Ranking depth used for stored rankings: enough for hit-precision at 1, 3, 5 and top_k.
std::size_t ranking_depth(const ExperimentConfig& cfg);

std::pair<MatchedPairs, MatchedPairs> repetition_split(const MatchedPairs& truth,
                                                       const ExperimentConfig& cfg,
                                                       std::size_t repetition);

std::optional<CcaModel> train_projection(const FeatureMatrix& x, const FeatureMatrix& y,
                                         const MatchedPairs& train, const ExperimentConfig& cfg,
                                         std::vector<std::string>* warnings = nullptr);

std::vector<MatchRanking> rank_test_queries(const FeatureMatrix& x, const FeatureMatrix& y,
                                            const std::optional<CcaModel>& model,
                                            const MatchedPairs& test, const ExperimentConfig& cfg);

RepetitionOutput run_repetition(const FeatureMatrix& x, const FeatureMatrix& y,
                                const MatchedPairs& truth, const ExperimentConfig& cfg,
                                std::size_t repetition, std::vector<std::string>* warnings = nullptr);

struct RepetitionRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double hp1 = 0.0;
  double hp3 = 0.0;
  double hp5 = 0.0;
  double hp_top_k = 0.0;
};

RepetitionRecord score_repetition(std::span<const MatchRanking> rankings, const MatchedPairs& test,
                                  const ExperimentConfig& cfg, std::size_t repetition,
                                  std::size_t n_train);

struct ExperimentReport {
  Variant variant = Variant::kFull;
  std::size_t top_k = 3;
  std::vector<RepetitionRecord> repetitions;
  double mean = 0.0;    // mean hit-precision@top_k
  double stddev = 0.0;  // sample standard deviation over repetitions
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> warnings;
};

ExperimentReport summarize(Variant variant, const ExperimentConfig& cfg,
                           std::vector<RepetitionRecord> records, std::vector<std::string> warnings);

// In-memory pipeline: embeddings once, then every repetition.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const LogSink& log = {});

// Shares the embeddings across variants; splits are identical across variants
// within a repetition.
std::vector<ExperimentReport> run_variants(const ExperimentConfig& cfg,
                                           std::span<const Variant> variants,
                                           const LogSink& log = {});

std::string report_json(const ExperimentReport& report);
std::string report_table(std::span<const ExperimentReport> reports);

// ---------------------------------------------------------------------------
// Staged execution with content-addressed artifact caches under an output dir.
// ---------------------------------------------------------------------------

enum class Stage { kEmbed, kFuse, kTrain, kMatch, kEval };

std::string_view stage_name(Stage s);
// Accepts stage names plus the alias "rcca" for train.
std::optional<Stage> parse_stage(std::string_view name);

struct RunOptions {
  std::filesystem::path out_dir = "idlink-out";
  std::optional<Stage> only;  // run just this stage from cached upstream artifacts
  LogSink log;
};

// Returns the report when the eval stage ran.
std::optional<ExperimentReport> run_pipeline(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace idlink
