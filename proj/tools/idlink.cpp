#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "idlink/config.hpp"
#include "idlink/error.hpp"
#include "idlink/pipeline.hpp"
#include "idlink/synthgen.hpp"

namespace {

struct PipelineArgs {
  std::string config;
  std::string out_dir = "idlink-out";
  std::string stage;
  std::string variant;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_pipeline_flags(CLI::App* cmd, PipelineArgs& args, bool with_stage) {
  cmd->add_option("-c,--config", args.config, "Experiment config file")->required();
  cmd->add_option("-o,--out-dir", args.out_dir, "Artifact and report directory");
  cmd->add_option("--variant", args.variant, "full | attrs_only | struct_only | no_projection");
  cmd->add_option("--seed", args.seed, "Master seed (overrides pipeline.seed)");
  cmd->add_flag("-q,--quiet", args.quiet, "Suppress progress output");
  if (with_stage) cmd->add_option("--stage", args.stage, "Run one stage: embed | fuse | train | match | eval");
}

int run_pipeline_command(const PipelineArgs& args, std::optional<idlink::Stage> only) {
  idlink::ExperimentConfig cfg = idlink::load_config(args.config);
  if (!args.variant.empty()) cfg.set("pipeline.variant", args.variant);
  if (args.seed) cfg.seed = *args.seed;
  if (!args.stage.empty()) {
    only = idlink::parse_stage(args.stage);
    if (!only) throw idlink::ConfigError("unknown stage '" + args.stage + "'");
  }
  idlink::RunOptions opts;
  opts.out_dir = args.out_dir;
  opts.only = only;
  if (!args.quiet) opts.log = [](const std::string& line) { std::cerr << line << '\n'; };
  const auto report = idlink::run_pipeline(cfg, opts);
  if (report) {
    std::cout << idlink::report_table(std::span<const idlink::ExperimentReport>(&*report, 1));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-network user identity linkage from multi-level attribute embeddings"};
  app.require_subcommand(1);

  idlink::SynthConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic pair of networks with ground truth");
  synth_cmd->add_option("-o,--out-dir", synth_out, "Output directory")->required();
  synth_cmd->add_option("-n,--users", synth.n_users, "Users per network");
  synth_cmd->add_option("-m,--attach", synth.attachment_m, "Edges added per new user");
  synth_cmd->add_option("--edge-drop", synth.edge_drop_p, "Fraction of target edges removed");
  synth_cmd->add_option("--attr-drop", synth.attr_drop_p, "Probability of dropping a target attribute");
  synth_cmd->add_option("--char-noise", synth.char_noise_p, "Per-character mutation rate of target names");
  synth_cmd->add_option("--word-swap", synth.word_swap_p, "Per-word swap rate of target phrases");
  synth_cmd->add_option("--topics", synth.planted_topics, "Planted topics");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");

  PipelineArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run every stage (or one with --stage)");
  add_pipeline_flags(run_cmd, run_args, true);

  PipelineArgs stage_args;
  std::vector<std::pair<CLI::App*, idlink::Stage>> stage_cmds;
  for (idlink::Stage s : {idlink::Stage::kEmbed, idlink::Stage::kFuse, idlink::Stage::kTrain,
                          idlink::Stage::kMatch, idlink::Stage::kEval}) {
    auto* cmd = app.add_subcommand(std::string(idlink::stage_name(s)),
                                   "Run the " + std::string(idlink::stage_name(s)) + " stage");
    add_pipeline_flags(cmd, stage_args, false);
    stage_cmds.emplace_back(cmd, s);
  }
  stage_cmds.front().first->alias("embeddings");
  stage_cmds[2].first->alias("rcca");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth_cmd) {
      synth.validate();
      const idlink::SyntheticPair pair = idlink::generate_pair(synth);
      idlink::write_synthetic(pair, synth_out);
      // Relative paths resolve against the config file's own directory.
      const idlink::ExperimentConfig cfg = idlink::synthetic_benchmark_config();
      idlink::write_config(cfg, std::filesystem::path(synth_out) / "experiment.cfg");
      std::cout << "wrote " << pair.source.size() << " + " << pair.target.size() << " users and "
                << pair.truth.size() << " pairs to " << synth_out << '\n';
      return 0;
    }
    if (*run_cmd) return run_pipeline_command(run_args, std::nullopt);
    for (const auto& [cmd, stage] : stage_cmds) {
      if (*cmd) return run_pipeline_command(stage_args, stage);
    }
  } catch (const idlink::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
