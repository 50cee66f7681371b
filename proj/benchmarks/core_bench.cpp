#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "idlink/char_embed.hpp"
#include "idlink/matcher.hpp"
#include "idlink/rcca.hpp"
#include "idlink/topic_embed.hpp"

using namespace idlink;

namespace {

Eigen::MatrixXd gaussian(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(gen);
  }
  return m;
}

std::vector<TokenStream> random_docs(std::size_t n_docs, std::size_t len, std::size_t vocab) {
  std::mt19937_64 gen(3);
  std::vector<TokenStream> docs(n_docs);
  for (auto& d : docs) {
    for (std::size_t i = 0; i < len; ++i) d.tokens.push_back("w" + std::to_string(gen() % vocab));
  }
  return docs;
}

}  // namespace

static void BM_SolveRcca(benchmark::State& state) {
  const auto d = state.range(0);
  std::mt19937_64 gen(1);
  const Eigen::MatrixXd x = gaussian(gen, d, 200);
  const Eigen::MatrixXd y = x + 0.5 * gaussian(gen, d, 200);
  const CovarianceSet cov = covariances(FeatureMatrix(x, Level::kFused), FeatureMatrix(y, Level::kFused));
  for (auto _ : state) benchmark::DoNotOptimize(solve_rcca(cov, static_cast<std::size_t>(d) / 2, 1.0, 1.0));
}
BENCHMARK(BM_SolveRcca)->Arg(50)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_LdaSweep(benchmark::State& state) {
  const auto docs = random_docs(static_cast<std::size_t>(state.range(0)), 40, 500);
  LdaSampler sampler(docs, 100, 0.5, 0.01, 1);
  for (auto _ : state) sampler.sweep();
  state.SetItemsProcessed(state.iterations() * state.range(0) * 40);
}
BENCHMARK(BM_LdaSweep)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_RankCandidates(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 gen(2);
  const FeatureMatrix zx(gaussian(gen, 80, n), Level::kProjected);
  const FeatureMatrix zy(gaussian(gen, 80, n), Level::kProjected);
  UserIndex q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_candidates(zx, zy, q, 30));
    q = (q + 1) % static_cast<UserIndex>(n);
  }
}
BENCHMARK(BM_RankCandidates)->Arg(1000)->Arg(10000);

static void BM_AutoencoderEpoch(benchmark::State& state) {
  std::mt19937_64 gen(4);
  std::poisson_distribution<int> p(0.05);
  CountMatrix counts;
  counts.data.resize(state.range(0), 2000);
  for (Eigen::Index j = 0; j < counts.data.cols(); ++j) {
    for (Eigen::Index i = 0; i < counts.data.rows(); ++i) counts.data(i, j) = p(gen);
  }
  for (Eigen::Index i = 0; i < counts.data.rows(); ++i) {
    counts.vocab.push_back("g" + std::to_string(i));
    counts.rows.emplace(counts.vocab.back(), static_cast<std::size_t>(i));
  }
  SgdConfig opt;
  opt.max_epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_autoencoder(counts, 100, opt, 1));
}
BENCHMARK(BM_AutoencoderEpoch)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
