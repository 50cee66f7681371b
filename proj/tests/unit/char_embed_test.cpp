#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "idlink/char_embed.hpp"
#include "idlink/error.hpp"
#include "oracles.hpp"

using namespace idlink;

namespace {

CountMatrix from_matrix(const Eigen::MatrixXd& data) {
  CountMatrix c;
  c.data = data;
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    c.vocab.push_back("t" + std::to_string(r));
    c.rows[c.vocab.back()] = static_cast<std::size_t>(r);
  }
  return c;
}

// Flattens every parameter in a fixed order.
std::vector<double*> parameters(LinearAutoencoder& m) {
  std::vector<double*> out;
  for (auto* mat : {&m.encoder_weights, &m.decoder_weights}) {
    for (Eigen::Index i = 0; i < mat->size(); ++i) out.push_back(mat->data() + i);
  }
  for (auto* vec : {&m.encoder_bias, &m.decoder_bias}) {
    for (Eigen::Index i = 0; i < vec->size(); ++i) out.push_back(vec->data() + i);
  }
  return out;
}

}  // namespace

TEST(CountVectorize, DirectCounting) {
  const std::vector<TokenStream> s = {{{"a", "b"}}, {{"b", "b"}}};
  const CountMatrix c = count_vectorize(s);
  EXPECT_EQ(c.vocab, (std::vector<std::string>{"a", "b"}));
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 0, 1, 2;
  EXPECT_EQ(c.data, expected);
}

TEST(CountVectorize, UsernameColumn) {
  const std::vector<int> none;
  const std::vector<TokenStream> s = {char_tokenize(preprocess_text("Yoshua Bengio", {}), none)};
  const CountMatrix c = count_vectorize(s);
  EXPECT_EQ(c.data(c.rows.at("a"), 0), 1.0);
  EXPECT_EQ(c.data(c.rows.at("b"), 0), 1.0);
  EXPECT_EQ(c.data(c.rows.at("o"), 0), 2.0);
  EXPECT_EQ(c.rows.count("c"), 0u);
}

TEST(CountVectorize, EmptyStreamGivesZeroColumn) {
  const std::vector<TokenStream> s = {{{"x"}}, {}};
  const CountMatrix c = count_vectorize(s);
  EXPECT_EQ(c.data.col(1).sum(), 0.0);
}

TEST(CountVectorize, EntriesMatchTokenCounts) {
  std::mt19937_64 gen(2);
  std::vector<TokenStream> s(12);
  for (auto& t : s) {
    for (std::size_t k = gen() % 10; k > 0; --k) t.tokens.push_back(std::string(1, "abcdef"[gen() % 6]));
  }
  const CountMatrix c = count_vectorize(s);
  EXPECT_TRUE(std::is_sorted(c.vocab.begin(), c.vocab.end()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (const auto& tok : c.vocab) {
      const auto n = std::count(s[i].tokens.begin(), s[i].tokens.end(), tok);
      EXPECT_EQ(c.data(static_cast<Eigen::Index>(c.rows.at(tok)), static_cast<Eigen::Index>(i)),
                static_cast<double>(n));
    }
  }
  for (Eigen::Index r = 0; r < c.data.rows(); ++r) EXPECT_GT(c.data.row(r).sum(), 0.0);
}

TEST(TrainAutoencoder, AllEmptyCorpusIsAnError) {
  const std::vector<TokenStream> s = {{}, {}};
  const CountMatrix c = count_vectorize(s);
  EXPECT_EQ(c.tokens(), 0u);
  EXPECT_THROW(train_autoencoder(c, 2, {}, 1), DataError);
}

TEST(TrainAutoencoder, GradientMatchesCentralDifferences) {
  std::mt19937_64 gen(8);
  // m = 4 features, n = 3 samples, d_c = 2.
  const Eigen::MatrixXd x = testing_util::random_matrix(gen, 4, 3, 0.0, 3.0);
  LinearAutoencoder model = init_autoencoder(4, 2, 21);
  model.encoder_bias.setRandom();
  model.decoder_bias.setRandom();
  LinearAutoencoder grad = reconstruction_gradient(model, x);
  const auto p = parameters(model);
  const auto g = parameters(grad);
  const double h = 1e-6;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double saved = *p[i];
    *p[i] = saved + h;
    const double up = reconstruction_loss(model, x);
    *p[i] = saved - h;
    const double down = reconstruction_loss(model, x);
    *p[i] = saved;
    const double numeric = (up - down) / (2 * h);
    const double rel = std::abs(numeric - *g[i]) / std::max({std::abs(numeric), std::abs(*g[i]), 1e-8});
    EXPECT_LT(rel, 1e-4) << "parameter " << i << " analytic " << *g[i] << " numeric " << numeric;
  }
}

TEST(TrainAutoencoder, ZeroEpochsKeepsInitialization) {
  std::mt19937_64 gen(4);
  const CountMatrix c = from_matrix(testing_util::random_matrix(gen, 6, 10, 0.0, 2.0));
  SgdConfig opt;
  opt.max_epochs = 0;
  AutoencoderTrace trace;
  const LinearAutoencoder trained = train_autoencoder(c, 3, opt, 9, &trace);
  const LinearAutoencoder init = init_autoencoder(6, 3, 9);
  EXPECT_EQ(trained.encoder_weights, init.encoder_weights);
  EXPECT_EQ(trained.decoder_weights, init.decoder_weights);
  EXPECT_EQ(trained.encoder_bias, init.encoder_bias);
  EXPECT_EQ(trained.decoder_bias, init.decoder_bias);
  EXPECT_EQ(trace.final_loss, trace.initial_loss);
  EXPECT_DOUBLE_EQ(trace.initial_loss, reconstruction_loss(init, c.data));
}

TEST(TrainAutoencoder, InitializationRange) {
  const LinearAutoencoder m = init_autoencoder(16, 4, 3);
  EXPECT_LE(m.encoder_weights.cwiseAbs().maxCoeff(), 0.25);
  EXPECT_LE(m.decoder_weights.cwiseAbs().maxCoeff(), 0.25);
  EXPECT_EQ(m.encoder_weights.rows(), 4);
  EXPECT_EQ(m.decoder_weights.rows(), 16);
}

TEST(TrainAutoencoder, DeterministicGivenSeed) {
  std::mt19937_64 gen(6);
  const CountMatrix c = from_matrix(testing_util::random_matrix(gen, 8, 70, 0.0, 2.0));
  SgdConfig opt;
  opt.max_epochs = 20;
  const auto a = train_autoencoder(c, 3, opt, 5);
  const auto b = train_autoencoder(c, 3, opt, 5);
  EXPECT_EQ(a.encoder_weights, b.encoder_weights);
  EXPECT_EQ(a.decoder_weights, b.decoder_weights);
  EXPECT_EQ(a.encoder_bias, b.encoder_bias);
  EXPECT_EQ(a.decoder_bias, b.decoder_bias);
}

TEST(TrainAutoencoder, LossNeverIncreasesAcrossSeeds) {
  std::mt19937_64 gen(10);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CountMatrix c = from_matrix(testing_util::random_matrix(gen, 12, 90, 0.0, 4.0));
    SgdConfig opt;
    opt.max_epochs = 60;
    opt.learning_rate = 0.5;  // large enough to trigger the halving rule
    AutoencoderTrace trace;
    train_autoencoder(c, 4, opt, seed, &trace);
    EXPECT_LE(trace.final_loss, trace.initial_loss);
    double prev = trace.initial_loss;
    for (double l : trace.epoch_losses) {
      EXPECT_LE(l, prev);
      prev = l;
    }
  }
}

TEST(TrainAutoencoder, ExactCapacityReachesZeroLoss) {
  const CountMatrix c = from_matrix(Eigen::MatrixXd::Identity(2, 2));
  SgdConfig opt;
  opt.learning_rate = 0.5;
  opt.max_epochs = 5000;
  opt.min_relative_improvement = 0.0;
  AutoencoderTrace trace;
  train_autoencoder(c, 2, opt, 3, &trace);
  EXPECT_LT(trace.final_loss, 1e-6);
}

TEST(EncodeChars, ZeroWeightsGiveBias) {
  LinearAutoencoder m = init_autoencoder(3, 2, 1);
  m.encoder_weights.setZero();
  m.encoder_bias << 0.5, -2.0;
  std::mt19937_64 gen(1);
  const FeatureMatrix out = encode_chars(m, from_matrix(testing_util::random_matrix(gen, 3, 4)));
  for (Eigen::Index j = 0; j < 4; ++j) EXPECT_EQ(out.data.col(j), m.encoder_bias);
  EXPECT_EQ(out.level, Level::kChar);
}

TEST(EncodeChars, IdentityWeightsReturnCounts) {
  LinearAutoencoder m = init_autoencoder(3, 3, 1);
  m.encoder_weights.setIdentity();
  m.encoder_bias.setZero();
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd x = testing_util::random_matrix(gen, 3, 5, 0.0, 5.0);
  EXPECT_EQ(encode_chars(m, from_matrix(x)).data, x);
}

TEST(EncodeChars, MatchesNaiveMatmul) {
  std::mt19937_64 gen(3);
  const Eigen::MatrixXd x = testing_util::random_matrix(gen, 5, 3, 0.0, 4.0);
  const LinearAutoencoder m = init_autoencoder(5, 2, 77);
  const FeatureMatrix out = encode_chars(m, from_matrix(x));
  const Eigen::MatrixXd wx = oracle::matmul(m.encoder_weights, x);
  for (Eigen::Index j = 0; j < 3; ++j) {
    for (Eigen::Index i = 0; i < 2; ++i) EXPECT_NEAR(out.data(i, j), wx(i, j) + m.encoder_bias(i), 1e-12);
  }
}

TEST(EncodeChars, LinearAfterRemovingBias) {
  std::mt19937_64 gen(4);
  const LinearAutoencoder m = init_autoencoder(6, 3, 5);
  const Eigen::MatrixXd x = testing_util::random_matrix(gen, 6, 1);
  const Eigen::MatrixXd y = testing_util::random_matrix(gen, 6, 1);
  const double a = 1.7;
  const double b = -0.4;
  const auto enc0 = [&](const Eigen::MatrixXd& v) {
    return Eigen::MatrixXd(encode_chars(m, from_matrix(v)).data.colwise() - m.encoder_bias);
  };
  EXPECT_TRUE(enc0(a * x + b * y).isApprox(a * enc0(x) + b * enc0(y), 1e-12));
}

TEST(EncodeChars, DimensionMismatchNamesBothSizes) {
  const LinearAutoencoder m = init_autoencoder(4, 2, 1);
  try {
    encode_chars(m, from_matrix(Eigen::MatrixXd::Ones(3, 2)));
    FAIL();
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find('4'), std::string::npos) << what;
    EXPECT_NE(what.find('3'), std::string::npos) << what;
  }
}
