#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "idlink/error.hpp"
#include "idlink/feature_matrix.hpp"
#include "idlink/fusion.hpp"
#include "idlink/random.hpp"

using namespace idlink;

TEST(FeatureMatrixIo, BinaryRoundTripKeepsManifest) {
  testing_util::TempDir dir;
  std::mt19937_64 gen(1);
  const FeatureMatrix c(testing_util::gaussian_matrix(gen, 3, 7), Level::kChar);
  const FeatureMatrix s(testing_util::gaussian_matrix(gen, 2, 7), Level::kStructure);
  const FeatureMatrix f = fuse({{Level::kChar, c}, {Level::kStructure, s}});
  save_feature_matrix(f, dir / "f.fm");
  const FeatureMatrix back = load_feature_matrix(dir / "f.fm");
  EXPECT_EQ(back.data, f.data);
  EXPECT_EQ(back.level, f.level);
  EXPECT_EQ(back.manifest, f.manifest);
}

TEST(FeatureMatrixIo, RejectsForeignOrTruncatedFiles) {
  testing_util::TempDir dir;
  testing_util::write_file(dir / "bad.fm", "IDLFEAT0........");
  EXPECT_THROW(load_feature_matrix(dir / "bad.fm"), DataError);
  save_feature_matrix(FeatureMatrix(Eigen::MatrixXd::Ones(4, 4), Level::kWord), dir / "ok.fm");
  std::string bytes = testing_util::read_file(dir / "ok.fm");
  bytes.resize(bytes.size() - 8);
  testing_util::write_file(dir / "short.fm", bytes);
  EXPECT_THROW(load_feature_matrix(dir / "short.fm"), DataError);
  EXPECT_THROW(load_feature_matrix(dir / "missing.fm"), DataError);
}

TEST(FeatureMatrixIo, CsvExport) {
  testing_util::TempDir dir;
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3.5, -4;
  export_feature_csv(FeatureMatrix(m, Level::kTopic), dir / "f.csv");
  const std::string text = testing_util::read_file(dir / "f.csv");
  EXPECT_EQ(text.front(), '#');
  EXPECT_NE(text.find("1,2\n"), std::string::npos);
  EXPECT_NE(text.find("3.5,-4\n"), std::string::npos);
}

TEST(Levels, NamesRoundTrip) {
  for (Level l : {Level::kChar, Level::kWord, Level::kTopic, Level::kStructure, Level::kFused, Level::kProjected}) {
    EXPECT_EQ(parse_level(level_name(l)), l);
  }
  EXPECT_FALSE(parse_level("nonsense"));
}

TEST(Random, StreamIsReproducibleAndSeedsDiffer) {
  Rng a(5);
  Rng b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
}

TEST(Random, BelowIsInRangeAndRoughlyUniform) {
  Rng rng(3);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Random, AliasTableFollowsWeights) {
  const std::vector<double> w = {1.0, 0.0, 3.0, 6.0};
  const AliasTable table(w);
  Rng rng(9);
  std::vector<int> hist(4, 0);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) ++hist[table.sample(rng)];
  EXPECT_EQ(hist[1], 0);
  for (std::size_t k : {0u, 2u, 3u}) EXPECT_NEAR(hist[k] / double(draws), w[k] / 10.0, 0.005);
}
