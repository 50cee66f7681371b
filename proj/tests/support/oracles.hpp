#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library and favor obviousness over speed.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

inline Eigen::MatrixXd matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

// (1/T) sum_t x_t y_t' for column-aligned views.
inline Eigen::MatrixXd cross_cov(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const auto t = static_cast<double>(x.cols());
  Eigen::MatrixXd c(x.rows(), y.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      double s = 0.0;
      for (Eigen::Index col = 0; col < x.cols(); ++col) s += x(i, col) * y(j, col);
      c(i, j) = s / t;
    }
  }
  return c;
}

inline double sq_dist(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) s += (a(r, i) - b(r, j)) * (a(r, i) - b(r, j));
  return s;
}

// Full ordering of every target for one query: all pairs, stable sort by
// (distance, index).
inline std::vector<std::pair<std::uint32_t, double>> brute_force_order(const Eigen::MatrixXd& zx,
                                                                       const Eigen::MatrixXd& zy,
                                                                       Eigen::Index query) {
  std::vector<std::pair<std::uint32_t, double>> all;
  for (Eigen::Index j = 0; j < zy.cols(); ++j) {
    all.emplace_back(static_cast<std::uint32_t>(j), sq_dist(zx, query, zy, j));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  return all;
}

// Hand formula for one query: (k - (pos - 1)) / k inside the list, else 0.
inline double hit_score(std::size_t pos, std::size_t k) {
  if (pos == 0 || pos > k) return 0.0;
  return static_cast<double>(k - (pos - 1)) / static_cast<double>(k);
}

}  // namespace oracle
