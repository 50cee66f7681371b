#include "idlink/rcca.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "binary_io.hpp"
#include "idlink/error.hpp"

namespace idlink {
namespace {

constexpr std::array<char, 8> kMagic = {'I', 'D', 'L', 'C', 'C', 'A', '0', '1'};

// Smallest-to-largest eigenvalue ratio below which a matrix counts as singular.
constexpr double kDefiniteness = 1e-12;
// Components with squared correlation at or below this are numerically zero.
constexpr double kRankFloor = 1e-12;

struct SpdFactors {
  Eigen::MatrixXd inv_sqrt;
  Eigen::MatrixXd inv;
};

SpdFactors spd_factors(const Eigen::MatrixXd& c, const char* name, double reg) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  if (eig.info() != Eigen::Success) {
    throw NumericalError(std::string("rcca: eigendecomposition of regularized ") + name + " failed");
  }
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const double largest = vals.cwiseAbs().maxCoeff();
  if (!(vals.minCoeff() > kDefiniteness * largest)) {
    throw NumericalError(std::string("rcca: regularized ") + name +
                         " is not positive definite (regularization " + std::to_string(reg) +
                         ", smallest eigenvalue " + std::to_string(vals.minCoeff()) +
                         "); increase the regularization");
  }
  const Eigen::MatrixXd& vecs = eig.eigenvectors();
  SpdFactors f;
  f.inv_sqrt = vecs * vals.cwiseSqrt().cwiseInverse().asDiagonal() * vecs.transpose();
  f.inv = vecs * vals.cwiseInverse().asDiagonal() * vecs.transpose();
  return f;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

void write_matrix(std::ostream& out, const Eigen::MatrixXd& a) {
  out.write(reinterpret_cast<const char*>(a.data()),
            static_cast<std::streamsize>(a.size() * sizeof(double)));
}

void read_matrix(std::istream& in, Eigen::MatrixXd& a, const std::string& what) {
  in.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(double)));
  if (!in) throw DataError("truncated " + what);
}

}  // namespace

CovarianceSet covariances(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.cols() != y.cols()) {
    throw DataError("covariances: views have " + std::to_string(x.cols()) + " and " +
                    std::to_string(y.cols()) + " columns");
  }
  if (x.cols() == 0) throw DataError("covariances: no training pairs");
  const double inv_t = 1.0 / static_cast<double>(x.cols());
  CovarianceSet cov;
  cov.xx = symmetrized(inv_t * (x * x.transpose()));
  cov.yy = symmetrized(inv_t * (y * y.transpose()));
  cov.xy = inv_t * (x * y.transpose());
  return cov;
}

CovarianceSet covariances(const FeatureMatrix& x, const FeatureMatrix& y) {
  return covariances(x.data, y.data);
}

CcaModel solve_rcca(const CovarianceSet& cov, std::size_t k, double reg_x, double reg_y,
                    std::vector<std::string>* warnings) {
  const auto dx = static_cast<std::size_t>(cov.xx.rows());
  const auto dy = static_cast<std::size_t>(cov.yy.rows());
  if (k == 0 || k > std::min(dx, dy)) {
    throw ConfigError("rcca: k=" + std::to_string(k) + " must lie in [1, " +
                      std::to_string(std::min(dx, dy)) + "]");
  }
  if (!(reg_x >= 0.0) || !(reg_y >= 0.0)) throw ConfigError("rcca: regularization must be >= 0");

  const Eigen::MatrixXd cxx_hat =
      cov.xx + reg_x * Eigen::MatrixXd::Identity(cov.xx.rows(), cov.xx.cols());
  const Eigen::MatrixXd cyy_hat =
      cov.yy + reg_y * Eigen::MatrixXd::Identity(cov.yy.rows(), cov.yy.cols());
  const SpdFactors fx = spd_factors(cxx_hat, "C_XX", reg_x);
  const SpdFactors fy = spd_factors(cyy_hat, "C_YY", reg_y);

  const Eigen::MatrixXd reduced =
      symmetrized(fx.inv_sqrt * cov.xy * fy.inv * cov.xy.transpose() * fx.inv_sqrt);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
  if (eig.info() != Eigen::Success) throw NumericalError("rcca: reduced eigenproblem failed");

  // Eigenvalues come out ascending; walk them from the top.
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const Eigen::Index top = vals.size() - 1;
  std::size_t usable = 0;
  while (usable < k && vals(top - static_cast<Eigen::Index>(usable)) > kRankFloor) ++usable;
  if (usable == 0) throw NumericalError("rcca: the views have no numerically nonzero correlation");
  if (usable < k && warnings) {
    warnings->push_back("rcca: k=" + std::to_string(k) + " exceeds numerical rank; truncated to " +
                        std::to_string(usable));
  }

  CcaModel model;
  model.reg_x = reg_x;
  model.reg_y = reg_y;
  const auto kk = static_cast<Eigen::Index>(usable);
  model.h.resize(static_cast<Eigen::Index>(dx), kk);
  model.m.resize(static_cast<Eigen::Index>(dy), kk);
  model.correlations.resize(kk);
  for (Eigen::Index i = 0; i < kk; ++i) {
    const double rho = std::sqrt(vals(top - i));
    Eigen::VectorXd h = fx.inv_sqrt * eig.eigenvectors().col(top - i);
    Eigen::VectorXd m = fy.inv * (cov.xy.transpose() * h) / rho;

    const double scale = h.cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < h.size(); ++r) {
      if (std::abs(h(r)) > 1e-12 * scale) {
        if (h(r) < 0) {
          h = -h;
          m = -m;
        }
        break;
      }
    }
    model.h.col(i) = h;
    model.m.col(i) = m;
    model.correlations(i) = rho;
  }
  model.mean_x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dx));
  model.mean_y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dy));
  return model;
}

CcaModel fit_rcca(const FeatureMatrix& x_train, const FeatureMatrix& y_train, std::size_t k,
                  double reg_x, double reg_y, std::vector<std::string>* warnings) {
  if (x_train.users() != y_train.users()) {
    throw DataError("fit_rcca: training views have " + std::to_string(x_train.users()) + " and " +
                    std::to_string(y_train.users()) + " columns");
  }
  if (x_train.users() == 0) throw DataError("fit_rcca: no training pairs");
  const Eigen::VectorXd mean_x = x_train.data.rowwise().mean();
  const Eigen::VectorXd mean_y = y_train.data.rowwise().mean();
  const CovarianceSet cov =
      covariances(x_train.data.colwise() - mean_x, y_train.data.colwise() - mean_y);
  CcaModel model = solve_rcca(cov, k, reg_x, reg_y, warnings);
  model.mean_x = mean_x;
  model.mean_y = mean_y;
  return model;
}

FeatureMatrix project(const CcaModel& model, const FeatureMatrix& features, Side side) {
  const Eigen::MatrixXd& w = side == Side::kX ? model.h : model.m;
  const Eigen::VectorXd& mean = side == Side::kX ? model.mean_x : model.mean_y;
  if (features.data.rows() != w.rows()) {
    throw DataError(std::string("project: ") + (side == Side::kX ? "X" : "Y") + "-side model expects " +
                    std::to_string(w.rows()) + " features, got " +
                    std::to_string(features.data.rows()));
  }
  return FeatureMatrix(w.transpose() * (features.data.colwise() - mean), Level::kProjected);
}

void save_cca_model(const CcaModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  detail::write_pod(out, static_cast<std::uint64_t>(model.h.rows()));
  detail::write_pod(out, static_cast<std::uint64_t>(model.m.rows()));
  detail::write_pod(out, static_cast<std::uint64_t>(model.h.cols()));
  detail::write_pod(out, model.reg_x);
  detail::write_pod(out, model.reg_y);
  write_matrix(out, model.mean_x);
  write_matrix(out, model.mean_y);
  write_matrix(out, model.h);
  write_matrix(out, model.m);
  write_matrix(out, model.correlations);
  if (!out) throw DataError("write failed for " + path.string());
}

CcaModel load_cca_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::string what = "CCA model " + path.string();
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw DataError(what + " has a bad magic header");
  const auto dx = static_cast<Eigen::Index>(detail::read_pod<std::uint64_t>(in, what));
  const auto dy = static_cast<Eigen::Index>(detail::read_pod<std::uint64_t>(in, what));
  const auto k = static_cast<Eigen::Index>(detail::read_pod<std::uint64_t>(in, what));
  if (dx > (1 << 24) || dy > (1 << 24) || k > std::min(dx, dy)) {
    throw DataError(what + " has implausible dimensions");
  }
  CcaModel model;
  model.reg_x = detail::read_pod<double>(in, what);
  model.reg_y = detail::read_pod<double>(in, what);
  Eigen::MatrixXd mx(dx, 1), my(dy, 1), corr(k, 1);
  model.h.resize(dx, k);
  model.m.resize(dy, k);
  read_matrix(in, mx, what);
  read_matrix(in, my, what);
  read_matrix(in, model.h, what);
  read_matrix(in, model.m, what);
  read_matrix(in, corr, what);
  model.mean_x = mx.col(0);
  model.mean_y = my.col(0);
  model.correlations = corr.col(0);
  return model;
}

}  // namespace idlink
