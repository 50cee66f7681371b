#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "idlink/feature_matrix.hpp"

namespace idlink {

struct CovarianceSet {
  Eigen::MatrixXd xx;  // d_X x d_X
  Eigen::MatrixXd yy;  // d_Y x d_Y
  Eigen::MatrixXd xy;  // d_X x d_Y; C_YX is its transpose
};

// Canonical projection pair. Columns of H and M are ordered by descending
// canonical correlation and satisfy h' (C_XX + r_x I) h = m' (C_YY + r_y I) m = 1.
struct CcaModel {
  Eigen::MatrixXd h;  // d_X x k
  Eigen::MatrixXd m;  // d_Y x k
  Eigen::VectorXd correlations;
  double reg_x = 0.0;
  double reg_y = 0.0;
  Eigen::VectorXd mean_x;
  Eigen::VectorXd mean_y;

  std::size_t components() const { return static_cast<std::size_t>(h.cols()); }
};

enum class Side { kX, kY };

// Sample covariances (divisor T) of already-centered, column-aligned views.
CovarianceSet covariances(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
CovarianceSet covariances(const FeatureMatrix& x, const FeatureMatrix& y);

// Solves the regularized CCA generalized eigenproblem through the symmetric
// reduction C^-1/2_XX C_XY C^-1_YY C_YX C^-1/2_XX. Throws NumericalError when a
// regularized covariance is not positive definite. Components whose
// correlation is numerically zero are dropped and reported in `warnings`.
CcaModel solve_rcca(const CovarianceSet& cov, std::size_t k, double reg_x, double reg_y,
                    std::vector<std::string>* warnings = nullptr);

// Centers both training views by their own column means, then solves.
CcaModel fit_rcca(const FeatureMatrix& x_train, const FeatureMatrix& y_train, std::size_t k,
                  double reg_x, double reg_y, std::vector<std::string>* warnings = nullptr);

// Centers by the stored training means and applies H' (or M'); k x n output.
FeatureMatrix project(const CcaModel& model, const FeatureMatrix& features, Side side);

void save_cca_model(const CcaModel& model, const std::filesystem::path& path);
CcaModel load_cca_model(const std::filesystem::path& path);

}  // namespace idlink
