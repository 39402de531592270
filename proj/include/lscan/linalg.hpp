#pragma once

#include <Eigen/Dense>
#include <complex>

#include "lscan/errors.hpp"

namespace lscan {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Full SVD is used below this dimension, QR + inverse iteration above.
inline constexpr Eigen::Index kIterativeSvdDim = 512;

struct SvdMin {
  double sigma = 0.0;
  Vec v;
};

struct EigenSystem {
  Vec values;  // nondecreasing
  Mat vectors;
};

struct CEigenSystem {
  Vec values;
  CMat vectors;
};

void require_finite(const Mat& a, const char* what);

// Smallest of the min(rows, cols) singular values and its right vector.
SvdMin svd_min(const Mat& a);
SvdMin svd_min_full(const Mat& a);
// Throws ConvergenceFailure if the iteration stalls; svd_min falls back to svd_min_full.
SvdMin svd_min_iterative(const Mat& a, int max_iter = 5000, double tol = 1e-14);

Vec singular_values(const Mat& a);  // nonincreasing

EigenSystem hermitian_eig(const Mat& a, double assert_hermitian_tol = 1e-12);
CEigenSystem hermitian_eig(const CMat& a, double assert_hermitian_tol = 1e-12);

CVec general_eig(const Mat& a);

Mat solve_spd(const Mat& g, const Mat& x);

double cond2(const Mat& a);

double max_norm(const Mat& a);

}  // namespace lscan
