#include "lscan/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace lscan {

void require_finite(const Mat& a, const char* what) {
  if (!a.allFinite()) throw NonFinite(std::string(what) + ": non-finite entry");
}

double max_norm(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

SvdMin svd_min_full(const Mat& a) {
  if (a.size() == 0) throw ValidationError("svd_min: empty matrix");
  require_finite(a, "svd_min");
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Eigen::Index k = std::min(a.rows(), a.cols()) - 1;
  return {svd.singularValues()(k), svd.matrixV().col(k)};
}

SvdMin svd_min_iterative(const Mat& a, int max_iter, double tol) {
  if (a.size() == 0) throw ValidationError("svd_min: empty matrix");
  require_finite(a, "svd_min");
  if (a.rows() < a.cols()) throw ConvergenceFailure("svd_min_iterative: wide matrix");
  const Eigen::Index n = a.cols();
  Eigen::HouseholderQR<Mat> qr(a);
  const Mat r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  const double rmax = r.diagonal().cwiseAbs().maxCoeff();
  if (rmax == 0.0 || r.diagonal().cwiseAbs().minCoeff() <= 1e-300 * rmax)
    throw ConvergenceFailure("svd_min_iterative: singular triangular factor");

  // Inverse iteration on R^T R. Fixed start vector keeps results reproducible.
  Vec x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.01 * static_cast<double>(i % 7);
  x.normalize();
  double sigma = std::numeric_limits<double>::infinity();
  const auto upper = r.triangularView<Eigen::Upper>();
  for (int it = 0; it < max_iter; ++it) {
    Vec y = upper.transpose().solve(x);
    Vec z = upper.solve(y);
    const double nz = z.norm();
    if (!std::isfinite(nz) || nz == 0.0) throw ConvergenceFailure("svd_min_iterative: breakdown");
    x = z / nz;
    const double s = (r * x).norm();
    if (std::abs(s - sigma) <= tol * std::max(s, 1e-300 * rmax) && it > 2) return {s, x};
    sigma = s;
  }
  throw ConvergenceFailure("svd_min_iterative: no convergence");
}

SvdMin svd_min(const Mat& a) {
  if (std::max(a.rows(), a.cols()) < kIterativeSvdDim) return svd_min_full(a);
  try {
    return svd_min_iterative(a);
  } catch (const ConvergenceFailure&) {
    return svd_min_full(a);
  }
}

Vec singular_values(const Mat& a) {
  require_finite(a, "singular_values");
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues();
}

EigenSystem hermitian_eig(const Mat& a, double tol) {
  if (a.rows() != a.cols()) throw ShapeMismatch("hermitian_eig: matrix not square");
  require_finite(a, "hermitian_eig");
  if (max_norm(a - a.transpose()) > tol) throw NotHermitian("hermitian_eig: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("hermitian_eig: no convergence");
  return {es.eigenvalues(), es.eigenvectors()};
}

CEigenSystem hermitian_eig(const CMat& a, double tol) {
  if (a.rows() != a.cols()) throw ShapeMismatch("hermitian_eig: matrix not square");
  if (!a.allFinite()) throw NonFinite("hermitian_eig: non-finite entry");
  const CMat d = a - a.adjoint();
  if (d.size() && d.cwiseAbs().maxCoeff() > tol) throw NotHermitian("hermitian_eig: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("hermitian_eig: no convergence");
  return {es.eigenvalues(), es.eigenvectors()};
}

CVec general_eig(const Mat& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("general_eig: matrix not square");
  require_finite(a, "general_eig");
  Eigen::EigenSolver<Mat> es(a, false);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("general_eig: no convergence");
  return es.eigenvalues();
}

Mat solve_spd(const Mat& g, const Mat& x) {
  if (g.rows() != g.cols() || g.rows() != x.rows()) throw ShapeMismatch("solve_spd: shape mismatch");
  require_finite(g, "solve_spd");
  require_finite(x, "solve_spd");
  if (max_norm(g - g.transpose()) > 1e-12 * max_norm(g))
    throw NotPositiveDefinite("solve_spd: matrix not symmetric");
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("solve_spd: Cholesky factorization failed");
  Mat y = llt.solve(x);
  if (!y.allFinite()) throw NotPositiveDefinite("solve_spd: non-finite solution");
  return y;
}

double cond2(const Mat& a) {
  if (a.size() == 0) throw ValidationError("cond2: empty matrix");
  const Vec s = singular_values(a);
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smax == 0.0 || smin < 1e-300 * smax) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace lscan
