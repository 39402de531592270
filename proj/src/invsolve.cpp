#include "lscan/invsolve.hpp"

#include <algorithm>
#include <cmath>

namespace lscan {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ok:
      return "ok";
    case SolveStatus::ill_conditioned:
      return "ill_conditioned";
    case SolveStatus::failed:
      return "failed";
  }
  return "failed";
}

bool is_real_eigenvalue(std::complex<double> z) { return std::abs(z.imag()) <= 1e-6 * (1.0 + std::abs(z.real())); }

InverseSolveReport solve_by_inverse(const Mat& B, const Mat& Bpp, const Vec& vdiag) {
  if (B.rows() != Bpp.rows() || B.cols() != Bpp.cols() || vdiag.size() != B.rows())
    throw ShapeMismatch("solve_by_inverse: inconsistent matrix shapes");
  if (B.cols() > B.rows()) throw ShapeMismatch("solve_by_inverse: need N <= M");
  InverseSolveReport rep;
  const Mat g = B.transpose() * B;
  const Mat h1 = B.transpose() * Bpp + B.transpose() * vdiag.asDiagonal() * B;
  rep.kappa = cond2(g);
  Mat ht;
  try {
    ht = solve_spd(g, h1);
  } catch (const NotPositiveDefinite&) {
    rep.status = SolveStatus::failed;
    return rep;
  }
  CVec ev;
  try {
    ev = general_eig(ht);
  } catch (const NumericalError&) {
    rep.status = SolveStatus::failed;
    return rep;
  }
  for (const auto& z : ev) {
    if (is_real_eigenvalue(z))
      rep.energies.push_back(z.real());
    else
      ++rep.complex_count;
  }
  std::sort(rep.energies.begin(), rep.energies.end());
  rep.status = rep.kappa > kIllConditioned ? SolveStatus::ill_conditioned : SolveStatus::ok;
  return rep;
}

InverseSolveReport solve_by_inverse(const CollocationSystem& sys) { return solve_by_inverse(sys.B, sys.Bpp, sys.vdiag); }

std::vector<LevelError> accuracy_table(const InverseSolveReport& report, std::vector<double> exact) {
  std::sort(exact.begin(), exact.end());
  std::vector<LevelError> out;
  if (exact.empty()) return out;
  for (double e : report.energies) {
    auto it = std::lower_bound(exact.begin(), exact.end(), e);
    double best = it == exact.end() ? exact.back() : *it;
    if (it != exact.begin() && std::abs(*(it - 1) - e) <= std::abs(best - e)) best = *(it - 1);
    out.push_back({e, best, std::abs(e - best)});
  }
  return out;
}

}  // namespace lscan
