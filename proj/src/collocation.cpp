#include "lscan/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lscan {

double BasisSpec::norm() const { return std::pow(std::numbers::pi * width * width, -0.25); }

Potential Potential::harmonic() { return Potential{}; }

Potential Potential::morse(double de, double a) {
  if (!(de > 0.0) || !(a > 0.0)) throw ValidationError("morse: D_e and a must be positive");
  Potential p;
  p.kind_ = PotentialKind::morse;
  p.de_ = de;
  p.a_ = a;
  return p;
}

Potential Potential::tabulated(std::vector<double> q, std::vector<double> v) {
  if (q.size() != v.size() || q.size() < 2) throw ValidationError("tabulated potential: need at least two (q, V) pairs");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!std::isfinite(q[i]) || !std::isfinite(v[i])) throw ValidationError("tabulated potential: non-finite sample");
    if (i && !(q[i] > q[i - 1])) throw ValidationError("tabulated potential: q must be strictly increasing");
  }
  Potential p;
  p.kind_ = PotentialKind::tabulated;
  p.q_ = std::move(q);
  p.v_ = std::move(v);
  return p;
}

Potential Potential::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open potential file: " + path);
  std::vector<double> q, v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (!(ss >> a >> b)) {
      if (q.empty()) continue;  // header
      throw ValidationError("malformed potential row: " + line);
    }
    q.push_back(a);
    v.push_back(b);
  }
  return tabulated(std::move(q), std::move(v));
}

Potential Potential::shifted(double c) const {
  Potential p = *this;
  p.shift_ += c;
  return p;
}

bool Potential::covers(double lo, double hi) const {
  if (kind_ != PotentialKind::tabulated) return true;
  return q_.front() <= lo && hi <= q_.back();
}

double Potential::operator()(double x) const {
  switch (kind_) {
    case PotentialKind::harmonic:
      return x * x + shift_;
    case PotentialKind::morse: {
      const double t = 1.0 - std::exp(-a_ * x);
      return de_ * t * t + shift_;
    }
    case PotentialKind::tabulated: {
      if (x < q_.front() || x > q_.back()) throw OutOfDomain("tabulated potential does not cover q = " + std::to_string(x));
      auto it = std::upper_bound(q_.begin(), q_.end(), x);
      if (it == q_.end()) return v_.back() + shift_;
      const std::size_t i = static_cast<std::size_t>(it - q_.begin());
      const double t = (x - q_[i - 1]) / (q_[i] - q_[i - 1]);
      return (1.0 - t) * v_[i - 1] + t * v_[i] + shift_;
    }
  }
  return 0.0;
}

double center_spacing(int n, double lo, double hi) {
  if (n < 1) throw InvalidSpan("basis needs at least one function");
  if (!(lo < hi)) throw InvalidSpan("basis span must satisfy lo < hi");
  return n == 1 ? hi - lo : (hi - lo) / (n - 1);
}

BasisSpec make_gaussian_basis_fixed(int n, double lo, double hi, double width) {
  center_spacing(n, lo, hi);
  if (!(width > 0.0) || !std::isfinite(width)) throw InvalidSpan("basis width must be positive");
  BasisSpec b;
  b.width = width;
  b.centers.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    b.centers[0] = 0.5 * (lo + hi);
  } else {
    for (int i = 0; i < n; ++i) b.centers[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    b.centers.back() = hi;
  }
  return b;
}

BasisSpec make_gaussian_basis(int n, double lo, double hi, double width_factor) {
  if (!(width_factor > 0.0)) throw InvalidSpan("width_factor must be positive");
  return make_gaussian_basis_fixed(n, lo, hi, width_factor * center_spacing(n, lo, hi));
}

SpatialGrid make_grid(int m, double lo, double hi) {
  if (m < 1) throw InvalidSpan("grid needs at least one point");
  if (!(lo < hi)) throw InvalidSpan("grid span must satisfy lo < hi");
  SpatialGrid g;
  g.points.resize(static_cast<std::size_t>(m));
  if (m == 1) {
    g.points[0] = 0.5 * (lo + hi);
  } else {
    for (int k = 0; k < m; ++k) g.points[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (m - 1);
    g.points.back() = hi;
  }
  return g;
}

double gaussian(const BasisSpec& b, std::size_t n, double x) {
  const double d = x - b.centers[n];
  return b.norm() * std::exp(-d * d / (2.0 * b.width * b.width));
}

double gaussian_kinetic(const BasisSpec& b, std::size_t n, double x) {
  const double d = x - b.centers[n];
  const double w2 = b.width * b.width;
  return -b.norm() * (d * d / (w2 * w2) - 1.0 / w2) * std::exp(-d * d / (2.0 * w2));
}

Mat build_B(const BasisSpec& basis, const SpatialGrid& grid) {
  Mat b(grid.size(), basis.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t n = 0; n < basis.size(); ++n) b(k, n) = gaussian(basis, n, grid.points[k]);
  return b;
}

Mat build_Bpp(const BasisSpec& basis, const SpatialGrid& grid) {
  Mat b(grid.size(), basis.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t n = 0; n < basis.size(); ++n) b(k, n) = gaussian_kinetic(basis, n, grid.points[k]);
  return b;
}

Mat build_Vdiag(const Potential& pot, const SpatialGrid& grid) {
  if (!pot.covers(grid.points.front(), grid.points.back()))
    throw OutOfDomain("tabulated potential does not cover the grid span");
  Mat v = Mat::Zero(grid.size(), grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) v(k, k) = pot(grid.points[k]);
  return v;
}

CollocationSystem assemble(const BasisSpec& basis, const SpatialGrid& grid, const Potential& pot) {
  CollocationSystem s{basis, grid, pot, build_B(basis, grid), build_Bpp(basis, grid), {}};
  s.vdiag = build_Vdiag(pot, grid).diagonal();
  require_finite(s.B, "B");
  require_finite(s.Bpp, "Bpp");
  if (!s.vdiag.allFinite()) throw NonFinite("potential produced a non-finite value on the grid");
  return s;
}

}  // namespace lscan
