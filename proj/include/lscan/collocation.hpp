#pragma once

#include <string>
#include <vector>

#include "lscan/linalg.hpp"

namespace lscan {

struct BasisSpec {
  std::vector<double> centers;
  double width = 1.0;
  std::size_t size() const { return centers.size(); }
  double norm() const;  // (pi w^2)^(-1/4)
};

struct SpatialGrid {
  std::vector<double> points;
  std::size_t size() const { return points.size(); }
};

enum class PotentialKind { harmonic, morse, tabulated };

class Potential {
 public:
  static Potential harmonic();
  static Potential morse(double de, double a);
  static Potential tabulated(std::vector<double> q, std::vector<double> v);
  static Potential load_csv(const std::string& path);

  PotentialKind kind() const { return kind_; }
  double de() const { return de_; }
  double a() const { return a_; }
  const std::vector<double>& q() const { return q_; }
  const std::vector<double>& v() const { return v_; }
  double shift() const { return shift_; }
  Potential shifted(double c) const;

  double operator()(double x) const;
  bool covers(double lo, double hi) const;

 private:
  PotentialKind kind_ = PotentialKind::harmonic;
  double de_ = 0.0, a_ = 0.0, shift_ = 0.0;
  std::vector<double> q_, v_;
};

// Centers equidistant over [lo, hi], w = width_factor * spacing.
BasisSpec make_gaussian_basis(int n, double lo, double hi, double width_factor);
// Same centers, absolute width.
BasisSpec make_gaussian_basis_fixed(int n, double lo, double hi, double width);
double center_spacing(int n, double lo, double hi);

SpatialGrid make_grid(int m, double lo, double hi);

double gaussian(const BasisSpec& b, std::size_t n, double x);
double gaussian_kinetic(const BasisSpec& b, std::size_t n, double x);  // -phi''

Mat build_B(const BasisSpec& basis, const SpatialGrid& grid);
Mat build_Bpp(const BasisSpec& basis, const SpatialGrid& grid);
Mat build_Vdiag(const Potential& pot, const SpatialGrid& grid);

struct CollocationSystem {
  BasisSpec basis;
  SpatialGrid grid;
  Potential potential;
  Mat B, Bpp;
  Vec vdiag;

  Mat Vdiag() const { return vdiag.asDiagonal(); }
  Mat M0() const { return Bpp + vdiag.asDiagonal() * B; }
  const Mat& M1() const { return B; }
};

CollocationSystem assemble(const BasisSpec& basis, const SpatialGrid& grid, const Potential& pot);

}  // namespace lscan
