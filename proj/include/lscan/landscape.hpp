#pragma once

#include <vector>

#include "lscan/collocation.hpp"

namespace lscan {

struct ResidueFamily {
  Mat M0, M1;
  double a = 0.0, b = 1.0;
  int K = 2;

  double step() const { return (b - a) / (K - 1); }
  double alpha(int i) const { return i == K - 1 ? b : a + i * step(); }
  std::vector<double> alphas() const;
};

ResidueFamily make_family(const Mat& m0, const Mat& m1, double a, double b, int K);
ResidueFamily make_family(const CollocationSystem& sys, double a, double b, int K);

Mat residue_at(const ResidueFamily& fam, double alpha);

struct Background {
  double slope = 0.0;     // least-squares estimate
  double slope_fd = 0.0;  // forward-difference cross-check
  bool disagree = false;  // estimates differ by more than 20%
  std::vector<double> detrended;
};

Background remove_background(const std::vector<double>& raw, const std::vector<double>& alphas);

struct LandscapeScan {
  std::vector<double> alphas;
  std::vector<double> sigmas;
  std::vector<double> sigmas_detrended;
  double slope = 0.0;
  double slope_fd = 0.0;
  bool slope_warning = false;
};

// workers <= 0 uses the OpenMP default.
LandscapeScan scan(const ResidueFamily& fam, int workers = 0);
LandscapeScan scan_serial(const ResidueFamily& fam);

// Largest |sigma_i - sigma_{i+1}| - |alpha_i - alpha_{i+1}| * sigma_max(M1), positive on violation.
double lipschitz_excess(const LandscapeScan& s, const ResidueFamily& fam);

struct Dip {
  double alpha_star;
  double sigma_value;
  double alpha_lo, alpha_hi;
};

struct DipSet {
  std::vector<Dip> dips;
  double threshold = 0.0;
  std::vector<double> positions() const;
};

DipSet detect_dips(const std::vector<double>& alphas, const std::vector<double>& curve, double eps);
DipSet detect_dips(const LandscapeScan& s, double eps);
// 3 x the lower decile of the detrended curve.
double default_threshold(const LandscapeScan& s);

std::vector<int> density_histogram(const std::vector<double>& values, double a, double b, int bins);

}  // namespace lscan
