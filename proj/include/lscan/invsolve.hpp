#pragma once

#include <string>
#include <vector>

#include "lscan/collocation.hpp"

namespace lscan {

inline constexpr double kIllConditioned = 1e14;

enum class SolveStatus { ok, ill_conditioned, failed };
std::string to_string(SolveStatus s);

struct InverseSolveReport {
  std::vector<double> energies;  // real-flagged eigenvalues, ascending
  int complex_count = 0;
  double kappa = 0.0;
  SolveStatus status = SolveStatus::ok;
};

bool is_real_eigenvalue(std::complex<double> z);

InverseSolveReport solve_by_inverse(const CollocationSystem& sys);
InverseSolveReport solve_by_inverse(const Mat& B, const Mat& Bpp, const Vec& vdiag);

struct LevelError {
  double computed;
  double exact;
  double error;
};

// Pairs each computed energy with its nearest exact level.
std::vector<LevelError> accuracy_table(const InverseSolveReport& report, std::vector<double> exact);

}  // namespace lscan
