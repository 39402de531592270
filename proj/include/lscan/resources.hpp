#pragma once

#include <utility>
#include <vector>

namespace lscan {

// Leading-term scaling estimates with unit constants; not gate counts.
struct ResourceInputs {
  double N = 2, K = 1;
  double epsilon = 1e-3;
  double d = 1;
  double kappa = 1;
  double M_max = 1;
  double J = 1;
  double iota = 0.25;
  double omega_fail = 0.25;
  double log_base = 2.0;
};

void validate(const ResourceInputs& in);

struct CostReport {
  double classical_inverse;
  double classical_scan;
  double quantum_scan;           // Table I form
  double quantum_scan_gaussian;  // Table II form
  double zeta_total;
  double zeta_bound;
  double appendixA_total;
  double appendixA_total_iota;
};

double classical_inverse_cost(const ResourceInputs& in);
double classical_scan_cost(const ResourceInputs& in);

struct QuantumCost {
  double table1;
  double table2;
};
QuantumCost quantum_scan_cost(const ResourceInputs& in);

double zeta_sparse(double d, double max_norm);

struct ZetaTotal {
  double total;
  double bound;  // (number of terms) * max term
};
ZetaTotal zeta_total(const std::vector<std::pair<double, double>>& terms);

struct AppendixA {
  double total;
  double total_iota;
};
AppendixA appendixA_total(const ResourceInputs& in);

// Terms default to the J = 1 collocation estimate with unit norms when empty.
CostReport evaluate(const ResourceInputs& in, const std::vector<std::pair<double, double>>& zeta_terms = {});

// Smallest N (bisection on the closed forms) beyond which the Table I quantum
// cost stays below the classical scan cost; N of the inputs is ignored.
double crossover_N(const ResourceInputs& in, double n_lo = 2.0, double n_hi = 1e40);

}  // namespace lscan
