#include "lscan/resources.hpp"

#include <algorithm>
#include <cmath>

#include "lscan/errors.hpp"

namespace lscan {

namespace {

double lg(double x, const ResourceInputs& in) { return std::log(x) / std::log(in.log_base); }

}  // namespace

void validate(const ResourceInputs& in) {
  if (!(in.N >= 2)) throw ValidationError("resources: N must be at least 2");
  if (!(in.K >= 1)) throw ValidationError("resources: K must be at least 1");
  if (!(in.epsilon > 0 && in.epsilon < 1)) throw ValidationError("resources: epsilon must lie in (0, 1)");
  if (!(in.d >= 1)) throw ValidationError("resources: d must be at least 1");
  if (!(in.kappa >= 1)) throw ValidationError("resources: kappa must be at least 1");
  if (!(in.M_max > 0)) throw ValidationError("resources: M_max must be positive");
  if (!(in.J >= 1)) throw ValidationError("resources: J must be at least 1");
  if (!(in.iota > 0 && in.iota < 0.5)) throw ValidationError("resources: iota must lie in (0, 1/2)");
  if (!(in.omega_fail > 0 && in.omega_fail < 0.5)) throw ValidationError("resources: omega must lie in (0, 1/2)");
  if (!(in.log_base > 1)) throw ValidationError("resources: log base must exceed 1");
}

double classical_inverse_cost(const ResourceInputs& in) {
  return std::pow(in.N, 2.371) * lg(in.kappa, in) + in.N * in.N * std::sqrt(in.kappa) * lg(1.0 / in.epsilon, in);
}

double classical_scan_cost(const ResourceInputs& in) {
  return in.d * in.d * in.N + in.K * in.N * in.N * lg(1.0 / in.epsilon, in);
}

QuantumCost quantum_scan_cost(const ResourceInputs& in) {
  const double t1 = in.M_max * std::sqrt(in.K) * std::pow(in.N, 1.5) * in.d * lg(in.N, in) / std::sqrt(in.epsilon);
  const double pl = lg(in.N / in.epsilon, in);
  const double t2 = in.M_max * std::sqrt(in.K * in.N / in.epsilon) * pl * pl;
  return {t1, t2};
}

double zeta_sparse(double d, double max_norm) {
  if (!(d > 0) || !(max_norm >= 0)) throw ValidationError("zeta: invalid sparsity or norm");
  return d * max_norm;
}

ZetaTotal zeta_total(const std::vector<std::pair<double, double>>& terms) {
  double total = 0.0, mx = 0.0;
  for (const auto& [zd, zm] : terms) {
    total += zd * zm;
    mx = std::max(mx, zd * zm);
  }
  return {total, static_cast<double>(terms.size()) * mx};
}

AppendixA appendixA_total(const ResourceInputs& in) {
  // (sqrt(K) log(KN)/log N + log(1/w)) log N, with the log N factor distributed
  const double head = (std::sqrt(in.K) * lg(in.K * in.N, in) + lg(1.0 / in.omega_fail, in) * lg(in.N, in)) *
                      std::sqrt(in.N);
  const double e = in.epsilon;
  const double ie = in.iota * in.epsilon;
  return {head * lg(1.0 / e, in) / e, head * lg(1.0 / ie, in) / ie};
}

CostReport evaluate(const ResourceInputs& in, const std::vector<std::pair<double, double>>& zeta_terms) {
  validate(in);
  const auto q = quantum_scan_cost(in);
  std::vector<std::pair<double, double>> terms = zeta_terms;
  if (terms.empty())
    for (int j = 0; j <= static_cast<int>(in.J); ++j) terms.emplace_back(1.0, zeta_sparse(in.d, in.M_max));
  const auto z = zeta_total(terms);
  const auto a = appendixA_total(in);
  return {classical_inverse_cost(in), classical_scan_cost(in), q.table1, q.table2, z.total, z.bound, a.total,
          a.total_iota};
}

double crossover_N(const ResourceInputs& base, double n_lo, double n_hi) {
  ResourceInputs in = base;
  auto gap = [&](double n) {
    in.N = n;
    return quantum_scan_cost(in).table1 - classical_scan_cost(in);
  };
  validate(in);
  if (gap(n_hi) >= 0) throw NumericalError("crossover: quantum cost never drops below classical in range");
  // Walk down from n_hi to the last sign change, then bisect in log N.
  double hi = n_hi, lo = n_hi;
  while (lo > n_lo && gap(lo) < 0) {
    hi = lo;
    lo = std::max(n_lo, lo / 2.0);
  }
  if (gap(lo) < 0) return lo;
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-12; ++it) {
    const double mid = std::sqrt(lo * hi);
    (gap(mid) < 0 ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace lscan
