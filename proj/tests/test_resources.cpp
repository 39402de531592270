#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lscan/config.hpp"
#include "lscan/qsim.hpp"
#include "lscan/resources.hpp"

using namespace lscan;

namespace {

constexpr double e = std::numbers::e;

ResourceInputs natural() {
  ResourceInputs in;
  in.log_base = e;
  return in;
}

int nonzeros_per_line(const Mat& m) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, (m.row(i).array() != 0.0).count());
  for (Eigen::Index j = 0; j < m.cols(); ++j) best = std::max(best, (m.col(j).array() != 0.0).count());
  return static_cast<int>(best);
}

}  // namespace

TEST_CASE("input validation") {
  ResourceInputs in;
  CHECK_NOTHROW(validate(in));
  in.N = 1;
  CHECK_THROWS_AS(validate(in), ValidationError);
  in = {};
  in.epsilon = 1.0;
  CHECK_THROWS_AS(validate(in), ValidationError);
  in = {};
  in.iota = 0.5;
  CHECK_THROWS_AS(validate(in), ValidationError);
  in = {};
  in.omega_fail = 0.0;
  CHECK_THROWS_AS(validate(in), ValidationError);
  in = {};
  in.kappa = 0.5;
  CHECK_THROWS_AS(evaluate(in), ValidationError);
}

TEST_CASE("classical inverse cost") {
  auto in = natural();
  in.N = 10;
  in.kappa = e;
  in.epsilon = 1 / e;
  CHECK(classical_inverse_cost(in) == doctest::Approx(std::pow(10.0, 2.371) + 100 * std::sqrt(e)).epsilon(1e-14));

  auto first = [](ResourceInputs r) {
    return classical_inverse_cost(r) - r.N * r.N * std::sqrt(r.kappa) * std::log(1 / r.epsilon);
  };
  auto in2 = in;
  in2.N = 20;
  CHECK(first(in2) / first(in) == doctest::Approx(std::pow(2.0, 2.371)).epsilon(1e-12));

  in.N = 35;
  in.kappa = 1.21e16;
  CHECK(first(in) / std::pow(35.0, 2.371) == doctest::Approx(37.03).epsilon(1e-3));
}

TEST_CASE("classical scan cost") {
  auto in = natural();
  in.N = 7;
  in.epsilon = 1 / e;
  CHECK(classical_scan_cost(in) == doctest::Approx(7.0 + 49.0).epsilon(1e-15));
  auto in2 = in;
  in2.K = 2;
  CHECK(classical_scan_cost(in2) - in.N == doctest::Approx(2 * (classical_scan_cost(in) - in.N)));

  // logarithmic sparsity of the residue
  ResourceInputs s;
  s.N = 1024;
  s.K = 1000;
  s.d = std::ceil(std::log2(s.N));
  CHECK(classical_scan_cost(s) == doctest::Approx(100 * 1024 + 1000 * 1024.0 * 1024 * std::log2(1000.0)));
}

TEST_CASE("quantum scan cost") {
  ResourceInputs in;
  in.N = 1024;
  in.K = 1024;
  in.epsilon = 1e-3;
  in.d = 10;
  const auto q = quantum_scan_cost(in);
  CHECK(std::isfinite(q.table1));
  CHECK(q.table1 == doctest::Approx(32.0 * 32768.0 * 10 * 10 / std::sqrt(1e-3)).epsilon(1e-14));
  const double l = std::log2(1024 / 1e-3);
  CHECK(q.table2 == doctest::Approx(std::sqrt(1024.0 * 1024 / 1e-3) * l * l).epsilon(1e-14));

  auto in4 = in;
  in4.K = 4 * in.K;
  const auto q4 = quantum_scan_cost(in4);
  CHECK(q4.table1 == doctest::Approx(2 * q.table1));
  CHECK(q4.table2 == doctest::Approx(2 * q.table2));
}

TEST_CASE("block-encoding constants") {
  CHECK(zeta_sparse(1, 1) == 1.0);
  CHECK(zeta_sparse(3, 0.5) == 1.5);
  const auto z = zeta_total({{1, 1}, {2, 3}});
  CHECK(z.total == 7.0);
  CHECK(z.bound == 12.0);
  CHECK_THROWS_AS(zeta_sparse(0, 1), ValidationError);

  // J = 1 collocation: dense M0 and B share a sparsity, so the summed constant bounds every residue
  const auto sys = system_for(RunConfig{});
  const Mat m0 = sys.M0(), m1 = sys.M1();
  const double alpha_max = 55.0;
  const auto zt = zeta_total({{1.0, zeta_sparse(nonzeros_per_line(m0), max_norm(m0))},
                              {alpha_max, zeta_sparse(nonzeros_per_line(m1), max_norm(m1))}});
  CHECK(zt.total <= zt.bound);
  for (double a : {0.0, 1.0, 19.0, 40.0, 55.0}) {
    const Mat r = m0 - a * m1;
    CHECK(zeta_sparse(nonzeros_per_line(r), max_norm(r)) <= zt.total);
  }
}

TEST_CASE("appendix totals") {
  auto in = natural();
  in.N = e * e;
  in.K = e * e;
  in.omega_fail = 1 / e;
  in.epsilon = 1 / e;
  const auto a = appendixA_total(in);
  CHECK(a.total == doctest::Approx((4 * e + 2) * e * e).epsilon(1e-14));

  in.epsilon = 1e-3;
  const auto a1 = appendixA_total(in);
  in.iota /= 2;
  const auto a2 = appendixA_total(in);
  const double ie = 0.25 * 1e-3;
  CHECK(a2.total_iota / a1.total_iota == doctest::Approx(2 * std::log(2 / ie) / std::log(1 / ie)).epsilon(1e-12));
  CHECK(a2.total == a1.total);
}

TEST_CASE("appendix estimate bounds a simulated collection") {
  const auto ext = extend_square({{0, Mat(Vec::LinSpaced(8, 0, 70).asDiagonal())}, {1, -Mat::Identity(8, 8)}},
                                 {0, 10, 20, 35, 45, 55, 65, 75});
  QuantumScanConfig cfg;
  cfg.lambda0 = 0.0;
  cfg.epsilon = 0.5;
  cfg.b = 12;
  cfg.c = 1;
  cfg.p_fail = 0.0;
  cfg.seed = 7;
  const auto t = tabulate(ext, cfg);
  const auto got = collect_all(t, cfg, 3);
  double iterates = 0.0;
  for (long r = 0; r < got.sample_count; ++r) iterates += draw_round(t, cfg, static_cast<std::uint64_t>(r)).xi + 1;
  ResourceInputs in;
  in.N = 8;
  in.K = 8;
  in.epsilon = cfg.epsilon * t.map.c / (2 * std::numbers::pi);
  CHECK(appendixA_total(in).total > iterates);
}

TEST_CASE("monotonicity sweep") {
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> u(0, 1);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    ResourceInputs in;
    in.N = std::pow(2.0, 1 + 20 * u(g));
    in.K = std::pow(2.0, 16 * u(g));
    in.epsilon = std::pow(10.0, -8 * u(g) - 0.01);
    in.d = 1 + std::floor(30 * u(g));
    in.kappa = std::pow(10.0, 18 * u(g));
    in.M_max = std::pow(10.0, 4 * u(g) - 2);
    in.J = 1 + std::floor(4 * u(g));
    in.iota = 0.01 + 0.48 * u(g);
    in.omega_fail = 0.01 + 0.48 * u(g);
    const auto base = evaluate(in);
    auto costs = [](const CostReport& r) {
      return std::vector<double>{r.classical_inverse, r.classical_scan, r.quantum_scan,       r.quantum_scan_gaussian,
                                 r.zeta_total,        r.zeta_bound,     r.appendixA_total,  r.appendixA_total_iota};
    };
    const auto b = costs(base);
    auto check = [&](ResourceInputs up, int sign) {
      const auto c = costs(evaluate(up));
      for (std::size_t i = 0; i < c.size(); ++i)
        if (sign * (c[i] - b[i]) < -1e-12 * std::abs(b[i])) ++violations;
    };
    auto bump = in;
    bump.N *= 1.5;
    check(bump, +1);
    bump = in;
    bump.K *= 1.5;
    check(bump, +1);
    bump = in;
    bump.d += 1;
    check(bump, +1);
    bump = in;
    bump.M_max *= 1.5;
    check(bump, +1);
    bump = in;
    bump.kappa *= 1.5;
    check(bump, +1);
    bump = in;
    bump.epsilon = std::min(0.99, bump.epsilon * 1.5);
    check(bump, -1);
    bump = in;
    bump.iota = std::min(0.499, bump.iota * 1.05);
    check(bump, -1);
    bump = in;
    bump.omega_fail = std::min(0.499, bump.omega_fail * 1.05);
    check(bump, -1);
  }
  CHECK(violations == 0);
}

TEST_CASE("crossover N") {
  ResourceInputs in;
  in.K = 1024;
  in.epsilon = 1e-3;
  in.d = 10;
  const double n = crossover_N(in);
  auto gap = [&](double x) {
    ResourceInputs r = in;
    r.N = x;
    return quantum_scan_cost(r).table1 - classical_scan_cost(r);
  };
  CHECK(gap(n * (1 + 1e-9)) < 0);
  CHECK(gap(n * (1 - 1e-6)) >= 0);
  for (double x : {2 * n, 10 * n, 1e6 * n}) CHECK(gap(x) < 0);

  auto big_k = in;
  big_k.K = 1 << 20;
  CHECK(crossover_N(big_k) < n);
}

TEST_CASE("evaluate fills every field") {
  ResourceInputs in;
  in.N = 64;
  in.K = 128;
  in.J = 2;
  in.d = 3;
  in.M_max = 2;
  const auto r = evaluate(in);
  CHECK(r.zeta_total == doctest::Approx(3 * 6.0));
  CHECK(r.zeta_bound == doctest::Approx(3 * 6.0));
  CHECK(r.classical_scan == doctest::Approx(classical_scan_cost(in)));
  CHECK(r.quantum_scan == doctest::Approx(quantum_scan_cost(in).table1));
  CHECK(r.appendixA_total_iota > r.appendixA_total);
}
