#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lscan/config.hpp"
#include "lscan/qsim.hpp"

using namespace lscan;

namespace {

Mat diag(std::vector<double> v) {
  Vec d = Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
  return d.asDiagonal();
}

// Blocks diag(0, 10, ..., 70) - alpha_i I with alpha = (0, 10, 20, 35, ..., 75): exactly three
// eigenvalues sit at 0, one in each of the first three blocks, the rest are at least 5 away.
ExtendedMatrix toy_8x8() {
  return extend_square({{0, diag({0, 10, 20, 30, 40, 50, 60, 70})}, {1, -Mat::Identity(8, 8)}},
                       {0, 10, 20, 35, 45, 55, 65, 75});
}

QuantumScanConfig exact_cfg(double lambda0, double eps, std::uint64_t seed) {
  QuantumScanConfig c;
  c.lambda0 = lambda0;
  c.epsilon = eps;
  c.b = 12;
  c.c = 1;
  c.p_fail = 0.0;
  c.seed = seed;
  return c;
}

double midpoint_mean(long N, long K, double m, int steps = 200000) {
  double s = 0.0;
  for (int i = 0; i < steps; ++i) s += grover_success_prob((i + 0.5) / steps, N, K, m);
  return s / steps;
}

double binomial_tail(int n, int k, double p) {
  double t = 0.0;
  for (int j = k; j <= n; ++j) t += std::tgamma(n + 1) / (std::tgamma(j + 1) * std::tgamma(n - j + 1)) * std::pow(p, j) *
                                    std::pow(1 - p, n - j);
  return t;
}

}  // namespace

TEST_CASE("extend_square") {
  const Mat m0 = diag({1, 2, 3});
  auto e = extend_square({{0, m0}}, {0.0});
  CHECK(max_norm(e.dense() - m0) == 0.0);
  CHECK(e.dimension() == 3);

  e = extend_square({{0, Mat::Zero(3, 3)}, {1, Mat::Identity(3, 3)}}, {2, 5});
  const Vec s = spectrum(e);
  REQUIRE(s.size() == 6);
  for (int i = 0; i < 3; ++i) {
    CHECK(s(i) == doctest::Approx(2.0));
    CHECK(s(i + 3) == doctest::Approx(5.0));
  }

  Mat ns = Mat::Identity(2, 2);
  ns(0, 1) = 1.0;
  CHECK_THROWS_AS(extend_square({{0, ns}}, {0.0}), NotHermitian);
  CHECK_THROWS_AS(extend_square({{0, Mat::Identity(2, 3)}}, {0.0}), NotHermitian);
  CHECK_THROWS_AS(extend_square({{0, Mat::Identity(2, 2)}, {1, Mat::Identity(3, 3)}}, {0.0}), ShapeMismatch);
  CHECK_THROWS_AS(extend_square({{0, Mat::Identity(2, 2)}}, {}), ValidationError);
}

TEST_CASE("extended collocation blocks have the union of block spectra") {
  RunConfig c;
  c.n_basis = 8;
  const auto sys = system_for(c);
  const Mat m0 = sys.M0(), m1 = sys.M1();
  const Mat a = m0.transpose() * m0, x = m0.transpose() * m1, cc = m1.transpose() * m1;
  std::vector<double> alphas;
  for (int i = 0; i < 8; ++i) alphas.push_back(2.5 * i);
  const auto e = extend_square(
      {{0, 0.5 * (a + a.transpose())}, {1, -(x + x.transpose())}, {2, 0.5 * (cc + cc.transpose())}}, alphas);
  const Vec dense = hermitian_eig(e.dense(), 1e-9).values;
  std::vector<double> blocks;
  for (int i = 0; i < 8; ++i) {
    const Mat b = e.block(i);
    for (double v : hermitian_eig(b, 1e-9).values) blocks.push_back(v);
  }
  std::sort(blocks.begin(), blocks.end());
  const double scale = std::max(1.0, std::abs(dense(dense.size() - 1)));
  for (Eigen::Index i = 0; i < dense.size(); ++i)
    CHECK(std::abs(dense(i) - blocks[static_cast<std::size_t>(i)]) <= 1e-10 * scale);
}

TEST_CASE("extend_rect dilation") {
  auto e = extend_rect({{0, diag({3})}}, {0.0});
  Vec s = spectrum(e);
  CHECK(s(0) == doctest::Approx(-3.0));
  CHECK(s(1) == doctest::Approx(3.0));

  Mat a = Mat::Zero(3, 2);
  a(0, 0) = 1;
  a(1, 1) = 2;
  e = extend_rect({{0, a}}, {0.0});
  s = spectrum(e);
  REQUIRE(s.size() == 5);
  CHECK(s(0) == doctest::Approx(-2.0));
  CHECK(s(1) == doctest::Approx(-1.0));
  CHECK(std::abs(s(2)) < 1e-15);
  CHECK(s(3) == doctest::Approx(1.0));
  CHECK(s(4) == doctest::Approx(2.0));

  RunConfig c;
  c.n_basis = 6;
  c.n_grid = 8;
  const auto sys = system_for(c);
  e = extend_rect({{0, sys.M0()}, {1, -sys.M1()}}, {0.5, 3.0, 7.2, 11.0});
  for (int i = 0; i < 4; ++i) {
    const Vec ev = hermitian_eig(e.block(i), 1e-12).values;
    const Vec sv = singular_values(e.series(i));
    std::vector<double> nonneg(ev.data() + ev.size() - 6, ev.data() + ev.size());
    std::sort(nonneg.begin(), nonneg.end(), std::greater<>());
    for (int k = 0; k < 6; ++k) CHECK(std::abs(nonneg[static_cast<std::size_t>(k)] - sv(k)) <= 1e-10 * sv(0));
    // kernel of dimension rows - cols
    int zeros = 0;
    for (double v : ev) zeros += std::abs(v) <= 1e-10 * sv(0);
    CHECK(zeros == 2);
  }
}

TEST_CASE("dense() refuses oversized families") {
  std::vector<double> alphas(600, 0.0);
  const auto e = extend_square({{0, Mat::Identity(8, 8)}}, alphas);
  CHECK_THROWS_AS(e.dense(), TooLarge);
}

TEST_CASE("spectral rescaling") {
  const auto r = rescale_bounds(0.0, 1.0, 0.25, 0.1);
  CHECK(r.c == doctest::Approx(2 * std::numbers::pi - 0.05));
  CHECK(r.d == doctest::Approx(0.025));
  CHECK(r.c * 0.0 + r.d > 0.0);
  CHECK(r.c * 1.0 + r.d < 2 * std::numbers::pi);
  CHECK(r.unphase(r.phase(0.37)) == doctest::Approx(0.37));
  CHECK_THROWS_AS(rescale_bounds(0.0, 0.0, 0.25, 0.1), DegenerateRange);
  CHECK_THROWS_AS(rescale_spectrum(extend_square({{0, Mat::Zero(1, 1)}}, {0.0}), 0.25, 0.1), DegenerateRange);
  CHECK_THROWS_AS(rescale_bounds(0.0, 1.0, 0.5, 0.1), ValidationError);
}

TEST_CASE("config validation") {
  QuantumScanConfig c;
  CHECK_NOTHROW(validate(c));
  c.c = 2;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c.c = 3;
  c.epsilon = 0;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c.epsilon = 0.1;
  c.b = 0;
  CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("region oracle") {
  CHECK(region_oracle(2.0, 2.0, 0.1));
  CHECK_FALSE(region_oracle(2.1, 2.0, 0.1 - 1e-17));
  CHECK_FALSE(region_oracle(0.5 + 0.25, 0.5, 0.25));
  CHECK(region_oracle(2.0 - 0.0999, 2.0, 0.1));
}

TEST_CASE("phase estimation outcomes") {
  const auto w = qpe_distribution(5.0 / 16.0, 4);
  CHECK(w[5] == doctest::Approx(1.0));
  double sum = 0.0;
  for (double v : qpe_distribution(0.3141, 6)) sum += v;
  CHECK(sum == doctest::Approx(1.0));

  QuantumScanConfig c;
  c.qpe_model = QpeModel::sinc_kernel;
  c.b = 5;
  Rng rng = round_rng(1, 0);
  for (int i = 0; i < 200; ++i) CHECK(qpe_median_sample(11.0 / 32.0, c, rng) == 11);

  c.qpe_model = QpeModel::ideal_rounding;
  c.p_fail = 0.25;
  c.c = 9;
  const int trials = 20000;
  int fails = 0;
  for (int i = 0; i < trials; ++i) {
    Rng r = round_rng(2, static_cast<std::uint64_t>(i));
    fails += qpe_median_sample(11.0 / 32.0, c, r) != 11;
  }
  const double tail = binomial_tail(9, 5, 0.25);
  CHECK(tail == doctest::Approx(0.049).epsilon(0.01));
  CHECK(static_cast<double>(fails) / trials <= tail + 3 * std::sqrt(tail * (1 - tail) / trials));
}

TEST_CASE("round streams are reproducible and distinct") {
  Rng a = round_rng(7, 3), b = round_rng(7, 3), c = round_rng(7, 4), d = round_rng(8, 3);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("amplification probabilities") {
  for (double r : {0.0, 0.3, 0.9}) CHECK(grover_success_prob(r, 32, 32, 0) == 0.0);
  CHECK(grover_success_prob(0.1, 4, 4, 16) == 0.0);  // floor(0.1 * pi) = 0
  CHECK(grover_rotation_prob(0, 3.0 / 64.0) == doctest::Approx(3.0 / 64.0));
  CHECK(grover_rotation_prob(1, 0.25) == doctest::Approx(1.0));
  CHECK_THROWS_AS(grover_success_prob(0.5, 2, 2, 5), ValidationError);

  for (int m = 1; m <= 64; ++m) {
    const double q = mean_success_prob(1024, m, Amplification::omit_initial_angle);
    CHECK(q >= 0.40);
    CHECK(q == doctest::Approx(midpoint_mean(32, 32, m)).epsilon(1e-4));
  }
  CHECK(approx_lower_bound() ==
        doctest::Approx(0.5 - std::sin(std::sqrt(6.0) * std::numbers::pi) / (2 * std::sqrt(6.0) * std::numbers::pi)));
  CHECK(std::abs(approx_lower_bound() - 0.435) < 0.001);

  // approximate formula integrates to the closed form
  for (double m : {1.0, 6.0, 17.0}) {
    double s = 0.0;
    const int steps = 100000;
    for (int i = 0; i < steps; ++i) s += grover_success_approx((i + 0.5) / steps, m);
    CHECK(s / steps == doctest::Approx(approx_mean_success(m)).epsilon(1e-6));
  }
}

TEST_CASE("tabulation weights") {
  const auto t = tabulate(toy_8x8(), exact_cfg(0.0, 0.5, 1));
  CHECK(t.n_states == 64);
  CHECK(t.entries.size() == 64);
  CHECK(marked_weight(t, exact_cfg(0.0, 0.5, 1)) == 3.0);
  CHECK(marked_alphas(t, exact_cfg(0.0, 0.5, 1)) == std::vector<int>{0, 1, 2});

  Mat a = Mat::Zero(3, 2);
  a(0, 0) = 1;
  a(1, 1) = 2;
  const auto r = tabulate(extend_rect({{0, a}}, {0.0, 1.0}), exact_cfg(0.0, 0.5, 1));
  CHECK(r.n_states == 4);
  double w = 0.0;
  for (const auto& e : r.entries) w += e.weight;
  CHECK(w == doctest::Approx(4.0));
}

TEST_CASE("single marked alpha concentrates the hits") {
  const auto e = extend_square({{0, diag({0, 10, 20, 30})}, {1, -Mat::Identity(4, 4)}}, {0, 3, 5, 7, 35, 41, 47, 53});
  const auto cfg = exact_cfg(0.0, 0.5, 11);
  const auto out = run_scan(e, cfg, 4000);
  long hits = 0;
  for (const auto& s : out.samples)
    if (s.chi) {
      ++hits;
      CHECK(s.alpha_index == 0);
    }
  CHECK(hits > 1000);
}

TEST_CASE("empty window gives uniform alpha samples") {
  const auto t = tabulate(toy_8x8(), exact_cfg(1000.0, 0.5, 5));
  const auto out = run_scan(t, exact_cfg(1000.0, 0.5, 5), 10000);
  CHECK(out.empty_window);
  CHECK(out.marked_size == 0.0);
  std::vector<double> counts(8, 0.0);
  for (const auto& s : out.samples) counts[static_cast<std::size_t>(s.alpha_index)] += 1;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - 1250.0) * (c - 1250.0) / 1250.0;
  CHECK(chi2 < 18.475);  // 1% critical value, 7 degrees of freedom
}

TEST_CASE("Monte Carlo success rate matches the quadrature") {
  const auto t = tabulate(toy_8x8(), exact_cfg(0.0, 0.5, 21));
  for (auto amp : {Amplification::omit_initial_angle, Amplification::exact_rotation}) {
    auto cfg = exact_cfg(0.0, 0.5, 21);
    cfg.amplification = amp;
    const auto out = run_scan(t, cfg, 10000);
    CHECK(std::abs(out.success_rate() - mean_success_prob(64, 3, amp)) < 0.05);
  }
}

TEST_CASE("parallel rounds equal serial rounds") {
  const auto t = tabulate(toy_8x8(), exact_cfg(0.0, 0.5, 3));
  auto cfg = exact_cfg(0.0, 0.5, 3);
  cfg.p_fail = 0.25;
  cfg.c = 3;
  const auto a = run_scan(t, cfg, 3000, 4);
  const auto b = run_scan_serial(t, cfg, 3000);
  REQUIRE(a.samples.size() == b.samples.size());
  bool same = true;
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    same = same && a.samples[i].alpha_index == b.samples[i].alpha_index &&
           a.samples[i].lambda_tilde == b.samples[i].lambda_tilde && a.samples[i].chi == b.samples[i].chi &&
           a.samples[i].xi == b.samples[i].xi;
  CHECK(same);
  CHECK(draw_round(t, cfg, 17).lambda_tilde == b.samples[17].lambda_tilde);
}

TEST_CASE("marked alpha values are sampled uniformly") {
  const auto t = tabulate(toy_8x8(), exact_cfg(0.0, 0.5, 9));
  const auto out = run_scan(t, exact_cfg(0.0, 0.5, 9), 25000);
  std::map<int, double> n;
  double total = 0.0;
  for (const auto& s : out.samples)
    if (s.chi) {
      n[s.alpha_index] += 1;
      total += 1;
    }
  REQUIRE(total >= 10000);
  REQUIRE(n.size() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double ratio = n[i] / n[j];
      const double se = ratio * std::sqrt(1.0 / n[i] + 1.0 / n[j]);
      CHECK(std::abs(ratio - 1.0) <= 3 * se);
    }
}

TEST_CASE("samples weight a region by its width on the grid") {
  std::vector<double> alphas;
  for (int i = 0; i <= 70; ++i) alphas.push_back(-2.0 + 0.1 * i);
  const auto e = extend_square({{0, diag({0, 30})}, {1, diag({-1, -10})}}, alphas);
  const auto cfg = exact_cfg(0.0, 0.15, 13);
  const auto out = run_scan(e, cfg, 40000);
  double wide = 0.0, narrow = 0.0;
  for (const auto& s : out.samples) {
    if (!s.chi) continue;
    if (std::abs(s.alpha) < 0.15) wide += 1;
    if (std::abs(s.alpha - 3.0) < 0.05) narrow += 1;
  }
  REQUIRE(narrow > 100);
  const double ratio = wide / narrow;
  CHECK(std::abs(ratio - 3.0) <= 3 * ratio * std::sqrt(1 / wide + 1 / narrow));
}

TEST_CASE("marked sets grow with the window") {
  const auto t = tabulate(toy_8x8(), exact_cfg(3.0, 0.5, 1));
  std::vector<int> prev;
  for (double eps : {0.5, 2.0, 3.5, 7.5, 12.0, 40.0}) {
    const auto cur = marked_alphas(t, exact_cfg(3.0, eps, 1));
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    CHECK(marked_weight(t, exact_cfg(3.0, eps, 1)) >= static_cast<double>(prev.size()));
    prev = cur;
  }
  CHECK(prev.size() == 8);
}

TEST_CASE("collect_all follows the coupon-collector law") {
  // eigenvalue -alpha_i per block; window (-9.5, 0.5) marks alpha = 0..9
  std::vector<double> alphas;
  for (int i = 0; i < 32; ++i) alphas.push_back(i);
  const auto e = extend_square({{0, diag({0, 100, 200, 300})}, {1, -Mat::Identity(4, 4)}}, alphas);
  auto cfg = exact_cfg(-4.5, 5.0, 0);
  const auto t = tabulate(e, cfg);
  REQUIRE(marked_alphas(t, cfg).size() == 10);
  const double pbar = mean_success_prob(t.n_states, 10, cfg.amplification);
  double h = 0.0;
  for (int k = 1; k <= 10; ++k) h += 1.0 / k;

  double mean = 0.0;
  const int trials = 100;
  for (int tr = 0; tr < trials; ++tr) {
    cfg.seed = 1000 + static_cast<std::uint64_t>(tr);
    const auto r = collect_all(t, cfg, 10);
    CHECK(r.found.size() == 10);
    mean += static_cast<double>(r.sample_count) / trials;
  }
  CHECK(std::abs(mean - 10 * h / pbar) <= 0.2 * 10 * h / pbar);

  double one = 0.0;
  for (int tr = 0; tr < 400; ++tr) {
    cfg.seed = 5000 + static_cast<std::uint64_t>(tr);
    one += static_cast<double>(collect_all(t, cfg, 1).sample_count) / 400;
  }
  const double p1 = mean_success_prob(t.n_states, 10, cfg.amplification);
  CHECK(std::abs(one - 1.0 / p1) <= 0.2 / p1);

  CHECK_THROWS_AS(collect_all(t, cfg, 11), ValidationError);
  CHECK(collect_budget(10) == static_cast<long>(std::ceil(1000 * (std::log(10.0) + 1))));
}

TEST_CASE("collect_all reports an exhausted budget") {
  // marked weight 1 of 4096 and no amplification: hits are far rarer than the budget allows
  std::vector<double> alphas;
  for (int i = 0; i < 1024; ++i) alphas.push_back(i);
  const auto e = extend_square({{0, diag({0, 5000, 6000, 7000})}, {1, -Mat::Identity(4, 4)}}, alphas);
  auto cfg = exact_cfg(0.0, 0.5, 2);
  cfg.max_grover = 0;
  const auto t = tabulate(e, cfg);
  CHECK_THROWS_AS(collect_all(t, cfg, 1), BudgetExceeded);
}

TEST_CASE("heavier quasi-degenerate alpha values are found first") {
  // alpha 0 carries three marked eigenvalues, alpha 1 only one
  const auto e = extend_square({{0, diag({0, 0, 0, 50})}, {1, diag({1, 1, 1, -1})}}, {0.0, 50.0, 20.0, 30.0});
  auto cfg = exact_cfg(0.0, 0.5, 0);
  const auto t = tabulate(e, cfg);
  REQUIRE(marked_weight(t, cfg) == 4.0);
  int heavy_first = 0;
  const int trials = 400;
  for (int tr = 0; tr < trials; ++tr) {
    cfg.seed = 77 + static_cast<std::uint64_t>(tr);
    heavy_first += collect_all(t, cfg, 2).found.front() == 0;
  }
  CHECK(static_cast<double>(heavy_first) / trials == doctest::Approx(0.75).epsilon(0.1));
}
