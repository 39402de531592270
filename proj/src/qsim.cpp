#include "lscan/qsim.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <set>

namespace lscan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_terms(const std::vector<Term>& terms, const std::vector<double>& alphas) {
  if (terms.empty()) throw ValidationError("extended matrix: no terms");
  if (alphas.empty()) throw ValidationError("extended matrix: empty alpha grid");
  for (const auto& t : terms) {
    if (t.power < 0) throw ValidationError("extended matrix: negative power");
    if (t.M.rows() != terms[0].M.rows() || t.M.cols() != terms[0].M.cols())
      throw ShapeMismatch("extended matrix: terms differ in shape");
    require_finite(t.M, "extended matrix term");
  }
  for (double a : alphas)
    if (!std::isfinite(a)) throw ValidationError("extended matrix: non-finite alpha");
}

}  // namespace

Mat ExtendedMatrix::series(int i) const {
  Mat a = Mat::Zero(rows, cols);
  const double x = alphas[static_cast<std::size_t>(i)];
  for (const auto& t : terms) a += std::pow(x, t.power) * t.M;
  return a;
}

Mat ExtendedMatrix::block(int i) const {
  if (mode == ExtMode::square_hermitian) return series(i);
  const Mat a = series(i);
  Mat h = Mat::Zero(rows + cols, rows + cols);
  h.topRightCorner(cols, rows) = a.transpose();
  h.bottomLeftCorner(rows, cols) = a;
  return h;
}

Mat ExtendedMatrix::dense() const {
  if (dimension() > kMaxDenseDim) throw TooLarge("extended matrix too large to densify");
  const Eigen::Index n = block_dim();
  Mat m = Mat::Zero(dimension(), dimension());
  for (int i = 0; i < K(); ++i) m.block(i * n, i * n, n, n) = block(i);
  return m;
}

ExtendedMatrix extend_square(std::vector<Term> terms, std::vector<double> alphas) {
  check_terms(terms, alphas);
  for (const auto& t : terms) {
    if (t.M.rows() != t.M.cols()) throw NotHermitian("extend_square: term is not square");
    if (max_norm(t.M - t.M.transpose()) > 1e-12 * std::max(1.0, max_norm(t.M)))
      throw NotHermitian("extend_square: term is not Hermitian");
  }
  ExtendedMatrix e;
  e.rows = terms[0].M.rows();
  e.cols = terms[0].M.cols();
  e.terms = std::move(terms);
  e.alphas = std::move(alphas);
  e.mode = ExtMode::square_hermitian;
  return e;
}

ExtendedMatrix extend_rect(std::vector<Term> terms, std::vector<double> alphas) {
  check_terms(terms, alphas);
  ExtendedMatrix e;
  e.rows = terms[0].M.rows();
  e.cols = terms[0].M.cols();
  e.terms = std::move(terms);
  e.alphas = std::move(alphas);
  e.mode = ExtMode::augmented_rectangular;
  return e;
}

Vec spectrum(const ExtendedMatrix& ext) {
  const Eigen::Index n = ext.block_dim();
  Vec out(ext.dimension());
  for (int i = 0; i < ext.K(); ++i) {
    const Mat b = ext.block(i);
    out.segment(i * n, n) = hermitian_eig(b, 1e-12 * std::max(1.0, max_norm(b))).values;
  }
  std::sort(out.begin(), out.end());
  return out;
}

double Rescale::phase(double lambda) const {
  double f = (c * lambda + d) / kTwoPi;
  f -= std::floor(f);
  return f;
}

double Rescale::unphase(double f) const { return (kTwoPi * f - d) / c; }

Rescale rescale_bounds(double lmin, double lmax, double iota, double eps) {
  if (!(iota > 0.0 && iota < 0.5)) throw ValidationError("rescale: iota must lie in (0, 1/2)");
  if (!(eps > 0.0) || !(iota * eps < std::numbers::pi)) throw ValidationError("rescale: invalid precision");
  if (!(lmax > lmin)) throw DegenerateRange("rescale: spectral width is zero");
  const double lo = iota * eps;
  const double c = (kTwoPi - 2.0 * lo) / (lmax - lmin);
  return {c, lo - c * lmin};
}

Rescale rescale_spectrum(const ExtendedMatrix& ext, double iota, double eps) {
  const Vec s = spectrum(ext);
  return rescale_bounds(s(0), s(s.size() - 1), iota, eps);
}

std::string to_string(QpeModel m) { return m == QpeModel::ideal_rounding ? "ideal_rounding" : "sinc_kernel"; }
std::string to_string(Amplification a) {
  return a == Amplification::exact_rotation ? "exact_rotation" : "omit_initial_angle";
}

void validate(const QuantumScanConfig& cfg) {
  if (!std::isfinite(cfg.lambda0)) throw ValidationError("quantum: lambda0 must be finite");
  if (!(cfg.epsilon > 0.0)) throw ValidationError("quantum: epsilon must be positive");
  if (cfg.b < 1 || cfg.b > 24) throw ValidationError("quantum: b must lie in [1, 24]");
  if (cfg.c < 1 || cfg.c % 2 == 0) throw ValidationError("quantum: c must be odd and positive");
  if (!(cfg.p_fail >= 0.0 && cfg.p_fail <= 1.0)) throw ValidationError("quantum: p_fail must lie in [0, 1]");
  if (!(cfg.iota > 0.0 && cfg.iota < 0.5)) throw ValidationError("quantum: iota must lie in (0, 1/2)");
}

Rng round_rng(std::uint64_t seed, std::uint64_t round) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(round), static_cast<std::uint32_t>(round >> 32)};
  return Rng(seq);
}

std::vector<double> qpe_distribution(double phi, int b) {
  const long p = 1L << b;
  const double pd = static_cast<double>(p);
  std::vector<double> w(static_cast<std::size_t>(p));
  double total = 0.0;
  for (long j = 0; j < p; ++j) {
    const double delta = phi - static_cast<double>(j) / pd;
    const double s = std::sin(std::numbers::pi * delta);
    double v;
    if (std::abs(s) < 1e-13) {
      v = 1.0;
    } else {
      const double q = std::sin(pd * std::numbers::pi * delta) / (pd * s);
      v = q * q;
    }
    w[static_cast<std::size_t>(j)] = v;
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

long qpe_draw(double phi, const QuantumScanConfig& cfg, Rng& rng) {
  const long p = 1L << cfg.b;
  if (cfg.qpe_model == QpeModel::sinc_kernel) {
    const auto w = qpe_distribution(phi, cfg.b);
    std::discrete_distribution<long> dist(w.begin(), w.end());
    return dist(rng);
  }
  const long j0 = static_cast<long>(std::llround(phi * static_cast<double>(p))) % p;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (p > 1 && cfg.p_fail > 0.0 && u(rng) < cfg.p_fail) {
    std::uniform_int_distribution<long> other(1, p - 1);
    return (j0 + other(rng)) % p;
  }
  return j0;
}

long qpe_median_sample(double phi, const QuantumScanConfig& cfg, Rng& rng) {
  std::vector<long> draws(static_cast<std::size_t>(cfg.c));
  for (auto& d : draws) d = qpe_draw(phi, cfg, rng);
  auto mid = draws.begin() + cfg.c / 2;
  std::nth_element(draws.begin(), mid, draws.end());
  return *mid;
}

bool region_oracle(double lambda_tilde, double lambda0, double eps) { return std::abs(lambda_tilde - lambda0) < eps; }

double grover_success_prob(double r, long N, long K, double m) {
  const double nk = static_cast<double>(N) * static_cast<double>(K);
  if (m < 0.0 || m > nk) throw ValidationError("grover_success_prob: need 0 <= m <= NK");
  const double xi = std::floor(r * std::numbers::pi / 4.0 * std::sqrt(nk));
  const double s = std::sin(2.0 * std::asin(std::sqrt(m / nk)) * xi);
  return s * s;
}

double grover_success_approx(double r, double m) {
  const double s = std::sin(std::numbers::pi * r * std::sqrt(m) / 2.0);
  return s * s;
}

double grover_rotation_prob(long xi, double frac) {
  const double s = std::sin((2.0 * static_cast<double>(xi) + 1.0) * std::asin(std::sqrt(frac)));
  return s * s;
}

long default_max_grover(long n_states) {
  return static_cast<long>(std::floor(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(n_states))));
}

double mean_success_prob(long NK, double m, Amplification amp, long max_grover) {
  const double nk = static_cast<double>(NK);
  const double c0 = std::numbers::pi / 4.0 * std::sqrt(nk);
  const long top = default_max_grover(NK);
  const long cap = max_grover < 0 ? top : std::min(max_grover, top);
  const double theta = std::asin(std::sqrt(m / nk));
  double total = 0.0;
  for (long xi = 0; xi <= top; ++xi) {
    const double lo = static_cast<double>(xi) / c0;
    const double hi = std::min(static_cast<double>(xi + 1) / c0, 1.0);
    if (hi <= lo) continue;
    const long x = std::min(xi, cap);
    double p;
    if (amp == Amplification::exact_rotation) {
      p = grover_rotation_prob(x, m / nk);
    } else {
      const double s = std::sin(2.0 * theta * static_cast<double>(x));
      p = s * s;
    }
    total += (hi - lo) * p;
  }
  return total;
}

double approx_mean_success(double m) {
  if (m <= 0.0) return 0.0;
  const double x = std::numbers::pi * std::sqrt(m);
  return 0.5 - std::sin(x) / (2.0 * x);
}

double approx_lower_bound() { return approx_mean_success(6.0); }

SpectralTable tabulate(const ExtendedMatrix& ext, const QuantumScanConfig& cfg) {
  validate(cfg);
  SpectralTable t;
  t.alphas = ext.alphas;
  double lmin = std::numeric_limits<double>::infinity(), lmax = -lmin;
  if (ext.mode == ExtMode::square_hermitian) {
    t.block_states = ext.rows;
    for (int i = 0; i < ext.K(); ++i) {
      const Mat b = ext.block(i);
      const Vec ev = hermitian_eig(b, 1e-12 * std::max(1.0, max_norm(b))).values;
      for (double l : ev) t.entries.push_back({i, l, 1.0});
      lmin = std::min(lmin, ev(0));
      lmax = std::max(lmax, ev(ev.size() - 1));
    }
  } else {
    // Initial state lives on the column side: each right singular vector splits
    // evenly between the +sigma and -sigma dilation eigenvectors.
    t.block_states = ext.cols;
    for (int i = 0; i < ext.K(); ++i) {
      const Vec s = singular_values(ext.series(i));
      for (Eigen::Index k = 0; k < ext.cols; ++k) {
        if (k < s.size()) {
          t.entries.push_back({i, s(k), 0.5});
          t.entries.push_back({i, -s(k), 0.5});
          lmin = std::min(lmin, -s(k));
          lmax = std::max(lmax, s(k));
        } else {
          t.entries.push_back({i, 0.0, 1.0});
        }
      }
    }
  }
  t.n_states = t.block_states * ext.K();
  // One QPE bin of margin at each end of the phase circle.
  const double eps_phase = 2.0 * std::numbers::pi / (cfg.iota * static_cast<double>(1L << cfg.b));
  if (!(lmax > lmin)) {
    lmin -= 1.0;
    lmax += 1.0;
  }
  t.map = rescale_bounds(lmin, lmax, cfg.iota, eps_phase);
  return t;
}

double marked_weight(const SpectralTable& t, const QuantumScanConfig& cfg) {
  double m = 0.0;
  for (const auto& e : t.entries)
    if (region_oracle(e.lambda, cfg.lambda0, cfg.epsilon)) m += e.weight;
  return m;
}

std::vector<int> marked_alphas(const SpectralTable& t, const QuantumScanConfig& cfg) {
  std::set<int> s;
  for (const auto& e : t.entries)
    if (region_oracle(e.lambda, cfg.lambda0, cfg.epsilon)) s.insert(e.alpha_index);
  return {s.begin(), s.end()};
}

double ScanOutcome::success_rate() const {
  if (samples.empty()) return 0.0;
  long n = 0;
  for (const auto& s : samples) n += s.chi;
  return static_cast<double>(n) / static_cast<double>(samples.size());
}

namespace {

struct Pool {
  std::vector<std::size_t> idx;
  std::vector<double> cum;
  bool empty() const { return idx.empty(); }
  std::size_t pick(double u) const {
    const double x = u * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), x);
    if (it == cum.end()) --it;
    return idx[static_cast<std::size_t>(it - cum.begin())];
  }
  void add(std::size_t i, double w) {
    idx.push_back(i);
    cum.push_back((cum.empty() ? 0.0 : cum.back()) + w);
  }
};

struct RoundModel {
  const SpectralTable& t;
  const QuantumScanConfig& cfg;
  Pool marked, unmarked, all;
  double m = 0.0;
  long cap = 0;

  RoundModel(const SpectralTable& table, const QuantumScanConfig& c) : t(table), cfg(c) {
    validate(cfg);
    if (t.entries.empty()) throw ValidationError("run_scan: empty spectral table");
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      const auto& e = t.entries[i];
      all.add(i, e.weight);
      if (region_oracle(e.lambda, cfg.lambda0, cfg.epsilon)) {
        marked.add(i, e.weight);
        m += e.weight;
      } else {
        unmarked.add(i, e.weight);
      }
    }
    cap = default_max_grover(t.n_states);
    if (cfg.max_grover >= 0) cap = std::min(cap, cfg.max_grover);
  }

  Sample draw(std::uint64_t round) const {
    Rng rng = round_rng(cfg.seed, round);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double nk = static_cast<double>(t.n_states);
    const double r = u(rng);
    const long xi = std::min(static_cast<long>(std::floor(r * std::numbers::pi / 4.0 * std::sqrt(nk))), cap);
    std::size_t pick;
    if (marked.empty()) {
      pick = all.pick(u(rng));
    } else {
      double p;
      if (cfg.amplification == Amplification::exact_rotation) {
        p = grover_rotation_prob(xi, m / nk);
      } else {
        const double s = std::sin(2.0 * std::asin(std::sqrt(m / nk)) * static_cast<double>(xi));
        p = s * s;
      }
      const bool hit = u(rng) < p || unmarked.empty();
      pick = hit ? marked.pick(u(rng)) : unmarked.pick(u(rng));
    }
    const auto& e = t.entries[pick];
    const long j = qpe_median_sample(t.map.phase(e.lambda), cfg, rng);
    double f = static_cast<double>(j) / static_cast<double>(1L << cfg.b);
    const double lt = t.map.unphase(f);
    return {e.alpha_index, t.alphas[static_cast<std::size_t>(e.alpha_index)], lt,
            region_oracle(lt, cfg.lambda0, cfg.epsilon) ? 1 : 0, xi};
  }

  ScanOutcome outcome() const {
    ScanOutcome o;
    o.marked_size = m;
    o.empty_window = marked.empty();
    o.n_states = t.n_states;
    o.max_grover = cap;
    return o;
  }
};

}  // namespace

Sample draw_round(const SpectralTable& t, const QuantumScanConfig& cfg, std::uint64_t round) {
  return RoundModel(t, cfg).draw(round);
}

ScanOutcome run_scan_serial(const SpectralTable& t, const QuantumScanConfig& cfg, long rounds,
                            std::uint64_t first_round) {
  RoundModel model(t, cfg);
  ScanOutcome o = model.outcome();
  o.samples.resize(static_cast<std::size_t>(std::max(0L, rounds)));
  for (long i = 0; i < rounds; ++i)
    o.samples[static_cast<std::size_t>(i)] = model.draw(first_round + static_cast<std::uint64_t>(i));
  return o;
}

ScanOutcome run_scan(const SpectralTable& t, const QuantumScanConfig& cfg, long rounds, int workers,
                     std::uint64_t first_round) {
  RoundModel model(t, cfg);
  ScanOutcome o = model.outcome();
  o.samples.resize(static_cast<std::size_t>(std::max(0L, rounds)));
  const int nt = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (long i = 0; i < rounds; ++i)
    o.samples[static_cast<std::size_t>(i)] = model.draw(first_round + static_cast<std::uint64_t>(i));
  return o;
}

ScanOutcome run_scan(const ExtendedMatrix& ext, const QuantumScanConfig& cfg, long rounds, int workers) {
  if (ext.dimension() > kMaxDenseDim) throw TooLarge("run_scan: K*N exceeds the desk-scale limit");
  return run_scan(tabulate(ext, cfg), cfg, rounds, workers);
}

long collect_budget(int L) {
  return static_cast<long>(std::ceil(100.0 * L * (std::log(static_cast<double>(L)) + 1.0)));
}

CollectResult collect_all(const SpectralTable& t, const QuantumScanConfig& cfg, int L_known,
                          std::uint64_t first_round) {
  if (L_known < 1) throw ValidationError("collect_all: L must be positive");
  RoundModel model(t, cfg);
  const auto targets = marked_alphas(t, cfg);
  if (static_cast<int>(targets.size()) < L_known)
    throw ValidationError("collect_all: fewer marked alpha values than L");
  const std::set<int> target_set(targets.begin(), targets.end());
  std::set<int> seen;
  CollectResult res;
  const long budget = collect_budget(L_known);
  while (static_cast<int>(seen.size()) < L_known) {
    if (res.sample_count >= budget) throw BudgetExceeded("collect_all: round budget exhausted");
    const Sample s = model.draw(first_round + static_cast<std::uint64_t>(res.sample_count));
    ++res.sample_count;
    if (s.chi == 1 && target_set.count(s.alpha_index) && seen.insert(s.alpha_index).second)
      res.found.push_back(s.alpha_index);
  }
  return res;
}

}  // namespace lscan
