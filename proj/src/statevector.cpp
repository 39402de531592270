#include "lscan/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace lscan {

namespace {

int log2_exact(long n, const char* what) {
  int k = 0;
  while ((1L << k) < n) ++k;
  if ((1L << k) != n) throw ValidationError(std::string(what) + " must be a power of two");
  return k;
}

CMat walsh(int width) {
  const long r = 1L << width;
  CMat h(r, r);
  const double s = std::pow(2.0, -0.5 * width);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < r; ++j) h(i, j) = (std::popcount(static_cast<unsigned long>(i & j)) % 2) ? -s : s;
  return h;
}

CMat fourier(int width, double sign) {
  const long r = 1L << width;
  CMat f(r, r);
  const double s = 1.0 / std::sqrt(static_cast<double>(r));
  for (long j = 0; j < r; ++j)
    for (long x = 0; x < r; ++x)
      f(j, x) = std::polar(s, sign * 2.0 * std::numbers::pi * static_cast<double>(j * x) / static_cast<double>(r));
  return f;
}

}  // namespace

int statevector_qubits(long n_block, long K, int b, int c) {
  return 2 * (log2_exact(n_block, "block size") + log2_exact(K, "K")) + b * (c + 1) + 1;
}

FinderCircuit::FinderCircuit(const ExtendedMatrix& ext, const QuantumScanConfig& cfg) : cfg_(cfg) {
  validate(cfg);
  if (ext.mode != ExtMode::square_hermitian) throw ValidationError("statevector oracle: square Hermitian families only");
  n_ = log2_exact(ext.rows, "block size");
  k_ = log2_exact(ext.K(), "K");
  total_ = 2 * (n_ + k_) + cfg.b * (cfg.c + 1) + 1;
  if (total_ > kMaxStatevectorQubits) throw TooLarge("statevector oracle: too many qubits");
  clock0_ = 2 * (n_ + k_);
  median0_ = clock0_ + cfg.b * cfg.c;
  chi_ = median0_ + cfg.b;
  table_ = tabulate(ext, cfg);

  const long nb = ext.rows;
  const long dlow = nb * ext.K();
  std::vector<Mat> vecs;
  std::vector<Vec> vals;
  for (int i = 0; i < ext.K(); ++i) {
    const Mat blk = ext.block(i);
    auto es = hermitian_eig(blk, 1e-12 * std::max(1.0, max_norm(blk)));
    vecs.push_back(es.vectors);
    vals.push_back(es.values);
  }
  for (int q = 0; q < cfg.b; ++q) {
    const double t = std::ldexp(1.0, q);
    CMat u = CMat::Zero(dlow, dlow);
    for (int i = 0; i < ext.K(); ++i) {
      CVec ph(nb);
      for (long j = 0; j < nb; ++j)
        ph(j) = std::polar(1.0, t * (table_.map.c * vals[static_cast<std::size_t>(i)](j) + table_.map.d));
      const CMat v = vecs[static_cast<std::size_t>(i)].cast<std::complex<double>>();
      u.block(i * nb, i * nb, nb, nb) = v * ph.asDiagonal() * v.adjoint();
    }
    powers_.push_back(u);
  }
  walsh_low_ = walsh(n_ + k_);
  walsh_clock_ = walsh(cfg.b);
  iqft_ = fourier(cfg.b, -1.0);
  qft_ = fourier(cfg.b, 1.0);
}

void FinderCircuit::apply_register(CVec& psi, int offset, int width, const CMat& u, int control) const {
  const long r = 1L << width;
  const long mask = (r - 1) << offset;
  CVec g(r);
  for (long idx = 0; idx < dim(); ++idx) {
    if (idx & mask) continue;
    if (control >= 0 && !((idx >> control) & 1L)) continue;
    for (long j = 0; j < r; ++j) g(j) = psi(idx | (j << offset));
    const CVec h = u * g;
    for (long j = 0; j < r; ++j) psi(idx | (j << offset)) = h(j);
  }
}

int FinderCircuit::alpha_of(long index) const { return static_cast<int>((index >> n_) & ((1L << k_) - 1)); }
long FinderCircuit::median_of(long index) const { return (index >> median0_) & ((1L << cfg_.b) - 1); }
int FinderCircuit::chi_of(long index) const { return static_cast<int>((index >> chi_) & 1L); }

void FinderCircuit::apply_permutation(CVec& psi, bool median) const {
  // Both maps XOR a function of untouched bits into a target register, so they are involutions.
  const long bmask = (1L << cfg_.b) - 1;
  CVec out(psi.size());
  std::vector<long> clocks(static_cast<std::size_t>(cfg_.c));
  for (long idx = 0; idx < dim(); ++idx) {
    long target;
    if (median) {
      for (int t = 0; t < cfg_.c; ++t) clocks[static_cast<std::size_t>(t)] = (idx >> (clock0_ + t * cfg_.b)) & bmask;
      std::nth_element(clocks.begin(), clocks.begin() + cfg_.c / 2, clocks.end());
      target = idx ^ (clocks[static_cast<std::size_t>(cfg_.c / 2)] << median0_);
    } else {
      const double f = static_cast<double>(median_of(idx)) / static_cast<double>(1L << cfg_.b);
      const bool hit = region_oracle(table_.map.unphase(f), cfg_.lambda0, cfg_.epsilon);
      target = hit ? idx ^ (1L << chi_) : idx;
    }
    out(target) = psi(idx);
  }
  psi = out;
}

void FinderCircuit::qpe(CVec& psi, int round, bool inverse) const {
  const int off = clock0_ + round * cfg_.b;
  if (!inverse) {
    apply_register(psi, off, cfg_.b, walsh_clock_, -1);
    for (int q = 0; q < cfg_.b; ++q) apply_register(psi, 0, n_ + k_, powers_[static_cast<std::size_t>(q)], off + q);
    apply_register(psi, off, cfg_.b, iqft_, -1);
  } else {
    apply_register(psi, off, cfg_.b, qft_, -1);
    for (int q = cfg_.b - 1; q >= 0; --q)
      apply_register(psi, 0, n_ + k_, powers_[static_cast<std::size_t>(q)].adjoint(), off + q);
    apply_register(psi, off, cfg_.b, walsh_clock_, -1);
  }
}

void FinderCircuit::apply_F(CVec& psi) const {
  apply_register(psi, 0, n_ + k_, walsh_low_, -1);
  const long low = (1L << (n_ + k_)) - 1;
  CVec out(psi.size());
  for (long idx = 0; idx < dim(); ++idx) out(idx ^ ((idx & low) << (n_ + k_))) = psi(idx);
  psi = out;
  for (int t = 0; t < cfg_.c; ++t) qpe(psi, t, false);
  apply_permutation(psi, true);
  apply_permutation(psi, false);
}

void FinderCircuit::apply_Fdag(CVec& psi) const {
  apply_permutation(psi, false);
  apply_permutation(psi, true);
  for (int t = cfg_.c - 1; t >= 0; --t) qpe(psi, t, true);
  const long low = (1L << (n_ + k_)) - 1;
  CVec out(psi.size());
  for (long idx = 0; idx < dim(); ++idx) out(idx ^ ((idx & low) << (n_ + k_))) = psi(idx);
  psi = out;
  apply_register(psi, 0, n_ + k_, walsh_low_, -1);
}

void FinderCircuit::apply_D(CVec& psi) const {
  apply_Fdag(psi);
  const std::complex<double> keep = psi(0);
  psi = -psi;
  psi(0) = keep;
  apply_F(psi);
}

void FinderCircuit::apply_R(CVec& psi) const {
  for (long idx = 0; idx < dim(); ++idx)
    if (chi_of(idx)) psi(idx) = -psi(idx);
}

CVec FinderCircuit::initial() const {
  CVec psi = CVec::Zero(dim());
  psi(0) = 1.0;
  apply_F(psi);
  return psi;
}

double FinderCircuit::chi_probability(const CVec& psi) const {
  double p = 0.0;
  for (long idx = 0; idx < dim(); ++idx)
    if (chi_of(idx)) p += std::norm(psi(idx));
  return p;
}

ScanOutcome statevector_oracle(const ExtendedMatrix& ext, const QuantumScanConfig& cfg, long shots) {
  FinderCircuit circ(ext, cfg);
  const auto& tab = circ.table();
  long cap = default_max_grover(tab.n_states);
  if (cfg.max_grover >= 0) cap = std::min(cap, cfg.max_grover);

  // Outcome distribution over (alpha, median, chi) after xi Grover iterates.
  const long nb = 1L << cfg.b;
  std::vector<std::discrete_distribution<long>> dists;
  CVec psi = circ.initial();
  for (long xi = 0; xi <= cap; ++xi) {
    if (xi > 0) {
      circ.apply_R(psi);
      circ.apply_D(psi);
    }
    std::vector<double> w(static_cast<std::size_t>(ext.K() * nb * 2), 0.0);
    for (long idx = 0; idx < circ.dim(); ++idx) {
      const long key = (circ.alpha_of(idx) * nb + circ.median_of(idx)) * 2 + circ.chi_of(idx);
      w[static_cast<std::size_t>(key)] += std::norm(psi(idx));
    }
    dists.emplace_back(w.begin(), w.end());
  }

  ScanOutcome o;
  o.marked_size = marked_weight(tab, cfg);
  o.empty_window = o.marked_size == 0.0;
  o.n_states = tab.n_states;
  o.max_grover = cap;
  const double c0 = std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(tab.n_states));
  for (long s = 0; s < shots; ++s) {
    Rng rng = round_rng(cfg.seed, static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const long xi = std::min(static_cast<long>(std::floor(u(rng) * c0)), cap);
    auto dist = dists[static_cast<std::size_t>(xi)];
    const long key = dist(rng);
    const int chi = static_cast<int>(key % 2);
    const long j = (key / 2) % nb;
    const int a = static_cast<int>(key / 2 / nb);
    const double lt = tab.map.unphase(static_cast<double>(j) / static_cast<double>(nb));
    o.samples.push_back({a, tab.alphas[static_cast<std::size_t>(a)], lt, chi, xi});
  }
  return o;
}

}  // namespace lscan
