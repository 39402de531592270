#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lscan/linalg.hpp"

namespace lscan {

inline constexpr Eigen::Index kMaxDenseDim = 4096;

enum class ExtMode { square_hermitian, augmented_rectangular };

struct Term {
  int power;
  Mat M;
};

// Block-diagonal sum_j D^j(alpha) (x) M_j, stored per term, never densified implicitly.
struct ExtendedMatrix {
  std::vector<Term> terms;
  std::vector<double> alphas;
  ExtMode mode = ExtMode::square_hermitian;
  Eigen::Index rows = 0, cols = 0;  // shape of every M_j

  int K() const { return static_cast<int>(alphas.size()); }
  Mat series(int i) const;  // A_i = sum_j alpha_i^j M_j
  Mat block(int i) const;   // A_i, or its Hermitian dilation in augmented mode
  Eigen::Index block_dim() const { return mode == ExtMode::square_hermitian ? rows : rows + cols; }
  Eigen::Index dimension() const { return block_dim() * K(); }
  Mat dense() const;
};

ExtendedMatrix extend_square(std::vector<Term> terms, std::vector<double> alphas);
ExtendedMatrix extend_rect(std::vector<Term> terms, std::vector<double> alphas);

// Sorted union of the block spectra.
Vec spectrum(const ExtendedMatrix& ext);

struct Rescale {
  double c = 1.0, d = 0.0;
  double phase(double lambda) const;         // in [0, 1)
  double unphase(double phase_fraction) const;
};

// c * lambda + d maps [lmin, lmax] onto [iota*eps, 2pi - iota*eps].
Rescale rescale_bounds(double lmin, double lmax, double iota, double eps);
Rescale rescale_spectrum(const ExtendedMatrix& ext, double iota, double eps);

enum class QpeModel { ideal_rounding, sinc_kernel };
enum class Amplification { exact_rotation, omit_initial_angle };

std::string to_string(QpeModel m);
std::string to_string(Amplification a);

struct QuantumScanConfig {
  double lambda0 = 0.0;
  double epsilon = 0.1;
  int b = 8;
  int c = 3;
  QpeModel qpe_model = QpeModel::ideal_rounding;
  double p_fail = 0.25;
  long max_grover = -1;  // negative: floor((pi/4) sqrt(KN))
  std::uint64_t seed = 0;
  double iota = 0.25;
  Amplification amplification = Amplification::exact_rotation;
};

void validate(const QuantumScanConfig& cfg);

using Rng = std::mt19937_64;
// Independent stream per (seed, round), so parallel rounds are schedule-independent.
Rng round_rng(std::uint64_t seed, std::uint64_t round);

std::vector<double> qpe_distribution(double phi, int b);
long qpe_draw(double phi, const QuantumScanConfig& cfg, Rng& rng);
long qpe_median_sample(double phi, const QuantumScanConfig& cfg, Rng& rng);

bool region_oracle(double lambda_tilde, double lambda0, double eps);

double grover_success_prob(double r, long N, long K, double m);
double grover_success_approx(double r, double m);
double grover_rotation_prob(long xi, double marked_fraction);
// Exact integral over r in [0,1] of the per-round success probability.
double mean_success_prob(long NK, double m, Amplification amp, long max_grover = -1);
double approx_mean_success(double m);
double approx_lower_bound();  // value at m = 6

struct EigenEntry {
  int alpha_index;
  double lambda;
  double weight;
};

// Eigen-data reachable from the initial state, with weights summing to the state count.
struct SpectralTable {
  std::vector<EigenEntry> entries;
  std::vector<double> alphas;
  long n_states = 0;  // N * K
  long block_states = 0;
  Rescale map;
};

SpectralTable tabulate(const ExtendedMatrix& ext, const QuantumScanConfig& cfg);
double marked_weight(const SpectralTable& t, const QuantumScanConfig& cfg);
long default_max_grover(long n_states);

struct Sample {
  int alpha_index;
  double alpha;
  double lambda_tilde;
  int chi;
  long xi;
};

struct ScanOutcome {
  std::vector<Sample> samples;
  double marked_size = 0.0;
  bool empty_window = false;
  long n_states = 0;
  long max_grover = 0;
  double success_rate() const;
};

Sample draw_round(const SpectralTable& t, const QuantumScanConfig& cfg, std::uint64_t round);

ScanOutcome run_scan(const SpectralTable& t, const QuantumScanConfig& cfg, long rounds, int workers = 0,
                     std::uint64_t first_round = 0);
ScanOutcome run_scan_serial(const SpectralTable& t, const QuantumScanConfig& cfg, long rounds,
                            std::uint64_t first_round = 0);
ScanOutcome run_scan(const ExtendedMatrix& ext, const QuantumScanConfig& cfg, long rounds, int workers = 0);

struct CollectResult {
  std::vector<int> found;  // alpha indices in discovery order
  long sample_count = 0;
};

std::vector<int> marked_alphas(const SpectralTable& t, const QuantumScanConfig& cfg);
CollectResult collect_all(const SpectralTable& t, const QuantumScanConfig& cfg, int L_known,
                          std::uint64_t first_round = 0);
long collect_budget(int L);

}  // namespace lscan
