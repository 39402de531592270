#pragma once

#include "lscan/qsim.hpp"

namespace lscan {

inline constexpr int kMaxStatevectorQubits = 24;

int statevector_qubits(long n_block, long K, int b, int c);

// Literal finder circuit on a full statevector: entangled preparation, c QPE rounds,
// median, region oracle. Square Hermitian families with power-of-two N and K only.
class FinderCircuit {
 public:
  FinderCircuit(const ExtendedMatrix& ext, const QuantumScanConfig& cfg);

  int qubits() const { return total_; }
  long dim() const { return 1L << total_; }
  const SpectralTable& table() const { return table_; }

  void apply_F(CVec& psi) const;
  void apply_Fdag(CVec& psi) const;
  void apply_D(CVec& psi) const;  // F (2|0><0| - I) F^dagger
  void apply_R(CVec& psi) const;  // Z on the characteristic qubit
  CVec initial() const;           // F|0>
  double chi_probability(const CVec& psi) const;

  int alpha_of(long index) const;
  long median_of(long index) const;
  int chi_of(long index) const;

 private:
  void apply_register(CVec& psi, int offset, int width, const CMat& u, int control) const;
  void apply_permutation(CVec& psi, bool median) const;
  void qpe(CVec& psi, int round, bool inverse) const;

  QuantumScanConfig cfg_;
  SpectralTable table_;
  int n_ = 0, k_ = 0, total_ = 0;
  int clock0_ = 0, median0_ = 0, chi_ = 0;
  std::vector<CMat> powers_;      // U^(2^q), q = 0..b-1, on the (system, alpha) register
  CMat walsh_low_, walsh_clock_, iqft_, qft_;
};

ScanOutcome statevector_oracle(const ExtendedMatrix& ext, const QuantumScanConfig& cfg, long shots);

}  // namespace lscan
