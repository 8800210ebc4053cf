#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "chrs/moments.hpp"
#include "chrs/report.hpp"
#include "chrs/types.hpp"

namespace chrs {

/// Seed of the padded construction: k = (a, b) induces X^a Z^b on the first
/// s qubits of an m-qubit register. Key length n = 2s.
struct PauliKey {
  int m = 0;
  int s = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;

  PauliKey(int m_, int s_, std::uint64_t a_, std::uint64_t b_);
  int n() const { return 2 * s; }
};

/// Pad width used when the caller asks for paper defaults: max(1, floor(0.45 m)).
int paper_default_pad_width(int m);

/// Dense 2^m unitary X^a Z^b (x) I.
Mat qotp_unitary(const PauliKey& key);
/// Statevector action of the pad, in place; never materializes the matrix.
void qotp_apply(Vec& v, const PauliKey& key, bool dagger = false);

/// Closed form of the full Pauli twirl on s qubits: tr(rho)/2^s * I.
DensityMatrix pauli_twirl(const DensityMatrix& rho);
/// Brute-force variant summing all 4^s Pauli conjugations, for cross-checks.
Mat pauli_twirl_brute(const Mat& rho);

/// Key-averaged pad channel on the first s qubits of rho's register:
/// E_k U_k rho U_k^dag = I/2^s (x) tr_{first s}(rho). Linear in rho, so it
/// also applies to multi-copy operators with the pad on copy 1.
Mat pad_twirl(const Mat& rho, int s);
DensityMatrix pad_twirl_channel(const DensityMatrix& rho, int s);

/// E_k E_psi (U_k psi U_k^dag) (x) psi^{tensor r-1} for the padded family.
DensityMatrix prs_ensemble_state(const EnsembleSpec& spec);
/// I/2^m (x) E_psi psi^{tensor r-1}.
DensityMatrix ideal_ensemble_state(int m, int r);
/// Trace distance between the two, with the bound selected by s vs m/2.
GapReport prs_gap(const EnsembleSpec& spec);

/// Finite unitary family given as explicit matrices (desk scale).
using UnitaryFamily = std::vector<Mat>;
UnitaryFamily qotp_family(int m, int s);
UnitaryFamily identity_family(int m);

/// Gap of an arbitrary family on m qubits against the ideal ensemble,
/// computed exactly by averaging conjugations over the family.
double family_gap(int m, int r, const UnitaryFamily& family);

/// One step of the stretching inequality: family on m-1 qubits, lifted to act
/// on the last m-1 of m. LHS and the 5x-plus-additive RHS are both computed;
/// pass means LHS <= RHS.
GapReport stretch_check(int m, int r, const UnitaryFamily& family, Mode mode = Mode::Exact,
                        long samples = 0, std::uint64_t seed = 0);

/// Monte Carlo moment of psi' = (|0>psi_1 + |1>psi_2)/sqrt(2) against the
/// exact Haar moment.
std::pair<DensityMatrix, GapReport> half_split_moment(int m, int r, long samples,
                                                      std::uint64_t seed);

/// MC estimate of E || psi - F(psi) || where F renormalizes both first-qubit
/// branch coefficients to 1/sqrt(2).
GapReport split_deviation(int m, long samples, std::uint64_t seed);

struct BlockNormCheck {
  double eps = 0.0;
  std::array<double, 4> block_norms{};  // <a|_1 A |a>_1 for a in {0, 1, +, +i}
  double full_norm = 0.0;
  bool holds_hypothesis = false;
  bool holds_conclusion = false;
};

/// Evaluates the four single-qubit compressions of A and the 10x norm bound.
BlockNormCheck block_norm_check(const HermitianOp& a, double eps);

}  // namespace chrs
