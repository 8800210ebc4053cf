#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "chrs/prs.hpp"
#include "chrs/types.hpp"

namespace chrs {

/// Multi-copy distinguishing attack parameters. The state under test comes in
/// c candidate copies, each paired with a reference copy of the common state;
/// ell swap-test repetitions per key cycle over the c physical pairs.
struct AttackConfig {
  int m = 0;      // qubits per register
  int n = 0;      // key bits of the target family (2^n keys enumerated)
  int c = 1;      // candidate/reference pair count
  int ell = 1;    // logical swap-test repetitions per key
  std::uint64_t order_seed = 0;
  long trials = 0;

  void validate() const;
};

/// Plug-in target: enumerable keys plus the per-key unitary action on a
/// reference register. The in-repo default is the padded 1PRS family.
struct AttackTarget {
  int m = 0;
  int key_count = 0;
  // Applies the key unitary (or its adjoint) to the m qubits starting at
  // `qubit_offset` of an n_qubits register.
  std::function<void(Vec& state, int n_qubits, int qubit_offset, int key, bool dagger)> apply;
};

AttackTarget prs_target(int m, int n);

/// Explicit projector for one key: rotate each active reference block by U_k
/// and project the pair onto its symmetric subspace. Repetitions beyond c
/// collapse (a product of identical commuting projectors), so the active
/// pairs are the first min(ell, c).
HermitianOp attack_projector(const PauliKey& key, const AttackConfig& config);

struct OrTestResult {
  double accept_prob = 0.0;
  DensityMatrix post;  // unconditional post-measurement mixture
};

/// Measures {Pi_k, I - Pi_k} for every key in a uniformly random order,
/// accepting on the first success. Acceptance probability is exact: the
/// reject path is followed with sub-normalized branch states and pruned
/// below 1e-12 branch mass.
OrTestResult sequential_or_test(const DensityMatrix& rho, const AttackConfig& config);

/// Exact acceptance probability of the same test for a pure joint state,
/// without materializing operators.
double sequential_or_accept(const Vec& state, const AttackConfig& config,
                            const AttackTarget& target, const std::vector<int>& key_order,
                            double prune = 1e-12);

struct AttackReport {
  double accept_pseudo = 0.0;
  double accept_pseudo_stderr = 0.0;
  double accept_haar = 0.0;
  double accept_haar_stderr = 0.0;
  double advantage = 0.0;
  double eps_measured = 0.0;   // 1 - tr(Pi_k* rho) for the planted key
  double case1_floor = 0.0;    // (1 - eps)^2 / 7
  double case2_ceiling = 0.0;  // 4 * 2^n * (3/4)^ell
  bool ceiling_applicable = false;
};

/// Runs `trials` independent experiments against the padded 1PRS family:
/// candidate = U_k psi (pseudorandom case) vs candidate = fresh Haar state
/// (random case), with exact per-trial acceptance probabilities.
AttackReport run_attack(const AttackConfig& config, std::uint64_t seed);

struct TailReport {
  double empirical = 0.0;
  double bound = 0.0;
  bool bound_applicable = false;
  double analytic = 0.0;  // exact Beta(1, d-1) tail, (1/2)^(d-1)
};

/// Empirical Pr[|<psi|psi_0>|^2 >= 1/2] for Haar psi vs the 8 exp(-d/600)
/// envelope (flagged when vacuous).
TailReport haar_overlap_tail(Index d, long samples, std::uint64_t seed);

struct LevyProbe {
  double mean_f = 0.0;
  double delta = 0.0;
  double empirical_tail = 0.0;
  double bound = 0.0;
};

/// Concentration of f(psi) = ||<0_1|psi>||^2 around 1/2 at the deviation
/// scale delta = 18 sqrt(m) / 2^(m/2), against the Levy envelope.
LevyProbe levy_concentration_probe(int m, long samples, std::uint64_t seed);

}  // namespace chrs
