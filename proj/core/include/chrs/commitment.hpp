#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chrs/report.hpp"
#include "chrs/types.hpp"

namespace chrs {

/// lambda: state size in qubits; s: pad width; copies: parallel repetitions
/// of the base commitment; t: adversary's copy budget for hiding experiments.
struct CommitmentParams {
  int lambda = 0;
  int s = 0;
  int copies = 1;
  int t = 0;

  void validate() const;
};

/// The two commit states for one sampled common state psi, on registers
/// (R, C) with R first, plus their C-marginals. rho_1 is exactly I/2^lambda.
struct CommitmentInstance {
  CommitmentParams params;
  StateVector psi;
  StateVector psi_tilde_0;
  StateVector psi_tilde_1;
  DensityMatrix rho_0;
  DensityMatrix rho_1;

  const StateVector& psi_tilde(int b) const { return b == 0 ? psi_tilde_0 : psi_tilde_1; }
  const DensityMatrix& rho(int b) const { return b == 0 ? rho_0 : rho_1; }
};

CommitmentInstance build_commit_states(const CommitmentParams& params, std::uint64_t seed);

/// Exact trace distance of E_psi[rho_0 (x) psi^{(x)t}] vs the same with rho_1,
/// scaled by commit_copies via subadditivity, against the padded-family bound.
/// The ensemble average is exact; the seed is unused in this mode.
GapReport hiding_gap(const CommitmentParams& params, int commit_copies, std::uint64_t seed = 0);

/// Closed-form probability that c pairwise swap tests between the parts of
/// rho and sigma all accept: 2^-c sum_{S subset [c]} tr(rho_S sigma_S).
/// Handles sub-normalized rho.
double multi_swap_accept(const Mat& rho, const Mat& sigma, const std::vector<Index>& part_dims);

/// A committer strategy: a pure state on c blocks (R_i, C_i) followed by a
/// work register of dimension w_dim, the claimed bit, and an optional reveal
/// map applied to the full sender state before verification.
struct CommitterStrategy {
  Vec state;
  Index w_dim = 1;
  int b = 0;
  std::function<void(Vec&)> reveal_map;  // optional
};

CommitterStrategy honest_strategy(const CommitmentInstance& inst, int b);
CommitterStrategy superposition_strategy(const CommitmentInstance& inst);

/// Exact acceptance probability of the reveal phase: the receiver prepares
/// fresh psi_tilde_b copies and projects every pair onto its symmetric
/// subspace (all swap tests accept).
double simulate_reveal(const CommitmentInstance& inst, const Vec& sender_state, Index w_dim,
                       int claimed_bit);

struct BindingResult {
  double p0 = 0.0;
  double p1 = 0.0;
  double slack = 0.0;  // p0 + p1 - 1
};

/// Reveal probabilities for both bits from one shared commit-phase state.
/// strategy is one of honest-flip, honest-one, superposition.
BindingResult binding_sum(const std::string& strategy, const CommitmentParams& params,
                          std::uint64_t seed);
BindingResult binding_sum(const CommitmentInstance& inst, const Vec& commit_state, Index w_dim);

/// Per-copy extractor measurement: Pi_0 projects onto the support of rho_0,
/// Pi_1 onto its orthogonal complement, Pi_perp is the remainder (zero here
/// since rho_1 is maximally mixed). Aggregation is by 2/3 majority.
struct Extractor {
  HermitianOp pi_0;
  HermitianOp pi_1;
  HermitianOp pi_perp;
  int rank_0 = 0;
};

Extractor build_extractor(const CommitmentInstance& inst);

struct RealIdealResult {
  double gap = 0.0;        // trace distance of the (outcome, residual) states
  double fail_prob = 0.0;  // Ideal-experiment fail mass
};

/// Runs the Real and Ideal experiments exactly via sequential projective
/// updates on the purified joint state and compares their outputs.
RealIdealResult real_ideal_gap(const CommitterStrategy& strategy, const CommitmentParams& params,
                               std::uint64_t seed);

}  // namespace chrs
