#include "chrs/commitment.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "chrs/linalg.hpp"
#include "chrs/prs.hpp"
#include "chrs/random.hpp"

namespace chrs {

void CommitmentParams::validate() const {
  if (lambda < 1) throw ConfigError("commitment needs lambda >= 1");
  if (s < 0 || 2 * s > lambda) throw ConfigError("pad width must satisfy 2s <= lambda");
  if (copies < 1) throw ConfigError("commitment needs copies >= 1");
  if (t < 0) throw ConfigError("copy budget t must be >= 0");
  if (2 * lambda > 2 * caps::operator_qubits()) {
    throw ConfigError("commit states on 2*lambda qubits exceed the state cap of 2^" +
                      std::to_string(2 * caps::operator_qubits()));
  }
}

CommitmentInstance build_commit_states(const CommitmentParams& params, std::uint64_t seed) {
  params.validate();
  const int lambda = params.lambda;
  const int s = params.s;
  const Index dim = Index(1) << lambda;

  StateVector psi = haar_state(dim, seed);

  // |psi_tilde_0> = 2^-s sum_{a,b} |ab||0...0>_R  X^a Z^b |psi>_C. The R
  // basis states are orthogonal, so the normalization constant is 2^-s.
  Vec v0 = Vec::Zero(dim * dim);
  const std::uint64_t pads = 1ull << s;
  const double coeff = 1.0 / static_cast<double>(pads);
  for (std::uint64_t a = 0; a < pads; ++a) {
    for (std::uint64_t b = 0; b < pads; ++b) {
      Vec padded = psi.amplitudes;
      qotp_apply(padded, PauliKey(lambda, s, a, b));
      const Index r_index = static_cast<Index>(((a << s) | b) << (lambda - 2 * s));
      v0.segment(r_index * dim, dim) = coeff * padded;
    }
  }
  StateVector psi_tilde_0(std::move(v0));
  StateVector psi_tilde_1 = max_entangled(dim);

  const std::vector<Index> rc{dim, dim};
  DensityMatrix rho_0(reduced_density(psi_tilde_0.amplitudes, rc, 1));
  DensityMatrix rho_1(reduced_density(psi_tilde_1.amplitudes, rc, 1));

  return CommitmentInstance{params,
                            std::move(psi),
                            std::move(psi_tilde_0),
                            std::move(psi_tilde_1),
                            std::move(rho_0),
                            std::move(rho_1)};
}

GapReport hiding_gap(const CommitmentParams& params, int commit_copies, std::uint64_t seed) {
  params.validate();
  if (commit_copies < 1) throw ConfigError("hiding_gap needs commit_copies >= 1");
  (void)seed;  // the per-copy ensemble average is exact
  // E_psi[rho_0 (x) psi^{(x)t}] is the padded-family ensemble with r = t+1
  // copies, and E_psi[rho_1 (x) psi^{(x)t}] is the ideal one.
  EnsembleSpec spec;
  spec.m = params.lambda;
  spec.n = 2 * params.s;
  spec.r = params.t + 1;
  spec.mode = Mode::Exact;
  GapReport per_copy = prs_gap(spec);

  const double scaled = commit_copies * per_copy.lhs_distance;
  const double scaled_bound = commit_copies * per_copy.bound_value;
  return make_gap_report(scaled, scaled_bound, per_copy.bound_id,
                         per_copy.bound_applicable && scaled_bound <= 2.0, Mode::Exact, 0.0);
}

double multi_swap_accept(const Mat& rho, const Mat& sigma, const std::vector<Index>& part_dims) {
  const Index dim = total_dim(part_dims);
  if (rho.rows() != dim || rho.cols() != dim || sigma.rows() != dim || sigma.cols() != dim) {
    throw ConfigError("multi_swap_accept dimension mismatch with part layout");
  }
  const int c = static_cast<int>(part_dims.size());
  if (c < 1 || c > 20) throw ConfigError("multi_swap_accept supports 1..20 parts");

  double sum = 0.0;
  for (std::uint32_t subset = 0; subset < (1u << c); ++subset) {
    if (subset == 0) {
      sum += (rho.trace() * sigma.trace()).real();
      continue;
    }
    std::vector<bool> keep(c);
    for (int i = 0; i < c; ++i) keep[i] = (subset >> i) & 1u;
    Mat rho_s = partial_trace(rho, part_dims, keep);
    Mat sigma_s = partial_trace(sigma, part_dims, keep);
    sum += (rho_s * sigma_s).trace().real();
  }
  return sum / std::exp2(c);
}

namespace {

// Joint layout for reveal simulations: c sender blocks (R_i, C_i), the work
// register, then c receiver blocks (R'_i, C'_i); each R/C factor is 2^lambda.
std::vector<Index> joint_dims(const CommitmentParams& params, Index w_dim) {
  const Index d = Index(1) << params.lambda;
  std::vector<Index> dims;
  dims.reserve(4 * params.copies + 1);
  for (int i = 0; i < 2 * params.copies; ++i) dims.push_back(d);
  dims.push_back(w_dim);
  for (int i = 0; i < 2 * params.copies; ++i) dims.push_back(d);
  return dims;
}

// v <- (v + SWAP_i v)/2 for the pair (sender block i, receiver block i).
void project_pair_symmetric(Vec& v, const std::vector<Index>& dims, int c, int i) {
  std::vector<int> order(dims.size());
  for (std::size_t j = 0; j < dims.size(); ++j) order[j] = static_cast<int>(j);
  const int w_slot = 2 * c;
  std::swap(order[2 * i], order[w_slot + 1 + 2 * i]);
  std::swap(order[2 * i + 1], order[w_slot + 1 + 2 * i + 1]);
  Vec swapped = permute_subsystems(v, dims, order);
  v = (v + swapped) / 2.0;
}

Vec receiver_copies(const CommitmentInstance& inst, int b) {
  Vec recv = inst.psi_tilde(b).amplitudes;
  for (int i = 1; i < inst.params.copies; ++i) recv = kron(recv, inst.psi_tilde(b).amplitudes);
  return recv;
}

void check_sender_dim(const CommitmentInstance& inst, const Vec& sender, Index w_dim) {
  const Index block = Index(1) << (2 * inst.params.lambda);
  Index expect = w_dim;
  for (int i = 0; i < inst.params.copies; ++i) expect *= block;
  if (sender.size() != expect) throw ConfigError("sender state dimension mismatch");
  const double state_cap = 2.0 * caps::operator_qubits();
  double qubits = std::log2(static_cast<double>(expect)) + 2.0 * inst.params.lambda * inst.params.copies;
  if (qubits > state_cap + 1e-9) {
    throw ConfigError("reveal simulation exceeds the joint state cap of 2^" +
                      std::to_string(2 * caps::operator_qubits()));
  }
}

}  // namespace

double simulate_reveal(const CommitmentInstance& inst, const Vec& sender_state, Index w_dim,
                       int claimed_bit) {
  if (claimed_bit != 0 && claimed_bit != 1) throw ConfigError("claimed bit must be 0 or 1");
  check_sender_dim(inst, sender_state, w_dim);
  const int c = inst.params.copies;

  Vec joint = kron(sender_state, receiver_copies(inst, claimed_bit));
  const std::vector<Index> dims = joint_dims(inst.params, w_dim);
  for (int i = 0; i < c; ++i) project_pair_symmetric(joint, dims, c, i);
  return joint.squaredNorm();
}

CommitterStrategy honest_strategy(const CommitmentInstance& inst, int b) {
  CommitterStrategy s;
  s.state = receiver_copies(inst, b);
  s.w_dim = 1;
  s.b = b;
  return s;
}

CommitterStrategy superposition_strategy(const CommitmentInstance& inst) {
  Vec v = receiver_copies(inst, 0) + receiver_copies(inst, 1);
  CommitterStrategy s;
  s.state = StateVector::normalized(std::move(v)).amplitudes;
  s.w_dim = 1;
  s.b = 0;
  return s;
}

BindingResult binding_sum(const CommitmentInstance& inst, const Vec& commit_state, Index w_dim) {
  BindingResult r;
  r.p0 = simulate_reveal(inst, commit_state, w_dim, 0);
  r.p1 = simulate_reveal(inst, commit_state, w_dim, 1);
  r.slack = r.p0 + r.p1 - 1.0;
  return r;
}

BindingResult binding_sum(const std::string& strategy, const CommitmentParams& params,
                          std::uint64_t seed) {
  CommitmentInstance inst = build_commit_states(params, seed);
  Vec state;
  if (strategy == "honest-flip") {
    state = receiver_copies(inst, 0);
  } else if (strategy == "honest-one") {
    state = receiver_copies(inst, 1);
  } else if (strategy == "superposition") {
    state = superposition_strategy(inst).state;
  } else {
    throw ConfigError("unknown binding strategy '" + strategy +
                      "' (honest-flip, honest-one, superposition)");
  }
  return binding_sum(inst, state, 1);
}

Extractor build_extractor(const CommitmentInstance& inst) {
  const Index dim = inst.rho_0.dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(inst.rho_0.matrix);
  if (es.info() != Eigen::Success) throw NumericError("rho_0 eigendecomposition failed");

  Mat pi0 = Mat::Zero(dim, dim);
  int rank = 0;
  for (Index i = 0; i < dim; ++i) {
    if (es.eigenvalues()(i) > tol::structural) {
      pi0 += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      ++rank;
    }
  }
  Mat pi1 = Mat::Identity(dim, dim) - pi0;
  Mat perp = Mat::Zero(dim, dim);
  return Extractor{HermitianOp(std::move(pi0)), HermitianOp(std::move(pi1)),
                   HermitianOp(std::move(perp)), rank};
}

RealIdealResult real_ideal_gap(const CommitterStrategy& strategy, const CommitmentParams& params,
                               std::uint64_t seed) {
  CommitmentInstance inst = build_commit_states(params, seed);
  Extractor ext = build_extractor(inst);
  const int c = params.copies;
  const int b = strategy.b;
  if (b != 0 && b != 1) throw ConfigError("strategy bit must be 0 or 1");
  check_sender_dim(inst, strategy.state, strategy.w_dim);

  Vec sender = strategy.state;
  if (strategy.reveal_map) strategy.reveal_map(sender);

  const std::vector<Index> dims = joint_dims(params, strategy.w_dim);
  const std::size_t w_slot = static_cast<std::size_t>(2 * c);
  Vec joint = kron(sender, receiver_copies(inst, b));

  auto verify_accept = [&](Vec v) {
    for (int i = 0; i < c; ++i) project_pair_symmetric(v, dims, c, i);
    return v;
  };
  auto w_density = [&](const Vec& v) { return reduced_density(v, dims, w_slot); };

  // Real: verify, then split on the outcome.
  Vec real_accept = verify_accept(joint);
  Mat tau_real_b = w_density(real_accept);
  Mat tau_real_rej = w_density(Vec(joint - real_accept));

  // Ideal: extractor branches over per-copy outcomes on the C_i registers
  // (the per-copy remainder projector is zero, so outcomes are binary),
  // majority vote, then verification on the post-measurement branch.
  const Index w = strategy.w_dim;
  Mat tau_ideal_b = Mat::Zero(w, w);
  Mat tau_ideal_rej = Mat::Zero(w, w);
  double fail_mass = 0.0;

  for (std::uint32_t outcome = 0; outcome < (1u << c); ++outcome) {
    Vec branch = joint;
    int zeros = 0;
    for (int i = 0; i < c; ++i) {
      const bool one = (outcome >> i) & 1u;
      if (!one) ++zeros;
      const Mat& proj = one ? ext.pi_1.matrix : ext.pi_0.matrix;
      branch = apply_to_subsystem(branch, dims, static_cast<std::size_t>(2 * i + 1), proj);
    }
    if (branch.squaredNorm() < 1e-14) continue;

    int extracted;  // 0, 1, or -1 for the undecided outcome
    if (3 * zeros > 2 * c) {
      extracted = 0;
    } else if (3 * (c - zeros) > 2 * c) {
      extracted = 1;
    } else {
      extracted = -1;
    }

    Vec accepted = verify_accept(branch);
    if (extracted == b) {
      tau_ideal_b += w_density(accepted);
    } else {
      fail_mass += accepted.squaredNorm();
    }
    tau_ideal_rej += w_density(Vec(branch - accepted));
  }

  RealIdealResult out;
  out.fail_prob = fail_mass;
  out.gap = trace_distance(tau_real_b, tau_ideal_b) + trace_distance(tau_real_rej, tau_ideal_rej) +
            fail_mass;
  return out;
}

}  // namespace chrs
