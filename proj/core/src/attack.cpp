#include "chrs/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chrs/linalg.hpp"
#include "chrs/random.hpp"

namespace chrs {

void AttackConfig::validate() const {
  if (m < 1) throw ConfigError("attack needs m >= 1");
  if (n < 0 || n > 6) throw ConfigError("attack enumerates 2^n keys; n is capped at 6");
  if (n % 2 != 0) throw ConfigError("the padded target needs an even key length");
  if (c < 1) throw ConfigError("attack needs c >= 1");
  if (ell < 1) throw ConfigError("attack needs ell >= 1");
  if (2 * m * c > 2 * caps::operator_qubits()) {
    throw ConfigError("attack joint state on 2*m*c qubits exceeds the state cap of 2^" +
                      std::to_string(2 * caps::operator_qubits()));
  }
}

AttackTarget prs_target(int m, int n) {
  AttackTarget t;
  t.m = m;
  t.key_count = 1 << n;
  const int s = n / 2;
  t.apply = [m, s](Vec& state, int n_qubits, int qubit_offset, int key, bool dagger) {
    const std::uint64_t mask = (s == 0) ? 0 : ((1ull << s) - 1);
    const std::uint64_t a = (static_cast<std::uint64_t>(key) >> s) & mask;
    const std::uint64_t b = static_cast<std::uint64_t>(key) & mask;
    apply_pad(state, n_qubits, qubit_offset, s, a, b, dagger);
    (void)m;
  };
  return t;
}

namespace {

// Joint layout: c pairs of m-qubit blocks, candidate then reference,
// [A_0 R_0 A_1 R_1 ...]; total 2*m*c qubits.
int active_pairs(const AttackConfig& config) { return std::min(config.ell, config.c); }

std::vector<Index> pair_dims(const AttackConfig& config) {
  return std::vector<Index>(static_cast<std::size_t>(2 * config.c), Index(1) << config.m);
}

// v <- Pi_k v for one key: rotate active references by U_k, symmetrize each
// active pair, rotate back.
void apply_key_projector(Vec& v, const AttackConfig& config, const AttackTarget& target, int key) {
  const int total_qubits = 2 * config.m * config.c;
  const int pairs = active_pairs(config);
  const std::vector<Index> dims = pair_dims(config);

  for (int j = 0; j < pairs; ++j) {
    target.apply(v, total_qubits, (2 * j + 1) * config.m, key, false);
  }
  for (int j = 0; j < pairs; ++j) {
    std::vector<int> order(dims.size());
    std::iota(order.begin(), order.end(), 0);
    std::swap(order[2 * j], order[2 * j + 1]);
    Vec swapped = permute_subsystems(v, dims, order);
    v = (v + swapped) / 2.0;
  }
  for (int j = 0; j < pairs; ++j) {
    target.apply(v, total_qubits, (2 * j + 1) * config.m, key, true);
  }
}

std::vector<int> shuffled_keys(int key_count, std::uint64_t seed) {
  std::vector<int> order(key_count);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = key_count - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

}  // namespace

HermitianOp attack_projector(const PauliKey& key, const AttackConfig& config) {
  config.validate();
  if (key.m != config.m || key.n() != config.n) {
    throw ConfigError("attack_projector key does not match the config family");
  }
  const Index dim = Index(1) << (2 * config.m * config.c);
  if (dim > caps::operator_dim()) {
    throw ConfigError("explicit attack projector exceeds the operator cap; use the "
                      "statevector path");
  }
  AttackTarget target = prs_target(config.m, config.n);
  const int key_id = static_cast<int>((key.a << key.s) | key.b);

  Mat p(dim, dim);
  Vec col(dim);
  for (Index j = 0; j < dim; ++j) {
    col.setZero();
    col(j) = 1.0;
    apply_key_projector(col, config, target, key_id);
    p.col(j) = col;
  }
  return HermitianOp(std::move(p));
}

double sequential_or_accept(const Vec& state, const AttackConfig& config,
                            const AttackTarget& target, const std::vector<int>& key_order,
                            double prune) {
  Vec branch = state;
  double accept = 0.0;
  for (int key : key_order) {
    Vec projected = branch;
    apply_key_projector(projected, config, target, key);
    accept += projected.squaredNorm();
    branch -= projected;
    if (branch.squaredNorm() < prune) break;
  }
  return accept;
}

OrTestResult sequential_or_test(const DensityMatrix& rho, const AttackConfig& config) {
  config.validate();
  const Index dim = Index(1) << (2 * config.m * config.c);
  if (rho.dim() != dim) throw ConfigError("state dimension does not match the attack layout");
  if (dim > caps::operator_dim()) {
    throw ConfigError("density-matrix OR test exceeds the operator cap");
  }
  AttackTarget target = prs_target(config.m, config.n);
  std::vector<int> order = shuffled_keys(target.key_count, config.order_seed);

  // P applied from the left, column by column.
  auto project_left = [&](const Mat& x, int key) {
    Mat out(dim, dim);
    Vec work(dim);
    for (Index j = 0; j < dim; ++j) {
      work = x.col(j);
      apply_key_projector(work, config, target, key);
      out.col(j) = work;
    }
    return out;
  };

  Mat branch = rho.matrix;
  Mat post_mix = Mat::Zero(dim, dim);
  double accept = 0.0;
  for (int key : order) {
    Mat left = project_left(branch, key);                  // P rho
    Mat both = project_left(Mat(left.adjoint()), key);     // P (rho P) = P rho P
    accept += both.trace().real();
    post_mix += both;
    // (I-P) rho (I-P) = rho - P rho - rho P + P rho P, with rho P = (P rho)^dag
    // for Hermitian branches.
    branch = branch - left - Mat(left.adjoint()) + both;
    if (branch.trace().real() < 1e-12) break;
  }
  post_mix += branch;
  return OrTestResult{accept, DensityMatrix(std::move(post_mix), rho.trace_mass)};
}

AttackReport run_attack(const AttackConfig& config, std::uint64_t seed) {
  config.validate();
  if (config.trials < 1) throw ConfigError("run_attack needs trials >= 1");
  AttackTarget target = prs_target(config.m, config.n);
  const Index dim = Index(1) << config.m;
  const int total_qubits = 2 * config.m * config.c;
  (void)total_qubits;

  double sum_p = 0.0, sumsq_p = 0.0;
  double sum_h = 0.0, sumsq_h = 0.0;
  double sum_eps = 0.0;

  for (long trial = 0; trial < config.trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
    Vec psi = haar_vec(dim, rng);
    const int planted = static_cast<int>(rng.below(static_cast<std::uint64_t>(target.key_count)));
    Vec haar_candidate = haar_vec(dim, rng);

    Vec pseudo_candidate = psi;
    apply_pad(pseudo_candidate, config.m, 0, config.n / 2,
              (static_cast<std::uint64_t>(planted) >> (config.n / 2)),
              static_cast<std::uint64_t>(planted) & ((1ull << (config.n / 2)) - 1), false);

    auto joint_for = [&](const Vec& candidate) {
      Vec joint = kron(candidate, psi);
      for (int j = 1; j < config.c; ++j) joint = kron(joint, kron(candidate, psi));
      return joint;
    };

    std::vector<int> order =
        shuffled_keys(target.key_count, derive_seed(config.order_seed, trial));

    Vec joint_pseudo = joint_for(pseudo_candidate);
    Vec probe = joint_pseudo;
    apply_key_projector(probe, config, target, planted);
    sum_eps += 1.0 - probe.squaredNorm();

    double p = sequential_or_accept(joint_pseudo, config, target, order);
    double h = sequential_or_accept(joint_for(haar_candidate), config, target, order);
    sum_p += p;
    sumsq_p += p * p;
    sum_h += h;
    sumsq_h += h * h;
  }

  const double n = static_cast<double>(config.trials);
  auto mean_stderr = [n](double sum, double sumsq) {
    double mean = sum / n;
    double var = std::max(0.0, sumsq / n - mean * mean);
    if (n > 1) var *= n / (n - 1.0);
    return std::make_pair(mean, std::sqrt(var / n));
  };

  AttackReport rep;
  std::tie(rep.accept_pseudo, rep.accept_pseudo_stderr) = mean_stderr(sum_p, sumsq_p);
  std::tie(rep.accept_haar, rep.accept_haar_stderr) = mean_stderr(sum_h, sumsq_h);
  rep.advantage = rep.accept_pseudo - rep.accept_haar;
  rep.eps_measured = sum_eps / n;
  rep.case1_floor = (1.0 - rep.eps_measured) * (1.0 - rep.eps_measured) / 7.0;
  rep.case2_ceiling = 4.0 * std::exp2(config.n) * std::pow(0.75, config.ell);
  rep.ceiling_applicable = rep.case2_ceiling <= 1.0;
  return rep;
}

TailReport haar_overlap_tail(Index d, long samples, std::uint64_t seed) {
  if (d < 2) throw ConfigError("haar_overlap_tail needs d >= 2");
  if (samples < 1) throw ConfigError("haar_overlap_tail needs samples >= 1");
  // The reference state is |e_0>; by unitary invariance the overlap
  // distribution is the same for any fixed reference.
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    Vec psi = haar_vec(d, rng);
    if (std::norm(psi(0)) >= 0.5) ++hits;
  }
  TailReport rep;
  rep.empirical = static_cast<double>(hits) / static_cast<double>(samples);
  rep.bound = 8.0 * std::exp(-static_cast<double>(d) / 600.0);
  rep.bound_applicable = rep.bound < 1.0;
  rep.analytic = std::exp2(-static_cast<double>(d - 1));
  return rep;
}

LevyProbe levy_concentration_probe(int m, long samples, std::uint64_t seed) {
  if (m < 1) throw ConfigError("levy_concentration_probe needs m >= 1");
  if (samples < 1) throw ConfigError("levy_concentration_probe needs samples >= 1");
  const Index dim = Index(1) << m;
  const Index half = dim / 2;
  const double delta = 18.0 * std::sqrt(static_cast<double>(m)) / std::exp2(0.5 * m);

  double sum_f = 0.0;
  long tail_hits = 0;
  for (long i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    Vec psi = haar_vec(dim, rng);
    double f = psi.head(half).squaredNorm();
    sum_f += f;
    if (std::abs(f - 0.5) >= delta) ++tail_hits;
  }

  LevyProbe probe;
  probe.mean_f = sum_f / static_cast<double>(samples);
  probe.delta = delta;
  probe.empirical_tail = static_cast<double>(tail_hits) / static_cast<double>(samples);
  const double pi = 3.14159265358979323846;
  probe.bound = 4.0 * std::exp(-std::exp2(m) * delta * delta / (18.0 * pi * pi * pi));
  return probe;
}

}  // namespace chrs
