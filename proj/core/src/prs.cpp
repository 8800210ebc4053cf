#include "chrs/prs.hpp"

#include <cmath>

#include "chrs/linalg.hpp"
#include "chrs/random.hpp"

namespace chrs {

PauliKey::PauliKey(int m_, int s_, std::uint64_t a_, std::uint64_t b_)
    : m(m_), s(s_), a(a_), b(b_) {
  if (m < 1 || s < 0 || s > m) throw ConfigError("PauliKey needs 0 <= s <= m, m >= 1");
  if (s < 64) {
    const std::uint64_t mask = (1ull << s) - 1;
    if ((a & ~mask) || (b & ~mask)) throw ConfigError("PauliKey bits exceed pad width");
  }
}

int paper_default_pad_width(int m) {
  return std::max(1, static_cast<int>(std::floor(0.45 * m)));
}

Mat qotp_unitary(const PauliKey& key) {
  if (key.m > caps::operator_qubits()) {
    throw ConfigError("qotp_unitary register exceeds the operator cap");
  }
  const Index dim = Index(1) << key.m;
  Mat u = Mat::Zero(dim, dim);
  Vec col(dim);
  for (Index j = 0; j < dim; ++j) {
    col.setZero();
    col(j) = 1.0;
    qotp_apply(col, key);
    u.col(j) = col;
  }
  return u;
}

void qotp_apply(Vec& v, const PauliKey& key, bool dagger) {
  apply_pad(v, key.m, 0, key.s, key.a, key.b, dagger);
}

DensityMatrix pauli_twirl(const DensityMatrix& rho) {
  const Index dim = rho.dim();
  double tr = rho.matrix.trace().real();
  Mat out = Mat::Identity(dim, dim) * (tr / static_cast<double>(dim));
  return DensityMatrix(std::move(out), rho.trace_mass);
}

Mat pauli_twirl_brute(const Mat& rho) {
  const Index dim = rho.rows();
  int s = 0;
  while ((Index(1) << s) < dim) ++s;
  if ((Index(1) << s) != dim) throw ConfigError("pauli_twirl_brute needs a qubit register");
  if (s > 5) throw ConfigError("pauli_twirl_brute enumerates 4^s Paulis; s is capped at 5");

  Mat acc = Mat::Zero(dim, dim);
  Vec col(dim);
  const std::uint64_t keys = 1ull << s;
  for (std::uint64_t a = 0; a < keys; ++a) {
    for (std::uint64_t b = 0; b < keys; ++b) {
      PauliKey key(s, s, a, b);
      Mat conj(dim, dim);
      for (Index j = 0; j < dim; ++j) {
        col = rho.col(j);
        qotp_apply(col, key);
        conj.col(j) = col;
      }
      // U rho U^dag: rows get the adjoint action.
      Mat full(dim, dim);
      for (Index i = 0; i < dim; ++i) {
        col = conj.row(i).transpose().conjugate();
        qotp_apply(col, key);
        full.row(i) = col.conjugate().transpose();
      }
      acc += full;
    }
  }
  return acc / static_cast<double>(keys * keys);
}

Mat pad_twirl(const Mat& rho, int s) {
  const Index dim = rho.rows();
  const Index pad_dim = Index(1) << s;
  if (dim % pad_dim != 0) throw ConfigError("pad width does not divide the register");
  const Index rest = dim / pad_dim;
  Mat reduced = partial_trace(rho, {pad_dim, rest}, {false, true});
  return kron(Mat(Mat::Identity(pad_dim, pad_dim) / static_cast<double>(pad_dim)), reduced);
}

DensityMatrix pad_twirl_channel(const DensityMatrix& rho, int s) {
  return DensityMatrix(pad_twirl(rho.matrix, s), rho.trace_mass);
}

namespace {

Vec sample_padded_copy_vec(const EnsembleSpec& spec, std::uint64_t sample_seed) {
  Rng rng(sample_seed);
  const Index dim = Index(1) << spec.m;
  Vec psi = haar_vec(dim, rng);
  const std::uint64_t key_bits = 1ull << spec.s();
  std::uint64_t a = rng.below(key_bits);
  std::uint64_t b = rng.below(key_bits);
  Vec padded = psi;
  qotp_apply(padded, PauliKey(spec.m, spec.s(), a, b));
  Vec full = padded;
  for (int i = 1; i < spec.r; ++i) full = kron(full, psi);
  return full;
}

}  // namespace

DensityMatrix prs_ensemble_state(const EnsembleSpec& spec) {
  spec.validate();
  if (spec.mode == Mode::Exact) {
    DensityMatrix moment = haar_moment(Index(1) << spec.m, spec.r);
    // The key and Haar averages commute with the pad channel on copy 1.
    return pad_twirl_channel(moment, spec.s());
  }
  const Index dim = Index(1) << (spec.m * spec.r);
  auto sampler = [&spec](std::uint64_t s) {
    Vec v = sample_padded_copy_vec(spec, s);
    return Mat(v * v.adjoint());
  };
  return mc_average(sampler, dim, spec.samples, spec.seed).mean;
}

DensityMatrix ideal_ensemble_state(int m, int r) {
  if (m < 1 || r < 1) throw ConfigError("ideal_ensemble_state needs m >= 1, r >= 1");
  const Index dim = Index(1) << m;
  Mat mixed = Mat::Identity(dim, dim) / static_cast<double>(dim);
  if (r == 1) return DensityMatrix(std::move(mixed));
  DensityMatrix rest = haar_moment(dim, r - 1);
  return DensityMatrix(kron(mixed, rest.matrix));
}

namespace {

struct BoundChoice {
  double value;
  std::string id;
  bool applicable;
};

BoundChoice select_prs_bound(int m, int s, int r) {
  const double pow_m_half = std::exp2(0.5 * m);
  if (m % 2 == 0 && s == m / 2) {
    double bound = 2.0 * r * r / pow_m_half;
    return {bound, "Thm4.5", r <= pow_m_half && bound <= 2.0};
  }
  double bound = (2.0 * r * r + 800.0 * r * m * std::sqrt(static_cast<double>(m))) *
                 std::pow(5.0, 0.1 * m) / std::exp2(0.45 * m);
  return {bound, "Cor4.9", s < (m + 1) / 2 && r < pow_m_half && bound <= 2.0};
}

}  // namespace

GapReport prs_gap(const EnsembleSpec& spec) {
  spec.validate();
  DensityMatrix ideal = ideal_ensemble_state(spec.m, spec.r);
  BoundChoice bound = select_prs_bound(spec.m, spec.s(), spec.r);

  if (spec.mode == Mode::Exact) {
    DensityMatrix actual = prs_ensemble_state(spec);
    double dist = trace_distance(actual.matrix, ideal.matrix);
    return make_gap_report(dist, bound.value, bound.id, bound.applicable, Mode::Exact, 0.0);
  }
  const Index dim = Index(1) << (spec.m * spec.r);
  auto sampler = [&spec](std::uint64_t s) {
    Vec v = sample_padded_copy_vec(spec, s);
    return Mat(v * v.adjoint());
  };
  MCAverage mc = mc_average(sampler, dim, spec.samples, spec.seed);
  double dist = trace_distance(mc.mean.matrix, ideal.matrix);
  double noise = bootstrap_noise_rms(mc.batch_means, mc.mean.matrix, 200, spec.seed);
  return make_gap_report(dist, bound.value, bound.id, bound.applicable, Mode::MonteCarlo, noise);
}

UnitaryFamily qotp_family(int m, int s) {
  if (s < 0 || s > m) throw ConfigError("qotp_family needs 0 <= s <= m");
  if (2 * s > 20) throw ConfigError("qotp_family would enumerate more than 2^20 keys");
  UnitaryFamily family;
  const std::uint64_t keys = 1ull << s;
  family.reserve(keys * keys);
  for (std::uint64_t a = 0; a < keys; ++a) {
    for (std::uint64_t b = 0; b < keys; ++b) {
      family.push_back(qotp_unitary(PauliKey(m, s, a, b)));
    }
  }
  return family;
}

UnitaryFamily identity_family(int m) {
  return {Mat::Identity(Index(1) << m, Index(1) << m)};
}

namespace {

Mat family_average_exact(int m, int r, const UnitaryFamily& family) {
  const Index dim_one = Index(1) << m;
  const Index dim_rest = Index(1) << (m * (r - 1));
  DensityMatrix moment = haar_moment(dim_one, r);
  Mat acc = Mat::Zero(moment.dim(), moment.dim());
  for (const Mat& u : family) {
    if (u.rows() != dim_one) throw ConfigError("family unitary has wrong dimension");
    Mat lifted = (r == 1) ? u : kron(u, Mat(Mat::Identity(dim_rest, dim_rest)));
    acc += lifted * moment.matrix * lifted.adjoint();
  }
  return acc / static_cast<double>(family.size());
}

}  // namespace

double family_gap(int m, int r, const UnitaryFamily& family) {
  if (family.empty()) throw ConfigError("family must be non-empty");
  if (static_cast<long>(m) * r > caps::operator_qubits()) {
    throw ConfigError("family_gap exceeds the operator cap");
  }
  Mat avg = family_average_exact(m, r, family);
  DensityMatrix ideal = ideal_ensemble_state(m, r);
  return trace_distance(avg, ideal.matrix);
}

GapReport stretch_check(int m, int r, const UnitaryFamily& family, Mode mode, long samples,
                        std::uint64_t seed) {
  if (m < 2) throw ConfigError("stretch_check needs m >= 2");
  const Index half = Index(1) << (m - 1);
  for (const Mat& u : family) {
    if (u.rows() != half) throw ConfigError("stretch family must act on m-1 qubits");
  }
  const double additive = 800.0 * r * std::sqrt(static_cast<double>(m)) / std::exp2(0.5 * m);

  UnitaryFamily lifted;
  lifted.reserve(family.size());
  for (const Mat& u : family) lifted.push_back(kron(Mat(Mat::Identity(2, 2)), u));

  if (mode == Mode::Exact) {
    double lhs = family_gap(m, r, lifted);
    double rhs_gap = family_gap(m - 1, r, family);
    double rhs = 5.0 * rhs_gap + additive;
    return make_gap_report(lhs, rhs, "Thm4.8", rhs <= 2.0, Mode::Exact, 0.0);
  }

  // MC mode: sample psi and one family member per sample on both sides.
  const Index dim_m = Index(1) << (m * r);
  auto sampler_m = [m, r, &lifted](std::uint64_t s) {
    Rng rng(s);
    Vec psi = haar_vec(Index(1) << m, rng);
    Vec padded = lifted[rng.below(lifted.size())] * psi;
    Vec full = padded;
    for (int i = 1; i < r; ++i) full = kron(full, psi);
    return Mat(full * full.adjoint());
  };
  const Index dim_h = Index(1) << ((m - 1) * r);
  auto sampler_h = [m, r, &family](std::uint64_t s) {
    Rng rng(s);
    Vec psi = haar_vec(Index(1) << (m - 1), rng);
    Vec padded = family[rng.below(family.size())] * psi;
    Vec full = padded;
    for (int i = 1; i < r; ++i) full = kron(full, psi);
    return Mat(full * full.adjoint());
  };

  MCAverage mc_m = mc_average(sampler_m, dim_m, samples, derive_seed(seed, stream_id("lhs")));
  MCAverage mc_h = mc_average(sampler_h, dim_h, samples, derive_seed(seed, stream_id("rhs")));
  double lhs = trace_distance(mc_m.mean.matrix, ideal_ensemble_state(m, r).matrix);
  double rhs_gap = trace_distance(mc_h.mean.matrix, ideal_ensemble_state(m - 1, r).matrix);
  double rhs = 5.0 * rhs_gap + additive;
  double noise = bootstrap_noise_rms(mc_m.batch_means, mc_m.mean.matrix, 200, seed);
  return make_gap_report(lhs, rhs, "Thm4.8", rhs <= 2.0, Mode::MonteCarlo, noise);
}

std::pair<DensityMatrix, GapReport> half_split_moment(int m, int r, long samples,
                                                      std::uint64_t seed) {
  if (m < 2 || r < 1) throw ConfigError("half_split_moment needs m >= 2, r >= 1");
  if (static_cast<long>(m) * r > caps::operator_qubits()) {
    throw ConfigError("half_split_moment exceeds the operator cap");
  }
  const Index dim = Index(1) << m;
  const Index half = dim / 2;
  auto sampler = [m, r, dim, half](std::uint64_t s) {
    Rng rng(s);
    Vec psi1 = haar_vec(half, rng);
    Vec psi2 = haar_vec(half, rng);
    Vec v(dim);
    const double c = 1.0 / std::sqrt(2.0);
    v.head(half) = c * psi1;
    v.tail(half) = c * psi2;
    Vec full = v;
    for (int i = 1; i < r; ++i) full = kron(full, v);
    return Mat(full * full.adjoint());
  };
  const Index full_dim = Index(1) << (m * r);
  MCAverage mc = mc_average(sampler, full_dim, samples, seed);
  DensityMatrix exact = haar_moment(dim, r);
  double dist = trace_distance(mc.mean.matrix, exact.matrix);
  double noise = bootstrap_noise_rms(mc.batch_means, mc.mean.matrix, 200, seed);
  const double bound = 80.0 * r * std::sqrt(static_cast<double>(m)) / std::exp2(0.5 * m);
  GapReport gap =
      make_gap_report(dist, bound, "Lem4.6", bound <= 2.0, Mode::MonteCarlo, noise);
  return {std::move(mc.mean), std::move(gap)};
}

GapReport split_deviation(int m, long samples, std::uint64_t seed) {
  if (m < 2) throw ConfigError("split_deviation needs m >= 2");
  if (samples < 2) throw ConfigError("split_deviation needs samples >= 2");
  const Index dim = Index(1) << m;
  const Index half = dim / 2;
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    Vec psi = haar_vec(dim, rng);
    double alpha = psi.head(half).norm();
    double beta = psi.tail(half).norm();
    // F keeps both branch states and sets the coefficients to 1/sqrt(2), so
    // <psi|F(psi)> = (alpha + beta)/sqrt(2) and the trace distance between
    // the two pure states is 2 sqrt(1 - overlap^2).
    double overlap_sq = (alpha + beta) * (alpha + beta) / 2.0;
    double dev = 2.0 * std::sqrt(std::max(0.0, 1.0 - overlap_sq));
    sum += dev;
    sumsq += dev * dev;
  }
  const double n = static_cast<double>(samples);
  double mean = sum / n;
  double var = std::max(0.0, sumsq / n - mean * mean) * n / (n - 1.0);
  double stderr_mean = std::sqrt(var / n);
  const double bound = 80.0 * std::sqrt(static_cast<double>(m)) / std::exp2(0.5 * m);
  return make_gap_report(mean, bound, "Lem4.6-deviation", bound <= 2.0, Mode::MonteCarlo,
                         stderr_mean);
}

BlockNormCheck block_norm_check(const HermitianOp& a, double eps) {
  const Index dim = a.dim();
  if (dim % 2 != 0) throw ConfigError("block_norm_check needs a leading qubit");
  const Index h = dim / 2;
  Mat a00 = a.matrix.topLeftCorner(h, h);
  Mat a01 = a.matrix.topRightCorner(h, h);
  Mat a10 = a.matrix.bottomLeftCorner(h, h);
  Mat a11 = a.matrix.bottomRightCorner(h, h);

  const Cx im(0.0, 1.0);
  BlockNormCheck out;
  out.eps = eps;
  out.block_norms[0] = trace_norm(a00);
  out.block_norms[1] = trace_norm(a11);
  out.block_norms[2] = trace_norm(Mat((a00 + a01 + a10 + a11) / 2.0));
  out.block_norms[3] = trace_norm(Mat((a00 + im * a01 - im * a10 + a11) / 2.0));
  out.full_norm = trace_norm(a.matrix);
  out.holds_hypothesis = true;
  for (double b : out.block_norms) out.holds_hypothesis = out.holds_hypothesis && (b < eps);
  out.holds_conclusion = out.full_norm < 10.0 * eps;
  return out;
}

}  // namespace chrs
