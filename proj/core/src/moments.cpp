#include "chrs/moments.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "chrs/linalg.hpp"
#include "chrs/random.hpp"

namespace chrs {

std::string to_string(Mode mode) { return mode == Mode::Exact ? "exact" : "mc"; }

Mode mode_from_string(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "mc" || s == "monte-carlo") return Mode::MonteCarlo;
  throw ConfigError("unknown mode '" + s + "' (expected exact or mc)");
}

void EnsembleSpec::validate() const {
  if (m < 1) throw ConfigError("ensemble needs m >= 1");
  if (n < 0 || n % 2 != 0) throw ConfigError("key length n must be even and non-negative");
  if (s() > m) throw ConfigError("pad width n/2 exceeds m");
  if (r < 1) throw ConfigError("copy count r must be >= 1");
  if (mode == Mode::Exact) {
    if (static_cast<long>(r) * m > caps::operator_qubits()) {
      throw ConfigError("exact mode needs r*m <= " + std::to_string(caps::operator_qubits()) +
                        " qubits (cap 2^" + std::to_string(caps::operator_qubits()) + ")");
    }
  } else if (samples < 2) {
    throw ConfigError("monte-carlo mode needs samples >= 2");
  }
}

DensityMatrix haar_moment(Index d, int r) {
  HermitianOp p = sym_projector(d, r);
  const double rank = static_cast<double>(binomial(static_cast<int>(d) + r - 1, r));
  return DensityMatrix(p.matrix / rank);
}

MCAverage mc_average(const std::function<Mat(std::uint64_t)>& sampler, Index dim, long samples,
                     std::uint64_t seed, int workers) {
  if (samples < 2) throw ConfigError("mc_average needs samples >= 2");
  const long batches = std::min<long>(samples, 200);
  std::vector<Mat> batch_sum(batches);
  std::vector<Eigen::MatrixXd> batch_m2(batches);
  std::vector<long> batch_count(batches, 0);

  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = static_cast<int>(std::min<long>(workers, batches));

  std::atomic<long> next{0};
  auto run = [&] {
    for (;;) {
      long b = next.fetch_add(1);
      if (b >= batches) return;
      const long begin = b * samples / batches;
      const long end = (b + 1) * samples / batches;
      Mat sum = Mat::Zero(dim, dim);
      Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(dim, dim);
      for (long i = begin; i < end; ++i) {
        Mat s = sampler(derive_seed(seed, static_cast<std::uint64_t>(i)));
        sum += s;
        m2 += s.cwiseAbs2();
      }
      batch_sum[b] = std::move(sum);
      batch_m2[b] = std::move(m2);
      batch_count[b] = end - begin;
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  // Fixed-order reduction keeps the result independent of the worker count.
  Mat total = Mat::Zero(dim, dim);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(dim, dim);
  for (long b = 0; b < batches; ++b) {
    total += batch_sum[b];
    m2 += batch_m2[b];
  }
  Mat mean = total / static_cast<double>(samples);
  m2 /= static_cast<double>(samples);

  double max_stderr = 0.0;
  const double n = static_cast<double>(samples);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      double var = std::max(0.0, m2(i, j) - std::norm(mean(i, j))) * n / (n - 1.0);
      max_stderr = std::max(max_stderr, std::sqrt(var / n));
    }
  }

  MCAverage out{DensityMatrix(std::move(mean), 1.0, 1e-6), samples, max_stderr, seed, {}};
  out.batch_means.reserve(batches);
  for (long b = 0; b < batches; ++b) {
    out.batch_means.push_back(batch_sum[b] / static_cast<double>(batch_count[b]));
  }
  return out;
}

double bootstrap_noise_rms(const std::vector<Mat>& batch_means, const Mat& mean, int resamples,
                           std::uint64_t seed) {
  if (batch_means.empty()) throw ConfigError("bootstrap needs batch means");
  Rng rng(derive_seed(seed, stream_id("bootstrap")));
  const std::size_t nb = batch_means.size();
  double sq = 0.0;
  for (int j = 0; j < resamples; ++j) {
    Mat resampled = Mat::Zero(mean.rows(), mean.cols());
    for (std::size_t i = 0; i < nb; ++i) resampled += batch_means[rng.below(nb)];
    resampled /= static_cast<double>(nb);
    double t = trace_distance(resampled, mean);
    sq += t * t;
  }
  return std::sqrt(sq / resamples);
}

namespace {

Vec phi_u_vec(Index d, const Mat& u) {
  Vec phi = max_entangled(d).amplitudes;
  return apply_to_subsystem(phi, {d, d}, 0, u);
}

Mat pair_swap(Index d) {
  Mat s = Mat::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  }
  return s;
}

}  // namespace

MCAverage phi_u_moment_mc(Index d, int r, long samples, std::uint64_t seed, int workers) {
  Index dim = 1;
  for (int i = 0; i < 2 * r; ++i) dim *= d;
  auto sampler = [d, r](std::uint64_t s) {
    Mat u = haar_unitary(d, s);
    Vec phi = phi_u_vec(d, u);
    Vec full = phi;
    for (int i = 1; i < r; ++i) full = kron(full, phi);
    return Mat(full * full.adjoint());
  };
  return mc_average(sampler, dim, samples, seed, workers);
}

DensityMatrix phi_u_moment(Index d, int r, Mode mode, long samples, std::uint64_t seed) {
  if (d < 1 || r < 1) throw ConfigError("phi_u_moment needs d >= 1 and r >= 1");
  double qubits = 2.0 * r * std::log2(static_cast<double>(d));
  if (qubits > caps::operator_qubits() + 1e-9) {
    throw ConfigError("phi_u_moment dimension exceeds the operator cap of 2^" +
                      std::to_string(caps::operator_qubits()));
  }
  if (mode == Mode::MonteCarlo) {
    return phi_u_moment_mc(d, r, samples, seed).mean;
  }
  if (r > 2) {
    throw ConfigError("exact phi_u_moment supports r <= 2; request monte-carlo mode for r >= 3");
  }

  const Index d2 = d * d;
  if (r == 1) {
    return DensityMatrix(Mat::Identity(d2, d2) / static_cast<double>(d2));
  }

  // Two copies of (U x I)|Phi_d>: average over U with the second-moment twirl
  // on the two U-side factors. Factor order (A1 B1 A2 B2) -> (A1 A2 B1 B2),
  // then E_U (UxU) X (UxU)^dag = sum over the symmetric/antisymmetric irreps
  // of (P/tr P) x tr_A[(P x I) X], then reorder back.
  Vec phi2 = kron(max_entangled(d).amplitudes, max_entangled(d).amplitudes);
  const std::vector<Index> dims4{d, d, d, d};
  const std::vector<int> regroup{0, 2, 1, 3};  // self-inverse
  Vec grouped = permute_subsystems(phi2, dims4, regroup);
  Mat m = grouped * grouped.adjoint();

  Mat swap_a = pair_swap(d);
  Mat eye_a = Mat::Identity(d2, d2);
  Mat out = Mat::Zero(d2 * d2, d2 * d2);
  const std::vector<Index> dims_ab{d2, d2};
  for (int sign : {+1, -1}) {
    Mat proj = (eye_a + static_cast<double>(sign) * swap_a) / 2.0;
    double rank = static_cast<double>(d) * (d + sign) / 2.0;
    Mat projected = kron(proj, eye_a) * m;
    Mat reduced = partial_trace(projected, dims_ab, {false, true});
    out += kron(Mat(proj / rank), reduced);
  }
  out = permute_subsystems(out, dims4, regroup);
  return DensityMatrix(std::move(out));
}

GapReport harrow_gap(Index d, int r, Mode mode, long samples, std::uint64_t seed) {
  DensityMatrix haar = haar_moment(d * d, r);
  const double bound = static_cast<double>(r) * r / static_cast<double>(d);
  const bool premise = static_cast<long>(r) * r <= d;

  if (mode == Mode::Exact) {
    DensityMatrix phi = phi_u_moment(d, r, Mode::Exact);
    double dist = trace_distance(haar.matrix, phi.matrix);
    return make_gap_report(dist, bound, "Lem4.2", premise && bound <= 2.0, Mode::Exact, 0.0);
  }
  MCAverage phi = phi_u_moment_mc(d, r, samples, seed);
  double dist = trace_distance(haar.matrix, phi.mean.matrix);
  double noise = bootstrap_noise_rms(phi.batch_means, phi.mean.matrix, 200, seed);
  return make_gap_report(dist, bound, "Lem4.2", premise && bound <= 2.0, Mode::MonteCarlo, noise);
}

}  // namespace chrs
