#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "chrs/report.hpp"
#include "chrs/types.hpp"

namespace chrs {

/// One ensemble experiment: m-qubit states, n key bits, r copies.
struct EnsembleSpec {
  int m = 0;
  int n = 0;
  int r = 1;
  Mode mode = Mode::Exact;
  long samples = 0;
  std::uint64_t seed = 0;

  int s() const { return n / 2; }
  void validate() const;
};

/// Mean of sampled density matrices. entrywise_stderr is the largest
/// per-entry standard error of the mean; batch_means feed the bootstrap.
struct MCAverage {
  DensityMatrix mean;
  long samples = 0;
  double entrywise_stderr = 0.0;
  std::uint64_t seed = 0;
  std::vector<Mat> batch_means;
};

/// E_psi psi^{tensor r} = sym_projector(d, r) / binomial(d+r-1, r).
DensityMatrix haar_moment(Index d, int r);

/// Deterministic parallel Monte Carlo mean. The sampler must be a pure
/// function of its seed argument; sample i uses derive_seed(seed, i), and
/// partial sums are reduced in a fixed batch order, so the result is
/// bit-identical for any worker count.
MCAverage mc_average(const std::function<Mat(std::uint64_t)>& sampler, Index dim, long samples,
                     std::uint64_t seed, int workers = 0);

/// Centered-bootstrap RMS of trace_norm(resampled mean - mean): the Monte
/// Carlo noise floor of a trace-distance statistic.
double bootstrap_noise_rms(const std::vector<Mat>& batch_means, const Mat& mean, int resamples,
                           std::uint64_t seed);

/// E_U phi_U^{tensor r} with phi_U = (U x I)|Phi_d>. Exact mode supports
/// r <= 2 via the two-irrep second-moment twirl.
DensityMatrix phi_u_moment(Index d, int r, Mode mode = Mode::Exact, long samples = 0,
                           std::uint64_t seed = 0);
MCAverage phi_u_moment_mc(Index d, int r, long samples, std::uint64_t seed, int workers = 0);

/// Trace distance between haar_moment(d^2, r) and phi_u_moment(d, r) against
/// the r^2/d reference bound (flagged inapplicable when r^2 > d).
GapReport harrow_gap(Index d, int r, Mode mode = Mode::Exact, long samples = 0,
                     std::uint64_t seed = 0);

}  // namespace chrs
