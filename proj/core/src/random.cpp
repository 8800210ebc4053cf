#include "chrs/random.hpp"

#include <cmath>
#include <numbers>

namespace chrs {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state) ^ stream;
  std::uint64_t state2 = mixed;
  return splitmix64(state2);
}

std::uint64_t stream_id(std::string_view tag) {
  // FNV-1a.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

double Rng::uniform() {
  // 53 bits, offset by half an ulp: strictly inside (0, 1).
  return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ConfigError("Rng::below(0)");
  if ((n & (n - 1)) == 0) return eng_() & (n - 1);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
  std::uint64_t x;
  do {
    x = eng_();
  } while (x > limit);
  return x % n;
}

Vec haar_vec(Index dim, Rng& rng) {
  Vec v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = rng.cnormal();
  double n = v.norm();
  if (n < 1e-12) throw NumericError("degenerate Gaussian sample");
  v /= n;
  return v;
}

StateVector haar_state(Index dim, std::uint64_t seed) {
  if (dim < 1) throw ConfigError("haar_state needs dim >= 1");
  Rng rng(seed);
  return StateVector(haar_vec(dim, rng));
}

Mat haar_unitary(Index dim, std::uint64_t seed) {
  if (dim < 1) throw ConfigError("haar_unitary needs dim >= 1");
  Rng rng(seed);
  Mat g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.cnormal();
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    Cx rjj = r(j, j);
    double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : Cx(1.0, 0.0);
  }
  return q;
}

}  // namespace chrs
