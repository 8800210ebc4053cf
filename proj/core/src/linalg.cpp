#include "chrs/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace chrs {

namespace caps {

int operator_qubits() {
  static const int cached = [] {
    if (const char* env = std::getenv("CHRS_CAP_QUBITS")) {
      int q = std::atoi(env);
      if (q >= 1 && q <= 30) return q;
    }
    return 13;
  }();
  return cached;
}

Index operator_dim() { return Index(1) << operator_qubits(); }
Index state_dim() { return Index(1) << (2 * operator_qubits()); }

}  // namespace caps

double hermiticity_error(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

bool is_psd_within(const Mat& m, double floor_tol) {
  Mat shifted = m + floor_tol * Mat::Identity(m.rows(), m.cols());
  Eigen::LDLT<Mat> ldlt(shifted);
  return ldlt.info() == Eigen::Success && ldlt.isPositive();
}

}  // namespace

StateVector::StateVector(Vec a) : amplitudes(std::move(a)) {
  if (amplitudes.size() == 0) throw NumericError("state vector must be non-empty");
  double n = amplitudes.norm();
  if (std::abs(n - 1.0) > tol::structural) {
    throw NumericError("state vector norm " + std::to_string(n) + " is not 1");
  }
}

StateVector StateVector::normalized(Vec a) {
  double n = a.norm();
  if (n < 1e-12) throw NumericError("cannot normalize a near-zero vector");
  return StateVector(Vec(a / n));
}

DensityMatrix::DensityMatrix(Mat m, double trace_mass_, double tolerance)
    : matrix(std::move(m)), trace_mass(trace_mass_) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    throw NumericError("density matrix must be square and non-empty");
  }
  double herm = hermiticity_error(matrix);
  if (herm > tolerance) {
    throw NumericError("density matrix is not Hermitian (error " + std::to_string(herm) + ")");
  }
  Cx tr = matrix.trace();
  if (std::abs(tr - Cx(trace_mass, 0.0)) > tolerance) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " differs from declared mass " << trace_mass;
    throw NumericError(os.str());
  }
  if (!is_psd_within(matrix, tolerance)) {
    throw NumericError("density matrix is not PSD within tolerance");
  }
}

HermitianOp::HermitianOp(Mat m, double tolerance) : matrix(std::move(m)) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    throw NumericError("operator must be square and non-empty");
  }
  double herm = hermiticity_error(matrix);
  if (herm > tolerance) {
    throw NumericError("operator is not Hermitian (error " + std::to_string(herm) + ")");
  }
}

RegisterLayout::RegisterLayout(std::vector<Subsystem> subs) : subsystems(std::move(subs)) {
  std::set<std::string> seen;
  for (const auto& s : subsystems) {
    if (s.dim <= 0) throw ConfigError("subsystem '" + s.label + "' has non-positive dimension");
    if (!seen.insert(s.label).second) {
      throw ConfigError("duplicate subsystem label '" + s.label + "'");
    }
  }
}

RegisterLayout RegisterLayout::qubits(int n, const std::string& prefix) {
  std::vector<Subsystem> subs;
  subs.reserve(n);
  for (int i = 0; i < n; ++i) subs.push_back({prefix + std::to_string(i), 2});
  return RegisterLayout(std::move(subs));
}

Index RegisterLayout::total_dim() const {
  Index d = 1;
  for (const auto& s : subsystems) d *= s.dim;
  return d;
}

std::vector<Index> RegisterLayout::dims() const {
  std::vector<Index> d;
  d.reserve(subsystems.size());
  for (const auto& s : subsystems) d.push_back(s.dim);
  return d;
}

std::size_t RegisterLayout::position(const std::string& label) const {
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    if (subsystems[i].label == label) return i;
  }
  throw ConfigError("no subsystem labeled '" + label + "'");
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::vector<Index> qubit_dims(int n) { return std::vector<Index>(static_cast<std::size_t>(n), 2); }

Index total_dim(const std::vector<Index>& dims) {
  Index d = 1;
  for (Index x : dims) d *= x;
  return d;
}

namespace {

void check_order(const std::vector<Index>& dims, const std::vector<int>& order) {
  if (order.size() != dims.size()) throw ConfigError("subsystem order has wrong length");
  std::vector<bool> seen(dims.size(), false);
  for (int s : order) {
    if (s < 0 || static_cast<std::size_t>(s) >= dims.size() || seen[s]) {
      throw ConfigError("subsystem order is not a permutation");
    }
    seen[s] = true;
  }
}

}  // namespace

std::vector<Index> permutation_map(const std::vector<Index>& dims, const std::vector<int>& order) {
  check_order(dims, order);
  const std::size_t k = dims.size();
  const Index n = total_dim(dims);

  // Destination stride of each source subsystem.
  std::vector<Index> dst_stride(k, 1);
  {
    std::vector<Index> slot_stride(k, 1);
    for (std::size_t t = k; t-- > 1;) slot_stride[t - 1] = slot_stride[t] * dims[order[t]];
    for (std::size_t t = 0; t < k; ++t) dst_stride[order[t]] = slot_stride[t];
  }

  std::vector<Index> map(n);
  std::vector<Index> digit(k, 0);
  Index dst = 0;
  for (Index src = 0; src < n; ++src) {
    map[src] = dst;
    // Mixed-radix odometer increment over source digits, least significant last.
    for (std::size_t j = k; j-- > 0;) {
      ++digit[j];
      dst += dst_stride[j];
      if (digit[j] < dims[j]) break;
      dst -= digit[j] * dst_stride[j];
      digit[j] = 0;
    }
  }
  return map;
}

Vec permute_subsystems(const Vec& v, const std::vector<Index>& dims, const std::vector<int>& order) {
  if (v.size() != total_dim(dims)) throw ConfigError("dims do not match vector size");
  std::vector<Index> map = permutation_map(dims, order);
  Vec out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(map[i]) = v(i);
  return out;
}

Mat permute_subsystems(const Mat& m, const std::vector<Index>& dims, const std::vector<int>& order) {
  if (m.rows() != total_dim(dims) || m.rows() != m.cols()) {
    throw ConfigError("dims do not match matrix size");
  }
  std::vector<Index> map = permutation_map(dims, order);
  Mat out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) out(map[i], map[j]) = m(i, j);
  }
  return out;
}

Mat partial_trace(const Mat& m, const std::vector<Index>& dims, const std::vector<bool>& keep) {
  if (keep.size() != dims.size()) throw ConfigError("keep mask has wrong length");
  if (m.rows() != total_dim(dims) || m.rows() != m.cols()) {
    throw ConfigError("dims do not match matrix size");
  }

  const std::size_t k = dims.size();
  std::vector<Index> stride(k, 1);
  for (std::size_t j = k; j-- > 1;) stride[j - 1] = stride[j] * dims[j];

  // Flat offsets contributed by the kept and traced digit groups; digit
  // positions are disjoint, so a full index is one offset from each table.
  std::vector<Index> kept_off{0}, traced_off{0};
  for (std::size_t j = 0; j < k; ++j) {
    auto& table = keep[j] ? kept_off : traced_off;
    std::vector<Index> next;
    next.reserve(table.size() * dims[j]);
    for (Index base : table) {
      for (Index x = 0; x < dims[j]; ++x) next.push_back(base + x * stride[j]);
    }
    table = std::move(next);
  }

  const Index kd = static_cast<Index>(kept_off.size());
  Mat out = Mat::Zero(kd, kd);
  for (Index a = 0; a < kd; ++a) {
    for (Index b = 0; b < kd; ++b) {
      Cx sum = 0.0;
      for (Index t : traced_off) sum += m(kept_off[a] + t, kept_off[b] + t);
      out(a, b) = sum;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const RegisterLayout& layout,
                            const std::set<std::string>& keep) {
  if (layout.total_dim() != rho.dim()) throw ConfigError("layout does not match operator dimension");
  if (keep.empty()) throw ConfigError("keep set must be non-empty");
  std::vector<bool> mask(layout.size(), false);
  for (const auto& label : keep) mask[layout.position(label)] = true;
  Mat reduced = partial_trace(rho.matrix, layout.dims(), mask);
  return DensityMatrix(std::move(reduced), rho.trace_mass);
}

Mat reduced_density(const Vec& v, const std::vector<Index>& dims, std::size_t keep) {
  if (keep >= dims.size()) throw ConfigError("keep index out of range");
  if (v.size() != total_dim(dims)) throw ConfigError("dims do not match vector size");
  Index left = 1, right = 1;
  for (std::size_t j = 0; j < keep; ++j) left *= dims[j];
  for (std::size_t j = keep + 1; j < dims.size(); ++j) right *= dims[j];
  const Index d = dims[keep];

  Mat out = Mat::Zero(d, d);
  for (Index l = 0; l < left; ++l) {
    for (Index i = 0; i < d; ++i) {
      const Index base_i = (l * d + i) * right;
      for (Index j = 0; j < d; ++j) {
        const Index base_j = (l * d + j) * right;
        Cx sum = 0.0;
        for (Index r = 0; r < right; ++r) sum += v(base_i + r) * std::conj(v(base_j + r));
        out(i, j) += sum;
      }
    }
  }
  return out;
}

Vec apply_to_subsystem(const Vec& v, const std::vector<Index>& dims, std::size_t k, const Mat& op) {
  if (k >= dims.size()) throw ConfigError("subsystem index out of range");
  if (op.rows() != dims[k] || op.cols() != dims[k]) throw ConfigError("operator dim mismatch");
  if (v.size() != total_dim(dims)) throw ConfigError("dims do not match vector size");
  Index left = 1, right = 1;
  for (std::size_t j = 0; j < k; ++j) left *= dims[j];
  for (std::size_t j = k + 1; j < dims.size(); ++j) right *= dims[j];
  const Index d = dims[k];

  Vec out = Vec::Zero(v.size());
  for (Index l = 0; l < left; ++l) {
    for (Index i = 0; i < d; ++i) {
      const Index base_out = (l * d + i) * right;
      for (Index j = 0; j < d; ++j) {
        const Cx c = op(i, j);
        if (c == Cx(0.0, 0.0)) continue;
        const Index base_in = (l * d + j) * right;
        for (Index r = 0; r < right; ++r) out(base_out + r) += c * v(base_in + r);
      }
    }
  }
  return out;
}

double trace_norm(const Mat& h) {
  double herm = hermiticity_error(h);
  if (herm > tol::structural) {
    throw NumericError("trace_norm needs a Hermitian operator (error " + std::to_string(herm) +
                       ")");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  double sum = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (ev >= 0.0) {
      sum += ev;
    } else if (ev < -tol::structural) {
      sum -= ev;
    }
    // Eigenvalues in [-1e-9, 0) are round-off negativity and contribute 0.
  }
  return sum;
}

double trace_norm(const HermitianOp& h) { return trace_norm(h.matrix); }

double trace_distance(const Mat& a, const Mat& b) {
  Mat d = a - b;
  // Symmetrize away last-ulp asymmetry before the eigensolve.
  d = (d + Mat(d.adjoint())) / 2.0;
  return trace_norm(d);
}

HermitianOp sym_projector(Index d, int r) {
  if (d < 1 || r < 1) throw ConfigError("sym_projector needs d >= 1 and r >= 1");
  if (r > 4) throw ConfigError("sym_projector permutation construction is capped at r <= 4");
  double logdim = r * std::log2(static_cast<double>(d));
  if (logdim > static_cast<double>(caps::operator_qubits()) + 1e-9) {
    throw ConfigError("sym_projector dimension 2^" + std::to_string(logdim) +
                      " exceeds the operator cap of 2^" + std::to_string(caps::operator_qubits()));
  }

  Index dim = 1;
  for (int i = 0; i < r; ++i) dim *= d;

  double fact = 1.0;
  for (int i = 2; i <= r; ++i) fact *= i;
  const double w = 1.0 / fact;

  Mat p = Mat::Zero(dim, dim);
  std::vector<int> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Index> digits(r);
  do {
    for (Index src = 0; src < dim; ++src) {
      Index x = src;
      for (int j = r - 1; j >= 0; --j) {
        digits[j] = x % d;
        x /= d;
      }
      Index dst = 0;
      for (int j = 0; j < r; ++j) dst = dst * d + digits[perm[j]];
      p(dst, src) += w;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return HermitianOp(std::move(p));
}

StateVector max_entangled(Index d) {
  if (d < 1) throw ConfigError("max_entangled needs d >= 1");
  Vec v = Vec::Zero(d * d);
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i) v(i * d + i) = a;
  return StateVector(std::move(v));
}

std::pair<double, DensityMatrix> lueders_update(const DensityMatrix& rho, const HermitianOp& p) {
  if (p.dim() != rho.dim()) throw ConfigError("projector dimension mismatch");
  double idem = (p.matrix * p.matrix - p.matrix).cwiseAbs().maxCoeff();
  if (idem > tol::structural) {
    throw NumericError("measurement operator is not idempotent (error " + std::to_string(idem) +
                       ")");
  }
  Mat post = p.matrix * rho.matrix * p.matrix;
  double prob = post.trace().real();
  if (prob < 0.0 && prob > -tol::structural) prob = 0.0;
  return {prob, DensityMatrix(std::move(post), prob)};
}

void apply_pad(Vec& v, int n_qubits, int offset, int s, std::uint64_t a, std::uint64_t b,
               bool dagger) {
  if (s < 0 || offset < 0 || offset + s > n_qubits) throw ConfigError("pad does not fit register");
  if (v.size() != (Index(1) << n_qubits)) throw ConfigError("state dim does not match qubit count");
  if (s == 0) return;
  const std::uint64_t mask = (s == 64) ? ~0ull : ((1ull << s) - 1);
  if ((a & ~mask) || (b & ~mask)) throw ConfigError("pad bits exceed pad width");
  const int shift = n_qubits - offset - s;
  const std::uint64_t aflip = a << shift;
  const Index dim = v.size();

  auto phase_pass = [&] {
    if (b == 0) return;
    for (Index x = 0; x < dim; ++x) {
      if (std::popcount(b & (static_cast<std::uint64_t>(x) >> shift) & mask) & 1) v(x) = -v(x);
    }
  };
  auto flip_pass = [&] {
    if (aflip == 0) return;
    for (Index x = 0; x < dim; ++x) {
      Index y = static_cast<Index>(static_cast<std::uint64_t>(x) ^ aflip);
      if (x < y) std::swap(v(x), v(y));
    }
  };

  // X^a Z^b phases first then flips; the adjoint Z^b X^a is the reverse.
  if (!dagger) {
    phase_pass();
    flip_pass();
  } else {
    flip_pass();
    phase_pass();
  }
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t num = 1;
  for (int i = 1; i <= k; ++i) {
    num = num * (n - k + i) / i;
  }
  return num;
}

}  // namespace chrs
