#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chrs {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Invalid parameters, caps exceeded, malformed files. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numeric contract was violated (non-Hermitian input, broken normalization, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace tol {
// structural: invariants checked on constructed objects.
// oracle: cross-checks of analytically exact quantities.
inline constexpr double structural = 1e-9;
inline constexpr double oracle = 1e-12;
}  // namespace tol

namespace caps {
/// Largest dense-operator register, in qubits. CHRS_CAP_QUBITS overrides the default 13.
int operator_qubits();
/// Dense operator dimension cap, 2^operator_qubits().
Index operator_dim();
/// Pure joint statevector dimension cap, 2^(2 * operator_qubits()).
Index state_dim();
}  // namespace caps

double hermiticity_error(const Mat& m);

/// Normalized pure state. Constructors reject vectors whose norm is off by
/// more than the structural tolerance; use normalized() to rescale instead.
struct StateVector {
  Vec amplitudes;

  explicit StateVector(Vec a);
  static StateVector normalized(Vec a);

  Index dim() const { return amplitudes.size(); }
  Mat density() const { return amplitudes * amplitudes.adjoint(); }
};

/// Hermitian PSD operator with declared trace mass (1 for normalized states,
/// less for sub-normalized post-measurement states). Hermiticity, the PSD
/// floor and the trace are asserted at construction.
struct DensityMatrix {
  Mat matrix;
  double trace_mass = 1.0;

  explicit DensityMatrix(Mat m, double trace_mass = 1.0, double tolerance = tol::structural);

  Index dim() const { return matrix.rows(); }
};

struct HermitianOp {
  Mat matrix;

  explicit HermitianOp(Mat m, double tolerance = tol::structural);

  Index dim() const { return matrix.rows(); }
};

/// Ordered subsystem structure: subsystem 0 is the most significant index
/// factor, so kron(A, B) indexes as i_A * dim_B + i_B and "first s qubits"
/// always means subsystems 0..s-1.
struct RegisterLayout {
  struct Subsystem {
    std::string label;
    Index dim;
  };

  std::vector<Subsystem> subsystems;

  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Subsystem> subs);

  static RegisterLayout qubits(int n, const std::string& prefix = "q");

  Index total_dim() const;
  std::vector<Index> dims() const;
  std::size_t position(const std::string& label) const;
  std::size_t size() const { return subsystems.size(); }
};

}  // namespace chrs
