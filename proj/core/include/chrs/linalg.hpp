#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chrs/types.hpp"

namespace chrs {

/// Tensor product with A as the more significant factor: index i_A*dim_B + i_B.
Mat kron(const Mat& a, const Mat& b);
Vec kron(const Vec& a, const Vec& b);

std::vector<Index> qubit_dims(int n);
Index total_dim(const std::vector<Index>& dims);

/// Reorders tensor factors. order[t] is the source subsystem placed at slot t;
/// order must be a permutation of 0..dims.size()-1.
Vec permute_subsystems(const Vec& v, const std::vector<Index>& dims, const std::vector<int>& order);
Mat permute_subsystems(const Mat& m, const std::vector<Index>& dims, const std::vector<int>& order);

/// Destination flat index for every source flat index under the reordering.
std::vector<Index> permutation_map(const std::vector<Index>& dims, const std::vector<int>& order);

/// Partial trace keeping the subsystems flagged in `keep`, in layout order.
Mat partial_trace(const Mat& m, const std::vector<Index>& dims, const std::vector<bool>& keep);

DensityMatrix partial_trace(const DensityMatrix& rho, const RegisterLayout& layout,
                            const std::set<std::string>& keep);

/// Reduced density matrix of one subsystem of a pure state, without forming
/// the full outer product.
Mat reduced_density(const Vec& v, const std::vector<Index>& dims, std::size_t keep);

/// Applies a dim_k x dim_k matrix to subsystem k of a state vector.
Vec apply_to_subsystem(const Vec& v, const std::vector<Index>& dims, std::size_t k, const Mat& op);

/// Sum of absolute eigenvalues. Eigenvalues in [-1e-9, 0) are treated as 0 to
/// suppress round-off negativity in differences.
double trace_norm(const Mat& h);
double trace_norm(const HermitianOp& h);
double trace_distance(const Mat& a, const Mat& b);

/// Orthogonal projector onto the symmetric subspace of (C^d)^{tensor r},
/// built as the average of the r! permutation operators. r is capped at 4.
HermitianOp sym_projector(Index d, int r);

/// |Phi_d> = d^{-1/2} sum_i |ii> on dimension d^2.
StateVector max_entangled(Index d);

/// Projective (Lueders) update: probability tr(P rho P) and the
/// non-renormalized post state P rho P.
std::pair<double, DensityMatrix> lueders_update(const DensityMatrix& rho, const HermitianOp& p);

/// X^a Z^b on s qubits starting at `offset` of an n_qubits register, in place.
/// dagger applies Z^b X^a instead. Never materializes the matrix.
void apply_pad(Vec& v, int n_qubits, int offset, int s, std::uint64_t a, std::uint64_t b,
               bool dagger = false);

std::int64_t binomial(int n, int k);

}  // namespace chrs
