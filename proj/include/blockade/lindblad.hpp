#pragma once

#include <span>
#include <vector>

#include "blockade/fockspace.hpp"

namespace blockade {

// Vectorization is column stacking: vec(A X B) = (B^T (x) A) vec(X), and the
// element rho(i, j) lives at position i + j * D.

inline VectorXc vectorize(const MatrixXc& m) {
  return Eigen::Map<const VectorXc>(m.data(), m.size());
}

inline MatrixXc unvectorize(const VectorXc& v, Index dim) {
  return Eigen::Map<const MatrixXc>(v.data(), dim, dim);
}

/// Row functional t with t . vec(X) = Tr X.
Eigen::RowVectorXcd trace_functional(Index dim);

/// Generator of d rho / dt = L(rho) acting on column-stacked density matrices.
struct Superoperator {
  Index dim = 0;  // Hilbert dimension D; matrix is D^2 x D^2
  SparseXc matrix;

  MatrixXc apply(const MatrixXc& rho) const;
};

/// L(rho) = -i[H, rho] + sum_k (C_k rho C_k^+ - {C_k^+ C_k, rho} / 2).
/// Each collapse operator carries its own sqrt(rate).
Superoperator liouvillian(const Operator& hamiltonian, std::span<const Operator> collapses);

/// Hermitian, unit-trace matrix. Positivity is established by sanitize_density.
class DensityMatrix {
 public:
  static constexpr Real kTolerance = 1e-10;

  explicit DensityMatrix(MatrixXc m);

  const MatrixXc& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  MatrixXc m_;
};

struct SteadyStateOptions {
  Real residual_tolerance = 1e-10;
  /// Hilbert dimensions below this use a dense LU; others a sparse LU.
  Index dense_limit = 64;
};

/// Unique trace-one kernel element of L, via a direct solve with one row of L
/// replaced by the trace constraint, then sanitized.
DensityMatrix steady_state(const Superoperator& L, const SteadyStateOptions& options = {});

/// Frobenius norm of L(rho).
Real residual_norm(const Superoperator& L, const MatrixXc& rho);

/// Negative-eigenvalue truncation. The most negative eigenvalue is zeroed and
/// its mass spread evenly over the remaining nonzero eigenvalues until none is
/// negative; the trace is renormalized to one. Returns the Hermitian part of
/// the input unchanged (up to trace normalization) when it already has no
/// eigenvalue below the numerical noise floor. Throws SolverError when the
/// most negative eigenvalue is below -0.1 of the trace.
DensityMatrix sanitize_density(const MatrixXc& rho);

struct PropagateOptions {
  Real rtol = 1e-8;
  Real atol = 1e-12;
  std::size_t max_steps = 50'000'000;
};

/// rho(tau_k) for d rho / d tau = L(rho), rho(tau_0 = 0) = rho0 verbatim.
/// Adaptive Dormand-Prince 5(4) on the vectorized equation.
std::vector<MatrixXc> propagate(const Superoperator& L, const MatrixXc& rho0, std::span<const Real> tau_grid,
                                const PropagateOptions& options = {});

/// Same contract on a uniform grid, stepping with the dense propagator exp(L dt).
/// Limited to small spaces (D^2 <= 1024).
std::vector<MatrixXc> propagate_expm(const Superoperator& L, const MatrixXc& rho0, std::span<const Real> tau_grid);

}  // namespace blockade
