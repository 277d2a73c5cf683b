#include "blockade/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace blockade {

Eigen::RowVectorXcd trace_functional(Index dim) {
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(dim * dim);
  for (Index i = 0; i < dim; ++i) t(i + i * dim) = 1.0;
  return t;
}

MatrixXc Superoperator::apply(const MatrixXc& rho) const {
  if (rho.rows() != dim || rho.cols() != dim) throw InvalidArgument("superoperator applied to a matrix of wrong size");
  return unvectorize(matrix * vectorize(rho), dim);
}

Superoperator liouvillian(const Operator& hamiltonian, std::span<const Operator> collapses) {
  const Index d = hamiltonian.rows();
  for (const auto& c : collapses)
    if (c.dims() != hamiltonian.dims())
      throw InvalidArgument("collapse operator and Hamiltonian act on different spaces");

  SparseXc id(d, d);
  id.setIdentity();
  const SparseXc h = hamiltonian.sparse();
  const SparseXc ht = SparseXc(h.transpose());

  SparseXc l = SparseXc(-I * Eigen::kroneckerProduct(id, h).eval()) +
               SparseXc(I * Eigen::kroneckerProduct(ht, id).eval());
  for (const auto& op : collapses) {
    const SparseXc c = op.sparse();
    const SparseXc cdc = SparseXc(c.adjoint() * c);
    const SparseXc cdct = SparseXc(cdc.transpose());
    l += SparseXc(Eigen::kroneckerProduct(SparseXc(c.conjugate()), c).eval());
    l -= SparseXc(0.5 * Eigen::kroneckerProduct(id, cdc).eval());
    l -= SparseXc(0.5 * Eigen::kroneckerProduct(cdct, id).eval());
  }
  l.prune(Complex(0), 0.0);
  l.makeCompressed();
  return Superoperator{d, std::move(l)};
}

DensityMatrix::DensityMatrix(MatrixXc m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw InvalidArgument("density matrix must be square and non-empty");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kTolerance)
    throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(m_.trace() - Complex(1.0)) > kTolerance) throw InvalidArgument("density matrix trace is not 1");
}

Real residual_norm(const Superoperator& L, const MatrixXc& rho) { return L.apply(rho).norm(); }

namespace {

// Row 0 of L is the equation for d rho_00 / dt; it is replaced by Tr rho = 1.
SparseXc trace_constrained(const Superoperator& L) {
  const Index d = L.dim;
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(L.matrix.nonZeros() + d);
  for (Index k = 0; k < L.matrix.outerSize(); ++k)
    for (SparseXc::InnerIterator it(L.matrix, k); it; ++it)
      if (it.row() != 0) triplets.emplace_back(it.row(), it.col(), it.value());
  for (Index i = 0; i < d; ++i) triplets.emplace_back(0, i + i * d, 1.0);
  SparseXc a(d * d, d * d);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

std::string residual_message(const char* what, Real residual) {
  std::ostringstream os;
  os << what << " (residual |L rho|_F = " << residual << ")";
  return os.str();
}

}  // namespace

DensityMatrix steady_state(const Superoperator& L, const SteadyStateOptions& options) {
  const Index n = L.dim * L.dim;
  const SparseXc a = trace_constrained(L);
  VectorXc b = VectorXc::Zero(n);
  b(0) = 1.0;

  VectorXc x;
  if (L.dim < options.dense_limit) {
    const MatrixXc dense(a);
    Eigen::PartialPivLU<MatrixXc> lu(dense);
    const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
    if (!(lu.rcond() > 1e-15) || !(pivots.minCoeff() > 1e-14 * pivots.maxCoeff()))
      throw DegeneracyError("steady state is not unique: trace-constrained Liouvillian is singular");
    x = lu.solve(b);
    for (int pass = 0; pass < 2; ++pass) x += lu.solve(VectorXc(b - dense * x));
  } else {
    Eigen::SparseLU<SparseXc, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success)
      throw DegeneracyError("steady state is not unique: sparse LU of the trace-constrained Liouvillian failed");
    x = lu.solve(b);
    for (int pass = 0; pass < 2; ++pass) x += lu.solve(VectorXc(b - a * x));
  }
  if (!x.allFinite()) throw DegeneracyError("steady state solve produced non-finite values");

  MatrixXc rho = unvectorize(x, L.dim);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  const Real residual = residual_norm(L, rho);
  if (!(residual < options.residual_tolerance))
    throw SolverError(residual_message("steady state residual above tolerance", residual));
  return sanitize_density(rho);
}

DensityMatrix sanitize_density(const MatrixXc& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw InvalidArgument("sanitize_density: matrix must be square");
  const Real scale = std::max<Real>(1.0, rho.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw InvalidArgument("sanitize_density: input is not Hermitian");
  const MatrixXc herm = 0.5 * (rho + rho.adjoint());
  const Real trace = herm.trace().real();
  if (!(trace > 0)) throw SolverError("sanitize_density: non-positive trace");

  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(herm);
  Eigen::VectorXd lambda = eig.eigenvalues();  // ascending
  const Real noise = 64 * std::numeric_limits<Real>::epsilon() * lambda.cwiseAbs().maxCoeff();
  if (lambda(0) >= -noise) return DensityMatrix(MatrixXc(herm / trace));
  if (lambda(0) < -0.1 * trace) {
    std::ostringstream os;
    os << "sanitize_density: eigenvalue " << lambda(0) / trace
       << " (relative to the trace) is below -0.1; upstream solve failed";
    throw SolverError(os.str());
  }

  std::vector<bool> active(lambda.size(), true);
  for (;;) {
    Index worst = -1;
    for (Index i = 0; i < lambda.size(); ++i)
      if (active[i] && (worst < 0 || lambda(i) < lambda(worst))) worst = i;
    if (worst < 0 || lambda(worst) >= 0) break;
    const Real mass = lambda(worst);
    lambda(worst) = 0;
    active[worst] = false;
    const auto remaining = std::count(active.begin(), active.end(), true);
    if (remaining == 0) break;
    for (Index i = 0; i < lambda.size(); ++i)
      if (active[i]) lambda(i) += mass / static_cast<Real>(remaining);
  }
  const MatrixXc& v = eig.eigenvectors();
  MatrixXc out = v * lambda.cast<Complex>().asDiagonal() * v.adjoint();
  out = (0.5 * (out + out.adjoint())).eval();
  out /= out.trace().real();
  return DensityMatrix(std::move(out));
}

namespace {

void check_grid(std::span<const Real> tau_grid) {
  if (tau_grid.empty() || tau_grid.front() != 0.0) throw InvalidArgument("tau grid must start at 0");
  for (std::size_t k = 1; k < tau_grid.size(); ++k)
    if (!(tau_grid[k] > tau_grid[k - 1])) throw InvalidArgument("tau grid must be strictly ascending");
}

// Dormand-Prince 5(4) tableau.
constexpr Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr Real a21 = 1.0 / 5;
constexpr Real a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr Real a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr Real a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr Real a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
               a65 = -5103.0 / 18656;
constexpr Real b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr Real e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
               e7 = -1.0 / 40;

class DormandPrince {
 public:
  DormandPrince(const SparseXc& m, const PropagateOptions& opt) : m_(m), opt_(opt) {}

  void init(const VectorXc& y) {
    y_ = y;
    k1_ = m_ * y_;
    // Hairer's starting-step heuristic.
    const Real d0 = scaled_norm(y_, y_), d1 = scaled_norm(k1_, y_);
    h_ = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    const VectorXc y1 = y_ + h_ * k1_;
    const Real d2 = scaled_norm(VectorXc(m_ * y1 - k1_), y_) / h_;
    const Real h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h_ * 1e-3) : std::pow(0.01 / std::max(d1, d2), 0.2);
    h_ = std::min(100 * h_, h1);
  }

  // Advances y from t0 to t1 exactly.
  void advance(Real t0, Real t1) {
    Real t = t0;
    while (t < t1) {
      if (++steps_ > opt_.max_steps) throw IntegrationError("propagate: step budget exhausted", t);
      const bool last = t + h_ >= t1;
      const Real h = last ? t1 - t : h_;
      if (h < 16 * std::numeric_limits<Real>::epsilon() * std::max<Real>(1.0, std::abs(t)))
        throw IntegrationError("propagate: step size underflow at tau = " + std::to_string(t), t);

      const VectorXc k2 = m_ * VectorXc(y_ + h * (a21 * k1_));
      const VectorXc k3 = m_ * VectorXc(y_ + h * (a31 * k1_ + a32 * k2));
      const VectorXc k4 = m_ * VectorXc(y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3));
      const VectorXc k5 = m_ * VectorXc(y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
      const VectorXc k6 = m_ * VectorXc(y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      VectorXc ynew = y_ + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      VectorXc k7 = m_ * ynew;
      const VectorXc err = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      Real en = 0;
      for (Index i = 0; i < err.size(); ++i) {
        const Real sc = opt_.atol + opt_.rtol * std::max(std::abs(y_(i)), std::abs(ynew(i)));
        en += std::norm(err(i)) / (sc * sc);
      }
      en = std::sqrt(en / static_cast<Real>(err.size()));
      if (!std::isfinite(en)) throw IntegrationError("propagate: non-finite error estimate", t);

      const Real factor = en == 0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (en <= 1.0) {
        t = last ? t1 : t + h;
        y_ = std::move(ynew);
        k1_ = std::move(k7);
        // A step clipped to land on t1 does not shrink the proposal.
        if (!last || h >= h_) h_ = h * factor;
      } else {
        h_ = h * std::min(1.0, factor);
      }
    }
  }

  const VectorXc& state() const { return y_; }

 private:
  Real scaled_norm(const VectorXc& v, const VectorXc& ref) const {
    Real s = 0;
    for (Index i = 0; i < v.size(); ++i) {
      const Real sc = opt_.atol + opt_.rtol * std::abs(ref(i));
      s += std::norm(v(i)) / (sc * sc);
    }
    return std::sqrt(s / static_cast<Real>(v.size()));
  }

  const SparseXc& m_;
  PropagateOptions opt_;
  VectorXc y_, k1_;
  Real h_ = 0;
  std::size_t steps_ = 0;
};

}  // namespace

std::vector<MatrixXc> propagate(const Superoperator& L, const MatrixXc& rho0, std::span<const Real> tau_grid,
                                const PropagateOptions& options) {
  check_grid(tau_grid);
  if (rho0.rows() != L.dim || rho0.cols() != L.dim) throw InvalidArgument("propagate: initial state has wrong size");
  std::vector<MatrixXc> out;
  out.reserve(tau_grid.size());
  out.push_back(rho0);
  if (tau_grid.size() == 1) return out;

  DormandPrince dp(L.matrix, options);
  dp.init(vectorize(rho0));
  for (std::size_t k = 1; k < tau_grid.size(); ++k) {
    dp.advance(tau_grid[k - 1], tau_grid[k]);
    out.push_back(unvectorize(dp.state(), L.dim));
  }
  return out;
}

std::vector<MatrixXc> propagate_expm(const Superoperator& L, const MatrixXc& rho0, std::span<const Real> tau_grid) {
  check_grid(tau_grid);
  if (L.dim * L.dim > 1024) throw InvalidArgument("propagate_expm: space too large for a dense propagator");
  if (rho0.rows() != L.dim || rho0.cols() != L.dim) throw InvalidArgument("propagate_expm: initial state has wrong size");
  std::vector<MatrixXc> out{rho0};
  if (tau_grid.size() == 1) return out;
  const Real dt = tau_grid[1] - tau_grid[0];
  for (std::size_t k = 1; k < tau_grid.size(); ++k)
    if (std::abs((tau_grid[k] - tau_grid[k - 1]) - dt) > 1e-9 * dt)
      throw InvalidArgument("propagate_expm: tau grid is not uniform");

  const MatrixXc step = (MatrixXc(L.matrix) * Complex(dt)).exp();
  VectorXc v = vectorize(rho0);
  for (std::size_t k = 1; k < tau_grid.size(); ++k) {
    v = step * v;
    out.push_back(unvectorize(v, L.dim));
  }
  return out;
}

}  // namespace blockade
