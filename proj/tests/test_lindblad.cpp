#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "blockade/correlate.hpp"
#include "blockade/lindblad.hpp"
#include "blockade/model.hpp"

using namespace blockade;

namespace {

MatrixXc random_complex(Index n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  MatrixXc m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
  return m;
}

MatrixXc random_density(Index n, std::mt19937& rng) {
  const MatrixXc a = random_complex(n, rng);
  MatrixXc r = a * a.adjoint();
  return r / r.trace();
}

MatrixXc random_hermitian(Index n, std::mt19937& rng) {
  const MatrixXc a = random_complex(n, rng);
  return 0.5 * (a + a.adjoint());
}

// Direct evaluation of the master-equation right-hand side.
MatrixXc lindblad_rhs(const MatrixXc& h, const std::vector<MatrixXc>& cs, const MatrixXc& rho) {
  MatrixXc out = -I * (h * rho - rho * h);
  for (const auto& c : cs) {
    const MatrixXc cdc = c.adjoint() * c;
    out += c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
  }
  return out;
}

Superoperator model_liouvillian(const SystemConfig& cfg) {
  const auto m = build_model(cfg);
  return liouvillian(m.hamiltonian, m.collapse_ops);
}

Superoperator decay() {
  const std::vector<Operator> c{Complex(1.0) * atom_lowering()};
  return liouvillian(Operator(MatrixXc(MatrixXc::Zero(2, 2))), c);
}

MatrixXc excited() {
  MatrixXc e = MatrixXc::Zero(2, 2);
  e(1, 1) = 1;
  return e;
}

}  // namespace

TEST(Vectorization, ColumnStacking) {
  MatrixXc m(2, 2);
  m << 1, 2, 3, 4;
  const VectorXc v = vectorize(m);
  EXPECT_EQ(v(1), Complex(3));
  EXPECT_EQ(v(2), Complex(2));
  EXPECT_EQ(unvectorize(v, 2), m);
}

TEST(Liouvillian, ZeroGenerator) {
  const auto L = liouvillian(Operator(MatrixXc(MatrixXc::Zero(3, 3))), {});
  EXPECT_EQ(L.matrix.nonZeros(), 0);
  EXPECT_EQ(L.dim, 3);
}

TEST(Liouvillian, PureDecay) {
  const MatrixXc out = decay().apply(excited());
  MatrixXc expect = MatrixXc::Zero(2, 2);
  expect(0, 0) = 1;
  expect(1, 1) = -1;
  EXPECT_LT((out - expect).norm(), 1e-15);
}

TEST(Liouvillian, MatchesDirectFormula) {
  std::mt19937 rng(3);
  const Operator h({2, 3}, MatrixXc(random_hermitian(6, rng)));
  const Operator c1({2, 3}, MatrixXc(random_complex(6, rng)));
  const Operator c2({2, 3}, MatrixXc(random_complex(6, rng)));
  const std::vector<Operator> cs{c1, c2};
  const auto L = liouvillian(h, cs);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXc rho = random_density(6, rng);
    const MatrixXc expect = lindblad_rhs(h.dense(), {c1.dense(), c2.dense()}, rho);
    EXPECT_LT((L.apply(rho) - expect).norm(), 1e-12 * expect.norm());
  }
}

TEST(Liouvillian, MismatchedOperators) {
  const std::vector<Operator> c{annihilation(3)};
  EXPECT_THROW(liouvillian(atom_lowering(), c), InvalidArgument);
}

TEST(Liouvillian, TraceAnnihilation) {
  std::mt19937 rng(5);
  for (const auto& cfg : {single_mode_config(10, 10), single_mode_config(50, -52, 0.01),
                          multimode_config(108.5, 108.5, 0.005)}) {
    const auto L = model_liouvillian(cfg);
    const MatrixXc dense(L.matrix);
    EXPECT_LT((trace_functional(L.dim) * dense).norm(), 1e-10 * dense.norm());
    for (int k = 0; k < 100; ++k) {
      const MatrixXc rho = random_hermitian(L.dim, rng);
      const MatrixXc out = L.apply(rho);
      EXPECT_LT(std::abs(out.trace()), 1e-10 * out.norm() + 1e-14);
      EXPECT_LT((out - out.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, out.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(Liouvillian, Dissipative) {
  for (auto [a, b] : std::vector<std::pair<Real, Real>>{{10, 10}, {100, 1}, {10, -20}, {50, -52}, {50, 50}, {50, 0}}) {
    const auto L = model_liouvillian(single_mode_config(a, b, 0.001));
    Eigen::ComplexEigenSolver<MatrixXc> es(MatrixXc(L.matrix), false);
    EXPECT_LE(es.eigenvalues().real().maxCoeff(), 1e-10);
  }
}

TEST(DensityMatrixType, Validation) {
  EXPECT_NO_THROW(DensityMatrix(MatrixXc(MatrixXc::Identity(2, 2) / 2.0)));
  EXPECT_THROW(DensityMatrix(MatrixXc(MatrixXc::Identity(2, 2))), InvalidArgument);
  MatrixXc m = MatrixXc::Identity(2, 2) / 2.0;
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{m}, InvalidArgument);
}

TEST(SteadyState, PureDecayGoesToGround) {
  const auto rho = steady_state(decay());
  MatrixXc g = MatrixXc::Zero(2, 2);
  g(0, 0) = 1;
  EXPECT_LT((rho.matrix() - g).norm(), 1e-12);
}

TEST(SteadyState, UndrivenIsVacuum) {
  for (const auto& cfg : {single_mode_config(10, 10, 0.0), multimode_config(108.5, 108.5, 0.0)}) {
    const auto rho = steady_state(model_liouvillian(cfg));
    MatrixXc g = MatrixXc::Zero(rho.dim(), rho.dim());
    g(0, 0) = 1;
    EXPECT_LT((rho.matrix() - g).norm(), 1e-10);
  }
}

TEST(SteadyState, ResidualAndInvariants) {
  for (auto [a, b] : std::vector<std::pair<Real, Real>>{{10, 10}, {100, 1}, {10, -20}, {50, 0}}) {
    for (Real eps : {0.001, 0.005, 0.01}) {
      const auto L = model_liouvillian(single_mode_config(a, b, eps));
      const auto rho = steady_state(L);
      EXPECT_LT(residual_norm(L, rho.matrix()), 1e-10);
      EXPECT_NEAR(rho.matrix().trace().real(), 1, 1e-12);
      Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho.matrix());
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
  }
}

TEST(SteadyState, TableValue) {
  const auto cfg = single_mode_config(10, 10, 0.001);
  const auto m = build_model(cfg);
  const auto rho = steady_state(liouvillian(m.hamiltonian, m.collapse_ops));
  EXPECT_NEAR(g2_zero(rho, m.field_op), 0.0220, 0.02 * 0.0220);
}

TEST(SteadyState, SparseAndDensePathsAgree) {
  const auto L = model_liouvillian(single_mode_config(10, -20, 0.005));
  const auto dense = steady_state(L);
  const auto sparse = steady_state(L, SteadyStateOptions{1e-10, 1});
  EXPECT_LT((dense.matrix() - sparse.matrix()).norm(), 1e-12);
}

TEST(SteadyState, DegenerateKernel) {
  // Without coupling or drive, |g,1> is dark to two-photon loss.
  SystemConfig cfg = single_mode_config(10, 10, 0.0);
  cfg.g1 = 0;
  EXPECT_THROW(steady_state(model_liouvillian(cfg)), DegeneracyError);
  EXPECT_THROW(steady_state(model_liouvillian(cfg), SteadyStateOptions{1e-10, 1}), SolverError);
}

TEST(Sanitize, PositiveInputIsFixedPoint) {
  std::mt19937 rng(13);
  for (int k = 0; k < 20; ++k) {
    const MatrixXc rho = random_density(5, rng);
    EXPECT_LT((sanitize_density(rho).matrix() - rho).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Sanitize, HandExecutedDiagonal) {
  const MatrixXc rho = Eigen::Vector3cd(0.7, 0.4, -0.1).asDiagonal();
  const MatrixXc out = sanitize_density(rho).matrix();
  const MatrixXc expect = Eigen::Vector3cd(0.65, 0.35, 0.0).asDiagonal();
  EXPECT_LT((out - expect).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Sanitize, RotatedDiagonal) {
  std::mt19937 rng(17);
  Eigen::HouseholderQR<MatrixXc> qr(random_complex(3, rng));
  const MatrixXc u = qr.householderQ();
  const MatrixXc d = Eigen::Vector3cd(0.7, 0.4, -0.1).asDiagonal();
  const MatrixXc e = Eigen::Vector3cd(0.65, 0.35, 0.0).asDiagonal();
  const MatrixXc out = sanitize_density(u * d * u.adjoint()).matrix();
  EXPECT_LT((out - u * e * u.adjoint()).norm(), 1e-13);
}

TEST(Sanitize, CascadingNegativity) {
  // After spreading -0.08 over three, 0.02 turns negative and is zeroed next.
  const MatrixXc rho = Eigen::Vector4cd(0.66, 0.4, 0.02, -0.08).asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(sanitize_density(rho).matrix());
  const Eigen::VectorXd ev = es.eigenvalues();
  EXPECT_NEAR(ev(0), 0, 1e-14);
  EXPECT_NEAR(ev(1), 0, 1e-14);
  EXPECT_NEAR(ev(2), 0.37, 1e-14);
  EXPECT_NEAR(ev(3), 0.63, 1e-14);
}

TEST(Sanitize, RandomPerturbedInputs) {
  std::mt19937 rng(19);
  std::normal_distribution<double> noise(0, 1e-3);
  for (int k = 0; k < 100; ++k) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> base(random_density(6, rng));
    Eigen::VectorXd ev = base.eigenvalues();
    ev(0) = 0;
    const MatrixXc rho = base.eigenvectors() * ev.cast<Complex>().asDiagonal() * base.eigenvectors().adjoint();
    MatrixXc p = random_hermitian(6, rng) * noise(rng);
    MatrixXc in = rho + p;
    in = 0.5 * (in + in.adjoint()).eval();
    const auto out = sanitize_density(in);
    EXPECT_NEAR(out.matrix().trace().real(), 1, 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(out.matrix());
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
  }
}

TEST(Sanitize, Refusals) {
  const MatrixXc gross = Eigen::Vector3cd(0.8, 0.5, -0.3).asDiagonal();
  EXPECT_THROW(sanitize_density(gross), SolverError);
  MatrixXc skew = MatrixXc::Identity(2, 2) / 2.0;
  skew(0, 1) = 0.2;
  EXPECT_THROW(sanitize_density(skew), InvalidArgument);
}

TEST(Propagate, ZeroGeneratorIsConstant) {
  const auto L = liouvillian(Operator(MatrixXc(MatrixXc::Zero(2, 2))), {});
  const std::vector<Real> grid{0, 0.5, 1, 5};
  const MatrixXc rho = excited();
  for (const auto& r : propagate(L, rho, grid)) EXPECT_EQ(r, rho);
}

TEST(Propagate, ExponentialDecay) {
  const std::vector<Real> grid{0, 0.5, 1, 2};
  const auto out = propagate(decay(), excited(), grid);
  EXPECT_EQ(out[0], excited());
  for (std::size_t k = 1; k < grid.size(); ++k) EXPECT_NEAR(out[k](1, 1).real(), std::exp(-grid[k]), 1e-6);
}

TEST(Propagate, SteadyStateIsFixedPoint) {
  const auto L = model_liouvillian(single_mode_config(10, 10, 0.001));
  const auto rho = steady_state(L);
  const auto grid = uniform_grid(5, 0.5);
  for (const auto& r : propagate(L, rho.matrix(), grid)) EXPECT_LT((r - rho.matrix()).norm(), 1e-8);
}

TEST(Propagate, TraceAndSplitting) {
  const auto L = model_liouvillian(single_mode_config(8.9618, -19.4236, 0.005));
  const auto m = build_model(single_mode_config(8.9618, -19.4236, 0.005));
  const auto rho = steady_state(L);
  const MatrixXc a = m.field_op.dense();
  MatrixXc start = a * rho.matrix() * a.adjoint();
  start /= start.trace();
  const Real tau = 3.0;
  const std::vector<Real> whole{0, tau};
  const std::vector<Real> half{0, tau / 2};
  const auto direct = propagate(L, start, whole);
  const auto first = propagate(L, start, half);
  const auto second = propagate(L, first[1], half);
  EXPECT_LT((direct[1] - second[1]).norm(), 1e-7);
  for (const auto& r : propagate(L, start, uniform_grid(10, 0.25))) EXPECT_NEAR(r.trace().real(), 1, 1e-8);
}

TEST(Propagate, ExpmAgreesWithIntegrator) {
  const auto L = model_liouvillian(single_mode_config(10, 10, 0.00172));
  const auto m = build_model(single_mode_config(10, 10, 0.00172));
  const auto rho = steady_state(L);
  const MatrixXc a = m.field_op.dense();
  MatrixXc start = a * rho.matrix() * a.adjoint();
  start /= start.trace();
  const auto grid = uniform_grid(4, 0.01);
  const auto ode = propagate(L, start, grid);
  const auto ex = propagate_expm(L, start, grid);
  Real worst = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) worst = std::max(worst, (ode[k] - ex[k]).norm());
  EXPECT_LT(worst, 1e-7);
}

TEST(Propagate, GridAndSizeErrors) {
  const auto L = decay();
  EXPECT_THROW(propagate(L, excited(), std::vector<Real>{0.1, 1}), InvalidArgument);
  EXPECT_THROW(propagate(L, excited(), std::vector<Real>{0, 1, 1}), InvalidArgument);
  EXPECT_THROW(propagate(L, MatrixXc(MatrixXc::Zero(3, 3)), std::vector<Real>{0, 1}), InvalidArgument);
  EXPECT_THROW(propagate_expm(L, excited(), std::vector<Real>{0, 1, 3}), InvalidArgument);
  EXPECT_THROW(propagate_expm(model_liouvillian(multimode_config(108.5, 108.5)), MatrixXc::Zero(54, 54),
                              std::vector<Real>{0, 1}),
               InvalidArgument);
}

TEST(Propagate, StepBudgetReportsTau) {
  const auto L = model_liouvillian(single_mode_config(10, 10, 0.001));
  PropagateOptions opt;
  opt.max_steps = 20;
  MatrixXc start = MatrixXc::Zero(6, 6);
  start(3, 3) = 1;
  try {
    propagate(L, start, uniform_grid(20, 1), opt);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_GT(e.tau(), 0);
    EXPECT_LT(e.tau(), 20);
  }
}
