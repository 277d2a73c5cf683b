#include "blockade/weakdrive.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace blockade {

void AmplitudeSolution::build_index() {
  index_.clear();
  for (std::size_t k = 0; k < basis.size(); ++k) index_.emplace(basis[k], k);
}

std::size_t AmplitudeSolution::index_of(const BasisState& state) const {
  auto it = index_.find(state);
  if (it == index_.end()) throw InvalidArgument("state " + to_ket(state) + " is not in the capped basis");
  return it->second;
}

Complex AmplitudeSolution::amplitude(const BasisState& state) const { return amplitudes[index_of(state)]; }

Real analytic_g2_single(Real delta_eg, Real delta_c, Real g, Real gamma, Real kappa) {
  const Complex dp(delta_eg, -gamma / 2);
  const Complex g2 = g * g;
  const Real a = std::norm(dp);
  const Complex pair = g2 - (dp + delta_c) * (delta_c - I * (kappa / 2));
  if (a == 0 || std::abs(pair) == 0) throw DomainError("analytic_g2_single: singular input (a denominator factor vanishes)");
  const Real num = std::norm((g2 - dp * delta_c) * (dp * dp + dp * delta_c + g2));
  return num / (a * a * std::norm(pair));
}

namespace {

Real mode_loss(DissipationScheme scheme, Real kappa, int n) {
  return scheme == DissipationScheme::two_photon ? kappa / 2 * n * (n - 1) : kappa / 2 * n;
}

std::string describe(const WeakDriveParams& p) {
  std::ostringstream os;
  os << "n_modes=" << p.n_modes() << " delta_eg=" << p.delta_eg << " delta_c=[";
  for (std::size_t i = 0; i < p.delta_c.size(); ++i) os << (i ? "," : "") << p.delta_c[i];
  os << "] g=[";
  for (std::size_t i = 0; i < p.g.size(); ++i) os << (i ? "," : "") << p.g[i];
  os << "] epsilon=" << p.epsilon;
  return os.str();
}

AmplitudeSolution make_solution(int n_modes) {
  AmplitudeSolution sol;
  sol.n_modes = n_modes;
  sol.basis = enumerate_basis(2, n_modes, 2);
  sol.amplitudes.assign(sol.basis.size(), Complex(0));
  for (const auto& s : sol.basis) sol.drive_order.push_back(s.excitation());
  sol.build_index();
  return sol;
}

// Solves [[a, b], [c, d]] x = r.
std::pair<Complex, Complex> solve2(Complex a, Complex b, Complex c, Complex d, Complex r0, Complex r1,
                                   const WeakDriveParams& p) {
  const Complex det = a * d - b * c;
  const Real scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), Real(1e-300)});
  if (std::abs(det) <= 1e-14 * scale * scale)
    throw SolverError("weak-drive amplitude system is singular at " + describe(p));
  return {(d * r0 - b * r1) / det, (a * r1 - c * r0) / det};
}

}  // namespace

WeakDriveParams weak_drive_params(const SystemConfig& cfg) {
  cfg.validate();
  return WeakDriveParams{cfg.atom_detuning(), cfg.cavity_detunings(), cfg.couplings(), cfg.gamma,
                         cfg.kappa,           cfg.epsilon,           cfg.dissipation};
}

MatrixXc weak_drive_hamiltonian(const WeakDriveParams& p, const std::vector<BasisState>& basis) {
  if (p.g.size() != p.delta_c.size()) throw InvalidArgument("weak_drive_hamiltonian: one coupling per mode expected");
  std::map<BasisState, Index> idx;
  for (std::size_t k = 0; k < basis.size(); ++k) idx.emplace(basis[k], static_cast<Index>(k));
  const Index n = static_cast<Index>(basis.size());
  MatrixXc h = MatrixXc::Zero(n, n);

  for (Index k = 0; k < n; ++k) {
    const auto& s = basis[k];
    if (static_cast<int>(s.occupations.size()) != p.n_modes())
      throw InvalidArgument("weak_drive_hamiltonian: basis and parameters disagree on the mode count");
    Complex diag = Real(s.atom_level) * Complex(p.delta_eg, -p.gamma / 2);
    for (int i = 0; i < p.n_modes(); ++i)
      diag += p.delta_c[i] * Real(s.occupations[i]) - I * mode_loss(p.dissipation, p.kappa, s.occupations[i]);
    h(k, k) = diag;

    for (int i = 0; i < p.n_modes(); ++i) {
      const int ni = s.occupations[i];
      // a_i^+ |s> with amplitude sqrt(n_i + 1): drive epsilon and, from the excited atom, g_i sigma a_i^+.
      BasisState up = s;
      up.occupations[i] += 1;
      if (auto it = idx.find(up); it != idx.end()) {
        h(it->second, k) += p.epsilon * std::sqrt(Real(ni + 1));
        h(k, it->second) += p.epsilon * std::sqrt(Real(ni + 1));
      }
      if (s.atom_level == 1) {
        BasisState down = up;
        down.atom_level = 0;
        if (auto it = idx.find(down); it != idx.end()) {
          h(it->second, k) += p.g[i] * std::sqrt(Real(ni + 1));
          h(k, it->second) += p.g[i] * std::sqrt(Real(ni + 1));
        }
      }
    }
  }
  return h;
}

AmplitudeSolution amplitude_steady_single(const SystemConfig& cfg) {
  if (cfg.n_modes != 1) throw ConfigError("amplitude_steady_single needs n_modes = 1");
  const WeakDriveParams p = weak_drive_params(cfg);
  const Complex dp(p.delta_eg, -p.gamma / 2);
  const Real dc = p.delta_c[0];
  const Real g = p.g[0];
  const Real eps = p.epsilon;
  const Real s2 = std::sqrt(2.0);
  const Complex d1 = dc - I * mode_loss(p.dissipation, p.kappa, 1);
  const Complex d2 = 2 * dc - I * mode_loss(p.dissipation, p.kappa, 2);

  // 0 = d1 C_g1 + g C_e0 + eps C_g0;  0 = g C_g1 + dp C_e0
  const auto [cg1, ce0] = solve2(d1, g, g, dp, -eps, 0.0, p);
  // 0 = d2 C_g2 + s2 g C_e1 + s2 eps C_g1;  0 = s2 g C_g2 + (dp + d1) C_e1 + eps C_e0
  const auto [cg2, ce1] = solve2(d2, s2 * g, s2 * g, dp + d1, -s2 * eps * cg1, -eps * ce0, p);

  AmplitudeSolution sol = make_solution(1);
  sol.amplitudes[sol.index_of({0, {0}})] = 1.0;
  sol.amplitudes[sol.index_of({0, {1}})] = cg1;
  sol.amplitudes[sol.index_of({1, {0}})] = ce0;
  sol.amplitudes[sol.index_of({0, {2}})] = cg2;
  sol.amplitudes[sol.index_of({1, {1}})] = ce1;
  return sol;
}

AmplitudeSolution amplitude_steady_multimode(const SystemConfig& cfg) {
  return amplitude_steady_multimode(weak_drive_params(cfg));
}

AmplitudeSolution amplitude_steady_multimode(const WeakDriveParams& p) {
  AmplitudeSolution sol = make_solution(p.n_modes());
  const MatrixXc h = weak_drive_hamiltonian(p, sol.basis);
  const Index n = static_cast<Index>(sol.basis.size());
  VectorXc c = VectorXc::Zero(n);
  c(0) = 1.0;

  for (int sector = 1; sector <= 2; ++sector) {
    std::vector<Index> rows, lower;
    for (Index k = 0; k < n; ++k) {
      if (sol.drive_order[k] == sector) rows.push_back(k);
      if (sol.drive_order[k] == sector - 1) lower.push_back(k);
    }
    const Index m = static_cast<Index>(rows.size());
    MatrixXc a(m, m);
    VectorXc rhs = VectorXc::Zero(m);
    for (Index r = 0; r < m; ++r) {
      for (Index col = 0; col < m; ++col) a(r, col) = h(rows[r], rows[col]);
      for (Index l : lower) rhs(r) -= h(rows[r], l) * c(l);
    }
    Eigen::FullPivLU<MatrixXc> lu(a);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible())
      throw SolverError("weak-drive amplitude system is singular in sector " + std::to_string(sector) + " at " +
                        describe(p));
    const VectorXc x = lu.solve(rhs);
    for (Index r = 0; r < m; ++r) c(rows[r]) = x(r);
  }
  for (Index k = 0; k < n; ++k) sol.amplitudes[k] = c(k);
  return sol;
}

}  // namespace blockade
