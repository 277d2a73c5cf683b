#include "blockade/model.hpp"

#include <cmath>

namespace blockade {

std::string to_string(DissipationScheme scheme) {
  return scheme == DissipationScheme::two_photon ? "two_photon" : "single_photon";
}

DissipationScheme parse_scheme(const std::string& name) {
  if (name == "two_photon") return DissipationScheme::two_photon;
  if (name == "single_photon") return DissipationScheme::single_photon;
  throw ConfigError("unknown dissipation scheme '" + name + "' (expected two_photon or single_photon)");
}

Real harmonic_sine(Real phase) {
  const Real r = std::remainder(phase, std::numbers::pi);
  if (std::abs(r) <= 1e-12 * std::max<Real>(1.0, std::abs(phase))) return 0.0;
  return std::sin(phase);
}

void SystemConfig::validate() const {
  if (n_modes < 1) throw ConfigError("n_modes must be >= 1");
  if (!(gamma > 0)) throw ConfigError("gamma must be > 0");
  if (!(kappa >= 0)) throw ConfigError("kappa must be >= 0");
  if (!(epsilon >= 0)) throw ConfigError("epsilon must be >= 0");
  if (fock_cutoff < 1) throw ConfigError("fock_cutoff must be >= 1");
  if (has_detunings() && n_modes != 1)
    throw ConfigError("detuning specification is single-mode only; give omega_eg, omega_c1, omega_d for " +
                      std::to_string(n_modes) + " modes");
  if (has_frequencies()) {
    if (!(std::get<Frequencies>(frequencies).omega_c1 > 0)) throw ConfigError("omega_c1 must be > 0");
    if (harmonic_sine(k1x) == 0.0) throw ConfigError("sin(k1x) = 0: mode couplings are undefined");
  }
}

Real SystemConfig::atom_detuning() const {
  if (has_detunings()) return std::get<Detunings>(frequencies).delta_eg;
  const auto& f = std::get<Frequencies>(frequencies);
  return f.omega_eg - f.omega_d;
}

std::vector<Real> SystemConfig::cavity_detunings() const {
  if (has_detunings()) return {std::get<Detunings>(frequencies).delta_c};
  const auto& f = std::get<Frequencies>(frequencies);
  std::vector<Real> d;
  for (Real w : mode_frequencies()) d.push_back(w - f.omega_d);
  return d;
}

std::vector<Real> SystemConfig::mode_frequencies() const {
  if (has_detunings()) return {};
  const auto& f = std::get<Frequencies>(frequencies);
  std::vector<Real> w;
  for (int i = 1; i <= n_modes; ++i) w.push_back(i * f.omega_c1);
  return w;
}

std::vector<Real> SystemConfig::couplings() const {
  if (n_modes == 1) return {g1};
  return coupling_strengths(g1, k1x, n_modes);
}

HilbertSpec SystemConfig::hilbert_spec() const {
  return HilbertSpec{.n_levels = 2, .n_modes = n_modes, .fock_cutoff = fock_cutoff, .max_excitation = 2};
}

SystemConfig single_mode_config(Real delta_eg, Real delta_c, Real epsilon) {
  SystemConfig cfg;
  cfg.n_modes = 1;
  cfg.g1 = 10.0;
  cfg.epsilon = epsilon;
  cfg.frequencies = Detunings{delta_eg, delta_c};
  return cfg;
}

SystemConfig multimode_config(Real omega_eg, Real omega_c1, Real epsilon, int n_modes, Real k1x, Real g0) {
  SystemConfig cfg;
  cfg.n_modes = n_modes;
  cfg.k1x = k1x;
  cfg.g1 = g0 * harmonic_sine(k1x);
  cfg.epsilon = epsilon;
  cfg.frequencies = Frequencies{omega_eg, omega_c1, 100.0};
  return cfg;
}

std::vector<Real> coupling_strengths(Real g1, Real k1x, int n_modes) {
  const Real s1 = harmonic_sine(k1x);
  if (s1 == 0.0) throw DomainError("coupling_strengths: sin(k1x) = 0");
  std::vector<Real> g;
  g.reserve(n_modes);
  for (int i = 1; i <= n_modes; ++i) {
    if (i == 1) {
      g.push_back(g1);
    } else {
      g.push_back(std::sqrt(Real(i)) * harmonic_sine(i * k1x) / s1 * g1);
    }
  }
  return g;
}

namespace {

struct Ladder {
  Operator sigma;
  std::vector<Operator> a;
};

Ladder ladder_operators(const HilbertSpec& spec) {
  Ladder l{embed(atom_lowering(), 0, spec), {}};
  for (int i = 1; i <= spec.n_modes; ++i) l.a.push_back(embed(annihilation(spec.fock_cutoff + 1), i, spec));
  return l;
}

Operator drive_frame_hamiltonian(const SystemConfig& cfg) {
  const auto spec = cfg.hilbert_spec();
  const auto ops = ladder_operators(spec);
  const auto sd = ops.sigma.adjoint();
  const auto dc = cfg.cavity_detunings();
  const auto g = cfg.couplings();
  Operator h = Complex(cfg.atom_detuning()) * (sd * ops.sigma);
  for (int i = 0; i < cfg.n_modes; ++i) {
    const auto& a = ops.a[i];
    const auto ad = a.adjoint();
    h += Complex(dc[i]) * (ad * a);
    h += Complex(g[i]) * (sd * a + ops.sigma * ad);
    h += Complex(cfg.epsilon) * (ad + a);
  }
  return h;
}

}  // namespace

Operator single_mode_hamiltonian(const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.n_modes != 1 || !cfg.has_detunings())
    throw ConfigError("single_mode_hamiltonian needs n_modes = 1 with delta_eg and delta_c");
  return drive_frame_hamiltonian(cfg);
}

Operator multimode_hamiltonian(const SystemConfig& cfg) {
  cfg.validate();
  if (!cfg.has_frequencies())
    throw ConfigError("multimode_hamiltonian needs omega_eg, omega_c1 and omega_d");
  return drive_frame_hamiltonian(cfg);
}

Operator hamiltonian(const SystemConfig& cfg) {
  return cfg.has_detunings() ? single_mode_hamiltonian(cfg) : multimode_hamiltonian(cfg);
}

std::vector<Operator> collapse_ops(const SystemConfig& cfg) {
  cfg.validate();
  const auto ops = ladder_operators(cfg.hilbert_spec());
  std::vector<Operator> c{Complex(std::sqrt(cfg.gamma)) * ops.sigma};
  if (cfg.kappa > 0) {
    const Complex rate(std::sqrt(cfg.kappa));
    for (const auto& a : ops.a)
      c.push_back(cfg.dissipation == DissipationScheme::two_photon ? rate * (a * a) : rate * a);
  }
  return c;
}

std::vector<Real> field_coefficients(const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.has_detunings()) return {1.0};
  std::vector<Real> c;
  const auto w = cfg.mode_frequencies();
  for (int j = 1; j <= cfg.n_modes; ++j) c.push_back(std::sqrt(w[j - 1]) * harmonic_sine(j * cfg.k1x));
  return c;
}

Operator field_operator(const SystemConfig& cfg) {
  const auto spec = cfg.hilbert_spec();
  const auto coeffs = field_coefficients(cfg);
  const auto ops = ladder_operators(spec);
  Operator e = Complex(coeffs[0]) * ops.a[0];
  for (int j = 1; j < cfg.n_modes; ++j) e += Complex(coeffs[j]) * ops.a[j];
  return e;
}

Real cpb_detuning(Real delta_eg, Real g) {
  if (delta_eg == 0) throw DomainError("cpb_detuning: delta_eg = 0");
  return g * g / delta_eg;
}

Real ucpb_detuning(Real delta_eg, Real g) {
  if (delta_eg == 0) throw DomainError("ucpb_detuning: delta_eg = 0");
  return -g * g / delta_eg - delta_eg;
}

ModelOperators build_model(const SystemConfig& cfg) {
  return ModelOperators{cfg.hilbert_spec(), hamiltonian(cfg), collapse_ops(cfg), field_operator(cfg)};
}

}  // namespace blockade
