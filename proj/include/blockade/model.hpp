#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blockade/fockspace.hpp"

namespace blockade {

enum class DissipationScheme { two_photon, single_photon };

std::string to_string(DissipationScheme scheme);
DissipationScheme parse_scheme(const std::string& name);

/// Rotating-frame detunings, single mode.
struct Detunings {
  Real delta_eg = 10.0;
  Real delta_c = 10.0;
};

/// Absolute frequencies; mode i sits at i * omega_c1.
struct Frequencies {
  Real omega_eg = 108.5;
  Real omega_c1 = 108.5;
  Real omega_d = 100.0;
};

/// Physical parameters. All rates and frequencies are in units of gamma.
struct SystemConfig {
  int n_modes = 1;
  Real gamma = 1.0;
  Real kappa = 1.0;
  /// Coupling to the fundamental mode.
  Real g1 = 10.0;
  /// Atom position phase k_1 x; mode i sees i * k1x.
  Real k1x = std::numbers::pi / 4;
  Real epsilon = 0.001;
  std::variant<Detunings, Frequencies> frequencies = Detunings{};
  DissipationScheme dissipation = DissipationScheme::two_photon;
  /// Photons per mode in the master-equation space.
  int fock_cutoff = 2;

  void validate() const;
  bool has_detunings() const { return std::holds_alternative<Detunings>(frequencies); }
  bool has_frequencies() const { return std::holds_alternative<Frequencies>(frequencies); }

  Real atom_detuning() const;
  /// Delta_ci = omega_i - omega_d, or the single configured delta_c.
  std::vector<Real> cavity_detunings() const;
  /// omega_i = i * omega_c1; empty for detuning configs.
  std::vector<Real> mode_frequencies() const;
  std::vector<Real> couplings() const;

  HilbertSpec hilbert_spec() const;
};

/// Paper default single-mode point (kappa = gamma, g = 10 gamma).
SystemConfig single_mode_config(Real delta_eg, Real delta_c, Real epsilon = 0.001);
/// Paper default multimode point (kappa = gamma = 1, g0 = 10, k1x = pi/4,
/// omega_d = 100). g1 is derived as g0 * sin(k1x).
SystemConfig multimode_config(Real omega_eg, Real omega_c1, Real epsilon = 0.001, int n_modes = 3,
                              Real k1x = std::numbers::pi / 4, Real g0 = 10.0);

/// sin(phase) with exact zeros at integer multiples of pi.
Real harmonic_sine(Real phase);

std::vector<Real> coupling_strengths(Real g1, Real k1x, int n_modes);

/// Hermitian Hamiltonians in the drive frame (hbar = 1) on the full tensor space.
Operator single_mode_hamiltonian(const SystemConfig& cfg);
Operator multimode_hamiltonian(const SystemConfig& cfg);
/// Dispatches on the frequency specification.
Operator hamiltonian(const SystemConfig& cfg);

/// sqrt(gamma) sigma, then one sqrt(kappa)-scaled operator per mode (a_i^2 or a_i).
std::vector<Operator> collapse_ops(const SystemConfig& cfg);

/// Relative weights sqrt(omega_j) sin(j k1x) of the positive-frequency field;
/// {1} for a single mode specified by detunings.
std::vector<Real> field_coefficients(const SystemConfig& cfg);
Operator field_operator(const SystemConfig& cfg);

Real cpb_detuning(Real delta_eg, Real g);
Real ucpb_detuning(Real delta_eg, Real g);

struct ModelOperators {
  HilbertSpec spec;
  Operator hamiltonian;
  std::vector<Operator> collapse_ops;
  Operator field_op;
};

ModelOperators build_model(const SystemConfig& cfg);

}  // namespace blockade
