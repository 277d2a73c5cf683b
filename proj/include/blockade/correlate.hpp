#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "blockade/lindblad.hpp"
#include "blockade/weakdrive.hpp"

namespace blockade {

struct TraceMetadata {
  std::string config_hash;
  std::string pipeline = "master";
  std::string scheme = "two_photon";
  Real epsilon = 0;
};

struct CorrelationTrace {
  std::vector<Real> tau;
  std::vector<Real> values;
  TraceMetadata metadata;
};

/// 0, step, 2 step, ..., up to and including t_max (rounded to whole steps).
std::vector<Real> uniform_grid(Real t_max, Real step);

/// Tr(A^+ A^+ A A rho) / Tr(A^+ A rho)^2.
Real g2_zero(const DensityMatrix& rho, const Operator& A);

struct G2TauOptions {
  PropagateOptions ode;
  /// Step with exp(L dt) instead of the adaptive integrator (uniform grids, small D).
  bool use_expm = false;
};

/// Quantum regression: A rho A^+ evolves under L, read out with A^+ A and
/// normalized by the stationary flux squared.
CorrelationTrace g2_tau(const Superoperator& L, const DensityMatrix& rho, const Operator& A,
                        std::span<const Real> tau_grid, const G2TauOptions& options = {});

/// Weak-drive g2(0) from capped-basis amplitudes. One mode: 2|C_g2|^2 / |C_g1|^4.
/// Several modes: |<g,0|E+ E+|psi>|^2 / |<g,0|E+|psi>|^4 with E+ = sum_j c_j a_j,
/// the same leading order in epsilon.
Real g2_zero_from_amplitudes(const AmplitudeSolution& amps, std::span<const Complex> field_coeffs);

/// `# key=value` metadata lines, then `tau,g2` rows.
void write_trace_csv(std::ostream& out, const CorrelationTrace& trace);

}  // namespace blockade
