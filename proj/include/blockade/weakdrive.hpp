#pragma once

#include <map>
#include <vector>

#include "blockade/fockspace.hpp"
#include "blockade/model.hpp"

namespace blockade {

/// Steady-state amplitudes of the excitation-capped (N <= 2) ansatz, with the
/// ground amplitude fixed at 1.
struct AmplitudeSolution {
  int n_modes = 0;
  std::vector<BasisState> basis;
  std::vector<Complex> amplitudes;
  /// Power of epsilon each amplitude scales with; equals the excitation number.
  std::vector<int> drive_order;

  Complex amplitude(const BasisState& state) const;
  Complex amplitude(int atom_level, std::vector<int> occupations) const {
    return amplitude(BasisState{atom_level, std::move(occupations)});
  }
  std::size_t index_of(const BasisState& state) const;

  void build_index();

 private:
  std::map<BasisState, std::size_t> index_;
};

/// Closed-form single-mode g2(0) in the weak-drive limit with two-photon loss.
Real analytic_g2_single(Real delta_eg, Real delta_c, Real g, Real gamma, Real kappa);

/// Drive-frame parameters of the amplitude equations, one entry per mode.
struct WeakDriveParams {
  Real delta_eg = 0;
  std::vector<Real> delta_c;
  std::vector<Real> g;
  Real gamma = 1;
  Real kappa = 1;
  Real epsilon = 0;
  DissipationScheme dissipation = DissipationScheme::two_photon;

  int n_modes() const { return static_cast<int>(delta_c.size()); }
};

WeakDriveParams weak_drive_params(const SystemConfig& cfg);

/// Non-Hermitian Hamiltonian on the capped basis: H plus -i gamma/2 on the
/// excited atom and -i kappa/2 <a^+2 a^2> (or <a^+ a>) per mode.
MatrixXc weak_drive_hamiltonian(const WeakDriveParams& p, const std::vector<BasisState>& basis);

/// Single mode: the two 2x2 sector systems for (C_g1, C_e0) and (C_g2, C_e1).
AmplitudeSolution amplitude_steady_single(const SystemConfig& cfg);

/// Any number of modes: sector-ordered forward substitution on the capped
/// basis. One-excitation amplitudes are sourced by C_g0 = 1, two-excitation
/// amplitudes by the one-excitation sector; couplings back down are dropped.
AmplitudeSolution amplitude_steady_multimode(const SystemConfig& cfg);
AmplitudeSolution amplitude_steady_multimode(const WeakDriveParams& p);

}  // namespace blockade
