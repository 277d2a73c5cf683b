#include "blockade/correlate.hpp"

#include <cmath>
#include <cstdio>

namespace blockade {

namespace {

constexpr Real kMinFlux = 1e-300;

Real real_checked(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-8 * std::max(std::abs(z.real()), 1e-6))
    throw SolverError(std::string(what) + ": expectation value has a significant imaginary part");
  return z.real();
}

}  // namespace

std::vector<Real> uniform_grid(Real t_max, Real step) {
  if (!(step > 0) || !(t_max >= 0)) throw InvalidArgument("uniform_grid: need step > 0 and t_max >= 0");
  const auto n = static_cast<std::size_t>(std::llround(t_max / step));
  std::vector<Real> grid(n + 1);
  for (std::size_t k = 0; k <= n; ++k) grid[k] = static_cast<Real>(k) * step;
  return grid;
}

Real g2_zero(const DensityMatrix& rho, const Operator& A) {
  if (A.rows() != rho.dim()) throw InvalidArgument("g2_zero: operator and state dimensions differ");
  const MatrixXc a = A.dense();
  const MatrixXc ad = a.adjoint();
  const MatrixXc& r = rho.matrix();
  const Real flux = real_checked((ad * a * r).trace(), "g2_zero");
  if (!(std::abs(flux) > kMinFlux)) throw UndefinedCorrelation("g2_zero: zero photon flux");
  const Real num = real_checked((ad * ad * a * a * r).trace(), "g2_zero");
  return num / (flux * flux);
}

CorrelationTrace g2_tau(const Superoperator& L, const DensityMatrix& rho, const Operator& A,
                        std::span<const Real> tau_grid, const G2TauOptions& options) {
  if (A.rows() != rho.dim() || L.dim != rho.dim()) throw InvalidArgument("g2_tau: dimension mismatch");
  const MatrixXc a = A.dense();
  const MatrixXc ad = a.adjoint();
  const MatrixXc n_op = ad * a;
  const MatrixXc& r = rho.matrix();
  const Real flux = real_checked((n_op * r).trace(), "g2_tau");
  if (!(std::abs(flux) > kMinFlux)) throw UndefinedCorrelation("g2_tau: zero photon flux");

  // Normalize so the propagated operator has unit trace.
  const MatrixXc start = a * r * ad / flux;
  const auto states = options.use_expm ? propagate_expm(L, start, tau_grid) : propagate(L, start, tau_grid, options.ode);

  CorrelationTrace trace;
  trace.tau.assign(tau_grid.begin(), tau_grid.end());
  trace.values.reserve(states.size());
  for (const auto& s : states) trace.values.push_back(real_checked((n_op * s).trace(), "g2_tau") / flux);
  return trace;
}

Real g2_zero_from_amplitudes(const AmplitudeSolution& amps, std::span<const Complex> field_coeffs) {
  if (static_cast<int>(field_coeffs.size()) != amps.n_modes)
    throw InvalidArgument("g2_zero_from_amplitudes: one field coefficient per mode expected");

  if (amps.n_modes == 1) {
    const Complex c = field_coeffs[0];
    const Real one = std::norm(c * amps.amplitude(0, {1}));
    if (!(one * one > kMinFlux)) throw UndefinedCorrelation("g2_zero_from_amplitudes: zero photon flux");
    return 2 * std::norm(c * c * amps.amplitude(0, {2})) / (one * one);
  }

  const auto& basis = amps.basis;
  const std::size_t n = basis.size();
  auto lower = [&](const std::vector<Complex>& psi) {
    std::vector<Complex> out(n, Complex(0));
    for (std::size_t k = 0; k < n; ++k) {
      if (psi[k] == Complex(0)) continue;
      for (int j = 0; j < amps.n_modes; ++j) {
        const int nj = basis[k].occupations[j];
        if (nj == 0) continue;
        BasisState t = basis[k];
        t.occupations[j] -= 1;
        out[amps.index_of(t)] += field_coeffs[j] * std::sqrt(Real(nj)) * psi[k];
      }
    }
    return out;
  };
  // Leading order in epsilon: project the lowered states onto |g,0...0>.
  const std::size_t ground = amps.index_of({0, std::vector<int>(amps.n_modes, 0)});
  const auto e1 = lower(amps.amplitudes);
  const auto e2 = lower(e1);
  const Real one = std::norm(e1[ground]);
  if (!(one * one > kMinFlux)) throw UndefinedCorrelation("g2_zero_from_amplitudes: zero photon flux");
  return std::norm(e2[ground]) / (one * one);
}

void write_trace_csv(std::ostream& out, const CorrelationTrace& trace) {
  char buf[64];
  out << "# config_hash=" << trace.metadata.config_hash << '\n';
  out << "# pipeline=" << trace.metadata.pipeline << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", trace.metadata.epsilon);
  out << "# epsilon=" << buf << '\n';
  out << "# scheme=" << trace.metadata.scheme << '\n';
  out << "tau,g2\n";
  for (std::size_t k = 0; k < trace.tau.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.10g,%.12g", trace.tau[k], trace.values[k]);
    out << buf << '\n';
  }
}

}  // namespace blockade
