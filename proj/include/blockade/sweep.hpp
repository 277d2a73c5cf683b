#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "blockade/config.hpp"
#include "blockade/correlate.hpp"

namespace blockade {

enum class Pipeline { master, oracle, analytic, both };

std::string to_string(Pipeline p);
Pipeline parse_pipeline(const std::string& name);

struct Axis {
  std::string name;
  Real start = 0;
  Real stop = 0;
  int count = 1;

  void validate() const;
  std::vector<Real> values() const;
};

struct SweepSpec {
  Axis x;
  Axis y;
  ParameterSet base;
  Pipeline pipeline = Pipeline::analytic;
  /// Worker threads; 0 means hardware concurrency.
  unsigned threads = 0;
};

struct SweepRow {
  Real x = 0;
  Real y = 0;
  Real g2 = 0;
  std::string pipeline;
  /// ok, nonpositive, or the failure class (solver_error, degenerate, config_error, ...).
  std::string status = "ok";
};

struct SweepResult {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<SweepRow> rows;
};

/// g2(0) from one pipeline at one resolved config.
Real point_g2(const SystemConfig& cfg, Pipeline pipeline);

/// Rows ordered x outer, y inner; Pipeline::both yields a master row then an
/// oracle row per point. Failures are recorded per row, never dropped.
SweepResult run_g2zero_sweep(const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, const SweepResult& result);

struct TauSpec {
  ParameterSet params;
  Real t_max = 20;
  Real step = 0.01;
  bool use_expm = false;
};

/// Master-equation g2(tau) trace with metadata.
CorrelationTrace run_g2tau(const TauSpec& spec);

struct TableRowReference {
  Real a = 0;  // delta_eg or omega_eg
  Real b = 0;  // delta_c or omega_c1
  Real analytic = 0;
  std::vector<Real> numeric;  // one per epsilon in table_epsilons()
};

const std::vector<Real>& table_epsilons();
const std::vector<TableRowReference>& table_one_reference();
const std::vector<TableRowReference>& table_two_reference();

/// Recomputes both tables (analytic, oracle and master columns at every epsilon)
/// and prints them with relative differences. Row failures are reported inline.
void run_tables(std::ostream& out, unsigned threads = 0);

/// One ket per line in canonical order.
void print_basis(std::ostream& out, int n_levels, int n_modes, int max_excitation);

/// Runs task(i) for i in [0, n) on a bounded pool; results are the caller's
/// responsibility and must be written to per-index slots.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace blockade
