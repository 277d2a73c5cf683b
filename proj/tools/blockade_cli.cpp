// blockade: photon statistics of a driven atom in a (multimode) cavity.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "blockade/config.hpp"
#include "blockade/sweep.hpp"

using namespace blockade;

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kSolver = 2, kIo = 3 };

struct ParamOptions {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;

  void add_to(CLI::App* app) {
    app->add_option("-c,--config", config_file, "INI config file ([system], [drive], [dissipation])");
    app->add_option("--set", sets, "Override a parameter as key=value (repeatable)");
    for (const auto& [key, section] : parameter_sections()) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      app->add_option("--" + flag, flags[key], "[" + section + "] " + key);
    }
  }

  ParameterSet resolve_params() const {
    ParameterSet p = config_file.empty() ? ParameterSet{} : ParameterSet::from_file(config_file);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      p.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : flags)
      if (!value.empty()) p.set(key, value);
    return p;
  }
};

Axis parse_axis(const std::string& text) {
  // name:start:stop:count
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4) throw ConfigError("axis must be name:start:stop:count, got '" + text + "'");
  Axis a{parts[0], parse_real(parts[1]), parse_real(parts[2]), 0};
  try {
    a.count = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw ConfigError("axis count must be an integer, got '" + parts[3] + "'");
  }
  a.validate();
  return a;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

void echo(const SystemConfig& cfg) {
  std::cerr << "resolved configuration:\n" << describe_resolved(cfg) << std::flush;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon statistics (g2) of a driven two-level atom in single- and multimode cavities"};
  app.require_subcommand(1);

  auto* basis = app.add_subcommand("basis", "List the excitation-capped basis in ket notation");
  int levels = 2, modes = 3, max_exc = 2;
  basis->add_option("--levels", levels, "Atom levels")->capture_default_str();
  basis->add_option("--modes", modes, "Cavity modes")->capture_default_str();
  basis->add_option("--max-excitation", max_exc, "Excitation cap")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep-g2zero", "Grid of g2(0) values written as CSV");
  ParamOptions sweep_params;
  sweep_params.add_to(sweep);
  std::string x_axis, y_axis, pipeline = "analytic", sweep_out;
  unsigned sweep_threads = 0;
  sweep->add_option("--x", x_axis, "Outer axis name:start:stop:count");
  sweep->add_option("--y", y_axis, "Inner axis name:start:stop:count");
  sweep->add_option("--pipeline", pipeline, "master, oracle, analytic or both")->capture_default_str();
  sweep->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)")->capture_default_str();
  sweep->add_option("-o,--output", sweep_out, "CSV output path")->required();

  auto* tau = app.add_subcommand("g2tau", "Master-equation g2(tau) trace written as CSV");
  ParamOptions tau_params;
  tau_params.add_to(tau);
  Real t_max = 20, t_step = 0.01;
  bool use_expm = false;
  std::string tau_out;
  tau->add_option("--tmax", t_max, "Largest delay (1/gamma)")->capture_default_str();
  tau->add_option("--step", t_step, "Delay step (1/gamma)")->capture_default_str();
  tau->add_flag("--expm", use_expm, "Step with the matrix exponential (single mode only)");
  tau->add_option("-o,--output", tau_out, "CSV output path")->required();

  auto* tables = app.add_subcommand("tables", "Recompute the single-mode and three-mode reference tables");
  unsigned table_threads = 0;
  tables->add_option("--threads", table_threads, "Worker threads (0 = all cores)")->capture_default_str();

  auto* validate = app.add_subcommand("validate-config", "Resolve and print a configuration");
  ParamOptions validate_params;
  validate_params.add_to(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*basis) {
      print_basis(std::cout, levels, modes, max_exc);
    } else if (*sweep) {
      SweepSpec spec;
      spec.base = sweep_params.resolve_params();
      const SystemConfig cfg = spec.base.resolve();
      spec.pipeline = parse_pipeline(pipeline);
      spec.threads = sweep_threads;
      if (cfg.n_modes == 1) {
        spec.x = x_axis.empty() ? Axis{"delta_eg", -30, 30, 101} : parse_axis(x_axis);
        spec.y = y_axis.empty() ? Axis{"delta_c", -30, 30, 101} : parse_axis(y_axis);
      } else {
        spec.x = x_axis.empty() ? Axis{"omega_eg", 0, 200, 201} : parse_axis(x_axis);
        spec.y = y_axis.empty() ? Axis{"omega_c1", 20, 120, 301} : parse_axis(y_axis);
      }
      echo(cfg);
      auto out = open_output(sweep_out);
      write_sweep_csv(out, run_g2zero_sweep(spec));
      finish_output(out, sweep_out);
    } else if (*tau) {
      TauSpec spec;
      spec.params = tau_params.resolve_params();
      if (!spec.params.has("epsilon"))
        spec.params.set("epsilon", spec.params.resolve().n_modes == 1 ? 0.00172 : 0.0025);
      spec.t_max = t_max;
      spec.step = t_step;
      spec.use_expm = use_expm;
      echo(spec.params.resolve());
      auto out = open_output(tau_out);
      write_trace_csv(out, run_g2tau(spec));
      finish_output(out, tau_out);
    } else if (*tables) {
      run_tables(std::cout, table_threads);
    } else if (*validate) {
      const SystemConfig cfg = validate_params.resolve_params().resolve();
      std::cout << describe_resolved(cfg) << "\n" << serialize(cfg);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IntegrationError& e) {
    std::cerr << "solver error: " << e.what() << " (tau = " << e.tau() << ")\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  }
  return kOk;
}
