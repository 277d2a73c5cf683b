#include "blockade/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace blockade {

namespace pt = boost::property_tree;

std::string format_real(Real value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Real parse_factor(const std::string& raw, const std::string& whole) {
  std::string f = trim(raw);
  Real sign = 1;
  while (!f.empty() && (f[0] == '-' || f[0] == '+')) {
    if (f[0] == '-') sign = -sign;
    f = trim(f.substr(1));
  }
  if (f == "pi") return sign * std::numbers::pi;
  std::size_t used = 0;
  Real v = 0;
  try {
    v = std::stod(f, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + whole + "'");
  }
  if (used == f.size()) return sign * v;
  if (trim(f.substr(used)) == "pi") return sign * v * std::numbers::pi;  // "2pi"
  throw ConfigError("cannot parse number '" + whole + "'");
}

int parse_int(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  if (used != t.size()) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

}  // namespace

Real parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty numeric value");
  Real value = 1;
  char op = '*';
  std::size_t start = 0;
  for (std::size_t i = 0; i <= t.size(); ++i) {
    const bool at_end = i == t.size();
    if (!at_end && t[i] != '*' && t[i] != '/') continue;
    const Real f = parse_factor(t.substr(start, i - start), t);
    value = op == '*' ? value * f : value / f;
    if (!at_end) op = t[i];
    start = i + 1;
  }
  if (!std::isfinite(value)) throw ConfigError("non-finite numeric value '" + t + "'");
  return value;
}

const std::map<std::string, std::string>& parameter_sections() {
  static const std::map<std::string, std::string> sections{
      {"n_modes", "system"},   {"fock_cutoff", "system"}, {"g0", "system"},       {"g1", "system"},
      {"k1x", "system"},       {"epsilon", "drive"},      {"delta_eg", "drive"},  {"delta_c", "drive"},
      {"omega_eg", "drive"},   {"omega_c1", "drive"},     {"omega_d", "drive"},   {"gamma", "dissipation"},
      {"kappa", "dissipation"}, {"scheme", "dissipation"},
  };
  return sections;
}

ParameterSet ParameterSet::from_string(const std::string& ini_text) {
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ParameterSet p;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config key '" + section + "' must live inside a section");
    for (const auto& [key, node] : body) {
      const auto& known = parameter_sections();
      auto it = known.find(key);
      if (it == known.end()) throw ConfigError("unknown config key '" + key + "' in [" + section + "]");
      if (it->second != section)
        throw ConfigError("config key '" + key + "' belongs in [" + it->second + "], found in [" + section + "]");
      p.set(key, node.get_value<std::string>());
    }
  }
  return p;
}

ParameterSet ParameterSet::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

void ParameterSet::set(const std::string& key, const std::string& value) {
  if (!parameter_sections().count(key)) throw ConfigError("unknown parameter '" + key + "'");
  values_[key] = trim(value);
}

void ParameterSet::set(const std::string& key, Real value) { set(key, format_real(value)); }

SystemConfig ParameterSet::resolve() const {
  auto real = [&](const std::string& key, Real fallback) {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_real(it->second);
  };
  SystemConfig cfg;
  if (has("n_modes")) cfg.n_modes = parse_int(values_.at("n_modes"), "n_modes");
  if (has("fock_cutoff")) cfg.fock_cutoff = parse_int(values_.at("fock_cutoff"), "fock_cutoff");
  cfg.gamma = real("gamma", cfg.gamma);
  cfg.kappa = real("kappa", cfg.kappa);
  cfg.epsilon = real("epsilon", cfg.epsilon);
  cfg.k1x = real("k1x", cfg.k1x);
  if (has("scheme")) cfg.dissipation = parse_scheme(values_.at("scheme"));

  const bool det = has("delta_eg") || has("delta_c");
  const bool freq = has("omega_eg") || has("omega_c1") || has("omega_d");
  if (det && freq) throw ConfigError("give either delta_eg/delta_c or omega_eg/omega_c1/omega_d, not both");
  if (det || (!freq && cfg.n_modes == 1)) {
    Detunings d;
    d.delta_eg = real("delta_eg", d.delta_eg);
    d.delta_c = real("delta_c", d.delta_c);
    cfg.frequencies = d;
  } else {
    Frequencies f;
    f.omega_eg = real("omega_eg", f.omega_eg);
    f.omega_c1 = real("omega_c1", f.omega_c1);
    f.omega_d = real("omega_d", f.omega_d);
    cfg.frequencies = f;
  }

  if (has("g0") && has("g1")) throw ConfigError("give either g0 or g1, not both");
  if (has("g1")) {
    cfg.g1 = real("g1", cfg.g1);
  } else if (has("g0") || cfg.has_frequencies()) {
    cfg.g1 = real("g0", 10.0) * harmonic_sine(cfg.k1x);
  }
  cfg.validate();
  return cfg;
}

std::string serialize(const SystemConfig& cfg) {
  std::ostringstream os;
  os << "[system]\n";
  os << "n_modes = " << cfg.n_modes << '\n';
  os << "fock_cutoff = " << cfg.fock_cutoff << '\n';
  os << "g1 = " << format_real(cfg.g1) << '\n';
  os << "k1x = " << format_real(cfg.k1x) << '\n';
  os << "\n[drive]\n";
  os << "epsilon = " << format_real(cfg.epsilon) << '\n';
  if (cfg.has_detunings()) {
    const auto& d = std::get<Detunings>(cfg.frequencies);
    os << "delta_eg = " << format_real(d.delta_eg) << '\n';
    os << "delta_c = " << format_real(d.delta_c) << '\n';
  } else {
    const auto& f = std::get<Frequencies>(cfg.frequencies);
    os << "omega_eg = " << format_real(f.omega_eg) << '\n';
    os << "omega_c1 = " << format_real(f.omega_c1) << '\n';
    os << "omega_d = " << format_real(f.omega_d) << '\n';
  }
  os << "\n[dissipation]\n";
  os << "gamma = " << format_real(cfg.gamma) << '\n';
  os << "kappa = " << format_real(cfg.kappa) << '\n';
  os << "scheme = " << to_string(cfg.dissipation) << '\n';
  return os.str();
}

std::string config_hash(const SystemConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serialize(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string describe_resolved(const SystemConfig& cfg) {
  std::ostringstream os;
  auto list = [&](const std::vector<Real>& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << format_real(v[i]);
    os << ']';
  };
  os << "n_modes      " << cfg.n_modes << '\n';
  os << "fock_cutoff  " << cfg.fock_cutoff << '\n';
  os << "gamma        " << format_real(cfg.gamma) << '\n';
  os << "kappa        " << format_real(cfg.kappa) << '\n';
  os << "scheme       " << to_string(cfg.dissipation) << '\n';
  os << "epsilon      " << format_real(cfg.epsilon) << '\n';
  if (cfg.has_frequencies()) {
    const auto& f = std::get<Frequencies>(cfg.frequencies);
    os << "omega_eg     " << format_real(f.omega_eg) << '\n';
    os << "omega_c1     " << format_real(f.omega_c1) << '\n';
    os << "omega_d      " << format_real(f.omega_d) << '\n';
    os << "k1x          " << format_real(cfg.k1x) << '\n';
  }
  os << "delta_eg     " << format_real(cfg.atom_detuning()) << '\n';
  os << "delta_c      ";
  list(cfg.cavity_detunings());
  os << "\ng            ";
  list(cfg.couplings());
  os << "\nconfig_hash  " << config_hash(cfg) << '\n';
  return os.str();
}

}  // namespace blockade
