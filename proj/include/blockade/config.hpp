#pragma once

#include <map>
#include <string>
#include <vector>

#include "blockade/model.hpp"

namespace blockade {

/// Parses a real number or a product/quotient with `pi`: "0.5", "pi/4", "3*pi/4", "-pi".
Real parse_real(const std::string& text);

/// Known parameter keys and the config-file section each lives in.
const std::map<std::string, std::string>& parameter_sections();

/// Raw user parameters (config file plus overrides), resolved into a
/// SystemConfig on demand. Missing keys take the model defaults.
///
/// Frequency mode is chosen by the keys present: delta_eg/delta_c select
/// detunings, omega_* select absolute frequencies. With neither, one mode
/// means detunings (10, 10) and several modes mean (108.5, 108.5, 100).
/// g1 may be given directly or through g0, with g1 = g0 sin(k1x); the
/// multimode default is g0 = 10.
class ParameterSet {
 public:
  static ParameterSet from_file(const std::string& path);
  static ParameterSet from_string(const std::string& ini_text);

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, Real value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  SystemConfig resolve() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Canonical INI text for a resolved config; round-trips through from_string.
std::string serialize(const SystemConfig& cfg);

/// 64-bit FNV-1a of serialize(cfg), as 16 hex digits.
std::string config_hash(const SystemConfig& cfg);

/// Human-readable echo including derived g_i and Delta_ci.
std::string describe_resolved(const SystemConfig& cfg);

/// %.17g formatting.
std::string format_real(Real value);

}  // namespace blockade
