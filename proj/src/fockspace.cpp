#include "blockade/fockspace.hpp"

#include <algorithm>

namespace blockade {

namespace {

char level_symbol(int level) {
  static constexpr char kSymbols[] = "gefhijkl";
  if (level >= 0 && level < 8) return kSymbols[level];
  return '?';
}

// Compositions of `total` into `parts` non-negative integers, lexicographic.
void compositions(int total, int parts, std::vector<int>& prefix,
                  std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(prefix);
    return;
  }
  if (parts == 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = 0; first <= total; ++first) {
    prefix.push_back(first);
    compositions(total - first, parts - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::string to_ket(const BasisState& state) {
  std::string ket = "|";
  if (state.atom_level < 8) {
    ket += level_symbol(state.atom_level);
  } else {
    ket += std::to_string(state.atom_level);
  }
  if (!state.occupations.empty()) {
    ket += ',';
    const bool wide = std::any_of(state.occupations.begin(), state.occupations.end(),
                                  [](int n) { return n > 9; });
    for (std::size_t i = 0; i < state.occupations.size(); ++i) {
      if (wide && i > 0) ket += ',';
      ket += std::to_string(state.occupations[i]);
    }
  }
  ket += "\xE2\x9F\xA9";  // U+27E9 mathematical right angle bracket
  return ket;
}

void HilbertSpec::validate() const {
  if (n_levels < 2) throw InvalidArgument("n_levels must be >= 2");
  if (n_modes < 0) throw InvalidArgument("n_modes must be >= 0");
  if (fock_cutoff < 1) throw InvalidArgument("fock_cutoff must be >= 1");
  if (max_excitation < 0) throw InvalidArgument("max_excitation must be >= 0");
}

std::vector<Index> HilbertSpec::dims() const {
  std::vector<Index> d;
  d.reserve(1 + n_modes);
  d.push_back(n_levels);
  for (int i = 0; i < n_modes; ++i) d.push_back(fock_cutoff + 1);
  return d;
}

Index HilbertSpec::full_dimension() const {
  Index n = 1;
  for (Index d : dims()) n *= d;
  return n;
}

Index HilbertSpec::capped_dimension() const {
  return static_cast<Index>(enumerate_basis(n_levels, n_modes, max_excitation).size());
}

std::vector<BasisState> enumerate_basis(int n_levels, int n_modes, int max_excitation) {
  if (n_levels < 1 || n_modes < 0 || max_excitation < 0)
    throw InvalidArgument("enumerate_basis: arguments must be non-negative and n_levels >= 1");
  std::vector<BasisState> states;
  std::vector<int> prefix;
  for (int total = 0; total <= max_excitation; ++total) {
    for (int level = 0; level < n_levels && level <= total; ++level) {
      std::vector<std::vector<int>> occs;
      compositions(total - level, n_modes, prefix, occs);
      for (auto& occ : occs) states.push_back(BasisState{level, std::move(occ)});
    }
  }
  return states;
}

Index tensor_index(const BasisState& state, const HilbertSpec& spec) {
  if (static_cast<int>(state.occupations.size()) != spec.n_modes)
    throw InvalidArgument("basis state mode count does not match the Hilbert space");
  if (state.atom_level < 0 || state.atom_level >= spec.n_levels)
    throw InvalidArgument("atom level outside the Hilbert space");
  Index idx = state.atom_level;
  for (int n : state.occupations) {
    if (n < 0 || n > spec.fock_cutoff) throw InvalidArgument("occupation beyond the Fock cutoff");
    idx = idx * (spec.fock_cutoff + 1) + n;
  }
  return idx;
}

}  // namespace blockade
