#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "deskmd/structure.hpp"

namespace deskmd {

// Any field left unset keeps the atom's current value.
struct AtomParams {
  std::optional<double> mass;     // amu
  std::optional<double> charge;   // e
  std::optional<double> sigma;    // nm
  std::optional<double> epsilon;  // kJ/mol
};

// Per-element and per-atom-name parameter records. An atom-name entry
// takes precedence over the element entry, field by field.
struct ParameterTable {
  std::map<std::string, AtomParams> by_element;
  std::map<std::string, AtomParams> by_name;

  void merge(const ParameterTable& other);
};

// Built-in defaults: argon (sigma 0.3405 nm, epsilon 0.996 kJ/mol).
ParameterTable default_parameters();

// Line format, `#` starts a comment:
//   Ar.sigma   = 0.3405      element key
//   @CA.charge = 0.07        atom-name key
// Fields: mass, charge, sigma, epsilon.
ParameterTable parse_parameter_file(std::string_view text);

// Applies table entries to every atom. Returns the number of atoms that
// matched no entry at all.
std::size_t assign_parameters(MolecularSystem& system, const ParameterTable& table);

}  // namespace deskmd
