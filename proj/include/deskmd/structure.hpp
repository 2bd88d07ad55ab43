#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deskmd/vec3.hpp"

namespace deskmd {

struct Atom {
  std::size_t id = 0;
  std::string name;
  std::string element;
  double mass = 1.0;      // amu
  double charge = 0.0;    // e
  double lj_sigma = 0.0;  // nm
  double lj_epsilon = 0.0;  // kJ/mol
  Vec3 position;          // nm
};

// Atoms are indexed 0..N-1 in order. An absent box means open boundaries.
struct MolecularSystem {
  std::vector<Atom> atoms;
  std::optional<double> box_length;  // nm, cubic
  std::string label;

  std::size_t size() const noexcept { return atoms.size(); }
  std::vector<Vec3> positions() const;
  std::vector<double> masses() const;
  void set_positions(std::span<const Vec3> positions);
};

// Throws InvalidArgument if ids are not 0..N-1, a mass is non-positive,
// an LJ parameter is negative, or the box is too small for `cutoff`.
void validate(const MolecularSystem& system, std::optional<double> cutoff = std::nullopt);

// Renumbers atom ids to match their position in the list.
void renumber(MolecularSystem& system);

Vec3 centroid(const MolecularSystem& system);
Vec3 centroid(std::span<const Vec3> positions);

enum class StructureFormat { PdbSubset, Xyz };

// Counts of PDB records that were not ATOM/HETATM of the first model.
struct ParseDiagnostics {
  std::size_t skipped_records = 0;
  std::size_t skipped_models = 0;
};

// PDB: ATOM/HETATM fixed columns, Angstrom converted to nm, first model only.
// XYZ: count line, comment line, then `symbol x y z` rows in nm.
// Mass comes from the element table; charge and LJ are left at zero.
MolecularSystem parse_structure(std::string_view text, StructureFormat format,
                                ParseDiagnostics* diagnostics = nullptr);

// XYZ with the system label as comment line; coordinates in nm.
std::string write_structure(const MolecularSystem& system,
                            StructureFormat format = StructureFormat::Xyz);

// Average atomic mass for a normalized element symbol ("C", "Cl").
std::optional<double> element_mass(std::string_view element);

// "CL" -> "Cl", "n" -> "N".
std::string normalize_element(std::string_view symbol);

// Displacement b - a, wrapped into (-L/2, L/2] per component when a box is given.
Vec3 min_image_displacement(const Vec3& a, const Vec3& b, std::optional<double> box_length);

// Position folded into [0, L) per component.
Vec3 wrap_position(const Vec3& p, double box_length);

}  // namespace deskmd
