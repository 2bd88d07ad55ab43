#include "deskmd/builders.hpp"

#include <array>
#include <cmath>
#include <string>

#include "deskmd/error.hpp"
#include "deskmd/params.hpp"
#include "deskmd/rng.hpp"

namespace deskmd {

namespace {

Atom make_atom(std::size_t id, const std::string& element, Vec3 position) {
  Atom a;
  a.id = id;
  a.element = element;
  a.name = element + std::to_string(id + 1);
  a.mass = element_mass(element).value_or(12.011);
  a.position = position;
  return a;
}

Vec3 random_in_ball(StreamRng& rng, double radius) {
  while (true) {
    Vec3 p{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    if (norm2(p) <= 1.0) return p * radius;
  }
}

}  // namespace

MolecularSystem make_lj_fluid(std::size_t per_side, double box_length) {
  if (per_side == 0 || !(box_length > 0.0)) throw InvalidArgument("empty lattice");
  MolecularSystem system;
  system.label = "LJ argon fluid " + std::to_string(per_side * per_side * per_side) + " atoms";
  system.box_length = box_length;
  const double spacing = box_length / static_cast<double>(per_side);
  for (std::size_t ix = 0; ix < per_side; ++ix)
    for (std::size_t iy = 0; iy < per_side; ++iy)
      for (std::size_t iz = 0; iz < per_side; ++iz) {
        const Vec3 p{(static_cast<double>(ix) + 0.5) * spacing, (static_cast<double>(iy) + 0.5) * spacing,
                     (static_cast<double>(iz) + 0.5) * spacing};
        system.atoms.push_back(make_atom(system.atoms.size(), "Ar", p));
      }
  assign_parameters(system, default_parameters());
  return system;
}

MolecularSystem make_clashed_gas(std::size_t n_atoms, double extent, std::uint64_t seed,
                                 std::size_t n_clashes, double clash_separation) {
  MolecularSystem system;
  system.label = "clashed argon gas";
  StreamRng rng(seed, 0);
  const double min_sep2 = 0.3 * 0.3;
  std::size_t attempts = 0;
  while (system.atoms.size() < n_atoms) {
    if (++attempts > 1000000) throw InvalidArgument("cannot place atoms; extent too small");
    const Vec3 p{extent * rng.uniform(), extent * rng.uniform(), extent * rng.uniform()};
    bool ok = true;
    for (const auto& a : system.atoms)
      if (norm2(a.position - p) < min_sep2) {
        ok = false;
        break;
      }
    if (ok) system.atoms.push_back(make_atom(system.atoms.size(), "Ar", p));
  }
  // Pull atom 2k+1 onto atom 2k along a random direction.
  for (std::size_t k = 0; k < n_clashes && 2 * k + 1 < n_atoms; ++k) {
    Vec3 dir = random_in_ball(rng, 1.0);
    while (norm2(dir) < 1e-6) dir = random_in_ball(rng, 1.0);
    dir = dir / norm(dir);
    system.atoms[2 * k + 1].position = system.atoms[2 * k].position + dir * clash_separation;
  }
  assign_parameters(system, default_parameters());
  return system;
}

ParameterTable organic_parameters() {
  ParameterTable table;
  table.by_element["C"] = AtomParams{std::nullopt, std::nullopt, 0.340, 0.360};
  table.by_element["N"] = AtomParams{std::nullopt, std::nullopt, 0.325, 0.711};
  table.by_element["O"] = AtomParams{std::nullopt, std::nullopt, 0.296, 0.879};
  table.by_element["H"] = AtomParams{std::nullopt, std::nullopt, 0.107, 0.066};
  table.by_element["S"] = AtomParams{std::nullopt, std::nullopt, 0.356, 1.046};
  return table;
}

void apply_organic_defaults(MolecularSystem& system) { assign_parameters(system, organic_parameters()); }

void jitter_positions(MolecularSystem& system, double amplitude, std::uint64_t seed) {
  for (auto& atom : system.atoms) {
    StreamRng rng(seed, atom.id + 0x10000);
    atom.position += random_in_ball(rng, amplitude);
    if (system.box_length) atom.position = wrap_position(atom.position, *system.box_length);
  }
}

MolecularSystem make_synthetic_receptor(std::size_t n_atoms, std::uint64_t seed,
                                        double inner_radius, double outer_radius) {
  static constexpr std::array<const char*, 3> kElements{"C", "N", "O"};
  MolecularSystem system;
  system.label = "synthetic receptor";
  StreamRng rng(seed, 1);
  const double min_sep2 = 0.12 * 0.12;
  std::size_t attempts = 0;
  while (system.atoms.size() < n_atoms) {
    if (++attempts > 10000000) throw InvalidArgument("cannot place receptor atoms");
    const Vec3 p = random_in_ball(rng, outer_radius);
    if (norm(p) < inner_radius) continue;
    bool ok = true;
    for (const auto& a : system.atoms)
      if (norm2(a.position - p) < min_sep2) {
        ok = false;
        break;
      }
    if (!ok) continue;
    const auto id = system.atoms.size();
    auto atom = make_atom(id, kElements[id % kElements.size()], p);
    atom.charge = (id % 2 == 0) ? 0.2 : -0.2;
    system.atoms.push_back(std::move(atom));
  }
  apply_organic_defaults(system);
  return system;
}

MolecularSystem make_synthetic_ligand(std::size_t n_atoms, std::uint64_t seed, double radius) {
  static constexpr std::array<const char*, 3> kElements{"C", "C", "O"};
  MolecularSystem system;
  system.label = "synthetic ligand";
  StreamRng rng(seed, 2);
  const double min_sep2 = 0.1 * 0.1;
  std::size_t attempts = 0;
  while (system.atoms.size() < n_atoms) {
    if (++attempts > 10000000) throw InvalidArgument("cannot place ligand atoms");
    const Vec3 p = random_in_ball(rng, radius);
    bool ok = true;
    for (const auto& a : system.atoms)
      if (norm2(a.position - p) < min_sep2) {
        ok = false;
        break;
      }
    if (!ok) continue;
    const auto id = system.atoms.size();
    auto atom = make_atom(id, kElements[id % kElements.size()], p);
    atom.charge = (id % 3 == 2) ? -0.3 : 0.15;
    system.atoms.push_back(std::move(atom));
  }
  apply_organic_defaults(system);
  return system;
}

}  // namespace deskmd
