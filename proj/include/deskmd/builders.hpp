#pragma once

#include <cstddef>
#include <cstdint>

#include "deskmd/params.hpp"
#include "deskmd/structure.hpp"

namespace deskmd {

// Simple-cubic lattice of argon atoms (parameters applied) in a periodic
// cubic box, `per_side`^3 atoms.
MolecularSystem make_lj_fluid(std::size_t per_side, double box_length);

// Argon atoms placed uniformly at random in an open cube of side `extent`,
// nm, with no pair closer than `min_separation`. Pairs closer than
// `clash_separation` are then forced for the first `n_clashes` atoms.
MolecularSystem make_clashed_gas(std::size_t n_atoms, double extent, std::uint64_t seed,
                                 std::size_t n_clashes = 10, double clash_separation = 0.15);

// Receptor: C/N/O atoms in a spherical shell around the origin leaving a
// cavity of radius `inner_radius`; small alternating charges.
MolecularSystem make_synthetic_receptor(std::size_t n_atoms, std::uint64_t seed,
                                        double inner_radius = 1.0, double outer_radius = 2.0);

// Ligand: compact C/N/O cluster of `n_atoms` within `radius` of the origin.
MolecularSystem make_synthetic_ligand(std::size_t n_atoms, std::uint64_t seed,
                                      double radius = 0.35);

// LJ parameters for C, N, O, H, S used by the synthetic builders and the
// shipped sample inputs. Charges are left to the inputs.
ParameterTable organic_parameters();
void apply_organic_defaults(MolecularSystem& system);

// Displaces every atom by a uniform random vector in the ball of radius
// `amplitude`, nm; periodic positions are folded back into the box.
void jitter_positions(MolecularSystem& system, double amplitude, std::uint64_t seed);

}  // namespace deskmd
