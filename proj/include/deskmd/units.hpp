#pragma once

// Internal unit system: nm, ps, amu, kJ/mol, elementary charge, K.
namespace deskmd::units {

// Boltzmann constant, kJ mol^-1 K^-1.
inline constexpr double kBoltzmann = 0.00831446262;

// Electric conversion factor 1/(4 pi eps0), kJ mol^-1 nm e^-2.
inline constexpr double kCoulomb = 138.935458;

// PDB coordinates are in Angstrom.
inline constexpr double kAngstromToNm = 0.1;

}  // namespace deskmd::units
