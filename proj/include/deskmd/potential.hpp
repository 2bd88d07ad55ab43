#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "deskmd/exec.hpp"
#include "deskmd/structure.hpp"
#include "deskmd/vec3.hpp"

namespace deskmd {

// 12-6 Lennard-Jones plus point-charge Coulomb, Lorentz-Berthelot mixing,
// truncated at `cutoff`. Use an infinite cutoff for untruncated pairs.
struct PotentialParams {
  double cutoff = 1.0;  // nm
  bool periodic = false;
  bool shift_at_cutoff = true;
  bool electrostatics = true;
};

struct PairParams {
  double charge = 0.0;   // e
  double sigma = 0.0;    // nm
  double epsilon = 0.0;  // kJ/mol
};

inline PairParams pair_params(const Atom& a) { return {a.charge, a.lj_sigma, a.lj_epsilon}; }

struct PairResult {
  double energy = 0.0;  // kJ/mol
  Vec3 force_on_j;      // kJ/(mol nm); the force on i is its negation
};

// `r_vec` is the displacement from atom i to atom j. Zero energy and force at
// or beyond the cutoff; with shifting the energy is V(r) - V(cutoff) while the
// force is unchanged. Throws OverlapError when |r_vec| is zero.
PairResult pair_energy_force(const Vec3& r_vec, const PairParams& i, const PairParams& j,
                             const PotentialParams& pot);

// Harmonic tether 0.5 k |x - center|^2 on the selected atoms.
struct Restraint {
  Vec3 center;
  double spring_k = 0.0;  // kJ/(mol nm^2)
  std::vector<std::size_t> atoms;
};

struct EnergyForces {
  double potential_energy = 0.0;
  std::vector<Vec3> forces;
};

// Precomputed per-atom parameters for repeated evaluations at new positions.
// In deterministic mode every atom's force and every row of the pair energy
// is summed in ascending partner order by a single task, then rows are folded
// in index order, so the result does not depend on the worker count.
class ForceField {
 public:
  ForceField(const MolecularSystem& system, PotentialParams pot,
             std::optional<Restraint> restraint = std::nullopt, WorkerPoolConfig exec = {});

  EnergyForces compute(std::span<const Vec3> positions) const;

  std::size_t size() const noexcept { return params_.size(); }
  const PotentialParams& potential() const noexcept { return pot_; }
  std::optional<double> box_length() const noexcept { return box_; }

 private:
  EnergyForces compute_deterministic(std::span<const Vec3> positions) const;
  EnergyForces compute_unordered(std::span<const Vec3> positions) const;
  void add_restraint(std::span<const Vec3> positions, EnergyForces& ef) const;

  std::vector<PairParams> params_;
  PotentialParams pot_;
  std::optional<double> box_;
  std::optional<Restraint> restraint_;
  WorkerPoolConfig exec_;
};

// Sum over i<j of pair terms (minimum image when periodic) plus the restraint.
// Overlaps throw OverlapError carrying the pair ids.
EnergyForces system_energy_forces(const MolecularSystem& system, const PotentialParams& pot,
                                  const std::optional<Restraint>& restraint = std::nullopt,
                                  const WorkerPoolConfig& exec = {});

double max_force_norm(const EnergyForces& ef);
double max_force_norm(std::span<const Vec3> forces);

}  // namespace deskmd
