#include "deskmd/potential.hpp"

#include <cmath>
#include <mutex>

#include "deskmd/error.hpp"
#include "deskmd/units.hpp"

namespace deskmd {

namespace {

struct RadialTerms {
  double energy = 0.0;
  double dvdr = 0.0;
};

RadialTerms radial(double r2, double r, const PairParams& i, const PairParams& j,
                   const PotentialParams& pot) {
  RadialTerms t;
  const bool shifted = pot.shift_at_cutoff && std::isfinite(pot.cutoff);
  const double sigma = 0.5 * (i.sigma + j.sigma);
  const double epsilon = std::sqrt(i.epsilon * j.epsilon);
  if (sigma > 0.0 && epsilon > 0.0) {
    const double s2 = sigma * sigma / r2;
    const double sr6 = s2 * s2 * s2;
    const double sr12 = sr6 * sr6;
    t.energy += 4.0 * epsilon * (sr12 - sr6);
    t.dvdr -= 24.0 * epsilon * (2.0 * sr12 - sr6) / r;
    if (shifted) {
      const double c2 = sigma * sigma / (pot.cutoff * pot.cutoff);
      const double c6 = c2 * c2 * c2;
      t.energy -= 4.0 * epsilon * (c6 * c6 - c6);
    }
  }
  if (pot.electrostatics) {
    const double qq = units::kCoulomb * i.charge * j.charge;
    if (qq != 0.0) {
      t.energy += qq / r;
      t.dvdr -= qq / r2;
      if (shifted) t.energy -= qq / pot.cutoff;
    }
  }
  return t;
}

}  // namespace

PairResult pair_energy_force(const Vec3& r_vec, const PairParams& i, const PairParams& j,
                             const PotentialParams& pot) {
  const double r2 = norm2(r_vec);
  if (r2 == 0.0) throw OverlapError();
  if (r2 >= pot.cutoff * pot.cutoff) return {};
  const double r = std::sqrt(r2);
  const auto t = radial(r2, r, i, j, pot);
  return {t.energy, r_vec * (-t.dvdr / r)};
}

ForceField::ForceField(const MolecularSystem& system, PotentialParams pot,
                       std::optional<Restraint> restraint, WorkerPoolConfig exec)
    : pot_(pot), box_(system.box_length), restraint_(std::move(restraint)), exec_(exec) {
  if (!(pot_.cutoff > 0.0)) throw InvalidArgument("cutoff must be positive");
  if (pot_.periodic != system.box_length.has_value())
    throw InvalidArgument("periodic flag does not match the presence of a box");
  if (exec_.workers == 0) throw InvalidArgument("worker count must be at least 1");
  validate(system, pot_.periodic ? std::optional<double>(pot_.cutoff) : std::nullopt);
  if (system.atoms.empty()) throw InvalidArgument("system has no atoms");
  if (restraint_) {
    if (restraint_->spring_k < 0.0) throw InvalidArgument("restraint spring constant must be >= 0");
    for (auto idx : restraint_->atoms)
      if (idx >= system.size()) throw InvalidArgument("restraint selects a missing atom");
  }
  params_.reserve(system.size());
  for (const auto& a : system.atoms) params_.push_back(pair_params(a));
}

EnergyForces ForceField::compute(std::span<const Vec3> positions) const {
  if (positions.size() != params_.size())
    throw InvalidArgument("position count does not match the force field");
  auto ef = exec_.deterministic ? compute_deterministic(positions) : compute_unordered(positions);
  add_restraint(positions, ef);
  return ef;
}

EnergyForces ForceField::compute_deterministic(std::span<const Vec3> positions) const {
  struct Row {
    double energy = 0.0;  // sum over j > i
    Vec3 force;           // sum over all j != i
  };
  const std::size_t n = positions.size();
  auto row = [&](std::size_t i) {
    Row out;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      PairResult pr;
      try {
        pr = pair_energy_force(min_image_displacement(positions[i], positions[j], box_),
                               params_[i], params_[j], pot_);
      } catch (const OverlapError&) {
        throw OverlapError(std::min(i, j), std::max(i, j));
      }
      out.force -= pr.force_on_j;
      if (j > i) out.energy += pr.energy;
    }
    return out;
  };

  std::vector<Row> rows;
  try {
    rows = parallel_map_indexed(plan_chunks(n, exec_.workers), row, exec_);
  } catch (const TaskError& e) {
    std::rethrow_exception(e.cause());
  }

  EnergyForces ef;
  ef.forces.resize(n);
  std::vector<double> energies(n);
  for (std::size_t i = 0; i < n; ++i) {
    energies[i] = rows[i].energy;
    ef.forces[i] = rows[i].force;
  }
  ef.potential_energy = deterministic_reduce(std::span<const double>(energies));
  return ef;
}

EnergyForces ForceField::compute_unordered(std::span<const Vec3> positions) const {
  const std::size_t n = positions.size();
  Accumulator total;
  total.forces.resize(n);
  std::mutex merge;
  run_chunks(plan_chunks(n, exec_.workers), exec_.workers, [&](std::size_t, ChunkRange range) {
    Accumulator local;
    local.forces.resize(n);
    for (std::size_t i = range.begin; i < range.end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        PairResult pr;
        try {
          pr = pair_energy_force(min_image_displacement(positions[i], positions[j], box_),
                                 params_[i], params_[j], pot_);
        } catch (const OverlapError&) {
          throw OverlapError(i, j);
        }
        local.energy += pr.energy;
        local.forces[j] += pr.force_on_j;
        local.forces[i] -= pr.force_on_j;
      }
    }
    std::lock_guard lock(merge);
    total += local;
  });
  return {total.energy, std::move(total.forces)};
}

void ForceField::add_restraint(std::span<const Vec3> positions, EnergyForces& ef) const {
  if (!restraint_ || restraint_->spring_k == 0.0) return;
  const double k = restraint_->spring_k;
  for (auto idx : restraint_->atoms) {
    const Vec3 d = min_image_displacement(restraint_->center, positions[idx], box_);
    ef.potential_energy += 0.5 * k * norm2(d);
    ef.forces[idx] -= d * k;
  }
}

EnergyForces system_energy_forces(const MolecularSystem& system, const PotentialParams& pot,
                                  const std::optional<Restraint>& restraint,
                                  const WorkerPoolConfig& exec) {
  const ForceField ff(system, pot, restraint, exec);
  return ff.compute(system.positions());
}

double max_force_norm(std::span<const Vec3> forces) {
  if (forces.empty()) throw InvalidArgument("no forces");
  double best = 0.0;
  for (const auto& f : forces) best = std::max(best, norm2(f));
  return std::sqrt(best);
}

double max_force_norm(const EnergyForces& ef) { return max_force_norm(ef.forces); }

}  // namespace deskmd
