#include "deskmd/mdsim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "deskmd/error.hpp"
#include "deskmd/numfmt.hpp"
#include "deskmd/rng.hpp"
#include "deskmd/units.hpp"

namespace deskmd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_settings(const EMSettings& em) {
  if (!(em.fmax_tol >= 0.0)) throw InvalidArgument("fmax tolerance must be non-negative");
  if (em.max_steps < 1) throw InvalidArgument("max_steps must be at least 1");
  if (!(em.initial_step > 0.0)) throw InvalidArgument("initial step must be positive");
  if (!(em.grow_factor > 1.0) || !(em.shrink_factor > 0.0 && em.shrink_factor < 1.0))
    throw InvalidArgument("step factors must satisfy grow > 1 and 0 < shrink < 1");
}

void check_settings(const ThermoSettings& thermo) {
  if (thermo.pressure_coupling)
    throw UnsupportedFeature("pressure coupling is not supported; runs are constant volume");
  if (!(thermo.t_ref > 0.0)) throw InvalidArgument("reference temperature must be positive");
  if (!(thermo.dt > 0.0)) throw InvalidArgument("timestep must be positive");
  if (!(thermo.tau >= thermo.dt)) throw InvalidArgument("coupling time must be >= timestep");
}

}  // namespace

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::EM: return "EM";
    case Stage::NVT: return "NVT";
    case Stage::MD: return "MD";
  }
  return "?";
}

const char* to_string(StageStatus status) {
  switch (status) {
    case StageStatus::Converged: return "Converged";
    case StageStatus::MaxSteps: return "MaxSteps";
    case StageStatus::Completed: return "Completed";
  }
  return "?";
}

SimState make_state(const MolecularSystem& system) {
  SimState state;
  state.positions = system.positions();
  state.masses = system.masses();
  state.velocities.assign(system.size(), Vec3{});
  state.box_length = system.box_length;
  return state;
}

MinimizationResult steepest_descent_minimize(const MolecularSystem& system,
                                             const PotentialParams& pot, const EMSettings& em,
                                             const WorkerPoolConfig& exec,
                                             const std::optional<Restraint>& restraint) {
  check_settings(em);
  const auto start = Clock::now();
  const ForceField ff(system, pot, restraint, exec);

  std::vector<Vec3> positions = system.positions();
  EnergyForces current = ff.compute(positions);
  double fmax = max_force_norm(current);

  MinimizationResult result;
  result.energy_trace.push_back(current.potential_energy);
  result.fmax_trace.push_back(fmax);
  result.report.stage = Stage::EM;

  double step = em.initial_step;
  std::size_t iterations = 0;
  std::vector<Vec3> trial(positions.size());
  while (true) {
    if (fmax < em.fmax_tol) {
      result.report.status = StageStatus::Converged;
      break;
    }
    if (iterations >= em.max_steps || fmax == 0.0) {
      result.report.status = StageStatus::MaxSteps;
      break;
    }
    const double scale = step / fmax;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      trial[i] = positions[i] + current.forces[i] * scale;
      if (system.box_length) trial[i] = wrap_position(trial[i], *system.box_length);
    }
    ++iterations;

    std::optional<EnergyForces> candidate;
    try {
      candidate = ff.compute(trial);
    } catch (const OverlapError&) {
      // A trial landing exactly on another atom is treated as uphill.
    }
    if (candidate && candidate->potential_energy < current.potential_energy) {
      positions.swap(trial);
      current = std::move(*candidate);
      fmax = max_force_norm(current);
      ++result.accepted_steps;
      result.energy_trace.push_back(current.potential_energy);
      result.fmax_trace.push_back(fmax);
      step *= em.grow_factor;
    } else {
      step *= em.shrink_factor;
      if (step < 1e-12) {
        if (result.accepted_steps == 0)
          throw StuckMinimization("steepest descent step fell below 1e-12 nm without progress");
        step = em.initial_step;
      }
    }
  }

  result.system = system;
  result.system.set_positions(positions);
  result.report.steps_taken = iterations;
  result.report.final_energy = current.potential_energy;
  result.report.final_fmax = fmax;
  result.report.wall_seconds = seconds_since(start);
  return result;
}

SimState leapfrog_step(const SimState& state, std::span<const Vec3> forces, double dt,
                       std::size_t step) {
  const std::size_t n = state.size();
  if (forces.size() != n || state.velocities.size() != n || state.masses.size() != n)
    throw InvalidArgument("state arrays and forces must have equal length");
  SimState next = state;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(forces[i]))
      throw IntegrationError(step, "non-finite force on atom " + std::to_string(i));
    next.velocities[i] += forces[i] * (dt / state.masses[i]);
    next.positions[i] += next.velocities[i] * dt;
    if (state.box_length) next.positions[i] = wrap_position(next.positions[i], *state.box_length);
    if (!is_finite(next.positions[i]) || !is_finite(next.velocities[i]))
      throw IntegrationError(step, "non-finite state for atom " + std::to_string(i));
  }
  next.time = state.time + dt;
  return next;
}

double kinetic_energy(std::span<const Vec3> velocities, std::span<const double> masses) {
  double twice = 0.0;
  for (std::size_t i = 0; i < velocities.size(); ++i) twice += masses[i] * norm2(velocities[i]);
  return 0.5 * twice;
}

double kinetic_energy(const SimState& state) { return kinetic_energy(state.velocities, state.masses); }

double temperature_from_kinetic(double kinetic, std::size_t n_df) {
  if (n_df == 0) throw InvalidArgument("degrees of freedom must be at least 1");
  return 2.0 * kinetic / (static_cast<double>(n_df) * units::kBoltzmann);
}

double instantaneous_temperature(const SimState& state, std::size_t n_df) {
  return temperature_from_kinetic(kinetic_energy(state), n_df);
}

std::size_t degrees_of_freedom(std::size_t n_atoms, bool com_removed) {
  return (com_removed && n_atoms > 1) ? 3 * n_atoms - 3 : 3 * n_atoms;
}

double thermostat_lambda(double t_inst, double t_ref, double tau, double dt) {
  if (t_inst <= 0.0) return 1.0;
  const double lambda = std::sqrt(1.0 + (dt / tau) * (t_ref / t_inst - 1.0));
  return std::clamp(lambda, 0.8, 1.25);
}

SimState apply_thermostat(const SimState& state, double t_ref, double tau, double dt,
                          std::size_t n_df) {
  const double t_inst = instantaneous_temperature(state, n_df);
  const double lambda = thermostat_lambda(t_inst, t_ref, tau, dt);
  if (lambda == 1.0) return state;
  SimState next = state;
  for (auto& v : next.velocities) v *= lambda;
  return next;
}

SimState remove_com_motion(const SimState& state) {
  if (state.size() == 0) throw InvalidArgument("state has no atoms");
  Vec3 momentum;
  double total_mass = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    momentum += state.velocities[i] * state.masses[i];
    total_mass += state.masses[i];
  }
  const Vec3 drift = momentum / total_mass;
  if (drift == Vec3{}) return state;
  SimState next = state;
  for (auto& v : next.velocities) v -= drift;
  return next;
}

std::vector<Vec3> maxwell_boltzmann_velocities(std::span<const double> masses, double t_ref,
                                               std::uint64_t seed, bool remove_com) {
  std::vector<Vec3> velocities(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    StreamRng rng(seed, i);
    const double width = std::sqrt(units::kBoltzmann * t_ref / masses[i]);
    velocities[i] = Vec3{rng.normal(), rng.normal(), rng.normal()} * width;
  }
  if (remove_com && !masses.empty()) {
    Vec3 momentum;
    double total_mass = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      momentum += velocities[i] * masses[i];
      total_mass += masses[i];
    }
    const Vec3 drift = momentum / total_mass;
    for (auto& v : velocities) v -= drift;
  }
  const double kinetic = kinetic_energy(velocities, masses);
  if (kinetic > 0.0) {
    const auto n_df = degrees_of_freedom(masses.size(), remove_com);
    const double t_now = temperature_from_kinetic(kinetic, n_df);
    const double scale = std::sqrt(t_ref / t_now);
    for (auto& v : velocities) v *= scale;
  }
  return velocities;
}

StageRun run_stage(const MolecularSystem& system, const SimState& state, Stage stage,
                   const ThermoSettings& thermo, const PotentialParams& pot, bool thermostat_on,
                   const WorkerPoolConfig& exec, const std::optional<Restraint>& restraint) {
  if (stage == Stage::EM) throw InvalidArgument("run_stage drives NVT or MD; use the minimizer for EM");
  check_settings(thermo);
  if (state.size() != system.size() || state.velocities.size() != state.size() ||
      state.masses.size() != state.size())
    throw InvalidArgument("state does not match the system");
  if (state.box_length != system.box_length) throw InvalidArgument("state box differs from system box");

  const auto start = Clock::now();
  const ForceField ff(system, pot, restraint, exec);
  const bool com_removal = thermo.remove_com_interval > 0;
  const auto n_df = degrees_of_freedom(state.size(), com_removal);
  const std::size_t stride = std::max<std::size_t>(1, thermo.summary_stride);

  StageRun run;
  run.state = state;
  run.report.stage = stage;
  run.report.status = StageStatus::Completed;

  EnergyForces ef = ff.compute(run.state.positions);
  double t_sum = 0.0;
  std::size_t t_count = 0;
  const std::size_t half = thermo.n_steps / 2;

  for (std::size_t s = 0; s < thermo.n_steps; ++s) {
    if (thermostat_on)
      run.state = apply_thermostat(run.state, thermo.t_ref, thermo.tau, thermo.dt, n_df);
    const double ke_before = kinetic_energy(run.state);
    const double epot = ef.potential_energy;
    const double time = run.state.time;
    run.state = leapfrog_step(run.state, ef.forces, thermo.dt, s + 1);
    const double ke = 0.5 * (ke_before + kinetic_energy(run.state));
    const double temperature = temperature_from_kinetic(ke, n_df);
    if (s >= half) {
      t_sum += temperature;
      ++t_count;
    }
    if (s % stride == 0) run.rows.push_back({s, time, epot, ke, temperature});
    if (com_removal && (s + 1) % thermo.remove_com_interval == 0)
      run.state = remove_com_motion(run.state);
    try {
      ef = ff.compute(run.state.positions);
    } catch (const OverlapError& e) {
      throw IntegrationError(s + 1, e.what());
    }
  }

  run.report.steps_taken = thermo.n_steps;
  run.report.final_energy = ef.potential_energy;
  run.report.final_fmax = max_force_norm(ef);
  if (t_count > 0) run.report.mean_temperature = t_sum / static_cast<double>(t_count);
  run.report.wall_seconds = seconds_since(start);
  return run;
}

std::string trajectory_csv(std::span<const TrajectoryRow> rows) {
  std::string out = "step,time_ps,epot_kjmol,ekin_kjmol,temperature_k\n";
  for (const auto& r : rows) {
    out += std::to_string(r.step) + ',' + format_double(r.time_ps) + ',' + format_double(r.epot) +
           ',' + format_double(r.ekin) + ',' + format_double(r.temperature) + '\n';
  }
  return out;
}

}  // namespace deskmd
