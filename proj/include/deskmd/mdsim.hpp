#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deskmd/exec.hpp"
#include "deskmd/potential.hpp"
#include "deskmd/structure.hpp"

namespace deskmd {

struct SimState {
  std::vector<Vec3> positions;   // nm
  std::vector<Vec3> velocities;  // nm/ps; leapfrog half-step velocities
  std::vector<double> masses;    // amu
  double time = 0.0;             // ps
  std::optional<double> box_length;

  std::size_t size() const noexcept { return positions.size(); }
};

// Positions and masses from `system`, zero velocities.
SimState make_state(const MolecularSystem& system);

struct EMSettings {
  double fmax_tol = 1000.0;  // kJ/(mol nm)
  std::size_t max_steps = 50000;
  double initial_step = 0.01;  // nm
  double grow_factor = 1.2;
  double shrink_factor = 0.2;
};

struct ThermoSettings {
  double t_ref = 300.0;  // K
  double tau = 0.1;      // ps
  double dt = 0.002;     // ps
  std::size_t n_steps = 0;
  std::size_t remove_com_interval = 100;  // 0 disables
  std::size_t summary_stride = 100;
  bool pressure_coupling = false;  // unsupported; requesting it is an error
};

enum class Stage { EM, NVT, MD };
enum class StageStatus { Converged, MaxSteps, Completed };

const char* to_string(Stage stage);
const char* to_string(StageStatus status);

struct StageReport {
  Stage stage = Stage::EM;
  StageStatus status = StageStatus::Completed;
  std::size_t steps_taken = 0;
  double final_energy = 0.0;  // kJ/mol
  double final_fmax = 0.0;    // kJ/(mol nm)
  std::optional<double> mean_temperature;  // K
  double wall_seconds = 0.0;
};

struct MinimizationResult {
  MolecularSystem system;
  StageReport report;
  std::size_t accepted_steps = 0;
  // Energy before the first step followed by every accepted energy.
  std::vector<double> energy_trace;
  std::vector<double> fmax_trace;
};

// Steepest descent with adaptive step: every atom moves by h * F_i / F_max;
// an energy decrease is accepted (h *= grow), otherwise rejected (h *= shrink).
// `report.steps_taken` counts trial steps. If h falls below 1e-12 nm before
// any step was accepted the minimizer is stuck and throws; after progress it
// restarts from the initial step size.
MinimizationResult steepest_descent_minimize(const MolecularSystem& system,
                                             const PotentialParams& pot, const EMSettings& em,
                                             const WorkerPoolConfig& exec = {},
                                             const std::optional<Restraint>& restraint = std::nullopt);

// v += F/m dt; x += v dt; positions folded into the box when periodic.
// Throws IntegrationError (carrying `step`) on a non-finite force or result.
SimState leapfrog_step(const SimState& state, std::span<const Vec3> forces, double dt,
                       std::size_t step = 0);

double kinetic_energy(std::span<const Vec3> velocities, std::span<const double> masses);
double kinetic_energy(const SimState& state);

// 2 KE / (n_df k_B).
double instantaneous_temperature(const SimState& state, std::size_t n_df);
double temperature_from_kinetic(double kinetic, std::size_t n_df);

// 3N - 3 with centre-of-mass removal, 3N without.
std::size_t degrees_of_freedom(std::size_t n_atoms, bool com_removed);

// Weak-coupling rescale lambda = sqrt(1 + dt/tau (T_ref/T - 1)), clamped to
// [0.8, 1.25]. Zero kinetic energy leaves the state untouched.
double thermostat_lambda(double t_inst, double t_ref, double tau, double dt);
SimState apply_thermostat(const SimState& state, double t_ref, double tau, double dt,
                          std::size_t n_df);

SimState remove_com_motion(const SimState& state);

// Maxwell-Boltzmann draw at `t_ref`, one RNG stream per atom, then scaled so
// the instantaneous temperature equals `t_ref` exactly.
std::vector<Vec3> maxwell_boltzmann_velocities(std::span<const double> masses, double t_ref,
                                               std::uint64_t seed, bool remove_com = true);

struct TrajectoryRow {
  std::size_t step = 0;
  double time_ps = 0.0;
  double epot = 0.0;  // kJ/mol
  double ekin = 0.0;  // kJ/mol, mean of the two bracketing half steps
  double temperature = 0.0;
};

struct StageRun {
  SimState state;
  StageReport report;
  std::vector<TrajectoryRow> rows;
};

// Leapfrog over `thermo.n_steps`; `stage` must be NVT or MD. The thermostat,
// when on, rescales v(t - dt/2) before each update. Rows are emitted every
// `summary_stride` steps; the report's mean temperature covers the final half.
StageRun run_stage(const MolecularSystem& system, const SimState& state, Stage stage,
                   const ThermoSettings& thermo, const PotentialParams& pot, bool thermostat_on,
                   const WorkerPoolConfig& exec = {},
                   const std::optional<Restraint>& restraint = std::nullopt);

// `step,time_ps,epot_kjmol,ekin_kjmol,temperature_k`
std::string trajectory_csv(std::span<const TrajectoryRow> rows);

}  // namespace deskmd
