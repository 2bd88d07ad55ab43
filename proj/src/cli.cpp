#include "deskmd/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "deskmd/bench.hpp"
#include "deskmd/builders.hpp"
#include "deskmd/docking.hpp"
#include "deskmd/error.hpp"
#include "deskmd/mdsim.hpp"
#include "deskmd/numfmt.hpp"
#include "deskmd/params.hpp"
#include "deskmd/plot.hpp"

namespace deskmd {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

// Resolved configuration, echoed to run.log in insertion order.
class RunLog {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
      if (k == key) {
        v = value;
        return;
      }
    entries_.emplace_back(key, value);
  }
  void set(const std::string& key, double value) { set(key, format_double(value)); }
  void set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

  std::string str() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct CommonOptions {
  std::string out = ".";
  std::uint64_t seed = 42;
  std::optional<std::size_t> workers;
  bool unordered = false;
};

struct PhysicsOptions {
  std::string params_file;
  std::optional<double> box;
  double cutoff = 1.0;
  bool no_shift = false;
  bool no_electrostatics = false;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write output file: " + path.string());
  out << text;
  if (!out) throw Error("failed writing output file: " + path.string());
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

std::size_t resolve_workers(const CommonOptions& common) {
  if (common.workers) {
    if (*common.workers < 1) throw UsageError("--workers must be at least 1");
    return *common.workers;
  }
  if (const char* env = std::getenv(kWorkersEnv)) {
    const auto v = parse_uint(env);
    if (!v || *v < 1) throw UsageError(std::string(kWorkersEnv) + " must be a positive integer");
    return static_cast<std::size_t>(*v);
  }
  return 1;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if constexpr (std::is_same_v<T, double>) {
      const auto v = parse_double(item);
      if (!v) throw UsageError(std::string("bad value in ") + flag + ": '" + item + "'");
      out.push_back(*v);
    } else {
      const auto v = parse_uint(item);
      if (!v || *v < 1) throw UsageError(std::string("bad value in ") + flag + ": '" + item + "'");
      out.push_back(static_cast<T>(*v));
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + " needs at least one value");
  return out;
}

MolecularSystem load_structure(const std::string& path, const std::string& format) {
  StructureFormat fmt = StructureFormat::Xyz;
  if (format == "pdb" || (format.empty() && fs::path(path).extension() == ".pdb"))
    fmt = StructureFormat::PdbSubset;
  if (!fs::exists(path)) throw Error("input file not found: " + path);
  ParseDiagnostics diag;
  auto system = parse_structure(read_file(path), fmt, &diag);
  if (diag.skipped_records > 0 || diag.skipped_models > 0)
    std::cerr << "note: " << path << ": skipped " << diag.skipped_records << " non-atom records and "
              << diag.skipped_models << " extra models\n";
  if (system.label.empty()) system.label = fs::path(path).filename().string();
  return system;
}

ParameterTable parameter_table(const PhysicsOptions& phys) {
  auto table = default_parameters();
  table.merge(organic_parameters());
  if (!phys.params_file.empty()) table.merge(parse_parameter_file(read_file(phys.params_file)));
  return table;
}

PotentialParams potential_from(const PhysicsOptions& phys, bool periodic) {
  PotentialParams pot;
  pot.cutoff = phys.cutoff;
  pot.periodic = periodic;
  pot.shift_at_cutoff = !phys.no_shift;
  pot.electrostatics = !phys.no_electrostatics;
  return pot;
}

// Bench subcommands take --workers as a sweep list instead.
void add_common(CLI::App* sub, CommonOptions& common, bool with_workers = true) {
  sub->add_option("--out", common.out, "Output directory")->capture_default_str();
  sub->add_option("--seed", common.seed, "Seed for all randomized behavior")->capture_default_str();
  if (with_workers)
    sub->add_option("--workers", common.workers,
                    std::string("Worker threads (default: $") + kWorkersEnv + " or 1)");
  sub->add_flag("--unordered", common.unordered,
                "Combine partial force sums in completion order (not reproducible)");
}

void add_physics(CLI::App* sub, PhysicsOptions& phys, bool with_box) {
  sub->add_option("--params", phys.params_file, "Parameter file (key.field = value)");
  if (with_box) sub->add_option("--box", phys.box, "Cubic periodic box length, nm");
  sub->add_option("--cutoff", phys.cutoff, "Pair cutoff, nm")->capture_default_str();
  sub->add_flag("--no-shift", phys.no_shift, "Plain truncation without energy shift");
  sub->add_flag("--no-electrostatics", phys.no_electrostatics, "Lennard-Jones only");
}

void log_common(RunLog& log, const std::string& command, const CommonOptions& common,
                std::size_t workers) {
  log.set("command", command);
  log.set("seed", static_cast<std::uint64_t>(common.seed));
  log.set("workers", static_cast<std::uint64_t>(workers));
  log.set("deterministic", !common.unordered);
  log.set("out", common.out);
}

void log_physics(RunLog& log, const PhysicsOptions& phys, const PotentialParams& pot) {
  log.set("params_file", phys.params_file.empty() ? std::string("(builtin)") : phys.params_file);
  log.set("box_nm", phys.box ? format_double(*phys.box) : std::string("none"));
  log.set("cutoff_nm", pot.cutoff);
  log.set("shift_at_cutoff", pot.shift_at_cutoff);
  log.set("electrostatics", pot.electrostatics);
}

struct StructureOptions {
  std::string path;
  std::string format;
};

MolecularSystem prepare_system(const StructureOptions& so, const PhysicsOptions& phys) {
  auto system = load_structure(so.path, so.format);
  assign_parameters(system, parameter_table(phys));
  system.box_length = phys.box;
  if (phys.box) {
    for (auto& a : system.atoms) a.position = wrap_position(a.position, *phys.box);
  }
  return system;
}

// ---------------------------------------------------------------- minimize

struct MinimizeOptions {
  CommonOptions common;
  PhysicsOptions phys;
  StructureOptions structure;
  EMSettings em;
};

void cmd_minimize(const MinimizeOptions& o, RunLog& log) {
  const auto workers = resolve_workers(o.common);
  auto system = prepare_system(o.structure, o.phys);
  const auto pot = potential_from(o.phys, system.box_length.has_value());
  log_common(log, "minimize", o.common, workers);
  log.set("structure", o.structure.path);
  log_physics(log, o.phys, pot);
  log.set("fmax_tol", o.em.fmax_tol);
  log.set("max_steps", static_cast<std::uint64_t>(o.em.max_steps));
  log.set("initial_step_nm", o.em.initial_step);

  const auto result = steepest_descent_minimize(system, pot, o.em, {workers, !o.common.unordered});

  std::string csv = "step,energy_kjmol,fmax_kjmolnm\n";
  for (std::size_t i = 0; i < result.energy_trace.size(); ++i)
    csv += std::to_string(i) + ',' + format_double(result.energy_trace[i]) + ',' +
           format_double(result.fmax_trace[i]) + '\n';
  write_file(fs::path(o.common.out) / "em.csv", csv);
  write_file(fs::path(o.common.out) / "minimized.xyz", write_structure(result.system));

  log.set("status", std::string(to_string(result.report.status)));
  log.set("steps_taken", static_cast<std::uint64_t>(result.report.steps_taken));
  log.set("accepted_steps", static_cast<std::uint64_t>(result.accepted_steps));
  log.set("final_energy_kjmol", result.report.final_energy);
  log.set("final_fmax", result.report.final_fmax);
  log.set("stage_wall_seconds", result.report.wall_seconds);
  std::cout << "EM " << to_string(result.report.status) << " after " << result.report.steps_taken
            << " steps: E=" << result.report.final_energy << " kJ/mol, Fmax=" << result.report.final_fmax
            << '\n';
}

// ---------------------------------------------------------------- nvt / md

struct DynamicsOptions {
  CommonOptions common;
  PhysicsOptions phys;
  StructureOptions structure;
  ThermoSettings thermo;
  bool nve = false;
};

void cmd_dynamics(Stage stage, const DynamicsOptions& o, RunLog& log) {
  const auto workers = resolve_workers(o.common);
  if (o.thermo.pressure_coupling)
    throw UnsupportedFeature("pressure coupling (Parrinello-Rahman) is not supported; runs are NVT/NVE");
  auto system = prepare_system(o.structure, o.phys);
  const auto pot = potential_from(o.phys, system.box_length.has_value());
  const bool thermostat_on = stage == Stage::NVT || !o.nve;
  log_common(log, stage == Stage::NVT ? "nvt" : "md", o.common, workers);
  log.set("structure", o.structure.path);
  log_physics(log, o.phys, pot);
  log.set("steps", static_cast<std::uint64_t>(o.thermo.n_steps));
  log.set("dt_ps", o.thermo.dt);
  log.set("t_ref_k", o.thermo.t_ref);
  log.set("tau_ps", o.thermo.tau);
  log.set("thermostat", thermostat_on);
  log.set("com_interval", static_cast<std::uint64_t>(o.thermo.remove_com_interval));
  log.set("stride", static_cast<std::uint64_t>(o.thermo.summary_stride));

  auto state = make_state(system);
  state.velocities = maxwell_boltzmann_velocities(state.masses, o.thermo.t_ref, o.common.seed,
                                                  o.thermo.remove_com_interval > 0);
  const auto run = run_stage(system, state, stage, o.thermo, pot, thermostat_on,
                             {workers, !o.common.unordered});
  write_file(fs::path(o.common.out) / "trajectory.csv", trajectory_csv(run.rows));
  auto final_system = system;
  final_system.set_positions(run.state.positions);
  write_file(fs::path(o.common.out) / "final.xyz", write_structure(final_system));

  log.set("status", std::string(to_string(run.report.status)));
  log.set("final_energy_kjmol", run.report.final_energy);
  log.set("mean_temperature_k",
          run.report.mean_temperature ? format_double(*run.report.mean_temperature) : std::string("n/a"));
  log.set("stage_wall_seconds", run.report.wall_seconds);
  std::cout << to_string(stage) << " completed " << run.report.steps_taken << " steps";
  if (run.report.mean_temperature) std::cout << ", mean T (final half) " << *run.report.mean_temperature << " K";
  std::cout << '\n';
}

// ---------------------------------------------------------------- dock

struct DockOptions {
  CommonOptions common;
  PhysicsOptions phys;
  std::string receptor;
  std::string ligand;
  std::string format;
  std::size_t n = 100;
  std::size_t top = 10;
  std::string pocket_center;
  double pocket_radius = 1.5;
  std::string mode;
};

void cmd_dock(const DockOptions& o, RunLog& log) {
  const auto workers = resolve_workers(o.common);
  if (o.n < 1) throw UsageError("--n must be at least 1");
  if (o.top < 1) throw UsageError("--top must be at least 1");
  DockMode mode = workers > 1 ? DockMode::Parallel : DockMode::Sequential;
  if (o.mode == "sequential") mode = DockMode::Sequential;
  else if (o.mode == "parallel") mode = DockMode::Parallel;
  else if (!o.mode.empty()) throw UsageError("--mode must be sequential or parallel");

  const auto table = parameter_table(o.phys);
  auto receptor = load_structure(o.receptor, o.format);
  auto ligand = load_structure(o.ligand, o.format);
  assign_parameters(receptor, table);
  assign_parameters(ligand, table);
  auto job = make_docking_job(std::move(receptor), std::move(ligand), o.n, o.common.seed);
  if (!o.pocket_center.empty()) {
    const auto c = parse_list<double>(o.pocket_center, "--pocket-center");
    if (c.size() != 3) throw UsageError("--pocket-center needs x,y,z");
    job.pocket_center = {c[0], c[1], c[2]};
  }
  job.pocket_radius = o.pocket_radius;
  job.pot = potential_from(o.phys, false);
  job.electrostatics_on = !o.phys.no_electrostatics;

  log_common(log, "dock", o.common, workers);
  log.set("receptor", o.receptor);
  log.set("ligand", o.ligand);
  log.set("receptor_atoms", static_cast<std::uint64_t>(job.receptor.size()));
  log.set("ligand_atoms", static_cast<std::uint64_t>(job.ligand.size()));
  log.set("n_conformers", static_cast<std::uint64_t>(o.n));
  log.set("mode", std::string(mode == DockMode::Sequential ? "sequential" : "parallel"));
  log.set("pocket_center_nm", format_double(job.pocket_center.x) + "," + format_double(job.pocket_center.y) +
                                  "," + format_double(job.pocket_center.z));
  log.set("pocket_radius_nm", job.pocket_radius);
  log_physics(log, o.phys, job.pot);

  const auto result = dock(job, workers, mode);
  const auto top = select_top_k(result.poses, o.top);
  write_file(fs::path(o.common.out) / "poses.csv", poses_csv(result.poses));
  write_file(fs::path(o.common.out) / "ranked.csv", poses_csv(top.poses));

  log.set("top_k", static_cast<std::uint64_t>(o.top));
  log.set("top_truncated", top.truncated);
  log.set("clash_count", static_cast<std::uint64_t>(result.clash_count));
  log.set("dock_wall_seconds", result.wall_seconds);
  std::cout << "docked " << o.n << " conformers in " << result.wall_seconds << " s ("
            << result.clash_count << " clashes); best score " << top.poses.front().score << " kJ/mol\n";
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
  CommonOptions common;
  PhysicsOptions phys;
  StructureOptions structure;
  std::string receptor;
  std::string ligand;
  std::string workloads;
  std::string workers = "1,2,4,8";
  std::string stages = "em,nvt,md";
  std::size_t reps = 3;
  std::size_t warmup = 1;
  std::size_t per_side = 5;
  double fluid_box = 3.0;
  std::size_t receptor_atoms = 1000;
  std::size_t ligand_atoms = 24;
};

std::uint64_t checksum_positions(std::span<const Vec3> positions, double energy) {
  Checksum sum;
  sum.add(energy);
  for (const auto& p : positions) {
    sum.add(p.x);
    sum.add(p.y);
    sum.add(p.z);
  }
  return sum.value();
}

void cmd_bench_md(const BenchOptions& o, RunLog& log) {
  const auto workloads = parse_list<std::size_t>(o.workloads.empty() ? "200" : o.workloads, "--steps");
  const auto worker_list = parse_list<std::size_t>(o.workers, "--workers");
  if (o.reps < 1) throw UsageError("--reps must be at least 1");
  std::vector<BenchStage> stages;
  {
    std::stringstream ss(o.stages);
    std::string item;
    while (std::getline(ss, item, ',')) {
      for (auto& c : item) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      try {
        const auto s = parse_bench_stage(item);
        if (s == BenchStage::DOCK) throw InvalidArgument("DOCK");
        stages.push_back(s);
      } catch (const InvalidArgument&) {
        throw UsageError("--stages accepts em, nvt, md");
      }
    }
  }

  MolecularSystem system;
  if (!o.structure.path.empty()) {
    system = prepare_system(o.structure, o.phys);
  } else {
    system = make_lj_fluid(o.per_side, o.fluid_box);
    jitter_positions(system, 0.03, o.common.seed);
  }
  const auto pot = potential_from(o.phys, system.box_length.has_value());
  log_common(log, "bench md", o.common, worker_list.back());
  log.set("workers", o.workers);
  log.set("system", o.structure.path.empty() ? system.label : o.structure.path);
  log.set("atoms", static_cast<std::uint64_t>(system.size()));
  log.set("stages", o.stages);
  log.set("steps", o.workloads.empty() ? std::string("200") : o.workloads);
  log.set("reps", static_cast<std::uint64_t>(o.reps));
  log.set("warmup", static_cast<std::uint64_t>(o.warmup));
  log_physics(log, o.phys, pot);

  ThermoSettings thermo;
  SimState start = make_state(system);
  start.velocities = maxwell_boltzmann_velocities(start.masses, thermo.t_ref, o.common.seed, true);

  std::vector<BenchmarkRecord> records;
  for (auto stage : stages)
    for (auto workload : workloads) {
      // MD continues from an equilibrated state prepared outside the timing.
      SimState md_start = start;
      if (stage == BenchStage::MD) {
        ThermoSettings warm = thermo;
        warm.n_steps = workload;
        md_start = run_stage(system, start, Stage::NVT, warm, pot, true, {1, true}).state;
      }
      for (auto w : worker_list) {
        const WorkerPoolConfig cfg{w, !o.common.unordered};
        std::function<std::uint64_t()> runner;
        if (stage == BenchStage::EM) {
          runner = [&, workload, cfg] {
            EMSettings em;
            em.fmax_tol = 0.0;
            em.max_steps = workload;
            const auto r = steepest_descent_minimize(system, pot, em, cfg);
            return checksum_positions(r.system.positions(), r.report.final_energy);
          };
        } else {
          runner = [&, workload, cfg, stage] {
            ThermoSettings t = thermo;
            t.n_steps = workload;
            const auto& from = stage == BenchStage::MD ? md_start : start;
            const auto r = run_stage(system, from, stage == BenchStage::MD ? Stage::MD : Stage::NVT, t, pot,
                                     true, cfg);
            return checksum_positions(r.state.positions, r.report.final_energy);
          };
        }
        auto recs = measure(runner, {stage, workload, w, o.reps, o.warmup});
        records.insert(records.end(), recs.begin(), recs.end());
        std::cout << to_string(stage) << " workload=" << workload << " workers=" << w
                  << " median=" << median([&] {
                       std::vector<double> t;
                       for (const auto& r : recs) t.push_back(r.wall_seconds);
                       return t;
                     }())
                  << " s\n";
      }
    }
  write_file(fs::path(o.common.out) / "raw.csv", write_records_csv(records));
  log.set("records", static_cast<std::uint64_t>(records.size()));
}

void cmd_bench_dock(const BenchOptions& o, RunLog& log) {
  const auto workloads = parse_list<std::size_t>(o.workloads.empty() ? "10,100,500" : o.workloads, "--n");
  const auto worker_list = parse_list<std::size_t>(o.workers, "--workers");
  if (o.reps < 1) throw UsageError("--reps must be at least 1");

  MolecularSystem receptor;
  MolecularSystem ligand;
  const auto table = parameter_table(o.phys);
  if (!o.receptor.empty() || !o.ligand.empty()) {
    if (o.receptor.empty() || o.ligand.empty()) throw UsageError("give both --receptor and --ligand");
    receptor = load_structure(o.receptor, "");
    ligand = load_structure(o.ligand, "");
    assign_parameters(receptor, table);
    assign_parameters(ligand, table);
  } else {
    receptor = make_synthetic_receptor(o.receptor_atoms, o.common.seed);
    ligand = make_synthetic_ligand(o.ligand_atoms, o.common.seed);
  }
  const auto pot = potential_from(o.phys, false);
  log_common(log, "bench dock", o.common, worker_list.back());
  log.set("workers", o.workers);
  log.set("receptor", o.receptor.empty() ? receptor.label : o.receptor);
  log.set("ligand", o.ligand.empty() ? ligand.label : o.ligand);
  log.set("receptor_atoms", static_cast<std::uint64_t>(receptor.size()));
  log.set("ligand_atoms", static_cast<std::uint64_t>(ligand.size()));
  log.set("n", o.workloads.empty() ? std::string("10,100,500") : o.workloads);
  log.set("reps", static_cast<std::uint64_t>(o.reps));
  log.set("warmup", static_cast<std::uint64_t>(o.warmup));
  log_physics(log, o.phys, pot);

  std::vector<BenchmarkRecord> records;
  for (auto n : workloads) {
    auto job = make_docking_job(receptor, ligand, n, o.common.seed);
    job.pot = pot;
    job.electrostatics_on = !o.phys.no_electrostatics;
    for (auto w : worker_list) {
      const auto mode = w == 1 ? DockMode::Sequential : DockMode::Parallel;
      auto runner = [&job, w, mode] {
        const auto r = dock(job, w, mode);
        Checksum sum;
        for (const auto& p : r.poses) sum.add(p.score);
        return sum.value();
      };
      auto recs = measure(runner, {BenchStage::DOCK, n, w, o.reps, o.warmup});
      records.insert(records.end(), recs.begin(), recs.end());
      std::vector<double> t;
      for (const auto& r : recs) t.push_back(r.wall_seconds);
      std::cout << "DOCK n=" << n << " workers=" << w << " median=" << median(t) << " s\n";
    }
  }
  write_file(fs::path(o.common.out) / "raw.csv", write_records_csv(records));
  log.set("records", static_cast<std::uint64_t>(records.size()));
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string out = ".";
  std::string csv;
  bool amdahl = false;
  bool plots = false;
};

void cmd_analyze(const AnalyzeOptions& o, RunLog& log) {
  if (!fs::exists(o.csv)) throw Error("input file not found: " + o.csv);
  const auto records = read_records_csv(read_file(o.csv));
  if (records.empty()) throw Error("no benchmark records in " + o.csv);
  log.set("command", std::string("analyze"));
  log.set("csv", o.csv);
  log.set("amdahl", o.amdahl);
  log.set("plots", o.plots);
  log.set("out", o.out);

  ScalingGroups groups;
  for (const auto& [key, recs] : group_records(records)) groups[key] = compute_scaling(recs);

  // Headline group: largest workload of the first stage present.
  const BenchStage first_stage = groups.begin()->first.first;
  const std::vector<ScalingRow>* headline = nullptr;
  for (const auto& [key, rows] : groups) {
    const auto name = std::string("scaling_") + to_string(key.first) + "_n" + std::to_string(key.second) + ".csv";
    write_file(fs::path(o.out) / name, write_scaling_csv(rows));
    if (key.first == first_stage) headline = &rows;
  }
  write_file(fs::path(o.out) / "scaling.csv", write_scaling_csv(*headline));
  log.set("groups", static_cast<std::uint64_t>(groups.size()));

  if (o.amdahl) {
    std::string text;
    for (const auto& [key, rows] : groups) {
      text += std::string("stage=") + to_string(key.first) + " workload=" + std::to_string(key.second) + " ";
      if (rows.size() < 2) {
        text += "skipped=single-worker-count\n";
        continue;
      }
      text += format_amdahl(amdahl_fit(rows)) + "\n";
    }
    write_file(fs::path(o.out) / "amdahl.log", text);
  }

  if (o.plots) {
    ScalingGroups dock_groups;
    ScalingGroups md_groups;
    for (const auto& [key, rows] : groups) (key.first == BenchStage::DOCK ? dock_groups : md_groups)[key] = rows;
    std::vector<PlotKind> kinds;
    if (!md_groups.empty()) {
      for (auto kind : {PlotKind::WallTime, PlotKind::Efficiency}) {
        const auto series = build_series(kind, md_groups);
        emit_plot(kind, series, fs::path(o.out) / plot_filename(kind));
        kinds.push_back(kind);
      }
    }
    if (!dock_groups.empty()) {
      for (auto kind : {PlotKind::DockingTime, PlotKind::Speedup}) {
        const auto series = build_series(kind, dock_groups);
        emit_plot(kind, series, fs::path(o.out) / plot_filename(kind));
        kinds.push_back(kind);
      }
    }
    std::string names;
    for (auto k : kinds) names += (names.empty() ? "" : ",") + std::string(plot_filename(k));
    log.set("plot_files", names);
  }
  for (const auto& [key, rows] : groups) {
    std::cout << to_string(key.first) << " n=" << key.second << ":";
    for (const auto& r : rows) std::cout << " p=" << r.workers << " S=" << r.speedup << " E=" << r.efficiency;
    std::cout << '\n';
  }
}

// ---------------------------------------------------------------- driver

int dispatch(CLI::App& app, const std::function<void(RunLog&)>& selected, const std::string& out_dir) {
  RunLog log;
  log.set("started", timestamp());
  const auto start = std::chrono::steady_clock::now();
  try {
    fs::create_directories(out_dir);
    selected(log);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  log.set("wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  try {
    write_file(fs::path(out_dir) / "run.log", log.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int run(std::vector<std::string> args) {
  CLI::App app{"deskmd: desk-scale MD, rigid-body docking and parallel-scaling benchmarks"};
  app.require_subcommand(1);

  MinimizeOptions min_opts;
  auto* minimize = app.add_subcommand("minimize", "Steepest-descent energy minimization");
  add_common(minimize, min_opts.common);
  add_physics(minimize, min_opts.phys, true);
  minimize->add_option("--structure", min_opts.structure.path, "Input structure (.pdb or .xyz)")->required();
  minimize->add_option("--format", min_opts.structure.format, "pdb or xyz (default: by extension)")
      ->check(CLI::IsMember({"pdb", "xyz"}));
  minimize->add_option("--fmax", min_opts.em.fmax_tol, "Force tolerance, kJ/mol/nm")->capture_default_str();
  minimize->add_option("--max-steps", min_opts.em.max_steps, "Iteration limit")->capture_default_str();
  minimize->add_option("--step", min_opts.em.initial_step, "Initial step, nm")->capture_default_str();

  DynamicsOptions nvt_opts;
  nvt_opts.thermo.n_steps = 5000;
  DynamicsOptions md_opts;
  md_opts.thermo.n_steps = 10000;
  auto add_dynamics = [&](CLI::App* sub, DynamicsOptions& o) {
    add_common(sub, o.common);
    add_physics(sub, o.phys, true);
    sub->add_option("--structure", o.structure.path, "Input structure (.pdb or .xyz)")->required();
    sub->add_option("--format", o.structure.format, "pdb or xyz (default: by extension)")
        ->check(CLI::IsMember({"pdb", "xyz"}));
    sub->add_option("--steps", o.thermo.n_steps, "Number of leapfrog steps")->capture_default_str();
    sub->add_option("--dt", o.thermo.dt, "Timestep, ps")->capture_default_str();
    sub->add_option("--tref", o.thermo.t_ref, "Reference temperature, K")->capture_default_str();
    sub->add_option("--tau", o.thermo.tau, "Thermostat coupling time, ps")->capture_default_str();
    sub->add_option("--com-interval", o.thermo.remove_com_interval, "COM removal interval (0 = off)")
        ->capture_default_str();
    sub->add_option("--stride", o.thermo.summary_stride, "Trajectory summary stride")->capture_default_str();
    sub->add_flag("--pressure-coupling", o.thermo.pressure_coupling, "Request a barostat (unsupported)");
  };
  auto* nvt = app.add_subcommand("nvt", "Thermostatted equilibration");
  add_dynamics(nvt, nvt_opts);
  auto* md = app.add_subcommand("md", "Production leapfrog dynamics");
  add_dynamics(md, md_opts);
  md->add_flag("--nve", md_opts.nve, "Disable the thermostat");

  DockOptions dock_opts;
  auto* dock_cmd = app.add_subcommand("dock", "Rigid-body docking over random poses");
  add_common(dock_cmd, dock_opts.common);
  add_physics(dock_cmd, dock_opts.phys, false);
  dock_cmd->add_option("--receptor", dock_opts.receptor, "Receptor structure")->required();
  dock_cmd->add_option("--ligand", dock_opts.ligand, "Ligand structure")->required();
  dock_cmd->add_option("--format", dock_opts.format, "pdb or xyz (default: by extension)")
      ->check(CLI::IsMember({"pdb", "xyz"}));
  dock_cmd->add_option("--n", dock_opts.n, "Number of conformers")->capture_default_str();
  dock_cmd->add_option("--top", dock_opts.top, "Poses in ranked.csv")->capture_default_str();
  dock_cmd->add_option("--pocket-center", dock_opts.pocket_center, "x,y,z in nm (default: receptor centroid)");
  dock_cmd->add_option("--pocket-radius", dock_opts.pocket_radius, "nm")->capture_default_str();
  dock_cmd->add_option("--mode", dock_opts.mode, "sequential or parallel (default: by worker count)");

  BenchOptions bench_md_opts;
  BenchOptions bench_dock_opts;
  bench_dock_opts.reps = 5;
  auto* bench = app.add_subcommand("bench", "Timed worker-count sweeps");
  bench->require_subcommand(1);
  auto* bench_md = bench->add_subcommand("md", "Sweep EM/NVT/MD stages");
  add_common(bench_md, bench_md_opts.common, false);
  add_physics(bench_md, bench_md_opts.phys, true);
  bench_md->add_option("--structure", bench_md_opts.structure.path, "Input structure (default: LJ fluid)");
  bench_md->add_option("--format", bench_md_opts.structure.format, "pdb or xyz");
  bench_md->add_option("--steps", bench_md_opts.workloads, "Comma-separated step counts (default 200)");
  bench_md->add_option("--workers", bench_md_opts.workers, "Comma-separated worker counts")->capture_default_str();
  bench_md->add_option("--stages", bench_md_opts.stages, "Comma-separated subset of em,nvt,md")->capture_default_str();
  bench_md->add_option("--reps", bench_md_opts.reps, "Timed repetitions")->capture_default_str();
  bench_md->add_option("--warmup", bench_md_opts.warmup, "Untimed warmup runs")->capture_default_str();
  bench_md->add_option("--per-side", bench_md_opts.per_side, "Built-in fluid lattice size")->capture_default_str();
  bench_md->add_option("--fluid-box", bench_md_opts.fluid_box, "Built-in fluid box, nm")->capture_default_str();

  auto* bench_dock = bench->add_subcommand("dock", "Sweep conformer counts");
  add_common(bench_dock, bench_dock_opts.common, false);
  add_physics(bench_dock, bench_dock_opts.phys, false);
  bench_dock->add_option("--receptor", bench_dock_opts.receptor, "Receptor (default: synthetic)");
  bench_dock->add_option("--ligand", bench_dock_opts.ligand, "Ligand (default: synthetic)");
  bench_dock->add_option("--n", bench_dock_opts.workloads, "Comma-separated conformer counts (default 10,100,500)");
  bench_dock->add_option("--workers", bench_dock_opts.workers, "Comma-separated worker counts")->capture_default_str();
  bench_dock->add_option("--reps", bench_dock_opts.reps, "Timed repetitions")->capture_default_str();
  bench_dock->add_option("--warmup", bench_dock_opts.warmup, "Untimed warmup runs")->capture_default_str();
  bench_dock->add_option("--receptor-atoms", bench_dock_opts.receptor_atoms, "Synthetic receptor size")
      ->capture_default_str();
  bench_dock->add_option("--ligand-atoms", bench_dock_opts.ligand_atoms, "Synthetic ligand size")
      ->capture_default_str();

  AnalyzeOptions analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "Scaling tables, Amdahl fit and plots from raw.csv");
  analyze->add_option("--out", analyze_opts.out, "Output directory")->capture_default_str();
  analyze->add_option("--csv", analyze_opts.csv, "Raw benchmark CSV")->required();
  analyze->add_flag("--amdahl", analyze_opts.amdahl, "Fit Amdahl's law per group");
  analyze->add_flag("--plots", analyze_opts.plots, "Write SVG plots");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  if (minimize->parsed())
    return dispatch(app, [&](RunLog& log) { cmd_minimize(min_opts, log); }, min_opts.common.out);
  if (nvt->parsed())
    return dispatch(app, [&](RunLog& log) { cmd_dynamics(Stage::NVT, nvt_opts, log); }, nvt_opts.common.out);
  if (md->parsed())
    return dispatch(app, [&](RunLog& log) { cmd_dynamics(Stage::MD, md_opts, log); }, md_opts.common.out);
  if (dock_cmd->parsed())
    return dispatch(app, [&](RunLog& log) { cmd_dock(dock_opts, log); }, dock_opts.common.out);
  if (bench_md->parsed())
    return dispatch(app, [&](RunLog& log) { cmd_bench_md(bench_md_opts, log); }, bench_md_opts.common.out);
  if (bench_dock->parsed())
    return dispatch(app, [&](RunLog& log) { cmd_bench_dock(bench_dock_opts, log); }, bench_dock_opts.common.out);
  if (analyze->parsed())
    return dispatch(app, [&](RunLog& log) { cmd_analyze(analyze_opts, log); }, analyze_opts.out);
  std::cerr << app.help();
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

int run_cli(const std::vector<std::string>& args) { return run(args); }

}  // namespace deskmd
