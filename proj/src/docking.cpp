#include "deskmd/docking.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "deskmd/error.hpp"
#include "deskmd/exec.hpp"
#include "deskmd/numfmt.hpp"
#include "deskmd/rng.hpp"

namespace deskmd {

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double len = deskmd::norm(axis);
  if (len == 0.0) return identity();
  const Vec3 u = axis / len;
  const double s = std::sin(0.5 * angle);
  return {std::cos(0.5 * angle), u.x * s, u.y * s, u.z * s};
}

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::normalized() const {
  const double n = norm();
  if (n == 0.0) throw InvalidArgument("cannot normalize a zero quaternion");
  return {w / n, x / n, y / n, z / n};
}

Vec3 Quaternion::rotate(const Vec3& v) const {
  // v' = v + 2w (u x v) + 2 u x (u x v)
  const Vec3 u{x, y, z};
  const Vec3 t = cross(u, v) * 2.0;
  return v + t * w + cross(u, t);
}

DockingJob make_docking_job(MolecularSystem receptor, MolecularSystem ligand,
                            std::size_t n_conformers, std::uint64_t seed) {
  if (n_conformers < 1) throw InvalidArgument("n_conformers must be at least 1");
  DockingJob job;
  job.pocket_center = centroid(receptor);
  job.receptor = std::move(receptor);
  job.ligand = std::move(ligand);
  job.n_conformers = n_conformers;
  job.seed = seed;
  return job;
}

namespace {

void check_job(const DockingJob& job) {
  if (job.n_conformers < 1) throw InvalidArgument("n_conformers must be at least 1");
  if (!(job.pocket_radius > 0.0)) throw InvalidArgument("pocket radius must be positive");
  if (job.ligand.atoms.empty()) throw InvalidArgument("ligand has no atoms");
  if (job.receptor.atoms.empty()) throw InvalidArgument("receptor has no atoms");
  if (!(job.pot.cutoff > 0.0)) throw InvalidArgument("cutoff must be positive");
}

Pose pose_for(const DockingJob& job, const Vec3& ligand_centroid, std::size_t k) {
  StreamRng rng(job.seed, k);
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double u3 = rng.uniform();
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Quaternion q{b * std::cos(two_pi * u3), a * std::sin(two_pi * u2), a * std::cos(two_pi * u2),
               b * std::sin(two_pi * u3)};
  Vec3 offset;
  do {
    offset = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
  } while (norm2(offset) > 1.0);
  Pose pose;
  pose.conformer_index = k;
  pose.rotation = q.normalized();
  pose.translation = job.pocket_center + offset * job.pocket_radius - ligand_centroid;
  return pose;
}

ScoredPose evaluate(const DockingJob& job, const Vec3& ligand_centroid, std::size_t k) {
  ScoredPose sp;
  sp.pose = pose_for(job, ligand_centroid, k);
  sp.score = score_pose(job.receptor, apply_pose(job.ligand, sp.pose), job.pot, job.electrostatics_on);
  return sp;
}

}  // namespace

Pose generate_pose(const DockingJob& job, std::size_t k) {
  check_job(job);
  if (k >= job.n_conformers) throw InvalidArgument("conformer index out of range");
  return pose_for(job, centroid(job.ligand), k);
}

MolecularSystem apply_pose(const MolecularSystem& ligand, const Pose& pose) {
  if (ligand.atoms.empty()) throw InvalidArgument("ligand has no atoms");
  const Vec3 c = centroid(ligand);
  MolecularSystem out = ligand;
  for (auto& atom : out.atoms)
    atom.position = pose.rotation.rotate(atom.position - c) + c + pose.translation;
  return out;
}

double score_pose(const MolecularSystem& receptor, const MolecularSystem& posed_ligand,
                  const PotentialParams& pot, bool electrostatics_on) {
  PotentialParams local = pot;
  local.periodic = false;
  local.electrostatics = electrostatics_on;
  const double cutoff2 = local.cutoff * local.cutoff;
  double score = 0.0;
  for (const auto& r : receptor.atoms) {
    const PairParams rp = pair_params(r);
    for (const auto& l : posed_ligand.atoms) {
      const Vec3 d = l.position - r.position;
      const double r2 = norm2(d);
      if (r2 == 0.0) return kClashScore;
      if (r2 >= cutoff2) continue;
      score += pair_energy_force(d, rp, pair_params(l), local).energy;
    }
  }
  return std::isfinite(score) ? score : kClashScore;
}

DockResult dock(const DockingJob& job, std::size_t workers, DockMode mode) {
  check_job(job);
  if (workers < 1) throw InvalidArgument("worker count must be at least 1");
  const Vec3 ligand_centroid = centroid(job.ligand);
  DockResult result;
  const auto start = std::chrono::steady_clock::now();
  if (mode == DockMode::Sequential) {
    result.poses.reserve(job.n_conformers);
    for (std::size_t k = 0; k < job.n_conformers; ++k)
      result.poses.push_back(evaluate(job, ligand_centroid, k));
  } else {
    const WorkerPoolConfig cfg{workers, true};
    result.poses = parallel_map_indexed(
        plan_chunks(job.n_conformers, workers),
        [&](std::size_t k) { return evaluate(job, ligand_centroid, k); }, cfg);
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.clash_count = static_cast<std::size_t>(std::count_if(
      result.poses.begin(), result.poses.end(), [](const ScoredPose& p) { return p.score == kClashScore; }));
  return result;
}

TopK select_top_k(std::span<const ScoredPose> results, std::size_t k) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  TopK top;
  top.poses.assign(results.begin(), results.end());
  std::sort(top.poses.begin(), top.poses.end(), [](const ScoredPose& a, const ScoredPose& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.pose.conformer_index < b.pose.conformer_index;
  });
  if (k > top.poses.size()) {
    top.truncated = true;
  } else {
    top.poses.resize(k);
  }
  return top;
}

std::string poses_csv(std::span<const ScoredPose> poses) {
  std::string out = "conformer_index,score_kjmol,qw,qx,qy,qz,tx_nm,ty_nm,tz_nm\n";
  for (const auto& sp : poses) {
    const auto& q = sp.pose.rotation;
    const auto& t = sp.pose.translation;
    out += std::to_string(sp.pose.conformer_index) + ',' + format_double(sp.score) + ',' +
           format_double(q.w) + ',' + format_double(q.x) + ',' + format_double(q.y) + ',' +
           format_double(q.z) + ',' + format_double(t.x) + ',' + format_double(t.y) + ',' +
           format_double(t.z) + '\n';
  }
  return out;
}

}  // namespace deskmd
