#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "deskmd/potential.hpp"
#include "deskmd/structure.hpp"

namespace deskmd {

struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion identity() { return {}; }
  // Rotation by `angle` radians about `axis` (need not be unit length).
  static Quaternion from_axis_angle(const Vec3& axis, double angle);

  double norm() const;
  Quaternion normalized() const;
  Vec3 rotate(const Vec3& v) const;

  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

struct Pose {
  std::size_t conformer_index = 0;
  Quaternion rotation;
  Vec3 translation;  // nm, applied after rotating about the ligand centroid

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct ScoredPose {
  Pose pose;
  double score = 0.0;  // kJ/mol, lower is better
};

// Score assigned to poses with a receptor-ligand overlap. Finite, and worse
// than any physical score.
inline constexpr double kClashScore = std::numeric_limits<double>::max();

struct DockingJob {
  MolecularSystem receptor;
  MolecularSystem ligand;
  std::size_t n_conformers = 1;
  std::uint64_t seed = 0;
  Vec3 pocket_center;          // nm
  double pocket_radius = 1.5;  // nm
  PotentialParams pot;
  bool electrostatics_on = true;
};

// Job with the pocket centred on the receptor centroid.
DockingJob make_docking_job(MolecularSystem receptor, MolecularSystem ligand,
                            std::size_t n_conformers, std::uint64_t seed);

// Pose k is a pure function of (seed, k): uniform rotation on SO(3)
// (Shoemake) and a ligand centroid placed uniformly in the pocket ball.
Pose generate_pose(const DockingJob& job, std::size_t k);

// x <- R (x - c) + c + t, with c the ligand centroid.
MolecularSystem apply_pose(const MolecularSystem& ligand, const Pose& pose);

// Receptor-ligand pair terms only, open boundaries. Returns kClashScore on a
// zero-distance pair or a non-finite sum.
double score_pose(const MolecularSystem& receptor, const MolecularSystem& posed_ligand,
                  const PotentialParams& pot, bool electrostatics_on);

enum class DockMode { Sequential, Parallel };

struct DockResult {
  std::vector<ScoredPose> poses;  // indexed by conformer
  std::size_t clash_count = 0;
  double wall_seconds = 0.0;  // generation and scoring only
};

DockResult dock(const DockingJob& job, std::size_t workers, DockMode mode);

struct TopK {
  std::vector<ScoredPose> poses;
  bool truncated = false;  // fewer results than requested
};

// Lowest scores first, ties broken by conformer index.
TopK select_top_k(std::span<const ScoredPose> results, std::size_t k);

// `conformer_index,score_kjmol,qw,qx,qy,qz,tx_nm,ty_nm,tz_nm`
std::string poses_csv(std::span<const ScoredPose> poses);

}  // namespace deskmd
