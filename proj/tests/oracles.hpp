#pragma once

// Test-only reference implementations. These deliberately avoid the library's
// pair/force code so they can check it.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "deskmd/structure.hpp"

namespace oracle {

inline constexpr double kCodataCharge = 1.602176634e-19;    // C
inline constexpr double kCodataEps0 = 8.8541878128e-12;     // F/m
inline constexpr double kCodataAvogadro = 6.02214076e23;    // 1/mol
inline constexpr double kCodataBoltzmann = 1.380649e-23;    // J/K

// 1/(4 pi eps0) in kJ mol^-1 nm e^-2 from SI constants.
inline double coulomb_factor() {
  const double pi = std::acos(-1.0);
  return kCodataCharge * kCodataCharge / (4.0 * pi * kCodataEps0) * kCodataAvogadro / 1000.0 * 1e9;
}

// Molar gas constant in kJ/(mol K).
inline constexpr double kB = kCodataBoltzmann * kCodataAvogadro / 1000.0;

struct Particle {
  double x, y, z;
  double q, sigma, eps;
};

inline double min_image(double d, std::optional<double> box) {
  if (!box) return d;
  while (d > 0.5 * *box) d -= *box;
  while (d <= -0.5 * *box) d += *box;
  return d;
}

// Brute-force truncated-shifted LJ + Coulomb total energy, straight from the
// functional form with explicit powers.
inline double total_energy(const std::vector<Particle>& ps, double cutoff, bool shift,
                           bool coulomb, std::optional<double> box = std::nullopt) {
  const double f = 138.935458;
  double e = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const double dx = min_image(ps[j].x - ps[i].x, box);
      const double dy = min_image(ps[j].y - ps[i].y, box);
      const double dz = min_image(ps[j].z - ps[i].z, box);
      const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (r >= cutoff) continue;
      const double s = 0.5 * (ps[i].sigma + ps[j].sigma);
      const double eps = std::sqrt(ps[i].eps * ps[j].eps);
      auto lj = [&](double rr) { return 4.0 * eps * (std::pow(s / rr, 12) - std::pow(s / rr, 6)); };
      double v = lj(r);
      if (shift && std::isfinite(cutoff)) v -= lj(cutoff);
      if (coulomb) {
        v += f * ps[i].q * ps[j].q / r;
        if (shift && std::isfinite(cutoff)) v -= f * ps[i].q * ps[j].q / cutoff;
      }
      e += v;
    }
  return e;
}

inline std::vector<Particle> particles_of(const deskmd::MolecularSystem& s) {
  std::vector<Particle> out;
  for (const auto& a : s.atoms)
    out.push_back({a.position.x, a.position.y, a.position.z, a.charge, a.lj_sigma, a.lj_epsilon});
  return out;
}

// Central finite-difference forces, -(E(x+h) - E(x-h)) / 2h per coordinate.
inline std::vector<deskmd::Vec3> fd_forces(std::vector<Particle> ps, double h, double cutoff,
                                           bool shift, bool coulomb,
                                           std::optional<double> box = std::nullopt) {
  std::vector<deskmd::Vec3> out(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double* coords[3] = {&ps[i].x, &ps[i].y, &ps[i].z};
    double g[3];
    for (int c = 0; c < 3; ++c) {
      const double x0 = *coords[c];
      *coords[c] = x0 + h;
      const double ep = total_energy(ps, cutoff, shift, coulomb, box);
      *coords[c] = x0 - h;
      const double em = total_energy(ps, cutoff, shift, coulomb, box);
      *coords[c] = x0;
      g[c] = -(ep - em) / (2.0 * h);
    }
    out[i] = {g[0], g[1], g[2]};
  }
  return out;
}

// Random LJ + charge system in an open cube with a minimum pair separation.
inline deskmd::MolecularSystem random_system(std::size_t n, double extent, double min_sep,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, extent);
  std::uniform_real_distribution<double> sig(0.30, 0.36);
  std::uniform_real_distribution<double> eps(0.3, 1.0);
  std::uniform_real_distribution<double> chg(-0.6, 0.6);
  deskmd::MolecularSystem s;
  while (s.atoms.size() < n) {
    deskmd::Vec3 p{pos(rng), pos(rng), pos(rng)};
    bool ok = true;
    for (const auto& a : s.atoms)
      if (deskmd::norm(a.position - p) < min_sep) ok = false;
    if (!ok) continue;
    deskmd::Atom a;
    a.id = s.atoms.size();
    a.element = "C";
    a.name = "C";
    a.mass = 12.011;
    a.position = p;
    a.lj_sigma = sig(rng);
    a.lj_epsilon = eps(rng);
    a.charge = chg(rng);
    s.atoms.push_back(a);
  }
  return s;
}

// Max over atoms of |F_a - F_fd| / max(|F_fd|, floor).
inline double max_relative_error(const std::vector<deskmd::Vec3>& analytic,
                                 const std::vector<deskmd::Vec3>& reference, double floor = 1.0) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double err = deskmd::norm(analytic[i] - reference[i]);
    worst = std::max(worst, err / std::max(deskmd::norm(reference[i]), floor));
  }
  return worst;
}

}  // namespace oracle
