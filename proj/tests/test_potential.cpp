#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "deskmd/builders.hpp"
#include "deskmd/error.hpp"
#include "deskmd/potential.hpp"
#include "oracles.hpp"

using namespace deskmd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PotentialParams untruncated(bool shift = false) {
  PotentialParams p;
  p.cutoff = kInf;
  p.shift_at_cutoff = shift;
  return p;
}

MolecularSystem pair_system(double r, double sigma = 1.0, double eps = 1.0) {
  MolecularSystem s;
  for (std::size_t i = 0; i < 2; ++i) {
    Atom a;
    a.id = i;
    a.element = "Ar";
    a.mass = 39.948;
    a.lj_sigma = sigma;
    a.lj_epsilon = eps;
    a.position = {i == 0 ? 0.0 : r, 0.0, 0.0};
    s.atoms.push_back(a);
  }
  return s;
}

}  // namespace

TEST_CASE("LJ zero crossing and minimum in reduced units") {
  const PairParams lj{0.0, 1.0, 1.0};
  const auto at_sigma = pair_energy_force({1.0, 0, 0}, lj, lj, untruncated());
  CHECK(at_sigma.energy == 0.0);

  const double rmin = std::pow(2.0, 1.0 / 6.0);
  const auto at_min = pair_energy_force({rmin, 0, 0}, lj, lj, untruncated());
  CHECK(at_min.energy == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(norm(at_min.force_on_j) < 1e-12);

  // Repulsive inside the minimum: j is pushed along +r.
  CHECK(pair_energy_force({1.0, 0, 0}, lj, lj, untruncated()).force_on_j.x > 0.0);
}

TEST_CASE("Coulomb energy at 1 nm equals the conversion factor") {
  const PairParams q{1.0, 0.0, 0.0};
  const auto r = pair_energy_force({1.0, 0, 0}, q, q, untruncated());
  CHECK(std::abs(r.energy - oracle::coulomb_factor()) / oracle::coulomb_factor() < 1e-8);
  CHECK(r.energy == doctest::Approx(138.935458).epsilon(1e-15));
  CHECK(r.force_on_j.x == doctest::Approx(138.935458).epsilon(1e-15));
}

TEST_CASE("electrostatics flag switches Coulomb off") {
  const PairParams q{1.0, 0.0, 0.0};
  auto pot = untruncated();
  pot.electrostatics = false;
  CHECK(pair_energy_force({1.0, 0, 0}, q, q, pot).energy == 0.0);
}

TEST_CASE("cutoff: zero beyond, shifted energy continuous, force unshifted") {
  const PairParams a{0.5, 0.34, 0.9};
  const PairParams b{-0.3, 0.31, 0.6};
  PotentialParams pot;  // cutoff 1.0, shifted
  CHECK(pair_energy_force({1.0, 0, 0}, a, b, pot).energy == 0.0);
  CHECK(norm(pair_energy_force({0, 1.2, 0}, a, b, pot).force_on_j) == 0.0);
  const auto near = pair_energy_force({1.0 - 1e-9, 0, 0}, a, b, pot);
  CHECK(std::abs(near.energy) < 1e-6);

  PotentialParams plain = pot;
  plain.shift_at_cutoff = false;
  const Vec3 r{0.3, 0.4, 0.2};
  const auto shifted = pair_energy_force(r, a, b, pot);
  const auto unshifted = pair_energy_force(r, a, b, plain);
  CHECK(shifted.force_on_j == unshifted.force_on_j);
  CHECK(shifted.energy != unshifted.energy);
}

TEST_CASE("pair force is antisymmetric") {
  const PairParams a{0.5, 0.34, 0.9};
  const PairParams b{-0.3, 0.31, 0.6};
  const Vec3 r{0.31, -0.22, 0.17};
  const auto fwd = pair_energy_force(r, a, b, PotentialParams{});
  const auto rev = pair_energy_force(-r, b, a, PotentialParams{});
  CHECK(fwd.energy == rev.energy);
  CHECK(fwd.force_on_j == -rev.force_on_j);
}

TEST_CASE("zero separation is an overlap error") {
  const PairParams a{0.0, 0.3, 1.0};
  CHECK_THROWS_AS(pair_energy_force({0, 0, 0}, a, a, PotentialParams{}), OverlapError);
  auto s = pair_system(0.0);
  s.atoms.push_back(s.atoms[0]);
  s.atoms[2].id = 2;
  s.atoms[2].position = {0.5, 0, 0};
  s.atoms[1].position = {0.5, 0, 0};
  try {
    system_energy_forces(s, PotentialParams{});
    FAIL("expected overlap");
  } catch (const OverlapError& e) {
    CHECK(e.has_ids());
    CHECK(e.first() == 1);
    CHECK(e.second() == 2);
  }
}

TEST_CASE("two atoms at the LJ minimum are stationary") {
  const auto ef = system_energy_forces(pair_system(std::pow(2.0, 1.0 / 6.0)), untruncated());
  CHECK(ef.potential_energy == doctest::Approx(-1.0).epsilon(1e-14));
  REQUIRE(ef.forces.size() == 2);
  CHECK(norm(ef.forces[0]) < 1e-10);
  CHECK(norm(ef.forces[1]) < 1e-10);
}

TEST_CASE("restraint energy and force") {
  MolecularSystem s;
  Atom a;
  a.element = "Ar";
  a.mass = 39.948;
  a.position = {0.1, 0.0, 0.0};
  s.atoms.push_back(a);
  const Restraint restraint{{0, 0, 0}, 100.0, {0}};
  const auto ef = system_energy_forces(s, PotentialParams{}, restraint);
  CHECK(ef.potential_energy == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(norm(ef.forces[0]) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(ef.forces[0].x < 0.0);  // toward the centre

  Restraint bad = restraint;
  bad.spring_k = -1.0;
  CHECK_THROWS_AS(system_energy_forces(s, PotentialParams{}, bad), InvalidArgument);
}

TEST_CASE("max force norm") {
  CHECK(max_force_norm(std::vector<Vec3>{{3, 4, 0}}) == 5.0);
  CHECK(max_force_norm(std::vector<Vec3>{{0, 0, 0}, {0, 0, 0}}) == 0.0);
  CHECK(max_force_norm(std::vector<Vec3>{{1, 0, 0}, {0, 2, 0}}) == 2.0);
  CHECK_THROWS_AS(max_force_norm(std::vector<Vec3>{}), InvalidArgument);
}

TEST_CASE("energy matches the brute-force oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = oracle::random_system(40, 2.0, 0.25, seed);
    const auto ef = system_energy_forces(s, PotentialParams{});
    const double ref = oracle::total_energy(oracle::particles_of(s), 1.0, true, true);
    CHECK(ef.potential_energy == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("analytic forces match central finite differences") {
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    const auto s = oracle::random_system(50, 2.2, 0.25, seed);
    const auto ef = system_energy_forces(s, PotentialParams{});
    const auto fd = oracle::fd_forces(oracle::particles_of(s), 1e-6, 1.0, true, true);
    CHECK(oracle::max_relative_error(ef.forces, fd) < 1e-5);
  }
}

TEST_CASE("periodic forces match finite differences with minimum image") {
  const double box = 2.5;
  auto s = oracle::random_system(40, box, 0.25, 77);
  s.box_length = box;
  PotentialParams pot;
  pot.periodic = true;
  const auto ef = system_energy_forces(s, pot);
  const auto ps = oracle::particles_of(s);
  CHECK(ef.potential_energy == doctest::Approx(oracle::total_energy(ps, 1.0, true, true, box)).epsilon(1e-10));
  const auto fd = oracle::fd_forces(ps, 1e-6, 1.0, true, true, box);
  CHECK(oracle::max_relative_error(ef.forces, fd) < 1e-5);
}

TEST_CASE("Newton's third law: total force vanishes without restraint or box") {
  const auto s = oracle::random_system(60, 2.5, 0.25, 9);
  const auto ef = system_energy_forces(s, PotentialParams{});
  Vec3 total;
  for (const auto& f : ef.forces) total += f;
  CHECK(norm(total) < 1e-8);
}

TEST_CASE("periodic flag must agree with the box") {
  auto s = pair_system(0.4, 0.34, 1.0);
  PotentialParams pot;
  pot.periodic = true;
  CHECK_THROWS_AS(system_energy_forces(s, pot), InvalidArgument);
  s.box_length = 1.5;  // not larger than twice the cutoff
  CHECK_THROWS_AS(system_energy_forces(s, pot), InvalidArgument);
  s.box_length = 2.5;
  CHECK_NOTHROW(system_energy_forces(s, pot));
}

TEST_CASE("worker count never changes energies or forces") {
  const auto s = oracle::random_system(80, 2.5, 0.22, 21);
  const auto ref = system_energy_forces(s, PotentialParams{}, std::nullopt, {1, true});
  for (std::size_t w : {2, 3, 4, 8}) {
    const auto ef = system_energy_forces(s, PotentialParams{}, std::nullopt, {w, true});
    CHECK(ef.potential_energy == ref.potential_energy);
    CHECK(ef.forces == ref.forces);
  }
  // Unordered mode agrees to rounding.
  const auto loose = system_energy_forces(s, PotentialParams{}, std::nullopt, {4, false});
  CHECK(loose.potential_energy == doctest::Approx(ref.potential_energy).epsilon(1e-12));
  CHECK(oracle::max_relative_error(loose.forces, ref.forces, 1.0) < 1e-10);
}

TEST_CASE("relabeling atoms leaves the energy unchanged") {
  auto s = oracle::random_system(50, 2.5, 0.25, 33);
  const double e0 = system_energy_forces(s, PotentialParams{}).potential_energy;
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(5));
  MolecularSystem permuted;
  for (auto idx : order) permuted.atoms.push_back(s.atoms[idx]);
  renumber(permuted);
  const double e1 = system_energy_forces(permuted, PotentialParams{}).potential_energy;
  CHECK(e1 == doctest::Approx(e0).epsilon(1e-13));
}
