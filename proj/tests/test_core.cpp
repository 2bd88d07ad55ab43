#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "deskmd/error.hpp"
#include "deskmd/params.hpp"
#include "deskmd/structure.hpp"
#include "deskmd/units.hpp"
#include "oracles.hpp"

using namespace deskmd;

namespace {

const std::string kAspLine =
    "ATOM      1  N   ASP A   1      10.000  12.500   8.300  1.00  0.00           N";

}  // namespace

TEST_CASE("unit constants match CODATA-derived values") {
  CHECK(units::kBoltzmann == 0.00831446262);
  CHECK(units::kCoulomb == 138.935458);
  const double kb = oracle::kCodataBoltzmann * oracle::kCodataAvogadro / 1000.0;
  CHECK(std::abs(kb - units::kBoltzmann) / kb < 1e-9);
  CHECK(std::abs(oracle::coulomb_factor() - units::kCoulomb) / units::kCoulomb < 1e-8);
}

TEST_CASE("PDB subset: fixed columns, Angstrom to nm") {
  REQUIRE(kAspLine.size() == 78);
  const auto s = parse_structure(kAspLine + "\n", StructureFormat::PdbSubset);
  REQUIRE(s.size() == 1);
  const auto& a = s.atoms[0];
  CHECK(a.element == "N");
  CHECK(a.name == "N");
  CHECK(a.position.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.position.y == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(a.position.z == doctest::Approx(0.83).epsilon(1e-15));
  CHECK(a.mass == doctest::Approx(14.007));
  CHECK(a.charge == 0.0);
  CHECK(a.lj_sigma == 0.0);
  CHECK(a.lj_epsilon == 0.0);
}

TEST_CASE("PDB element falls back to the atom name") {
  // Truncated before the element columns.
  const std::string line = "HETATM    2 CL1  LIG B   1       1.000   2.000   3.000";
  const auto s = parse_structure(line, StructureFormat::PdbSubset);
  REQUIRE(s.size() == 1);
  CHECK(s.atoms[0].element == "C");
  const std::string with_element = line + "  1.00  0.00          CL";
  CHECK(parse_structure(with_element, StructureFormat::PdbSubset).atoms[0].element == "Cl");
}

TEST_CASE("PDB errors name the line") {
  auto bad = kAspLine;
  bad.replace(30, 8, "  abc.de");
  const std::string text = "REMARK test\n" + bad + "\n";
  try {
    parse_structure(text, StructureFormat::PdbSubset);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_structure("", StructureFormat::PdbSubset), ParseError);
  CHECK_THROWS_AS(parse_structure("ATOM      1  N   ASP A   1      10.000", StructureFormat::PdbSubset),
                  ParseError);
  // No element columns and a name with no letters.
  const std::string nameless = "ATOM      1  12  ASP A   1      10.000  12.500   8.300";
  CHECK_THROWS_AS(parse_structure(nameless, StructureFormat::PdbSubset), ParseError);
}

TEST_CASE("PDB: non-atom records counted, only the first model read") {
  const std::string text = "HEADER    x\nMODEL        1\n" + kAspLine + "\nENDMDL\nMODEL        2\n" + kAspLine +
                           "\nENDMDL\nEND\n";
  ParseDiagnostics diag;
  const auto s = parse_structure(text, StructureFormat::PdbSubset, &diag);
  CHECK(s.size() == 1);
  CHECK(diag.skipped_models == 1);
  CHECK(diag.skipped_records >= 2);
}

TEST_CASE("XYZ read in nm") {
  const auto s = parse_structure("2\nargon pair\nAr 0 0 0\nAr 0.38 0 0\n", StructureFormat::Xyz);
  REQUIRE(s.size() == 2);
  CHECK(s.label == "argon pair");
  CHECK(s.atoms[0].position == Vec3{0, 0, 0});
  CHECK(s.atoms[1].position == Vec3{0.38, 0, 0});
  CHECK(s.atoms[1].id == 1);
  CHECK(s.atoms[1].element == "Ar");
  CHECK_THROWS_AS(parse_structure("3\nx\nAr 0 0 0\n", StructureFormat::Xyz), ParseError);
  CHECK_THROWS_AS(parse_structure("1\nx\nQq 0 0 0\n", StructureFormat::Xyz), ParseError);
  CHECK_THROWS_AS(parse_structure("1\nx\nAr 0 zero 0\n", StructureFormat::Xyz), ParseError);
}

TEST_CASE("XYZ write and round trip") {
  auto s = parse_structure("2\nargon pair\nAr 0 0 0\nAr 0.38 0 0\n", StructureFormat::Xyz);
  const auto text = write_structure(s);
  CHECK(text.substr(0, 2) == "2\n");

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const char* elements[] = {"C", "N", "O", "H", "S", "Cl", "Ar"};
  MolecularSystem big;
  for (std::size_t i = 0; i < 50; ++i) {
    Atom a;
    a.id = i;
    a.element = elements[i % 7];
    a.name = a.element;
    a.position = {u(rng), u(rng), u(rng)};
    big.atoms.push_back(a);
  }
  const auto back = parse_structure(write_structure(big), StructureFormat::Xyz);
  REQUIRE(back.size() == big.size());
  for (std::size_t i = 0; i < big.size(); ++i) {
    CHECK(back.atoms[i].element == big.atoms[i].element);
    CHECK(norm(back.atoms[i].position - big.atoms[i].position) < 1e-6);
  }
  CHECK_THROWS_AS(write_structure(MolecularSystem{}), InvalidArgument);
}

TEST_CASE("minimum image displacement") {
  const auto d = min_image_displacement({0, 0, 0}, {6.0, 0, 0}, 6.5);
  CHECK(d.x == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(d.y == 0.0);
  CHECK(min_image_displacement({1, 2, 3}, {1, 2, 3}, 6.5) == Vec3{});
  CHECK(min_image_displacement({1, 1, 1}, {2, 3, 4}, std::nullopt) == Vec3{1, 2, 3});
  // Exactly half a box maps to +L/2.
  CHECK(min_image_displacement({0, 0, 0}, {3.25, 0, 0}, 6.5).x == 3.25);
  CHECK(min_image_displacement({3.25, 0, 0}, {0, 0, 0}, 6.5).x == 3.25);
}

TEST_CASE("minimum image property: wrapped into (-L/2, L/2], never longer") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  std::uniform_real_distribution<double> len(0.5, 10.0);
  for (int t = 0; t < 5000; ++t) {
    const double length = len(rng);
    const Vec3 a{u(rng), u(rng), u(rng)};
    const Vec3 b{u(rng), u(rng), u(rng)};
    const auto d = min_image_displacement(a, b, length);
    for (double c : {d.x, d.y, d.z}) {
      CHECK(c > -0.5 * length);
      CHECK(c <= 0.5 * length);
    }
    CHECK(norm(d) <= norm(b - a) + 1e-12);
  }
}

TEST_CASE("validate enforces the system invariants") {
  auto s = parse_structure("2\nx\nAr 0 0 0\nAr 0.38 0 0\n", StructureFormat::Xyz);
  CHECK_NOTHROW(validate(s));
  s.box_length = 2.0;
  CHECK_THROWS_AS(validate(s, 1.0), InvalidArgument);
  s.box_length = 2.1;
  CHECK_NOTHROW(validate(s, 1.0));
  s.atoms[1].id = 5;
  CHECK_THROWS_AS(validate(s), InvalidArgument);
  renumber(s);
  s.atoms[0].mass = 0.0;
  CHECK_THROWS_AS(validate(s), InvalidArgument);
  s.atoms[0].mass = 1.0;
  s.atoms[0].lj_sigma = -0.1;
  CHECK_THROWS_AS(validate(s), InvalidArgument);
}

TEST_CASE("parameter file assigns by element, atom name overrides") {
  const auto table = parse_parameter_file(
      "# test parameters\n"
      "Ar.sigma = 0.3405\n"
      "Ar.epsilon = 0.996   # kJ/mol\n"
      "O.charge = -0.4\n"
      "@OX.charge = -0.8\n"
      "\n");
  auto s = parse_structure("3\nx\nAr 0 0 0\nO 0.4 0 0\nO 0.8 0 0\n", StructureFormat::Xyz);
  s.atoms[2].name = "OX";
  const auto unmatched = assign_parameters(s, table);
  CHECK(unmatched == 0);
  CHECK(s.atoms[0].lj_sigma == 0.3405);
  CHECK(s.atoms[0].lj_epsilon == 0.996);
  CHECK(s.atoms[0].mass == doctest::Approx(39.948));
  CHECK(s.atoms[1].charge == -0.4);
  CHECK(s.atoms[2].charge == -0.8);

  CHECK_THROWS_AS(parse_parameter_file("Ar.colour = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_parameter_file("Ar.sigma 0.3\n"), ParseError);
  CHECK_THROWS_AS(parse_parameter_file("Ar.mass = -1\n"), ParseError);
  try {
    parse_parameter_file("Ar.sigma = 0.3\nAr.epsilon = x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("default parameters ship argon") {
  const auto table = default_parameters();
  const auto& ar = table.by_element.at("Ar");
  CHECK(*ar.sigma == 0.3405);
  CHECK(*ar.epsilon == 0.996);
}
