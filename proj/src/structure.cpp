#include "deskmd/structure.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <utility>

#include "deskmd/error.hpp"
#include "deskmd/numfmt.hpp"
#include "deskmd/units.hpp"

namespace deskmd {

namespace {

constexpr std::array<std::pair<std::string_view, double>, 28> kMassTable{{
    {"H", 1.008},    {"He", 4.0026},  {"Li", 6.94},    {"B", 10.81},    {"C", 12.011},
    {"N", 14.007},   {"O", 15.999},   {"F", 18.998},   {"Ne", 20.180},  {"Na", 22.990},
    {"Mg", 24.305},  {"Si", 28.085},  {"P", 30.974},   {"S", 32.06},    {"Cl", 35.45},
    {"Ar", 39.948},  {"K", 39.098},   {"Ca", 40.078},  {"Mn", 54.938},  {"Fe", 55.845},
    {"Cu", 63.546},  {"Zn", 65.38},   {"Se", 78.971},  {"Br", 79.904},  {"Kr", 83.798},
    {"I", 126.904},  {"Xe", 131.293}, {"Co", 58.933},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// 1-based inclusive column range, clipped to the line.
std::string_view columns(std::string_view line, std::size_t first, std::size_t last) {
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    auto j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string resolve_pdb_element(std::string_view element_cols, std::string_view name,
                                std::size_t line_no) {
  auto elem = trim(element_cols);
  if (!elem.empty()) {
    auto normalized = normalize_element(elem);
    if (element_mass(normalized)) return normalized;
  }
  auto it = std::find_if(name.begin(), name.end(),
                         [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
  if (it != name.end()) {
    auto fallback = normalize_element(std::string_view(&*it, 1));
    if (element_mass(fallback)) return fallback;
  }
  throw ParseError(line_no, "cannot determine element for atom '" + std::string(trim(name)) + "'");
}

MolecularSystem parse_pdb(std::string_view text, ParseDiagnostics& diag) {
  MolecularSystem system;
  auto lines = split_lines(text);
  bool model_done = false;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = lines[n];
    const auto line_no = n + 1;
    if (trim(line).empty()) continue;
    const auto record = line.substr(0, std::min<std::size_t>(6, line.size()));
    const bool is_atom = record == "ATOM  " || record == "ATOM" || record == "HETATM";
    if (record.starts_with("ENDMDL")) {
      model_done = true;
      continue;
    }
    if (record.starts_with("MODEL") && model_done) {
      ++diag.skipped_models;
      continue;
    }
    if (!is_atom) {
      ++diag.skipped_records;
      continue;
    }
    if (model_done) continue;
    if (line.size() < 54) throw ParseError(line_no, "truncated ATOM/HETATM record");
    Atom atom;
    const auto name = columns(line, 13, 16);
    atom.name = std::string(trim(name));
    const auto x = parse_double(columns(line, 31, 38));
    const auto y = parse_double(columns(line, 39, 46));
    const auto z = parse_double(columns(line, 47, 54));
    if (!x || !y || !z) throw ParseError(line_no, "non-numeric coordinate field");
    atom.position = Vec3{*x, *y, *z} * units::kAngstromToNm;
    if (!is_finite(atom.position)) throw ParseError(line_no, "non-finite coordinate");
    atom.element = resolve_pdb_element(columns(line, 77, 78), name, line_no);
    atom.mass = *element_mass(atom.element);
    atom.id = system.atoms.size();
    system.atoms.push_back(std::move(atom));
  }
  if (system.atoms.empty()) throw ParseError(lines.size(), "no ATOM/HETATM records");
  return system;
}

MolecularSystem parse_xyz(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty file");
  const auto count = parse_uint(trim(lines[0]));
  if (!count) throw ParseError(1, "expected atom count");
  if (*count == 0) throw ParseError(1, "atom count is zero");
  MolecularSystem system;
  if (lines.size() > 1) system.label = std::string(trim(lines[1]));
  if (lines.size() < 2 + *count) throw ParseError(lines.size(), "fewer atom lines than declared");
  system.atoms.reserve(*count);
  for (std::size_t k = 0; k < *count; ++k) {
    const auto line_no = k + 3;
    const auto fields = split_ws(lines[k + 2]);
    if (fields.size() < 4) throw ParseError(line_no, "expected `symbol x y z`");
    Atom atom;
    atom.name = std::string(fields[0]);
    atom.element = normalize_element(fields[0]);
    const auto mass = element_mass(atom.element);
    if (!mass) throw ParseError(line_no, "unknown element '" + atom.name + "'");
    atom.mass = *mass;
    const auto x = parse_double(fields[1]);
    const auto y = parse_double(fields[2]);
    const auto z = parse_double(fields[3]);
    if (!x || !y || !z) throw ParseError(line_no, "non-numeric coordinate field");
    atom.position = {*x, *y, *z};
    if (!is_finite(atom.position)) throw ParseError(line_no, "non-finite coordinate");
    atom.id = k;
    system.atoms.push_back(std::move(atom));
  }
  return system;
}

}  // namespace

std::vector<Vec3> MolecularSystem::positions() const {
  std::vector<Vec3> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(a.position);
  return out;
}

std::vector<double> MolecularSystem::masses() const {
  std::vector<double> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(a.mass);
  return out;
}

void MolecularSystem::set_positions(std::span<const Vec3> positions) {
  if (positions.size() != atoms.size())
    throw InvalidArgument("position count does not match atom count");
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i].position = positions[i];
}

void validate(const MolecularSystem& system, std::optional<double> cutoff) {
  for (std::size_t i = 0; i < system.atoms.size(); ++i) {
    const auto& a = system.atoms[i];
    if (a.id != i) throw InvalidArgument("atom ids must be 0..N-1 in order");
    if (!(a.mass > 0.0)) throw InvalidArgument("atom " + std::to_string(i) + " has non-positive mass");
    if (a.lj_sigma < 0.0 || a.lj_epsilon < 0.0)
      throw InvalidArgument("atom " + std::to_string(i) + " has negative LJ parameters");
    if (!is_finite(a.position)) throw InvalidArgument("atom " + std::to_string(i) + " has non-finite position");
  }
  if (system.box_length) {
    if (!(*system.box_length > 0.0)) throw InvalidArgument("box length must be positive");
    if (cutoff && !(*system.box_length > 2.0 * *cutoff))
      throw InvalidArgument("box length must exceed twice the cutoff");
  }
}

void renumber(MolecularSystem& system) {
  for (std::size_t i = 0; i < system.atoms.size(); ++i) system.atoms[i].id = i;
}

Vec3 centroid(std::span<const Vec3> positions) {
  Vec3 sum;
  for (const auto& p : positions) sum += p;
  return positions.empty() ? sum : sum / static_cast<double>(positions.size());
}

Vec3 centroid(const MolecularSystem& system) {
  Vec3 sum;
  for (const auto& a : system.atoms) sum += a.position;
  return system.atoms.empty() ? sum : sum / static_cast<double>(system.atoms.size());
}

MolecularSystem parse_structure(std::string_view text, StructureFormat format,
                                ParseDiagnostics* diagnostics) {
  if (trim(text).empty()) throw ParseError(1, "empty file");
  ParseDiagnostics local;
  auto system = format == StructureFormat::PdbSubset ? parse_pdb(text, local) : parse_xyz(text);
  if (diagnostics) *diagnostics = local;
  return system;
}

std::string write_structure(const MolecularSystem& system, StructureFormat format) {
  if (format != StructureFormat::Xyz) throw InvalidArgument("only XYZ output is supported");
  if (system.atoms.empty()) throw InvalidArgument("cannot write an empty system");
  std::string label = system.label;
  std::replace(label.begin(), label.end(), '\n', ' ');
  std::string out = std::to_string(system.atoms.size()) + "\n" + label + "\n";
  for (const auto& a : system.atoms) {
    out += a.element.empty() ? std::string("X") : a.element;
    out += ' ' + format_double(a.position.x) + ' ' + format_double(a.position.y) + ' ' +
           format_double(a.position.z) + '\n';
  }
  return out;
}

std::optional<double> element_mass(std::string_view element) {
  for (const auto& [symbol, mass] : kMassTable)
    if (symbol == element) return mass;
  return std::nullopt;
}

std::string normalize_element(std::string_view symbol) {
  std::string out;
  for (char c : symbol) {
    if (!std::isalpha(static_cast<unsigned char>(c))) continue;
    out += static_cast<char>(out.empty() ? std::toupper(static_cast<unsigned char>(c))
                                         : std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

namespace {

double wrap_component(double d, double length) {
  d -= length * std::round(d / length);
  const double half = 0.5 * length;
  if (d <= -half) d += length;
  if (d > half) d -= length;
  return d;
}

double fold_component(double p, double length) {
  p -= length * std::floor(p / length);
  if (p >= length) p -= length;
  return p;
}

}  // namespace

Vec3 min_image_displacement(const Vec3& a, const Vec3& b, std::optional<double> box_length) {
  Vec3 d = b - a;
  if (!box_length) return d;
  const double length = *box_length;
  return {wrap_component(d.x, length), wrap_component(d.y, length), wrap_component(d.z, length)};
}

Vec3 wrap_position(const Vec3& p, double box_length) {
  return {fold_component(p.x, box_length), fold_component(p.y, box_length),
          fold_component(p.z, box_length)};
}

}  // namespace deskmd
