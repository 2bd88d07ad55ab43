#include "deskmd/params.hpp"

#include <cctype>

#include "deskmd/error.hpp"
#include "deskmd/numfmt.hpp"

namespace deskmd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void overlay(AtomParams& into, const AtomParams& from) {
  if (from.mass) into.mass = from.mass;
  if (from.charge) into.charge = from.charge;
  if (from.sigma) into.sigma = from.sigma;
  if (from.epsilon) into.epsilon = from.epsilon;
}

void apply(Atom& atom, const AtomParams& p) {
  if (p.mass) atom.mass = *p.mass;
  if (p.charge) atom.charge = *p.charge;
  if (p.sigma) atom.lj_sigma = *p.sigma;
  if (p.epsilon) atom.lj_epsilon = *p.epsilon;
}

}  // namespace

void ParameterTable::merge(const ParameterTable& other) {
  for (const auto& [key, p] : other.by_element) overlay(by_element[key], p);
  for (const auto& [key, p] : other.by_name) overlay(by_name[key], p);
}

ParameterTable default_parameters() {
  ParameterTable table;
  table.by_element["Ar"] = AtomParams{39.948, 0.0, 0.3405, 0.996};
  return table;
}

ParameterTable parse_parameter_file(std::string_view text) {
  ParameterTable table;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected `key.field = value`");
    const auto key = trim(line.substr(0, eq));
    const auto value = parse_double(trim(line.substr(eq + 1)));
    if (!value) throw ParseError(line_no, "non-numeric value");
    const auto dot = key.rfind('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == key.size())
      throw ParseError(line_no, "key must look like `Element.field` or `@name.field`");
    auto target = key.substr(0, dot);
    const auto field = key.substr(dot + 1);
    AtomParams* entry = nullptr;
    if (target.front() == '@') {
      target.remove_prefix(1);
      if (target.empty()) throw ParseError(line_no, "empty atom name");
      entry = &table.by_name[std::string(target)];
    } else {
      entry = &table.by_element[normalize_element(target)];
    }
    if (field == "mass") {
      if (!(*value > 0.0)) throw ParseError(line_no, "mass must be positive");
      entry->mass = *value;
    } else if (field == "charge") {
      entry->charge = *value;
    } else if (field == "sigma") {
      if (*value < 0.0) throw ParseError(line_no, "sigma must be non-negative");
      entry->sigma = *value;
    } else if (field == "epsilon") {
      if (*value < 0.0) throw ParseError(line_no, "epsilon must be non-negative");
      entry->epsilon = *value;
    } else {
      throw ParseError(line_no, "unknown field '" + std::string(field) + "'");
    }
    if (end == text.size()) break;
  }
  return table;
}

std::size_t assign_parameters(MolecularSystem& system, const ParameterTable& table) {
  std::size_t unmatched = 0;
  for (auto& atom : system.atoms) {
    bool matched = false;
    if (auto it = table.by_element.find(atom.element); it != table.by_element.end()) {
      apply(atom, it->second);
      matched = true;
    }
    if (auto it = table.by_name.find(atom.name); it != table.by_name.end()) {
      apply(atom, it->second);
      matched = true;
    }
    if (!matched) ++unmatched;
  }
  return unmatched;
}

}  // namespace deskmd
