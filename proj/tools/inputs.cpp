#include "inputs.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmslab/error.hpp"
#include "mmslab/generators.hpp"

namespace mmslab::cli {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) fail(ErrorCode::kFormat, "not a number: '" + s + "'");
  return v;
}

std::size_t to_index(const std::string& s, const FiniteMMS& space) {
  const double v = to_double(s);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)) ||
      static_cast<std::size_t>(v) >= space.size()) {
    fail(ErrorCode::kPrecondition, "point index out of range: '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, path + ": " + e.what());
  }
}

bool coordinate_clause(const std::string& clause, const PointRecord& p) {
  static const std::vector<std::string> ops = {">=", "<=", ">", "<", "="};
  for (const auto& op : ops) {
    const auto at = clause.find(op);
    if (at == std::string::npos) continue;
    const std::string axis = clause.substr(0, at);
    const double value = to_double(clause.substr(at + op.size()));
    const std::size_t c = axis == "x" ? 0 : axis == "y" ? 1 : axis == "z" ? 2 : 99;
    if (c == 99) fail(ErrorCode::kFormat, "unknown coordinate in '" + clause + "'");
    if (c >= p.coords.size()) return false;
    const double v = p.coords[c];
    if (op == ">=") return v >= value;
    if (op == "<=") return v <= value;
    if (op == ">") return v > value;
    if (op == "<") return v < value;
    return v == value;
  }
  fail(ErrorCode::kFormat, "cannot parse set clause '" + clause + "'");
}

}  // namespace

std::vector<std::size_t> parse_set(const std::string& spec, const FiniteMMS& space) {
  std::vector<std::size_t> out;
  if (spec == "all") {
    for (std::size_t i = 0; i < space.size(); ++i) out.push_back(i);
  } else if (starts_with(spec, "ids:")) {
    for (const auto& part : split(spec.substr(4), ',')) {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        out.push_back(to_index(part, space));
        continue;
      }
      const std::size_t a = to_index(part.substr(0, dash), space);
      const std::size_t b = to_index(part.substr(dash + 1), space);
      for (std::size_t i = a; i <= b; ++i) out.push_back(i);
    }
  } else if (starts_with(spec, "ball:")) {
    const auto parts = split(spec.substr(5), ':');
    if (parts.size() != 2) fail(ErrorCode::kFormat, "expected ball:<center>:<radius>");
    out = ball_indices(space, to_index(parts[0], space), to_double(parts[1]), BallKind::kClosed);
  } else if (starts_with(spec, "label:")) {
    const std::string label = spec.substr(6);
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (space.point(i).label == label) out.push_back(i);
    }
  } else {
    const auto clauses = split(spec, ',');
    if (clauses.empty()) fail(ErrorCode::kFormat, "empty point set");
    for (std::size_t i = 0; i < space.size(); ++i) {
      bool keep = true;
      for (const auto& c : clauses) keep = keep && coordinate_clause(c, space.point(i));
      if (keep) out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) fail(ErrorCode::kPrecondition, "point set '" + spec + "' is empty");
  return out;
}

Measure parse_measure(const std::string& spec, const FiniteMMS& space) {
  Measure mu;
  if (starts_with(spec, "uniform:")) return normalized_restriction(space, parse_set(spec.substr(8), space));
  if (std::filesystem::is_regular_file(spec)) {
    const json doc = read_json_file(spec);
    if (!doc.contains("atoms") || !doc["atoms"].is_array()) {
      fail(ErrorCode::kFormat, spec + ": expected an \"atoms\" array");
    }
    for (const auto& atom : doc["atoms"]) {
      const auto p = atom.at("point").get<std::size_t>();
      if (p >= space.size()) fail(ErrorCode::kPrecondition, "measure atom out of range");
      mu.points.push_back(p);
      mu.mass.push_back(atom.at("mass").get<double>());
    }
    return canonical(mu);
  }
  for (const auto& part : split(spec, ',')) {
    const auto colon = part.find(':');
    mu.points.push_back(to_index(part.substr(0, colon), space));
    mu.mass.push_back(colon == std::string::npos ? 1.0 : to_double(part.substr(colon + 1)));
  }
  if (mu.points.empty()) fail(ErrorCode::kFormat, "empty measure");
  return canonical(mu);
}

Permutation parse_map(const std::string& spec, const FiniteMMS& space) {
  if (starts_with(spec, "reflection:")) {
    const auto& meta = space.meta();
    if (meta.generator != "earring") fail(ErrorCode::kPrecondition, "reflection maps need an earring space");
    const auto n = static_cast<std::size_t>(meta.params.at("n"));
    const auto res = static_cast<std::size_t>(meta.params.at("res"));
    const auto k = static_cast<std::size_t>(to_double(spec.substr(11)));
    return hawaiian_reflection(n, res, k);
  }
  if (starts_with(spec, "enum:")) {
    const auto i = static_cast<std::size_t>(to_double(spec.substr(5)));
    const auto e = enumerate_isometries(space);
    if (i >= e.maps.size()) fail(ErrorCode::kPrecondition, "isometry index out of range");
    return e.maps[i].perm;
  }
  const json doc = read_json_file(spec);
  Permutation perm = doc.at("perm").get<Permutation>();
  if (perm.size() != space.size()) fail(ErrorCode::kFormat, "map length differs from the space size");
  return perm;
}

std::vector<int> parse_ints(const std::string& spec) {
  std::vector<int> out;
  for (const auto& part : split(spec, ',')) out.push_back(static_cast<int>(to_double(part)));
  return out;
}

std::vector<double> parse_doubles(const std::string& spec) {
  std::vector<double> out;
  for (const auto& part : split(spec, ',')) out.push_back(to_double(part));
  return out;
}

json to_json(const Measure& mu) {
  json atoms = json::array();
  for (std::size_t a = 0; a < mu.points.size(); ++a) {
    atoms.push_back({{"point", mu.points[a]}, {"mass", mu.mass[a]}});
  }
  return {{"atoms", atoms}};
}

json to_json(const std::vector<CouplingEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) out.push_back({{"i", e.i}, {"j", e.j}, {"mass", e.mass}});
  return out;
}

}  // namespace mmslab::cli
