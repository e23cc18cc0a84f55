#include "mmslab/space_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "mmslab/error.hpp"

namespace mmslab {
namespace {

using nlohmann::json;

std::vector<double> ambient_distances(const std::vector<PointRecord>& points, bool linf) {
  const std::size_t n = points.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].coords.size() != points[0].coords.size() || points[i].coords.empty()) {
      fail(ErrorCode::kFormat, "ambient mode needs coordinates of equal dimension");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < points[i].coords.size(); ++c) {
        const double diff = std::abs(points[i].coords[c] - points[j].coords[c]);
        acc = linf ? std::max(acc, diff) : acc + diff * diff;
      }
      dist[i * n + j] = dist[j * n + i] = linf ? acc : std::sqrt(acc);
    }
  }
  return dist;
}

std::vector<double> graph_distances(std::size_t n, const json& edges) {
  if (!edges.is_array()) fail(ErrorCode::kFormat, "graph mode needs an \"edges\" array");
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 3) fail(ErrorCode::kFormat, "edge must be [i, j, length]");
    const auto i = e[0].get<std::size_t>();
    const auto j = e[1].get<std::size_t>();
    const double w = e[2].get<double>();
    if (i >= n || j >= n) fail(ErrorCode::kFormat, "edge endpoint out of range");
    if (!(w >= 0.0)) fail(ErrorCode::kFormat, "edge length must be nonnegative");
    adj[i].emplace_back(j, w);
    adj[j].emplace_back(i, w);
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n * n, inf);
  using Item = std::pair<double, std::size_t>;
  for (std::size_t s = 0; s < n; ++s) {
    double* row = dist.data() + s * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    row[s] = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      const auto [du, u] = heap.top();
      heap.pop();
      if (du > row[u]) continue;
      for (const auto& [v, w] : adj[u]) {
        if (du + w < row[v]) {
          row[v] = du + w;
          heap.emplace(row[v], v);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (row[t] == inf) fail(ErrorCode::kDisconnected, "graph-mode space is disconnected");
    }
  }
  return dist;
}

}  // namespace

FiniteMMS space_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("space JSON: ") + e.what());
  }
  try {
    if (!doc.contains("weights")) fail(ErrorCode::kFormat, "space JSON lacks \"weights\"");
    auto weights = doc.at("weights").get<std::vector<double>>();
    const std::size_t n = weights.size();

    std::vector<PointRecord> points;
    if (doc.contains("points")) {
      for (const auto& p : doc.at("points")) {
        PointRecord rec;
        rec.id = p.value("id", static_cast<int>(points.size()));
        if (p.contains("coords")) rec.coords = p.at("coords").get<std::vector<double>>();
        rec.label = p.value("label", std::string{});
        points.push_back(std::move(rec));
      }
      if (points.size() != n) fail(ErrorCode::kFormat, "points and weights differ in length");
    } else {
      points.resize(n);
      for (std::size_t i = 0; i < n; ++i) points[i].id = static_cast<int>(i);
    }

    std::vector<double> dist;
    const json& d = doc.at("dist");
    if (d.is_array()) {
      if (d.size() != n) fail(ErrorCode::kFormat, "distance matrix has wrong row count");
      dist.reserve(n * n);
      for (const auto& row : d) {
        if (!row.is_array() || row.size() != n) {
          fail(ErrorCode::kFormat, "distance matrix row has wrong length");
        }
        for (const auto& v : row) dist.push_back(v.get<double>());
      }
    } else if (d.is_object()) {
      const auto mode = d.at("mode").get<std::string>();
      if (mode == "ambient-L2" || mode == "ambient-Linf") {
        dist = ambient_distances(points, mode == "ambient-Linf");
      } else if (mode == "graph") {
        dist = graph_distances(n, d.contains("edges") ? d.at("edges") : json());
      } else {
        fail(ErrorCode::kFormat, "unknown dist mode \"" + mode + "\"");
      }
    } else {
      fail(ErrorCode::kFormat, "\"dist\" must be a matrix or a mode object");
    }

    Provenance meta;
    if (doc.contains("meta")) {
      const json& m = doc.at("meta");
      meta.generator = m.value("generator", std::string{});
      meta.pitch = m.value("pitch", 0.0);
      if (m.contains("params")) {
        for (const auto& [key, value] : m.at("params").items()) {
          if (value.is_number()) meta.params[key] = value.get<double>();
        }
      }
    }
    return FiniteMMS(std::move(points), std::move(dist), std::move(weights), std::move(meta));
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("space JSON: ") + e.what());
  }
}

std::string space_to_json(const FiniteMMS& space) {
  const std::size_t n = space.size();
  json doc;
  json points = json::array();
  for (const auto& p : space.points()) {
    json rec = {{"id", p.id}};
    if (!p.coords.empty()) rec["coords"] = p.coords;
    if (!p.label.empty()) rec["label"] = p.label;
    points.push_back(std::move(rec));
  }
  doc["points"] = std::move(points);
  json dist = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = space.row(i);
    dist.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["dist"] = std::move(dist);
  doc["weights"] = std::vector<double>(space.weights().begin(), space.weights().end());
  json params = json::object();
  for (const auto& [k, v] : space.meta().params) params[k] = v;
  doc["meta"] = {{"generator", space.meta().generator},
                 {"pitch", space.meta().pitch},
                 {"params", std::move(params)}};
  return doc.dump();
}

FiniteMMS read_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return space_from_json(buf.str());
}

void write_space(const FiniteMMS& space, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << space_to_json(space) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace mmslab
