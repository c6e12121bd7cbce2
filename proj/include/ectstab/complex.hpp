#pragma once

/// @file
/// One-dimensional CW complexes with a fixed cell structure, their
/// piecewise-linear embeddings, and finite direction sets on the sphere.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ectstab/error.hpp"

namespace ectstab {

using Point = std::vector<double>;

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// A 1-cell attached at vertices u and v. u == v is a loop.
struct Edge {
  std::string id;
  std::string u;
  std::string v;

  bool is_loop() const { return u == v; }
};

/// Combinatorial multigraph: 0-cells plus 1-cells given by their endpoints.
/// Parallel edges and loops are allowed.
struct CwComplex {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;

  std::optional<std::size_t> vertex_index(const std::string& id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i] == id) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].id == id) return i;
    return std::nullopt;
  }

  /// |Z_0| - |Z_1|.
  long euler_characteristic() const {
    return static_cast<long>(vertices.size()) - static_cast<long>(edges.size());
  }

  /// Graph connectivity by union-find over the edges. The empty complex is not connected.
  bool is_connected() const {
    if (vertices.empty()) return false;
    std::vector<std::size_t> parent(vertices.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t components = vertices.size();
    for (const auto& e : edges) {
      const auto a = vertex_index(e.u);
      const auto b = vertex_index(e.v);
      if (!a || !b) continue;
      const auto ra = find(*a), rb = find(*b);
      if (ra != rb) {
        parent[ra] = rb;
        --components;
      }
    }
    return components == 1;
  }
};

/// Piecewise-linear realization of a map Z -> R^d: a position for every vertex
/// and an ordered list of interior points for every edge, walked from u to v.
struct Embedding {
  int dim = 0;
  std::map<std::string, Point> positions;
  std::map<std::string, std::vector<Point>> interior;

  const std::vector<Point>& interior_of(const std::string& edge_id) const {
    static const std::vector<Point> none;
    const auto it = interior.find(edge_id);
    return it == interior.end() ? none : it->second;
  }

  /// position(u), interior..., position(v). Throws on unknown endpoint.
  std::vector<Point> polyline(const Edge& e) const {
    const auto pu = positions.find(e.u);
    const auto pv = positions.find(e.v);
    if (pu == positions.end() || pv == positions.end())
      fail(ErrorKind::validation, "edge '" + e.id + "' has an endpoint without a position");
    const auto& mid = interior_of(e.id);
    std::vector<Point> out;
    out.reserve(mid.size() + 2);
    out.push_back(pu->second);
    out.insert(out.end(), mid.begin(), mid.end());
    out.push_back(pv->second);
    return out;
  }
};

/// A complex together with one embedding of it.
struct Shape {
  CwComplex complex;
  Embedding embedding;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  duplicate_vertex,
  duplicate_edge,
  dangling_endpoint,
  missing_position,
  unknown_vertex_position,
  unknown_edge_polyline,
  dimension_mismatch,
  non_finite,
  degenerate_loop,
  degenerate_segment,
  outside_radius,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::duplicate_vertex: return "duplicate vertex";
    case ViolationKind::duplicate_edge: return "duplicate edge";
    case ViolationKind::dangling_endpoint: return "dangling endpoint";
    case ViolationKind::missing_position: return "missing position";
    case ViolationKind::unknown_vertex_position: return "position for unknown vertex";
    case ViolationKind::unknown_edge_polyline: return "polyline for unknown edge";
    case ViolationKind::dimension_mismatch: return "dimension mismatch";
    case ViolationKind::non_finite: return "non-finite coordinate";
    case ViolationKind::degenerate_loop: return "degenerate loop";
    case ViolationKind::degenerate_segment: return "degenerate segment";
    case ViolationKind::outside_radius: return "outside radius";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::string id;  ///< offending vertex or edge id
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(),
                       [k](const Violation& v) { return v.kind == k; });
  }

  std::string summary() const {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += std::string(to_string(v.kind)) + " [" + v.id + "]";
      if (!v.detail.empty()) s += ": " + v.detail;
    }
    return s;
  }
};

/// Checks every structural and geometric invariant of the pair. When radius is
/// given, also checks that all points lie in the closed ball of that radius.
inline ValidationReport validate(const CwComplex& complex, const Embedding& emb,
                                 std::optional<double> radius = std::nullopt) {
  ValidationReport report;
  auto add = [&](ViolationKind k, const std::string& id, std::string detail = {}) {
    report.violations.push_back({k, id, std::move(detail)});
  };

  std::set<std::string> vertex_ids;
  for (const auto& v : complex.vertices)
    if (!vertex_ids.insert(v).second) add(ViolationKind::duplicate_vertex, v);

  std::set<std::string> edge_ids;
  for (const auto& e : complex.edges) {
    if (!edge_ids.insert(e.id).second) add(ViolationKind::duplicate_edge, e.id);
    if (!vertex_ids.count(e.u)) add(ViolationKind::dangling_endpoint, e.id, "u = '" + e.u + "'");
    if (!vertex_ids.count(e.v)) add(ViolationKind::dangling_endpoint, e.id, "v = '" + e.v + "'");
  }

  if (emb.dim < 1) add(ViolationKind::dimension_mismatch, "<embedding>", "dim must be >= 1");

  auto check_point = [&](const Point& p, const std::string& id, const std::string& where) {
    if (static_cast<int>(p.size()) != emb.dim) {
      add(ViolationKind::dimension_mismatch, id, where);
      return false;
    }
    for (double x : p)
      if (!std::isfinite(x)) {
        add(ViolationKind::non_finite, id, where);
        return false;
      }
    if (radius && norm(p) > *radius)
      add(ViolationKind::outside_radius, id, where + " has norm " + std::to_string(norm(p)));
    return true;
  };

  for (const auto& v : complex.vertices) {
    const auto it = emb.positions.find(v);
    if (it == emb.positions.end())
      add(ViolationKind::missing_position, v);
    else
      check_point(it->second, v, "position");
  }
  for (const auto& [id, p] : emb.positions)
    if (!vertex_ids.count(id)) add(ViolationKind::unknown_vertex_position, id);
  for (const auto& [id, pts] : emb.interior)
    if (!edge_ids.count(id)) add(ViolationKind::unknown_edge_polyline, id);

  for (const auto& e : complex.edges) {
    const auto& mid = emb.interior_of(e.id);
    bool points_ok = true;
    for (std::size_t k = 0; k < mid.size(); ++k)
      points_ok &= check_point(mid[k], e.id, "interior point " + std::to_string(k));
    if (e.is_loop() && mid.empty()) add(ViolationKind::degenerate_loop, e.id);
    const auto pu = emb.positions.find(e.u);
    const auto pv = emb.positions.find(e.v);
    if (!points_ok || pu == emb.positions.end() || pv == emb.positions.end()) continue;
    if (static_cast<int>(pu->second.size()) != emb.dim ||
        static_cast<int>(pv->second.size()) != emb.dim)
      continue;
    const auto line = emb.polyline(e);
    for (std::size_t k = 0; k + 1 < line.size(); ++k)
      if (!(distance(line[k], line[k + 1]) > 0.0))
        add(ViolationKind::degenerate_segment, e.id, "segment " + std::to_string(k));
  }
  return report;
}

inline void require_valid(const CwComplex& complex, const Embedding& emb) {
  const auto report = validate(complex, emb);
  if (!report.ok()) fail(ErrorKind::validation, "invalid embedding: " + report.summary());
}

// ---------------------------------------------------------------------------
// Geometry

inline double polyline_length(const std::vector<Point>& line) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < line.size(); ++k) s += distance(line[k], line[k + 1]);
  return s;
}

/// Chord-sum length of one edge's polyline.
inline double edge_arc_length(const CwComplex& complex, const Embedding& emb,
                              const std::string& edge_id) {
  const auto idx = complex.edge_index(edge_id);
  if (!idx) fail(ErrorKind::validation, "unknown edge id '" + edge_id + "'");
  return polyline_length(emb.polyline(complex.edges[*idx]));
}

inline double total_arc_length(const CwComplex& complex, const Embedding& emb) {
  double s = 0.0;
  for (const auto& e : complex.edges) s += polyline_length(emb.polyline(e));
  return s;
}

/// Longest single segment between consecutive sample points: the smallest eps for
/// which vertices + interior points form an eps-dense compatible subset of the PL map.
inline double epsilon_density(const CwComplex& complex, const Embedding& emb) {
  require_valid(complex, emb);
  double eps = 0.0;
  for (const auto& e : complex.edges) {
    const auto line = emb.polyline(e);
    for (std::size_t k = 0; k + 1 < line.size(); ++k) eps = std::max(eps, distance(line[k], line[k + 1]));
  }
  return eps;
}

/// Inserts k equally spaced points inside every segment.
inline Embedding refine(const CwComplex& complex, const Embedding& emb, int k) {
  require(k >= 0, "refine: k must be non-negative");
  Embedding out;
  out.dim = emb.dim;
  out.positions = emb.positions;
  for (const auto& e : complex.edges) {
    const auto line = emb.polyline(e);
    std::vector<Point> mid;
    for (std::size_t s = 0; s + 1 < line.size(); ++s) {
      if (s > 0) mid.push_back(line[s]);
      for (int j = 1; j <= k; ++j) {
        const double w = static_cast<double>(j) / (k + 1);
        Point p(line[s].size());
        for (std::size_t c = 0; c < p.size(); ++c) p[c] = (1.0 - w) * line[s][c] + w * line[s + 1][c];
        mid.push_back(std::move(p));
      }
    }
    if (!mid.empty()) out.interior[e.id] = std::move(mid);
  }
  return out;
}

/// Largest Euclidean norm over all points, with a description of where it occurs.
struct RadiusInfo {
  double radius = 0.0;
  std::string where;
};

inline RadiusInfo max_radius(const CwComplex& complex, const Embedding& emb) {
  RadiusInfo info;
  for (const auto& v : complex.vertices) {
    const auto it = emb.positions.find(v);
    if (it == emb.positions.end()) continue;
    const double r = norm(it->second);
    if (r > info.radius || info.where.empty()) info = {r, "vertex '" + v + "'"};
  }
  for (const auto& e : complex.edges) {
    const auto& mid = emb.interior_of(e.id);
    for (std::size_t k = 0; k < mid.size(); ++k) {
      const double r = norm(mid[k]);
      if (r > info.radius) info = {r, "interior point " + std::to_string(k) + " of edge '" + e.id + "'"};
    }
  }
  return info;
}

// ---------------------------------------------------------------------------
// Refined sample structure

/// The complex refined so that every polyline point is a 0-cell: sample points
/// (vertices first, in complex order, then interior points edge by edge) and the
/// segments joining consecutive points. Segments form a multiset.
struct SampleGraph {
  int dim = 0;
  std::vector<double> coords;  ///< row-major, size() == dim * point_count()
  std::vector<std::pair<std::size_t, std::size_t>> segments;

  std::size_t point_count() const { return dim == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim); }

  double height(std::size_t i, const Point& v) const {
    const double* p = coords.data() + i * static_cast<std::size_t>(dim);
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += p[c] * v[static_cast<std::size_t>(c)];
    return s;
  }

  std::vector<double> heights(const Point& v) const {
    std::vector<double> h(point_count());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = height(i, v);
    return h;
  }
};

inline SampleGraph sample_graph(const CwComplex& complex, const Embedding& emb) {
  require_valid(complex, emb);
  SampleGraph g;
  g.dim = emb.dim;
  std::map<std::string, std::size_t> index;
  auto push = [&](const Point& p) {
    g.coords.insert(g.coords.end(), p.begin(), p.end());
    return g.point_count() - 1;
  };
  for (const auto& v : complex.vertices) index[v] = push(emb.positions.at(v));
  for (const auto& e : complex.edges) {
    std::size_t prev = index.at(e.u);
    for (const auto& p : emb.interior_of(e.id)) {
      const std::size_t cur = push(p);
      g.segments.emplace_back(prev, cur);
      prev = cur;
    }
    g.segments.emplace_back(prev, index.at(e.v));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Convenience constructors

/// Single-cycle complex: one vertex at points[0] and one loop through the rest.
inline Shape make_cycle(const std::vector<Point>& points) {
  require(points.size() >= 2, "make_cycle: need at least two points");
  Shape s;
  s.complex.vertices = {"v0"};
  s.complex.edges = {{"e0", "v0", "v0"}};
  s.embedding.dim = static_cast<int>(points.front().size());
  s.embedding.positions["v0"] = points.front();
  s.embedding.interior["e0"] = std::vector<Point>(points.begin() + 1, points.end());
  return s;
}

/// Path complex: one edge from points.front() to points.back() through the rest.
inline Shape make_path(const std::vector<Point>& points) {
  require(points.size() >= 2, "make_path: need at least two points");
  Shape s;
  s.complex.vertices = {"v0", "v1"};
  s.complex.edges = {{"e0", "v0", "v1"}};
  s.embedding.dim = static_cast<int>(points.front().size());
  s.embedding.positions["v0"] = points.front();
  s.embedding.positions["v1"] = points.back();
  if (points.size() > 2) s.embedding.interior["e0"] = std::vector<Point>(points.begin() + 1, points.end() - 1);
  return s;
}

// ---------------------------------------------------------------------------
// Directions

enum class DirectionScheme { antipodal, equiangular, fibonacci, gaussian };

inline const char* to_string(DirectionScheme s) {
  switch (s) {
    case DirectionScheme::antipodal: return "antipodal";
    case DirectionScheme::equiangular: return "equiangular";
    case DirectionScheme::fibonacci: return "fibonacci";
    case DirectionScheme::gaussian: return "gaussian";
  }
  return "unknown";
}

/// Finite sample of unit vectors on S^{d-1}, with the recipe that produced it.
struct DirectionSet {
  int dim = 0;
  std::vector<Point> vectors;
  DirectionScheme scheme = DirectionScheme::equiangular;
  int requested = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return vectors.size(); }
  bool empty() const { return vectors.empty(); }

  /// Same vectors in the same order, bit for bit.
  bool same_vectors(const DirectionSet& other) const { return dim == other.dim && vectors == other.vectors; }
};

/// d = 1: {+1, -1}. d = 2: m equally spaced angles from 0. d = 3: Fibonacci
/// sphere. d >= 4: seeded normalized Gaussian draws.
inline DirectionSet make_directions(int d, int m, std::uint64_t seed = 0) {
  if (d < 1) fail(ErrorKind::validation, "make_directions: dimension must be >= 1");
  if (m < 1) fail(ErrorKind::validation, "make_directions: count must be >= 1");
  DirectionSet set;
  set.dim = d;
  set.requested = m;
  set.seed = seed;
  if (d == 1) {
    set.scheme = DirectionScheme::antipodal;
    set.vectors = {{1.0}, {-1.0}};
    return set;
  }
  set.vectors.reserve(static_cast<std::size_t>(m));
  if (d == 2) {
    set.scheme = DirectionScheme::equiangular;
    for (int j = 0; j < m; ++j) {
      const double angle = 2.0 * std::numbers::pi * j / m;
      set.vectors.push_back({std::cos(angle), std::sin(angle)});
    }
  } else if (d == 3) {
    set.scheme = DirectionScheme::fibonacci;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < m; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / m;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      set.vectors.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  } else {
    set.scheme = DirectionScheme::gaussian;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    while (static_cast<int>(set.vectors.size()) < m) {
      Point p(static_cast<std::size_t>(d));
      for (auto& x : p) x = normal(rng);
      const double n = norm(p);
      if (n < 1e-8) continue;
      for (auto& x : p) x /= n;
      set.vectors.push_back(std::move(p));
    }
  }
  // renormalize
  for (auto& v : set.vectors) {
    const double n = norm(v);
    for (auto& x : v) x /= n;
  }
  return set;
}

}  // namespace ectstab
