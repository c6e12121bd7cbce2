#pragma once

/// @file
/// Exact Euler characteristic curves of piecewise-linear embeddings, the
/// transform over a finite direction set, its smooth (integrated) variant, and
/// the sup-over-directions L1 distances between them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ectstab/complex.hpp"
#include "ectstab/error.hpp"
#include "ectstab/parallel.hpp"
#include "ectstab/step_function.hpp"

namespace ectstab {

/// ECC of the refined sample structure in direction v:
///   #{points with height <= t} - #{segments with max endpoint height <= t}.
inline StepFunction ecc(const SampleGraph& graph, const Point& v) {
  require(static_cast<int>(v.size()) == graph.dim, "ecc: direction dimension does not match embedding");
  const auto h = graph.heights(v);
  std::vector<std::pair<double, std::int64_t>> jumps;
  jumps.reserve(h.size() + graph.segments.size());
  for (double x : h) jumps.emplace_back(x, 1);
  for (const auto& [a, b] : graph.segments) jumps.emplace_back(std::max(h[a], h[b]), -1);
  return StepFunction::from_jumps(std::move(jumps));
}

inline StepFunction ecc(const CwComplex& complex, const Embedding& emb, const Point& v) {
  return ecc(sample_graph(complex, emb), v);
}

/// Brute-force Euler characteristic of {x in X : <x, v> <= t}. Each polyline
/// segment is clipped at the threshold, the clipped 1-complex is built with
/// explicit vertex identities, and chi = b0 - b1 is read off by union-find.
/// Independent of ecc(); used as its test oracle. Thresholds equal to a sample
/// height are rejected.
inline std::int64_t euler_sublevel(const CwComplex& complex, const Embedding& emb, const Point& v, double t) {
  require_valid(complex, emb);
  require(static_cast<int>(v.size()) == emb.dim, "euler_sublevel: direction dimension does not match embedding");

  // vertex ids: complex vertices 0..V-1, then interior points and clip points as created
  std::vector<std::size_t> parent;
  auto make_vertex = [&] {
    parent.push_back(parent.size());
    return parent.size() - 1;
  };
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t edge_count = 0;
  std::size_t components = 0;
  auto connect = [&](std::size_t a, std::size_t b) {
    ++edge_count;
    const auto ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  };

  std::vector<std::size_t> vertex_node(complex.vertices.size());
  std::vector<bool> vertex_below(complex.vertices.size());
  for (std::size_t i = 0; i < complex.vertices.size(); ++i) {
    const double h = dot(emb.positions.at(complex.vertices[i]), v);
    if (h == t) fail(ErrorKind::validation, "euler_sublevel: threshold ties with a sample height");
    vertex_below[i] = h < t;
    vertex_node[i] = make_vertex();
  }

  for (const auto& e : complex.edges) {
    const auto line = emb.polyline(e);
    const std::size_t iu = *complex.vertex_index(e.u);
    const std::size_t iv = *complex.vertex_index(e.v);
    // node of the current walk position; interior points get fresh nodes
    std::vector<std::size_t> nodes(line.size());
    std::vector<bool> below(line.size());
    std::vector<double> height(line.size());
    for (std::size_t k = 0; k < line.size(); ++k) {
      height[k] = dot(line[k], v);
      if (k > 0 && k + 1 < line.size() && height[k] == t)
        fail(ErrorKind::validation, "euler_sublevel: threshold ties with a sample height");
      below[k] = height[k] < t;
    }
    nodes.front() = vertex_node[iu];
    nodes.back() = vertex_node[iv];
    for (std::size_t k = 1; k + 1 < line.size(); ++k) nodes[k] = below[k] ? make_vertex() : SIZE_MAX;
    for (std::size_t k = 0; k + 1 < line.size(); ++k) {
      const bool a = below[k], b = below[k + 1];
      if (a && b) {
        connect(nodes[k], nodes[k + 1]);
      } else if (a != b) {
        // partial segment from the low endpoint to a new clip vertex
        const std::size_t clip = make_vertex();
        connect(a ? nodes[k] : nodes[k + 1], clip);
      }
    }
  }

  // only nodes whose point lies below the threshold belong to the sublevel set
  std::vector<bool> present(parent.size(), true);
  for (std::size_t i = 0; i < complex.vertices.size(); ++i) present[vertex_node[i]] = vertex_below[i];
  std::size_t vertex_count = 0;
  for (std::size_t x = 0; x < parent.size(); ++x) {
    if (!present[x]) continue;
    ++vertex_count;
    if (find(x) == x) ++components;
  }
  const auto b0 = static_cast<std::int64_t>(components);
  const auto b1 = static_cast<std::int64_t>(edge_count) - static_cast<std::int64_t>(vertex_count) + b0;
  return b0 - b1;
}

/// Integral of |ecc| over [lo, hi].
inline double ecc_abs_integral(const StepFunction& f, double lo, double hi) { return f.integral_abs(lo, hi); }

/// Total variation of the height function along a polyline: sum of |delta height|.
inline double path_variation(const std::vector<Point>& line, const Point& v) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < line.size(); ++k) s += std::abs(dot(line[k + 1], v) - dot(line[k], v));
  return s;
}

// ---------------------------------------------------------------------------
// Fields

/// ECT restricted to a finite direction set and [-a, a].
struct EctField {
  DirectionSet directions;
  std::vector<StepFunction> curves;
  double a = 1.0;
};

/// Smooth ECT: one continuous piecewise-linear curve on [-a, a] per direction.
struct SectField {
  DirectionSet directions;
  std::vector<PiecewiseLinear> curves;
  double a = 1.0;
};

/// One ECC per direction. Directions are evaluated in parallel; output order
/// follows the direction set.
inline EctField ect_field(const CwComplex& complex, const Embedding& emb, const DirectionSet& dirs, double a,
                          unsigned threads = 1) {
  require(a > 0.0, "ect_field: bound a must be positive");
  const auto graph = sample_graph(complex, emb);
  const auto r = max_radius(complex, emb);
  if (r.radius > a)
    fail(ErrorKind::validation, "ect_field: " + r.where + " has norm " + std::to_string(r.radius) +
                                    " exceeding the bound a = " + std::to_string(a));
  if (!dirs.empty())
    require(dirs.dim == emb.dim, "ect_field: direction dimension does not match embedding");
  EctField field;
  field.directions = dirs;
  field.a = a;
  field.curves.resize(dirs.size());
  parallel_for(dirs.size(), threads, [&](std::size_t i) { field.curves[i] = ecc(graph, dirs.vectors[i]); });
  return field;
}

inline EctField ect_field(const Shape& shape, const DirectionSet& dirs, double a, unsigned threads = 1) {
  return ect_field(shape.complex, shape.embedding, dirs, a, threads);
}

inline void require_compatible(const DirectionSet& d1, double a1, const DirectionSet& d2, double a2) {
  if (!d1.same_vectors(d2)) fail(ErrorKind::incompatible, "fields use different direction sets");
  if (a1 != a2) fail(ErrorKind::incompatible, "fields use different bounds a");
}

/// Max over the shared directions of the exact L1 distance on [-a, a]. A lower
/// bound for the sup over the whole sphere.
inline double ect_distance(const EctField& f1, const EctField& f2) {
  require_compatible(f1.directions, f1.a, f2.directions, f2.a);
  double d = 0.0;
  for (std::size_t i = 0; i < f1.curves.size(); ++i)
    d = std::max(d, l1_distance(f1.curves[i], f2.curves[i], -f1.a, f1.a));
  return d;
}

/// SECT(t) = integral from -a to t of (ECC - mean of ECC over [-a, a]).
/// The ECC must be constant outside [-a, a].
inline PiecewiseLinear sect(const StepFunction& ecc_curve, double a) {
  require(a > 0.0, "sect: bound a must be positive");
  std::vector<double> knots{-a};
  for (double b : ecc_curve.breaks())
    if (b > -a && b < a) knots.push_back(b);
  knots.push_back(a);
  const double mean = ecc_curve.integral(-a, a) / (2.0 * a);
  std::vector<double> values(knots.size());
  values[0] = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double level = static_cast<double>(ecc_curve(knots[k])) - mean;
    values[k + 1] = values[k] + level * (knots[k + 1] - knots[k]);
  }
  // mean-centering makes the total integral vanish
  values.back() = 0.0;
  return PiecewiseLinear(std::move(knots), std::move(values));
}

inline SectField sect_field(const EctField& field) {
  SectField out;
  out.directions = field.directions;
  out.a = field.a;
  out.curves.reserve(field.curves.size());
  for (const auto& c : field.curves) out.curves.push_back(sect(c, field.a));
  return out;
}

inline double sect_distance(const SectField& s1, const SectField& s2) {
  require_compatible(s1.directions, s1.a, s2.directions, s2.a);
  double d = 0.0;
  for (std::size_t i = 0; i < s1.curves.size(); ++i) d = std::max(d, l1_distance(s1.curves[i], s2.curves[i]));
  return d;
}

}  // namespace ectstab
