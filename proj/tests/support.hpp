#pragma once

// Random instances shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ectstab/complex.hpp"

namespace ectstab::testing {

inline Point random_point(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Point p(static_cast<std::size_t>(dim));
  for (auto& x : p) x = u(rng);
  return p;
}

inline Point random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  Point p(static_cast<std::size_t>(dim));
  double s = 0.0;
  do {
    for (auto& x : p) x = n(rng);
    s = norm(p);
  } while (s < 1e-6);
  for (auto& x : p) x /= s;
  return p;
}

/// Up to max_v vertices and max_e edges; loops and parallel edges allowed.
/// Every edge carries 0-3 interior points (loops at least 1).
inline Shape random_shape(std::mt19937_64& rng, int dim, int max_v = 8, int max_e = 12) {
  std::uniform_int_distribution<int> nv(1, max_v), ne(0, max_e), nint(0, 3);
  Shape s;
  s.embedding.dim = dim;
  const int V = nv(rng);
  for (int i = 0; i < V; ++i) {
    const std::string id = "v" + std::to_string(i);
    s.complex.vertices.push_back(id);
    s.embedding.positions[id] = random_point(rng, dim);
  }
  std::uniform_int_distribution<int> pick(0, V - 1);
  const int E = ne(rng);
  for (int k = 0; k < E; ++k) {
    Edge e{"e" + std::to_string(k), s.complex.vertices[static_cast<std::size_t>(pick(rng))],
           s.complex.vertices[static_cast<std::size_t>(pick(rng))]};
    int m = nint(rng);
    if (e.is_loop()) m = std::max(m, 1);
    std::vector<Point> mid;
    for (int j = 0; j < m; ++j) mid.push_back(random_point(rng, dim));
    if (!mid.empty()) s.embedding.interior[e.id] = std::move(mid);
    s.complex.edges.push_back(std::move(e));
  }
  return s;
}

/// All heights of sample points in direction v.
inline std::vector<double> all_heights(const Shape& s, const Point& v) {
  std::vector<double> h;
  for (const auto& [id, p] : s.embedding.positions) h.push_back(dot(p, v));
  for (const auto& [id, pts] : s.embedding.interior)
    for (const auto& p : pts) h.push_back(dot(p, v));
  std::sort(h.begin(), h.end());
  return h;
}

/// Uniform t in [-r, r] that avoids every listed height.
inline double non_tie(std::mt19937_64& rng, const std::vector<double>& heights, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  for (;;) {
    const double t = u(rng);
    if (!std::binary_search(heights.begin(), heights.end(), t)) return t;
  }
}

/// Splits a shape into two subcomplexes V and W with Z = V u W, sharing only
/// vertices; S is the shared vertex set as a 0-dimensional complex.
struct Split {
  Shape V, W, S;
};

inline Split random_split(std::mt19937_64& rng, const Shape& z) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> side3(0, 2);
  std::vector<bool> inV(z.complex.vertices.size()), inW(z.complex.vertices.size());
  for (std::size_t i = 0; i < inV.size(); ++i) {
    const int s = side3(rng);
    inV[i] = s != 1;
    inW[i] = s != 0;
  }
  Split out;
  for (auto* part : {&out.V, &out.W, &out.S}) part->embedding.dim = z.embedding.dim;
  std::vector<bool> edgeV(z.complex.edges.size());
  for (std::size_t k = 0; k < z.complex.edges.size(); ++k) {
    const auto& e = z.complex.edges[k];
    edgeV[k] = coin(rng);
    auto& flags = edgeV[k] ? inV : inW;
    flags[*z.complex.vertex_index(e.u)] = true;
    flags[*z.complex.vertex_index(e.v)] = true;
  }
  auto add_vertex = [&](Shape& s, std::size_t i) {
    const auto& id = z.complex.vertices[i];
    s.complex.vertices.push_back(id);
    s.embedding.positions[id] = z.embedding.positions.at(id);
  };
  for (std::size_t i = 0; i < inV.size(); ++i) {
    if (inV[i]) add_vertex(out.V, i);
    if (inW[i]) add_vertex(out.W, i);
    if (inV[i] && inW[i]) add_vertex(out.S, i);
  }
  for (std::size_t k = 0; k < z.complex.edges.size(); ++k) {
    const auto& e = z.complex.edges[k];
    Shape& s = edgeV[k] ? out.V : out.W;
    s.complex.edges.push_back(e);
    const auto it = z.embedding.interior.find(e.id);
    if (it != z.embedding.interior.end()) s.embedding.interior[e.id] = it->second;
  }
  return out;
}

/// Regular n-gon on the unit circle, vertices at angles 2 pi (k + phase) / n.
inline std::vector<Point> ngon(int n, double phase = 0.0, double radius = 1.0) {
  std::vector<Point> p;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + phase) / n;
    p.push_back({radius * std::cos(t), radius * std::sin(t)});
  }
  return p;
}

}  // namespace ectstab::testing
