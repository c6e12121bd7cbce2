#pragma once

/// @file
/// JSON and CSV readers and writers for complexes, fields, curves, samples and
/// experiment results. Doubles are written in shortest round-trip form.

#include <charconv>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "ectstab/complex.hpp"
#include "ectstab/curve.hpp"
#include "ectstab/ect.hpp"
#include "ectstab/error.hpp"
#include "ectstab/pipeline.hpp"

namespace ectstab {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::io, "error reading '" + path + "'");
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::io, "error writing '" + path + "'");
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::runtime, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::validation, what + ": malformed JSON: " + e.what());
  }
}

/// Provenance block: tool version, resolved config, hashes of the inputs.
struct Meta {
  Json config = Json::object();
  std::vector<std::pair<std::string, std::string>> inputs;  ///< (label, sha256)

  void add_input(const std::string& label, const std::string& bytes) { inputs.emplace_back(label, sha256_hex(bytes)); }

  Json to_json() const {
    Json j;
    j["tool"] = "ectstab";
    j["version"] = kVersion;
    j["config"] = config;
    Json h = Json::object();
    for (const auto& [k, v] : inputs) h[k] = v;
    j["input_sha256"] = h;
    return j;
  }

  /// "# key: value" lines for the head of a CSV file.
  std::string csv_header() const {
    std::string s = "# tool: ectstab " + std::string(kVersion) + "\n";
    s += "# config: " + config.dump() + "\n";
    for (const auto& [k, v] : inputs) s += "# input_sha256 " + k + ": " + v + "\n";
    return s;
  }
};

// ---------------------------------------------------------------------------
// Complex + embedding

namespace detail {

inline Point point_from_json(const Json& j, int dim, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::validation, where + ": point must be an array");
  Point p;
  for (const auto& x : j) {
    if (!x.is_number()) fail(ErrorKind::validation, where + ": coordinates must be numbers");
    p.push_back(x.get<double>());
  }
  if (static_cast<int>(p.size()) != dim)
    fail(ErrorKind::validation, where + ": expected " + std::to_string(dim) + " coordinates");
  return p;
}

template <class T>
T get_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::validation, where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    fail(ErrorKind::validation, where + ": '" + key + "' has the wrong type");
  }
}

}  // namespace detail

/// Parses {"dim", "vertices": [{id, pos}], "edges": [{id, u, v, interior}]}.
/// Structural problems beyond the format are left to validate().
inline Shape shape_from_json(const Json& j) {
  Shape s;
  s.embedding.dim = detail::get_field<int>(j, "dim", "complex");
  if (s.embedding.dim < 1) fail(ErrorKind::validation, "complex: dim must be >= 1");
  const auto verts = detail::get_field<Json>(j, "vertices", "complex");
  const auto edges = detail::get_field<Json>(j, "edges", "complex");
  if (!verts.is_array() || !edges.is_array()) fail(ErrorKind::validation, "complex: vertices and edges must be arrays");
  for (const auto& v : verts) {
    const auto id = detail::get_field<std::string>(v, "id", "vertex");
    s.complex.vertices.push_back(id);
    s.embedding.positions[id] = detail::point_from_json(detail::get_field<Json>(v, "pos", "vertex " + id), s.embedding.dim,
                                                        "vertex '" + id + "'");
  }
  for (const auto& e : edges) {
    Edge edge;
    edge.id = detail::get_field<std::string>(e, "id", "edge");
    edge.u = detail::get_field<std::string>(e, "u", "edge " + edge.id);
    edge.v = detail::get_field<std::string>(e, "v", "edge " + edge.id);
    std::vector<Point> mid;
    if (e.contains("interior")) {
      if (!e.at("interior").is_array()) fail(ErrorKind::validation, "edge '" + edge.id + "': interior must be an array");
      for (const auto& p : e.at("interior"))
        mid.push_back(detail::point_from_json(p, s.embedding.dim, "edge '" + edge.id + "'"));
    }
    if (!mid.empty()) s.embedding.interior[edge.id] = std::move(mid);
    s.complex.edges.push_back(std::move(edge));
  }
  return s;
}

inline Json shape_to_json(const Shape& s) {
  Json j;
  j["dim"] = s.embedding.dim;
  Json verts = Json::array();
  for (const auto& v : s.complex.vertices) verts.push_back({{"id", v}, {"pos", s.embedding.positions.at(v)}});
  j["vertices"] = verts;
  Json edges = Json::array();
  for (const auto& e : s.complex.edges)
    edges.push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}, {"interior", s.embedding.interior_of(e.id)}});
  j["edges"] = edges;
  return j;
}

// ---------------------------------------------------------------------------
// Fields

inline Json directions_to_json(const DirectionSet& d) {
  return {{"dim", d.dim},
          {"scheme", to_string(d.scheme)},
          {"requested", d.requested},
          {"seed", d.seed},
          {"vectors", d.vectors}};
}

inline DirectionSet directions_from_json(const Json& j) {
  DirectionSet d;
  d.dim = detail::get_field<int>(j, "dim", "directions");
  d.requested = detail::get_field<int>(j, "requested", "directions");
  d.seed = detail::get_field<std::uint64_t>(j, "seed", "directions");
  const auto scheme = detail::get_field<std::string>(j, "scheme", "directions");
  if (scheme == "antipodal") d.scheme = DirectionScheme::antipodal;
  else if (scheme == "equiangular") d.scheme = DirectionScheme::equiangular;
  else if (scheme == "fibonacci") d.scheme = DirectionScheme::fibonacci;
  else if (scheme == "gaussian") d.scheme = DirectionScheme::gaussian;
  else fail(ErrorKind::validation, "directions: unknown scheme '" + scheme + "'");
  for (const auto& v : detail::get_field<Json>(j, "vectors", "directions"))
    d.vectors.push_back(detail::point_from_json(v, d.dim, "direction"));
  return d;
}

inline Json field_to_json(const EctField& f) {
  Json j;
  j["kind"] = "ect_field";
  j["a"] = f.a;
  j["directions"] = directions_to_json(f.directions);
  Json curves = Json::array();
  for (const auto& c : f.curves) curves.push_back({{"breaks", c.breaks()}, {"values", c.values()}});
  j["curves"] = curves;
  return j;
}

inline EctField field_from_json(const Json& j) {
  if (!j.is_object() || j.value("kind", "") != "ect_field") fail(ErrorKind::validation, "not an ECT field document");
  EctField f;
  f.a = detail::get_field<double>(j, "a", "field");
  f.directions = directions_from_json(detail::get_field<Json>(j, "directions", "field"));
  const auto curves = detail::get_field<Json>(j, "curves", "field");
  for (const auto& c : curves)
    f.curves.push_back(StepFunction::from_pieces(detail::get_field<std::vector<double>>(c, "breaks", "curve"),
                                                 detail::get_field<std::vector<std::int64_t>>(c, "values", "curve")));
  if (f.curves.size() != f.directions.size())
    fail(ErrorKind::validation, "field: one curve per direction required");
  return f;
}

/// direction,breakpoint,value. The first row per direction has breakpoint -inf
/// and carries the value below the first jump.
inline std::string field_to_csv(const EctField& f) {
  std::string s = "direction,breakpoint,value\n";
  for (std::size_t i = 0; i < f.curves.size(); ++i) {
    const auto& c = f.curves[i];
    s += std::to_string(i) + ",-inf," + std::to_string(c.initial()) + "\n";
    for (std::size_t k = 0; k < c.breaks().size(); ++k)
      s += std::to_string(i) + "," + format_double(c.breaks()[k]) + "," + std::to_string(c.values()[k + 1]) + "\n";
  }
  return s;
}

/// direction,knot,value.
inline std::string sect_to_csv(const SectField& f) {
  std::string s = "direction,knot,value\n";
  for (std::size_t i = 0; i < f.curves.size(); ++i) {
    const auto& c = f.curves[i];
    for (std::size_t k = 0; k < c.knots().size(); ++k)
      s += std::to_string(i) + "," + format_double(c.knots()[k]) + "," + format_double(c.values()[k]) + "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Curves and samples

inline Json coeffs_to_json(const FourierCurve::Coeffs& c) {
  Json arr = Json::array();
  for (const auto& [j, z] : c) arr.push_back({{"j", j}, {"re", z.real()}, {"im", z.imag()}});
  return arr;
}

inline FourierCurve::Coeffs coeffs_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::validation, "coefficients must be an array of {j, re, im}");
  FourierCurve::Coeffs c;
  for (const auto& e : j) {
    const int k = detail::get_field<int>(e, "j", "coefficient");
    c[k] += std::complex<double>(e.value("re", 0.0), e.value("im", 0.0));
  }
  if (c.empty()) fail(ErrorKind::validation, "coefficients: none given");
  return c;
}

/// Curve document: coefficients plus derived length, curvature bound and simplicity.
inline Json curve_to_json(const FourierCurve& c, const std::string& name = {}) {
  Json j;
  j["kind"] = "fourier_curve";
  if (!name.empty()) j["preset"] = name;
  j["coeffs"] = coeffs_to_json(c.coeffs());
  j["length"] = curve_length(c);
  j["curvature_bound"] = curve_curvature_bound(c);
  j["simple"] = is_simple(c);
  return j;
}

/// Accepts a curve document or a bare coefficient array.
inline FourierCurve curve_from_json(const Json& j) {
  if (j.is_array()) return FourierCurve(coeffs_from_json(j));
  if (j.is_object() && j.contains("coeffs")) return FourierCurve(coeffs_from_json(j.at("coeffs")));
  if (j.is_object() && j.contains("preset")) return preset_curve(j.at("preset").get<std::string>());
  fail(ErrorKind::validation, "curve: expected 'coeffs' or 'preset'");
}

inline std::string samples_to_csv(const std::vector<NoisySample>& samples) {
  std::string s = "param";
  const std::size_t d = samples.empty() ? 0 : samples.front().point.size();
  for (std::size_t c = 0; c < d; ++c) s += ",x" + std::to_string(c);
  s += "\n";
  for (const auto& p : samples) {
    s += format_double(p.param);
    for (double x : p.point) s += "," + format_double(x);
    s += "\n";
  }
  return s;
}

/// Reads param,x0,x1,... rows; '#' lines and the header are skipped.
inline std::vector<NoisySample> samples_from_csv(const std::string& text) {
  std::vector<NoisySample> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto next = line.find(',', pos);
      const auto tok = line.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      double v = 0.0;
      const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
        fail(ErrorKind::validation, "samples: bad number on line " + std::to_string(lineno));
      vals.push_back(v);
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (vals.size() < 2) fail(ErrorKind::validation, "samples: line " + std::to_string(lineno) + " has no coordinates");
    out.push_back({vals[0], Point(vals.begin() + 1, vals.end())});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment

inline ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::validation, "experiment config must be an object");
  ExperimentConfig c;
  try {
    if (j.contains("curve")) {
      const auto& cv = j.at("curve");
      if (cv.is_string()) c.curve = cv.get<std::string>();
      else c.coeffs = curve_from_json(cv).coeffs();
    }
    c.sigma = j.value("sigma", c.sigma);
    c.ns = j.value("ns", c.ns);
    c.seeds = j.value("seeds", c.seeds);
    c.directions = j.value("directions", c.directions);
    c.m_points = j.value("m_points", c.m_points);
    c.posterior_samples = j.value("posterior_samples", c.posterior_samples);
    c.a = j.value("a", c.a);
    c.kernel_amplitude = j.value("kernel_amplitude", c.kernel_amplitude);
    c.kernel_inverse_scale = j.value("kernel_inverse_scale", c.kernel_inverse_scale);
    if (j.contains("noise_variance")) c.noise_variance = j.at("noise_variance").get<double>();
    c.reference_points = j.value("reference_points", c.reference_points);
    c.table_grid = j.value("table_grid", c.table_grid);
    c.master_seed = j.value("master_seed", c.master_seed);
  } catch (const Json::exception& e) {
    fail(ErrorKind::validation, std::string("experiment config: ") + e.what());
  }
  if (!c.coeffs) preset_curve(c.curve);  // reject unknown names early
  return c;
}

/// Fully resolved config, defaults included.
inline Json config_to_json(const ExperimentConfig& c) {
  Json j;
  if (c.coeffs) j["curve"] = {{"coeffs", coeffs_to_json(*c.coeffs)}};
  else j["curve"] = c.curve;
  j["sigma"] = c.sigma;
  j["ns"] = c.ns;
  j["seeds"] = c.seeds;
  j["directions"] = c.directions;
  j["m_points"] = c.m_points;
  j["posterior_samples"] = c.posterior_samples;
  j["a"] = c.a;
  j["kernel"] = "sine_squared_exp";
  j["kernel_amplitude"] = c.kernel_amplitude;
  j["kernel_inverse_scale"] = c.kernel_inverse_scale;
  j["noise_variance"] = c.gp_noise_variance();
  j["reference_points"] = c.reference_points;
  j["table_grid"] = c.table_grid;
  j["master_seed"] = c.master_seed;
  return j;
}

inline std::string results_to_csv(const ExperimentResult& r) {
  std::string s = "n,seed,kind,ect_dist,sect_dist,sup_gap,arc_length\n";
  for (const auto& row : r.rows)
    s += std::to_string(row.n) + "," + std::to_string(row.seed) + "," + row.kind + "," + format_double(row.ect_dist) +
         "," + format_double(row.sect_dist) + "," + format_double(row.sup_gap) + "," + format_double(row.arc_length) +
         "\n";
  return s;
}

inline Json summary_to_json(const ExperimentResult& r) {
  auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
  Json j;
  j["truth_length"] = r.truth_length;
  j["truth_curvature_bound"] = r.truth_curvature;
  j["reference_eps"] = r.reference_eps;
  j["distance_note"] = "max over the finite direction set; a lower bound for the sup over the sphere";
  Json per = Json::array();
  for (const auto& s : r.summary)
    per.push_back({{"n", s.n},
                   {"runs", s.runs},
                   {"failed", s.failed},
                   {"median_ect_dist", num(s.median_ect)},
                   {"median_sect_dist", num(s.median_sect)},
                   {"median_sup_gap", num(s.median_sup_gap)},
                   {"median_length_error", num(s.median_length_error)}});
  j["per_n"] = per;
  Json errors = Json::array();
  for (const auto& row : r.rows)
    if (row.kind == "failed") errors.push_back({{"n", row.n}, {"seed", row.seed}, {"error", row.error}});
  j["failures"] = errors;
  return j;
}

}  // namespace ectstab
