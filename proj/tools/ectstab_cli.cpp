// ectstab command-line front end.
//
// Exit codes: 0 ok, 2 missing/unreadable input, 3 validation failure,
// 4 incompatible inputs, 5 runtime failure.

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ectstab/ectstab.hpp"

namespace {

using namespace ectstab;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::io: return 2;
    case ErrorKind::validation: return 3;
    case ErrorKind::incompatible: return 4;
    case ErrorKind::runtime: return 5;
  }
  return 5;
}

/// Writes to path, or stdout when path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_text_file(path, text);
}

struct LoadedShape {
  Shape shape;
  std::string bytes;
};

LoadedShape load_shape(const std::string& path) {
  LoadedShape s;
  s.bytes = read_text_file(path);
  s.shape = shape_from_json(parse_json(s.bytes, path));
  return s;
}

// ---- gen-curve

struct GenCurveArgs {
  std::string preset, coeffs, out;
};

int cmd_gen_curve(const GenCurveArgs& a) {
  if (a.preset.empty() == a.coeffs.empty()) fail(ErrorKind::validation, "gen-curve: give exactly one of --preset, --coeffs");
  Meta meta;
  FourierCurve c;
  if (!a.preset.empty()) {
    c = preset_curve(a.preset);
    meta.config["preset"] = a.preset;
  } else {
    const auto bytes = read_text_file(a.coeffs);
    c = curve_from_json(parse_json(bytes, a.coeffs));
    meta.add_input("coeffs", bytes);
  }
  auto j = curve_to_json(c, a.preset);
  if (!j["simple"].get<bool>()) std::cerr << "warning: curve is not simple (self-intersection found)\n";
  j["meta"] = meta.to_json();
  emit(a.out, j.dump(2) + "\n");
  return 0;
}

// ---- sample

struct SampleArgs {
  std::string preset, curve, out;
  int n = 20;
  double sigma = 0.002;
  std::uint64_t seed = 0;
};

FourierCurve resolve_curve(const std::string& preset, const std::string& curve, Meta& meta) {
  if (preset.empty() == curve.empty()) fail(ErrorKind::validation, "give exactly one of --preset, --curve");
  if (!preset.empty()) {
    meta.config["preset"] = preset;
    return preset_curve(preset);
  }
  const auto bytes = read_text_file(curve);
  meta.add_input("curve", bytes);
  return curve_from_json(parse_json(bytes, curve));
}

int cmd_sample(const SampleArgs& a) {
  Meta meta;
  const auto c = resolve_curve(a.preset, a.curve, meta);
  meta.config["n"] = a.n;
  meta.config["sigma"] = a.sigma;
  meta.config["seed"] = a.seed;
  emit(a.out, meta.csv_header() + samples_to_csv(sample_noisy(c, a.n, a.sigma, a.seed)));
  return 0;
}

// ---- smooth

struct SmoothArgs {
  std::string samples, out, points_csv;
  double sigma2 = 4e-6;
  double amplitude = 1.0;
  double inverse_scale = 2.0;
  int m_points = 512;
  int grid = 2048;
};

int cmd_smooth(const SmoothArgs& a) {
  const auto bytes = read_text_file(a.samples);
  const auto samples = samples_from_csv(bytes);
  const auto kernel = std::make_shared<SineSquaredExpKernel>(a.amplitude, a.inverse_scale);
  const auto sc = reparameterize(smooth(samples, kernel, a.sigma2), a.grid);
  const auto shape = discretize(sc, a.m_points);
  Meta meta;
  meta.add_input("samples", bytes);
  meta.config = {{"sigma2", a.sigma2},         {"kernel", kernel->name()}, {"kernel_amplitude", a.amplitude},
                 {"kernel_inverse_scale", a.inverse_scale}, {"m_points", a.m_points}, {"table_grid", a.grid}};
  auto j = shape_to_json(shape);
  j["meta"] = meta.to_json();
  j["meta"]["length"] = sc.table().length();
  j["meta"]["jitter"] = sc.model().jitter();
  emit(a.out, j.dump(2) + "\n");
  if (!a.points_csv.empty()) {
    std::string s = meta.csv_header() + "k,param,x,y\n";
    const auto params = sc.constant_speed_params(a.m_points);
    for (std::size_t k = 0; k < params.size(); ++k) {
      const auto p = sc(params[k]);
      s += std::to_string(k) + "," + format_double(params[k]);
      for (double x : p) s += "," + format_double(x);
      s += "\n";
    }
    write_text_file(a.points_csv, s);
  }
  return 0;
}

// ---- ect / sect

struct EctArgs {
  std::string complex, out, csv;
  int directions = 64;
  double a = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

int cmd_ect(const EctArgs& a) {
  const auto in = load_shape(a.complex);
  const auto report = validate(in.shape.complex, in.shape.embedding);
  if (!report.ok()) fail(ErrorKind::validation, "invalid complex: " + report.summary());
  const auto dirs = make_directions(in.shape.embedding.dim, a.directions, a.seed);
  const auto field = ect_field(in.shape, dirs, a.a, a.threads);
  Meta meta;
  meta.add_input("complex", in.bytes);
  meta.config = {{"directions", a.directions}, {"a", a.a}, {"seed", a.seed}};
  auto j = field_to_json(field);
  j["meta"] = meta.to_json();
  emit(a.out, j.dump(2) + "\n");
  if (!a.csv.empty()) write_text_file(a.csv, meta.csv_header() + field_to_csv(field));
  return 0;
}

struct SectArgs {
  std::string field, out;
};

int cmd_sect(const SectArgs& a) {
  const auto bytes = read_text_file(a.field);
  const auto field = field_from_json(parse_json(bytes, a.field));
  Meta meta;
  meta.add_input("field", bytes);
  meta.config = {{"a", field.a}};
  emit(a.out, meta.csv_header() + sect_to_csv(sect_field(field)));
  return 0;
}

// ---- dist

struct DistArgs {
  std::string field1, field2;
};

int cmd_dist(const DistArgs& a) {
  const auto b1 = read_text_file(a.field1);
  const auto b2 = read_text_file(a.field2);
  const auto f1 = field_from_json(parse_json(b1, a.field1));
  const auto f2 = field_from_json(parse_json(b2, a.field2));
  Meta meta;
  meta.add_input("field1", b1);
  meta.add_input("field2", b2);
  Json j;
  j["ect_distance"] = ect_distance(f1, f2);
  j["sect_distance"] = sect_distance(sect_field(f1), sect_field(f2));
  j["directions"] = f1.directions.size();
  j["note"] = "max over the finite direction set; a lower bound for the sup over the sphere";
  j["meta"] = meta.to_json();
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---- bounds

struct BoundsArgs {
  double M = 1.0;
  std::vector<double> lengths;
  long vertices = 0;
  double eps = 0.01;
  std::optional<double> interp_eps;
};

int cmd_bounds(const BoundsArgs& a) {
  if (a.lengths.empty()) fail(ErrorKind::validation, "bounds: give at least one --length");
  const auto r = stability_bound({a.lengths, a.M, a.vertices, a.eps});
  Json j;
  j["n"] = r.n;
  j["g"] = r.g;
  j["total"] = r.total;
  if (a.interp_eps) {
    double total = 0.0;
    for (double L : a.lengths) total += L;
    j["interpolation_bound"] = interpolation_bound(a.M, total, *a.interp_eps);
  }
  Meta meta;
  meta.config = {{"M", a.M}, {"lengths", a.lengths}, {"vertices", a.vertices}, {"eps", a.eps}};
  if (a.interp_eps) meta.config["interpolation_eps"] = *a.interp_eps;
  j["meta"] = meta.to_json();
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---- experiment

struct ExperimentArgs {
  std::string config, outdir;
  unsigned threads = 1;
};

int cmd_experiment(const ExperimentArgs& a) {
  const auto bytes = read_text_file(a.config);
  const auto cfg = config_from_json(parse_json(bytes, a.config));
  std::error_code ec;
  std::filesystem::create_directories(a.outdir, ec);
  if (ec) fail(ErrorKind::io, "cannot create '" + a.outdir + "': " + ec.message());
  const auto result = run_consistency_experiment(cfg, a.threads);
  Meta meta;
  meta.config = config_to_json(cfg);
  meta.add_input("config", bytes);
  const auto dir = std::filesystem::path(a.outdir);
  write_text_file((dir / "results.csv").string(), meta.csv_header() + results_to_csv(result));
  auto summary = summary_to_json(result);
  summary["meta"] = meta.to_json();
  write_text_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  for (const auto& s : result.summary)
    std::cout << "n=" << s.n << " runs=" << s.runs << " failed=" << s.failed
              << " median_sect=" << format_double(s.median_sect) << " median_ect=" << format_double(s.median_ect)
              << "\n";
  if (result.any_failed) {
    std::cerr << "error: some runs failed; see failure rows in results.csv\n";
    return 5;
  }
  return 0;
}

// ---- validate

struct ValidateArgs {
  std::string complex;
  std::optional<double> a;
};

int cmd_validate(const ValidateArgs& a) {
  const auto in = load_shape(a.complex);
  const auto report = validate(in.shape.complex, in.shape.embedding, a.a);
  Json j;
  j["ok"] = report.ok();
  Json v = Json::array();
  for (const auto& x : report.violations) v.push_back({{"kind", to_string(x.kind)}, {"id", x.id}, {"detail", x.detail}});
  j["violations"] = v;
  if (report.ok()) {
    j["euler_characteristic"] = in.shape.complex.euler_characteristic();
    j["connected"] = in.shape.complex.is_connected();
    j["total_length"] = total_arc_length(in.shape.complex, in.shape.embedding);
    j["epsilon_density"] = epsilon_density(in.shape.complex, in.shape.embedding);
    j["max_radius"] = max_radius(in.shape.complex, in.shape.embedding).radius;
  }
  std::cout << j.dump(2) << "\n";
  return report.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler characteristic transforms of embedded graphs, stability bounds, and GP smoothing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ectstab::kVersion));

  GenCurveArgs gen;
  auto* c_gen = app.add_subcommand("gen-curve", "write a Fourier curve with its length and curvature bound");
  c_gen->add_option("--preset", gen.preset, "circle, ellipse or blob");
  c_gen->add_option("--coeffs", gen.coeffs, "JSON file: [{j, re, im}, ...]");
  c_gen->add_option("--out", gen.out, "output JSON (default stdout)");

  SampleArgs smp;
  auto* c_smp = app.add_subcommand("sample", "noisy samples of a curve at equally spaced parameters");
  c_smp->add_option("--preset", smp.preset);
  c_smp->add_option("--curve", smp.curve, "curve JSON");
  c_smp->add_option("--n", smp.n)->capture_default_str();
  c_smp->add_option("--sigma", smp.sigma)->capture_default_str();
  c_smp->add_option("--seed", smp.seed)->capture_default_str();
  c_smp->add_option("--out", smp.out, "output CSV (default stdout)");

  SmoothArgs sm;
  auto* c_sm = app.add_subcommand("smooth", "GP-smooth samples and discretize at constant speed");
  c_sm->add_option("--samples", sm.samples)->required();
  c_sm->add_option("--sigma2", sm.sigma2, "GP noise variance")->capture_default_str();
  c_sm->add_option("--kernel-amplitude", sm.amplitude)->capture_default_str();
  c_sm->add_option("--kernel-inverse-scale", sm.inverse_scale)->capture_default_str();
  c_sm->add_option("--m-points", sm.m_points)->capture_default_str();
  c_sm->add_option("--grid", sm.grid, "arc-length table intervals")->capture_default_str();
  c_sm->add_option("--out", sm.out, "complex JSON (default stdout)");
  c_sm->add_option("--points-csv", sm.points_csv, "also write the points as CSV");

  EctArgs ect;
  auto* c_ect = app.add_subcommand("ect", "ECT field of a complex");
  c_ect->add_option("--complex", ect.complex)->required();
  c_ect->add_option("--directions", ect.directions)->capture_default_str();
  c_ect->add_option("--a", ect.a, "bounding radius")->capture_default_str();
  c_ect->add_option("--seed", ect.seed)->capture_default_str();
  c_ect->add_option("--threads", ect.threads)->capture_default_str();
  c_ect->add_option("--out", ect.out, "field JSON (default stdout)");
  c_ect->add_option("--csv", ect.csv, "also write direction,breakpoint,value CSV");

  SectArgs sct;
  auto* c_sct = app.add_subcommand("sect", "SECT curves of a field");
  c_sct->add_option("--field", sct.field)->required();
  c_sct->add_option("--out", sct.out, "CSV (default stdout)");

  DistArgs dst;
  auto* c_dst = app.add_subcommand("dist", "ECT and SECT distance between two fields");
  c_dst->add_option("--field1", dst.field1)->required();
  c_dst->add_option("--field2", dst.field2)->required();

  BoundsArgs bnd;
  auto* c_bnd = app.add_subcommand("bounds", "stability bound report");
  c_bnd->add_option("--M", bnd.M, "curvature bound")->capture_default_str();
  c_bnd->add_option("--length", bnd.lengths, "arc length of a 1-cell (repeatable)");
  c_bnd->add_option("--vertices", bnd.vertices, "|Z_0|")->capture_default_str();
  c_bnd->add_option("--eps", bnd.eps)->capture_default_str();
  c_bnd->add_option("--interpolation-eps", bnd.interp_eps, "also report the sampling bound at this density");

  ExperimentArgs exp;
  auto* c_exp = app.add_subcommand("experiment", "consistency experiment over sample sizes and seeds");
  c_exp->add_option("--config", exp.config)->required();
  c_exp->add_option("--outdir", exp.outdir)->required();
  c_exp->add_option("--threads", exp.threads)->capture_default_str();

  ValidateArgs val;
  auto* c_val = app.add_subcommand("validate", "check a complex document");
  c_val->add_option("--complex", val.complex)->required();
  c_val->add_option("--a", val.a, "also check all points lie within this radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (*c_gen) return cmd_gen_curve(gen);
    if (*c_smp) return cmd_sample(smp);
    if (*c_sm) return cmd_smooth(sm);
    if (*c_ect) return cmd_ect(ect);
    if (*c_sct) return cmd_sect(sct);
    if (*c_dst) return cmd_dist(dst);
    if (*c_bnd) return cmd_bounds(bnd);
    if (*c_exp) return cmd_experiment(exp);
    if (*c_val) return cmd_validate(val);
  } catch (const ectstab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
