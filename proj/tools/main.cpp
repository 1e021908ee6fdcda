// Copyright 2026 The srnf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// srnf: command-line access to SRNF inversion and the shape statistics built
// on it. Exit status: 0 success, 2 output written but an inversion did not
// converge, 1 error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "run_config.hpp"
#include "srnf/io.hpp"
#include "srnf/parallel.hpp"
#include "srnf/shape_stats.hpp"
#include "srnf/synth.hpp"

namespace fs = std::filesystem;
using namespace srnf;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotConverged = 2;

int status(bool converged) { return converged ? kOk : kNotConverged; }

bool is_qgrid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::string word;
  for (std::string line; std::getline(in, line);) {
    std::istringstream ss(line);
    if ((ss >> word) && word[0] != '#') return word == "QGRID";
  }
  return false;
}

SurfaceGrid initial_surface(const cli::RunConfig& rc, const SrnfField& q) {
  if (rc.init == "sphere") return area_matched_sphere(q);
  if (rc.init == "star") return invert_star_shaped(q).surface;
  SurfaceGrid f = io::load_surface(rc.init);
  require_same_spec(f.spec(), q.spec(), "initial surface vs target");
  return f;
}

std::vector<SurfaceGrid> load_all(const std::vector<std::string>& paths) {
  std::vector<SurfaceGrid> out;
  for (const auto& p : paths) {
    out.push_back(io::load_surface(p));
    require_same_spec(out.front().spec(), out.back().spec(), p.c_str());
  }
  return out;
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

std::string numbered(const std::string& dir, const char* stem, int k, const char* ext) {
  char name[64];
  std::snprintf(name, sizeof name, "%s_%03d.%s", stem, k, ext);
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::kIo, "cannot create directory '" + dir + "'");
}

/// Random rigid motion (O, γ, t) drawn from the run's generator.
SurfaceGrid random_motion(const SurfaceGrid& f, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const Vec3 a(n(rng), n(rng), n(rng)), b(n(rng), n(rng), n(rng)), t(n(rng), n(rng), n(rng));
  return translate(transform_surface(Rotation3::exp(a), RigidReparam{Rotation3::exp(b)}, f), 0.5 * t);
}

// ------------------------------------------------------------ commands

struct SynthArgs {
  std::string shape = "sphere";
  std::vector<double> params;
  int n_u = 64, n_v = 64;
  bool unit_area = false, motion = false;
  std::string out, off, srnf_out;
};

int run_synth(const cli::RunConfig& rc, const SynthArgs& a) {
  SurfaceGrid f = synth::by_name(a.shape, GridSpec(a.n_u, a.n_v), a.params);
  if (a.unit_area) f = rescale_to_unit_area(f);
  if (a.motion) {
    std::mt19937_64 rng(rc.seed);
    f = random_motion(f, rng);
  }
  io::save_surface(a.out, f);
  if (!a.off.empty()) io::save_off(a.off, f);
  if (!a.srnf_out.empty()) io::save_srnf(a.srnf_out, srnf_map(f));
  return kOk;
}

struct InvertArgs {
  std::string target, out, trace, off;
};

int run_invert(const cli::RunConfig& rc, const InvertArgs& a) {
  const InversionConfig cfg = cli::resolve_inversion(rc);
  const InversionResult res = [&] {
    if (is_qgrid(a.target)) {
      const SrnfField q = io::load_srnf(a.target);
      return invert(q, initial_surface(rc, q), cfg);
    }
    const SurfaceGrid target = io::load_surface(a.target);
    return invert_target_surface(target, initial_surface(rc, srnf_map(target)), cfg);
  }();
  const SurfaceGrid f = surface_in_target_frame(res);
  io::save_surface(a.out, f);
  if (!a.off.empty()) io::save_off(a.off, f);
  if (!a.trace.empty()) {
    std::ostringstream csv;
    io::write_trace_csv(csv, res);
    save_text(a.trace, csv.str());
  }
  std::cout << "energy " << io::format_double(res.final_energy) << (res.converged ? " converged" : " not converged")
            << '\n';
  return status(res.converged);
}

struct GeodesicArgs {
  std::string from, to, out_dir, csv;
  int intervals = 4;
  std::string init = "first";
  bool no_register = false;
};

int run_geodesic(const cli::RunConfig& rc, const GeodesicArgs& a) {
  const SurfaceGrid f1 = io::load_surface(a.from), f2 = io::load_surface(a.to);
  GeodesicOptions opts;
  opts.init = a.init == "sphere" ? GeodesicInit::sphere : GeodesicInit::first_shape;
  opts.register_endpoints = !a.no_register;
  const GeodesicPath path = geodesic(f1, f2, a.intervals, cli::resolve_inversion(rc), opts);
  ensure_dir(a.out_dir);
  std::ostringstream csv;
  csv << "tau,energy_geodesic,energy_linear\n";
  for (std::size_t k = 0; k < path.taus.size(); ++k) {
    io::save_surface(numbered(a.out_dir, "waypoint", static_cast<int>(k), "sgrid"), path.waypoints[k]);
    io::save_off(numbered(a.out_dir, "waypoint", static_cast<int>(k), "off"), path.waypoints[k]);
    csv << io::format_double(path.taus[k]) << ',' << io::format_double(path.energies[k]) << ','
        << io::format_double(path.linear_energies[k]) << '\n';
  }
  save_text(a.csv.empty() ? (fs::path(a.out_dir) / "energies.csv").string() : a.csv, csv.str());
  bool converged = true;
  for (const auto& r : path.inversions) converged = converged && r.converged;
  return status(converged);
}

struct TransferArgs {
  std::string f1, h1, f2, out, off;
  double alpha = 1.0;
  bool no_register = false, raw_scale = false;
};

int run_transfer(const cli::RunConfig& rc, const TransferArgs& a) {
  const InversionConfig cfg = cli::resolve_inversion(rc);
  const SurfaceGrid f1 = io::load_surface(a.f1);
  SurfaceGrid h1 = io::load_surface(a.h1), f2 = io::load_surface(a.f2);
  if (!a.no_register) {
    h1 = register_surface(f1, h1, cfg.registration);
    f2 = register_surface(f1, f2, cfg.registration);
  }
  TransferOptions opts;
  opts.alpha = a.alpha;
  opts.normalize_scale = !a.raw_scale;
  const SurfaceGrid h2 = transfer_deformation(f1, h1, f2, cfg, opts);
  io::save_surface(a.out, h2);
  if (!a.off.empty()) io::save_off(a.off, h2);
  return kOk;
}

struct ShootArgs {
  std::string from, velocity, toward, out, velocity_out;
  double tau = 1.0;
};

int run_shoot(const cli::RunConfig& rc, const ShootArgs& a) {
  const InversionConfig cfg = cli::resolve_inversion(rc);
  const SurfaceGrid f = io::load_surface(a.from);
  if (a.velocity.empty() == a.toward.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --velocity and --toward");
  }
  TangentField v0(f.spec());
  if (!a.velocity.empty()) {
    v0 = field_cast<TangentTag>(io::load_surface(a.velocity));
    require_same_spec(v0.spec(), f.spec(), "velocity vs base surface");
  } else {
    const SurfaceGrid g = register_surface(f, io::load_surface(a.toward), cfg.registration);
    v0 = inverse_exponential(f, g, cfg);
  }
  if (!a.velocity_out.empty()) io::save_surface(a.velocity_out, field_cast<SurfaceTag>(v0));
  io::save_surface(a.out, shoot(f, v0, a.tau, cfg));
  return kOk;
}

struct MeanArgs {
  std::vector<std::string> inputs;
  std::string out, off, srnf_out;
};

int run_mean(const cli::RunConfig& rc, const MeanArgs& a) {
  const ShapeModel m = karcher_mean(load_all(a.inputs), cli::resolve_inversion(rc));
  io::save_surface(a.out, *m.mean_surface);
  if (!a.off.empty()) io::save_off(a.off, *m.mean_surface);
  if (!a.srnf_out.empty()) io::save_srnf(a.srnf_out, m.mean_q);
  std::cout << "iterations " << m.iterations << '\n';
  return status(m.mean_converged);
}

struct PcaArgs {
  std::vector<std::string> inputs;
  int components = 0;
  std::string model, mean_out, mode_out;
  int mode = 0;
  double sigmas = 1.0;
};

int run_pca(const cli::RunConfig& rc, const PcaArgs& a) {
  const InversionConfig cfg = cli::resolve_inversion(rc);
  const ShapeModel m = pca_model(load_all(a.inputs), a.components, cfg);
  io::save_model(a.model, m);
  if (!a.mean_out.empty()) io::save_surface(a.mean_out, *m.mean_surface);
  std::cout << "components " << m.components.size() << '\n';
  for (std::size_t k = 0; k < m.singular_values.size(); ++k) {
    std::cout << "sigma " << k << ' ' << io::format_double(m.singular_values[k]) << '\n';
  }
  bool converged = m.mean_converged;
  if (!a.mode_out.empty()) {
    if (a.mode < 0 || static_cast<std::size_t>(a.mode) >= m.components.size()) {
      throw Error(ErrorCode::kInvalidArgument, "--mode out of range");
    }
    const ModeSurface s = mode_surface(m, a.mode, a.sigmas * m.singular_values[static_cast<std::size_t>(a.mode)], cfg);
    io::save_surface(a.mode_out, s.surface);
    std::cout << "mode energy " << io::format_double(s.energy) << (s.valid ? " valid" : " outside model") << '\n';
    converged = converged && s.converged;
  }
  return status(converged);
}

struct SampleArgs {
  std::string model, out_dir;
  int count = 1;
  double truncation = 3.0;
};

int run_sample(const cli::RunConfig& rc, const SampleArgs& a) {
  const InversionConfig cfg = cli::resolve_inversion(rc);
  const ShapeModel m = io::load_model(a.model);
  if (a.count < 1) throw Error(ErrorCode::kInvalidArgument, "--count must be positive");
  ensure_dir(a.out_dir);
  std::mt19937_64 rng(rc.seed);
  std::ostringstream csv;
  csv << "sample,component,coefficient,energy,valid\n";
  bool converged = true;
  for (int i = 0; i < a.count; ++i) {
    const VecX c = draw_coefficients(m, rng, a.truncation);
    const ModeSurface s = synthesize(m, c, cfg);
    io::save_surface(numbered(a.out_dir, "sample", i, "sgrid"), s.surface);
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      csv << i << ',' << k << ',' << io::format_double(c[k]) << ',' << io::format_double(s.energy) << ','
          << (s.valid ? 1 : 0) << '\n';
    }
    converged = converged && s.converged;
  }
  save_text((fs::path(a.out_dir) / "coefficients.csv").string(), csv.str());
  return status(converged);
}

struct ClassifyArgs {
  std::string manifest, confusion, report;
  std::string method = "both";
  int k = 1;
};

std::string confusion_rows(const std::string& method, const ConfusionMatrix& cm) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < cm.counts.rows(); ++r) {
    out << method << ',' << cm.classes[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < cm.counts.cols(); ++c) out << ',' << cm.counts(r, c);
    out << '\n';
  }
  return out.str();
}

int run_classify(const cli::RunConfig& rc, const ClassifyArgs& a) {
  if (a.method != "knn" && a.method != "gaussian" && a.method != "both") {
    throw Error(ErrorCode::kInvalidArgument, "--method must be knn, gaussian or both");
  }
  std::ifstream in(a.manifest);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest '" + a.manifest + "'");
  std::vector<std::string> labels, paths;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    std::istringstream ss(line);
    std::string label, path, extra;
    if (!(ss >> label) || label[0] == '#') continue;
    if (!(ss >> path) || (ss >> extra)) {
      throw Error(ErrorCode::kParse, a.manifest + ": line " + std::to_string(number) + ": expected 'label path'");
    }
    if (fs::path(path).is_relative()) path = (fs::path(a.manifest).parent_path() / path).string();
    labels.push_back(label);
    paths.push_back(path);
  }
  if (labels.empty()) throw Error(ErrorCode::kEmptyTraining, "manifest lists no shapes");
  std::vector<SrnfField> q;
  for (const auto& f : load_all(paths)) q.push_back(srnf_map(f));
  const RegistrationOptions& reg = rc.inversion.registration;

  std::vector<std::string> classes(labels);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::ostringstream csv, report;
  csv << "method,truth";
  for (const auto& c : classes) csv << ',' << c;
  csv << '\n';
  report << "method,k,accuracy\n";
  const auto emit = [&](const std::string& method, const std::vector<std::string>& predicted, const std::string& k) {
    const ConfusionMatrix cm = confusion_matrix(labels, predicted);
    csv << confusion_rows(method, cm);
    report << method << ',' << k << ',' << io::format_double(cm.accuracy()) << '\n';
    std::cout << method << " accuracy " << io::format_double(cm.accuracy()) << '\n';
  };
  if (a.method != "gaussian") emit("knn", loo_knn(distance_matrix(q, reg), labels, a.k), std::to_string(a.k));
  if (a.method != "knn") emit("gaussian", loo_gaussian(q, labels, reg), "");
  if (!a.confusion.empty()) save_text(a.confusion, csv.str());
  if (!a.report.empty()) save_text(a.report, report.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SRNF surface inversion and shape statistics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value file applied before command-line settings")
      ->check(CLI::ExistingFile);
  const cli::RunConfig defaults;
  std::map<std::string, std::string> overrides;
  std::map<std::string, CLI::Option*> knob_options;
  for (const auto& k : cli::knobs()) {
    knob_options[k.name] = app.add_option(cli::flag_name(k), overrides[k.name], k.help)
                                ->default_str(k.get(defaults))
                                ->type_name("VALUE");
  }

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "sample an analytic test shape");
  {
    std::string names;
    for (const auto& n : synth::shape_names()) names += (names.empty() ? "" : ", ") + n;
    synth_cmd->add_option("--shape", synth_args.shape, "one of: " + names)->capture_default_str();
  }
  synth_cmd->add_option("--params", synth_args.params, "positional shape parameters")->delimiter(',');
  synth_cmd->add_option("--nu", synth_args.n_u, "azimuthal samples")->capture_default_str();
  synth_cmd->add_option("--nv", synth_args.n_v, "polar samples")->capture_default_str();
  synth_cmd->add_flag("--unit-area", synth_args.unit_area, "rescale to unit area");
  synth_cmd->add_flag("--random-motion", synth_args.motion, "apply a seeded random rotation, reparameterization and translation");
  synth_cmd->add_option("--out", synth_args.out, "SGRID output")->required();
  synth_cmd->add_option("--off", synth_args.off, "OFF mesh output");
  synth_cmd->add_option("--srnf", synth_args.srnf_out, "QGRID output of the SRNF");

  InvertArgs invert_args;
  auto* invert_cmd = app.add_subcommand("invert", "find a surface whose SRNF matches a target");
  invert_cmd->add_option("--target", invert_args.target, "QGRID target, or a surface whose SRNF is the target")
      ->required();
  invert_cmd->add_option("--out", invert_args.out, "SGRID output")->required();
  invert_cmd->add_option("--trace", invert_args.trace, "energy trace CSV");
  invert_cmd->add_option("--off", invert_args.off, "OFF mesh output");

  GeodesicArgs geo_args;
  auto* geo_cmd = app.add_subcommand("geodesic", "waypoints along the SRNF straight line between two shapes");
  geo_cmd->add_option("--from", geo_args.from, "first surface")->required();
  geo_cmd->add_option("--to", geo_args.to, "second surface")->required();
  geo_cmd->add_option("-T,--intervals", geo_args.intervals, "waypoints at tau = k/T")->capture_default_str();
  geo_cmd->add_option("--out-dir", geo_args.out_dir, "directory for waypoint_NNN.sgrid/.off")->required();
  geo_cmd->add_option("--csv", geo_args.csv, "energy CSV (default <out-dir>/energies.csv)");
  geo_cmd->add_option("--start", geo_args.init, "first waypoint start: first or sphere")
      ->check(CLI::IsMember({"first", "sphere"}))
      ->capture_default_str();
  geo_cmd->add_flag("--no-register", geo_args.no_register, "skip registering --to onto --from");

  TransferArgs transfer_args;
  auto* transfer_cmd = app.add_subcommand("transfer", "apply the deformation f1 -> h1 to f2");
  transfer_cmd->add_option("--f1", transfer_args.f1, "source shape")->required();
  transfer_cmd->add_option("--h1", transfer_args.h1, "deformed source")->required();
  transfer_cmd->add_option("--f2", transfer_args.f2, "target shape")->required();
  transfer_cmd->add_option("--alpha", transfer_args.alpha, "fraction of the deformation")->capture_default_str();
  transfer_cmd->add_option("--out", transfer_args.out, "SGRID output")->required();
  transfer_cmd->add_option("--off", transfer_args.off, "OFF mesh output");
  transfer_cmd->add_flag("--no-register", transfer_args.no_register, "inputs are already registered to f1");
  transfer_cmd->add_flag("--raw-scale", transfer_args.raw_scale, "do not normalize the inputs to unit area");

  ShootArgs shoot_args;
  auto* shoot_cmd = app.add_subcommand("shoot", "follow an SRNF ray from a surface");
  shoot_cmd->add_option("--from", shoot_args.from, "base surface")->required();
  shoot_cmd->add_option("--velocity", shoot_args.velocity, "initial deformation field (SGRID)");
  shoot_cmd->add_option("--toward", shoot_args.toward, "estimate the velocity toward this surface");
  shoot_cmd->add_option("--tau", shoot_args.tau, "ray parameter")->capture_default_str();
  shoot_cmd->add_option("--out", shoot_args.out, "SGRID output")->required();
  shoot_cmd->add_option("--velocity-out", shoot_args.velocity_out, "write the velocity used");

  MeanArgs mean_args;
  auto* mean_cmd = app.add_subcommand("mean", "registered SRNF mean and its inversion");
  mean_cmd->add_option("inputs", mean_args.inputs, "surfaces")->required();
  mean_cmd->add_option("--out", mean_args.out, "SGRID output")->required();
  mean_cmd->add_option("--off", mean_args.off, "OFF mesh output");
  mean_cmd->add_option("--srnf", mean_args.srnf_out, "QGRID output of the mean SRNF");

  PcaArgs pca_args;
  auto* pca_cmd = app.add_subcommand("pca", "principal modes of registered SRNFs");
  pca_cmd->add_option("inputs", pca_args.inputs, "surfaces")->required();
  pca_cmd->add_option("--components", pca_args.components, "components kept (0 = all)")->capture_default_str();
  pca_cmd->add_option("--model", pca_args.model, "MODEL output")->required();
  pca_cmd->add_option("--mean-out", pca_args.mean_out, "SGRID output of the mean surface");
  pca_cmd->add_option("--mode", pca_args.mode, "mode index for --mode-out")->capture_default_str();
  pca_cmd->add_option("--sigmas", pca_args.sigmas, "mode displacement in standard deviations")->capture_default_str();
  pca_cmd->add_option("--mode-out", pca_args.mode_out, "SGRID output of the mode surface");

  SampleArgs sample_args;
  auto* sample_cmd = app.add_subcommand("sample", "random shapes from a fitted model");
  sample_cmd->add_option("--model", sample_args.model, "MODEL input")->required()->check(CLI::ExistingFile);
  sample_cmd->add_option("--count", sample_args.count, "number of samples")->capture_default_str();
  sample_cmd->add_option("--truncation", sample_args.truncation, "coefficient bound in standard deviations")
      ->capture_default_str();
  sample_cmd->add_option("--out-dir", sample_args.out_dir, "directory for sample_NNN.sgrid")->required();

  ClassifyArgs classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "leave-one-out classification of a labeled set");
  classify_cmd->add_option("--manifest", classify_args.manifest, "lines of 'label path'")->required();
  classify_cmd->add_option("--method", classify_args.method, "knn, gaussian or both")->capture_default_str();
  classify_cmd->add_option("-k", classify_args.k, "neighbours for knn")->capture_default_str();
  classify_cmd->add_option("--confusion", classify_args.confusion, "confusion-matrix CSV");
  classify_cmd->add_option("--report", classify_args.report, "accuracy CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    cli::RunConfig rc;
    if (!config_path.empty()) cli::apply_config_file(rc, config_path);
    for (const auto& k : cli::knobs()) {
      if (knob_options[k.name]->count() > 0) cli::apply_setting(rc, k.name, overrides[k.name]);
    }
    set_thread_limit(rc.threads);
    if (synth_cmd->parsed()) return run_synth(rc, synth_args);
    if (invert_cmd->parsed()) return run_invert(rc, invert_args);
    if (geo_cmd->parsed()) return run_geodesic(rc, geo_args);
    if (transfer_cmd->parsed()) return run_transfer(rc, transfer_args);
    if (shoot_cmd->parsed()) return run_shoot(rc, shoot_args);
    if (mean_cmd->parsed()) return run_mean(rc, mean_args);
    if (pca_cmd->parsed()) return run_pca(rc, pca_args);
    if (sample_cmd->parsed()) return run_sample(rc, sample_args);
    if (classify_cmd->parsed()) return run_classify(rc, classify_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
