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

// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. `--only 3,5` restricts the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "srnf/basis.hpp"
#include "srnf/inversion.hpp"
#include "srnf/registration.hpp"
#include "srnf/shape_stats.hpp"
#include "srnf/srnf.hpp"
#include "srnf/synth.hpp"

#ifndef SRNF_CLI_PATH
#error "SRNF_CLI_PATH must name the srnf executable"
#endif

namespace {

using namespace srnf;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Vec3 gaussian_vec(std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> n(0.0, sigma);
  return Vec3(n(rng), n(rng), n(rng));
}

Rotation3 random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 3.1);
  return Rotation3::exp(angle(rng) * gaussian_vec(rng).normalized());
}

/// exp(s(e))·e, s a random polynomial of degree ≤ 3 with max |s| = amplitude.
SurfaceGrid random_star(const GridSpec& spec, std::mt19937_64& rng, double amplitude) {
  std::normal_distribution<double> n;
  std::vector<std::array<int, 3>> powers;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int c = 0; a + b + c <= 3; ++c)
        if (a + b + c > 0) powers.push_back({a, b, c});
  std::vector<double> coef;
  for (std::size_t k = 0; k < powers.size(); ++k) coef.push_back(n(rng));
  const auto s = [=](const Vec3& e) {
    double acc = 0.0;
    for (std::size_t k = 0; k < powers.size(); ++k)
      acc += coef[k] * std::pow(e.x(), powers[k][0]) * std::pow(e.y(), powers[k][1]) * std::pow(e.z(), powers[k][2]);
    return acc;
  };
  double peak = 0.0;
  const SurfaceGrid e = sphere_points(spec);
  for (std::size_t k = 0; k < e.size(); ++k) peak = std::max(peak, std::abs(s(e[k])));
  const double scale = amplitude / peak;
  return synth::star(spec, [=](const Vec3& d) { return std::exp(scale * s(d)); });
}

double relative_srnf_error(const SrnfField& a, const SrnfField& b) { return l2_distance(a, b) / l2_norm(b); }

double relative_field_error(const TangentField& a, const TangentField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += (a[k] - b[k]).squaredNorm();
    den += b[k].squaredNorm();
  }
  return std::sqrt(num / den);
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

bool traces_monotone(const InversionResult& r) {
  for (const auto& stage : r.trace)
    for (std::size_t k = 1; k < stage.reports.size(); ++k)
      if (stage.reports[k].energy > stage.reports[k - 1].energy) return false;
  return true;
}

// ---------------------------------------------------------------- criteria

Outcome isometry() {
  const GridSpec spec(64, 64);
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const SrnfField q1 = srnf_map(random_star(spec, rng, 0.4));
    const SrnfField q2 = srnf_map(random_star(spec, rng, 0.4));
    const Rotation3 o = random_rotation(rng);
    const RigidReparam gamma{random_rotation(rng)};
    const double before = l2_distance(q1, q2);
    const double after = l2_distance(act(o, gamma, q1), act(o, gamma, q2));
    worst = std::max(worst, std::abs(after - before) / before);
  }
  return {worst < 1e-6, fmt("max relative distance change %.3e (limit 1e-6)", worst)};
}

Outcome translation() {
  const GridSpec spec(64, 64);
  std::mt19937_64 rng(202);
  SurfaceGrid f = synth::four_limb(spec);
  // Coordinates on a 2^-30 lattice and offsets on a 2^-10 lattice make f + c exact.
  for (std::size_t k = 0; k < f.size(); ++k)
    for (int d = 0; d < 3; ++d) f[k][d] = std::ldexp(std::round(std::ldexp(f[k][d], 30)), -30);
  const SrnfField q = srnf_map(f);
  std::uniform_int_distribution<int> lattice(-4096, 4096);
  int mismatched = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 c(std::ldexp(lattice(rng), -10), std::ldexp(lattice(rng), -10), std::ldexp(lattice(rng), -10));
    const SrnfField qc = srnf_map(translate(f, c));
    if (!std::equal(qc.values().begin(), qc.values().end(), q.values().begin())) ++mismatched;
  }
  return {mismatched == 0, fmt("%d of 20 offsets changed Q bitwise (limit 0)", mismatched)};
}

Outcome differential() {
  const GridSpec spec(64, 64);
  std::mt19937_64 rng(303);
  std::normal_distribution<double> n;
  const BasisSet basis = BasisSet::spherical_harmonic(spec, 6);
  const std::vector<SurfaceGrid> shapes{synth::ellipsoid(spec, 1.0, 0.8, 1.3), synth::bumpy_sphere(spec, 0.3),
                                        synth::four_limb(spec)};
  const SrnfField q_target = srnf_map(synth::capsule(spec));
  const double eps = 1e-6;
  double worst_q = 0.0, worst_g = 0.0;
  for (const auto& f : shapes) {
    VecX coeffs(basis.size());
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) coeffs[j] = 0.01 * n(rng);
    const SurfaceGrid f_here = f + basis.expand(coeffs);
    const VecX grad = energy_gradient(f, coeffs, q_target, basis);
    for (int dir = 0; dir < 20; ++dir) {
      VecX d(basis.size());
      for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = n(rng);
      d /= d.norm();
      const TangentField b = basis.expand(d);

      SrnfField fd = srnf_map(f_here + eps * b);
      fd.axpy(-1.0, srnf_map(f_here + (-eps) * b));
      fd *= 1.0 / (2.0 * eps);
      worst_q = std::max(worst_q, relative_srnf_error(fd, srnf_differential(f_here, b)));

      const double ep = inversion_energy(f_here + eps * b, q_target).energy;
      const double em = inversion_energy(f_here + (-eps) * b, q_target).energy;
      const double fd_g = (ep - em) / (2.0 * eps);
      const double an_g = grad.dot(d);
      worst_g = std::max(worst_g, std::abs(fd_g - an_g) / std::abs(an_g));
    }
  }
  const bool ok = worst_q < 1e-4 && worst_g < 1e-4;
  return {ok, fmt("max relative error Q_* %.3e, gradient %.3e (limit 1e-4)", worst_q, worst_g)};
}

Outcome star_inverse() {
  const GridSpec spec(64, 64);
  std::mt19937_64 rng(404);
  double worst_rms = 0.0, worst_identity = 0.0;
  for (int s = 0; s < 10; ++s) {
    const SurfaceGrid f = random_star(spec, rng, 0.69);
    const StarInversion inv = invert_star_shaped(srnf_map(f));
    worst_rms = std::max(worst_rms, rms_distance(inv.surface, f));
    const TangentField nrm = normal_field(f);
    for (int i = 0; i < spec.n_u(); ++i)
      for (int j = 0; j < spec.n_v(); ++j) {
        const Vec3 e = sphere_direction(spec.u(i), spec.v(j));
        const double rho = f(i, j).norm();
        const double nr = nrm(i, j).dot(e) / std::sin(spec.v(j));
        worst_identity = std::max(worst_identity, std::abs(nr - rho * rho) / (rho * rho));
      }
  }
  const bool ok = worst_rms < 1e-3 && worst_identity < 1e-6;
  return {ok, fmt("max RMS %.3e (limit 1e-3), max relative |n_r - rho^2| %.3e (limit 1e-6)", worst_rms,
                  worst_identity)};
}

struct SuiteShape {
  std::string name;
  SurfaceGrid surface;
  bool star_like;
};

std::vector<SuiteShape> reconstruction_suite(const GridSpec& spec) {
  std::mt19937_64 rng(505);
  std::vector<SuiteShape> out;
  const auto add = [&](std::string name, SurfaceGrid f, bool star_like) {
    out.push_back({std::move(name), rescale_to_unit_area(f), star_like});
  };
  add("ellipsoid_1_1_2", synth::ellipsoid(spec, 1.0, 1.0, 2.0), true);
  add("ellipsoid_1_.8_1.3", synth::ellipsoid(spec, 1.0, 0.8, 1.3), true);
  add("ellipsoid_.7_1_1.2", synth::ellipsoid(spec, 0.7, 1.0, 1.2), true);
  add("bumpy_.2", synth::bumpy_sphere(spec, 0.2), true);
  add("bumpy_.3", synth::bumpy_sphere(spec, 0.3), true);
  for (int k = 0; k < 3; ++k) add("random_star_" + std::to_string(k), random_star(spec, rng, 0.3), true);
  add("two_lobes", synth::limbed_blob(spec, {Vec3(0, 0, 1), Vec3(0, 0, -1)}, 0.8, 0.4, 4.0), true);
  add("three_lobes", synth::limbed_blob(spec, {Vec3(1, 0, 0), Vec3(-0.5, 0.866, 0), Vec3(-0.5, -0.866, 0)}, 0.8, 0.4, 4.0),
      true);
  add("capsule", synth::capsule(spec), false);
  add("capsule_thin", synth::capsule(spec, 0.4, 1.3), false);
  add("bent_capsule_1", synth::bent_capsule(spec, 1.0), false);
  add("bent_capsule_1.5", synth::bent_capsule(spec, 1.5), false);
  add("bent_capsule_2", synth::bent_capsule(spec, 2.0), false);
  add("four_limb", synth::four_limb(spec), false);
  add("four_limb_straight", synth::four_limb(spec, 2.0, 12.0, 0.0), false);
  add("octopus", synth::octopus(spec), false);
  add("octopus_twisted", synth::octopus(spec, 1.0, 10.0, 0.5), false);
  add("six_limb",
      synth::limbed_blob(spec, {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1),
                                Vec3(0, 0, -1)},
                         0.6, 1.5, 10.0),
      false);
  return out;
}

Outcome reconstruction() {
  const GridSpec spec(64, 64);
  const InversionConfig cfg;
  std::vector<double> all, star;
  bool monotone = true;
  for (const auto& s : reconstruction_suite(spec)) {
    const auto t = Clock::now();
    const InversionResult r = invert_target_surface(s.surface, area_matched_sphere(srnf_map(s.surface)), cfg);
    const double rms = centered_rms_distance(surface_in_target_frame(r), s.surface);
    const bool mono = traces_monotone(r);
    std::printf("    %-20s rms %.3e energy %.3e monotone %d %.1fs\n", s.name.c_str(), rms, r.final_energy, mono,
                seconds_since(t));
    std::fflush(stdout);
    all.push_back(rms);
    if (s.star_like) star.push_back(rms);
    monotone = monotone && mono;
  }
  const double m_all = median(all), m_star = median(star);
  const bool ok = m_all < 1e-2 && m_star < 2e-3 && monotone;
  return {ok, fmt("median RMS %.3e (limit 1e-2), star-like median %.3e (limit 2e-3), traces monotone %s", m_all,
                  m_star, monotone ? "yes" : "no")};
}

/// Four-limb target shared by the decay and multiresolution criteria.
struct FourLimbRun {
  SurfaceGrid target;
  SrnfField q;
  SurfaceGrid sphere;
  double initial_energy;
  InversionResult multires;
  double seconds;
};

const FourLimbRun& four_limb_run() {
  static const FourLimbRun run = [] {
    const GridSpec spec(64, 64);
    const SurfaceGrid target = rescale_to_unit_area(synth::four_limb(spec));
    const SrnfField q = srnf_map(target);
    const SurfaceGrid sphere = area_matched_sphere(q);
    const double initial = inversion_energy(sphere, q).energy;
    const auto t = Clock::now();
    InversionResult r = invert_target_surface(target, sphere, InversionConfig{});
    return FourLimbRun{target, q, sphere, initial, std::move(r), seconds_since(t)};
  }();
  return run;
}

Outcome energy_decay() {
  const auto& run = four_limb_run();
  const double ratio = run.multires.final_energy / run.initial_energy;
  return {ratio <= 1e-3, fmt("final/initial energy %.3e / %.3e = %.3e (limit 1e-3)", run.multires.final_energy,
                             run.initial_energy, ratio)};
}

Outcome multires_necessity() {
  const auto& run = four_limb_run();
  InversionConfig cfg;
  cfg.n_levels = 1;
  cfg.n_scales = 1;
  const InversionResult single = invert_single(run.q, run.sphere, level_basis(run.q.spec(), cfg), cfg);
  const double ratio = single.final_energy / run.multires.final_energy;
  return {ratio >= 10.0, fmt("single/multires final energy %.3e / %.3e = %.1f (limit >= 10)", single.final_energy,
                             run.multires.final_energy, ratio)};
}

struct CapsulePath {
  SurfaceGrid f1, f2;
  GeodesicPath path;
  double seconds;
};

const CapsulePath& capsule_path() {
  static const CapsulePath run = [] {
    const GridSpec spec(64, 64);
    SurfaceGrid f1 = rescale_to_unit_area(synth::capsule(spec));
    SurfaceGrid f2 = rescale_to_unit_area(synth::bent_capsule(spec, 1.5));
    const auto t = Clock::now();
    GeodesicPath path = geodesic(f1, f2, 4, InversionConfig{});
    return CapsulePath{std::move(f1), std::move(f2), std::move(path), seconds_since(t)};
  }();
  return run;
}

Outcome geodesic_quality() {
  const auto& run = capsule_path();
  double worst = 0.0;
  std::string ratios;
  for (std::size_t k = 1; k + 1 < run.path.taus.size(); ++k) {
    const double r = run.path.energies[k] / run.path.linear_energies[k];
    worst = std::max(worst, r);
    ratios += fmt("%s%.2e", ratios.empty() ? "" : " ", r);
  }
  const bool in_time = run.seconds < 20 * 60;
  return {worst <= 0.1 && in_time,
          fmt("interior geodesic/linear energy ratios [%s], max %.3e (limit 0.1), path %.1fs (limit 1200s)",
              ratios.c_str(), worst, run.seconds)};
}

Outcome waypoint_independence() {
  const auto& run = capsule_path();
  const Waypoint w = geodesic_waypoint(run.f1, run.f2, 0.5, InversionConfig{});
  const double rms = rms_distance(w.surface, run.path.waypoints[2]);
  return {rms < 2e-3, fmt("RMS between standalone and in-path tau = 0.5 %.3e (limit 2e-3)", rms)};
}

Outcome transport_triviality() {
  const GridSpec spec(64, 64);
  const InversionConfig cfg;
  const SurfaceGrid s = synth::sphere(spec);
  TangentField vs(spec);
  for (int i = 0; i < spec.n_u(); ++i)
    for (int j = 0; j < spec.n_v(); ++j) {
      const Vec3 e = sphere_direction(spec.u(i), spec.v(j));
      vs(i, j) = (0.1 * (3 * e.z() * e.z() - 1) + 0.05 * e.x() * e.y()) * e;
    }
  const SurfaceGrid ell = synth::ellipsoid(spec, 1.0, 1.0, 1.5);
  const TangentField ve = synth::ellipsoid(spec, 1.02, 0.99, 1.5) - ell;
  double worst = 0.0;
  bool exact = true;
  for (const auto& [f, v] : {std::pair{s, vs}, std::pair{ell, ve}}) {
    const TransportResult tr = parallel_transport(v, f, f, cfg);
    worst = std::max(worst, relative_field_error(tr.vector, v));
    const SrnfField w = srnf_differential(f, v);
    exact = exact && std::equal(w.values().begin(), w.values().end(), tr.increment.values().begin());
  }
  return {worst < 1e-3 && exact, fmt("max relative error %.3e (limit 1e-3), increment bitwise equal %s", worst,
                                     exact ? "yes" : "no")};
}

Outcome deformation_transfer() {
  const GridSpec spec(64, 64);
  const InversionConfig cfg;
  const SurfaceGrid s = synth::sphere(spec);
  const SurfaceGrid ell = synth::ellipsoid(spec, 1.0, 1.0, 1.5);
  const SurfaceGrid big = synth::sphere(spec, 2.0);
  // Identities are measured relative to the surface's RMS radius.
  const double zero = rms_distance(transfer_deformation(s, s, ell, cfg), ell) / rms_distance(center(ell), 0.0 * ell);
  const double self = rms_distance(transfer_deformation(s, ell, s, cfg), ell) / rms_distance(center(ell), 0.0 * ell);
  const SurfaceGrid h2 = center(transfer_deformation(s, ell, big, cfg));
  double ax = 0.0, ay = 0.0, az = 0.0;
  for (std::size_t k = 0; k < h2.size(); ++k) {
    ax = std::max(ax, std::abs(h2[k].x()));
    ay = std::max(ay, std::abs(h2[k].y()));
    az = std::max(az, std::abs(h2[k].z()));
  }
  const double ratio = az / (0.5 * (ax + ay));
  const double ratio_err = std::abs(ratio - 1.5) / 1.5;
  const bool ok = zero < 1e-3 && self < 1e-3 && ratio_err < 0.02;
  return {ok, fmt("zero-deformation %.3e, self-transfer %.3e (limit 1e-3 relative RMS), axis ratio %.5f "
                  "error %.3e (limit 2e-2)",
                  zero, self, ratio, ratio_err)};
}

Outcome karcher() {
  const GridSpec spec(64, 64);
  const SurfaceGrid base = rescale_to_unit_area(synth::ellipsoid(spec, 1.0, 0.8, 1.3));
  std::mt19937_64 rng(707);
  std::vector<SurfaceGrid> shapes{base};
  for (int k = 0; k < 5; ++k) {
    const Rotation3 o = random_rotation(rng);
    const RigidReparam gamma{random_rotation(rng)};
    shapes.push_back(translate(transform_surface(o, gamma, base), gaussian_vec(rng)));
  }
  const auto before = inversion_count();
  const ShapeModel m = karcher_mean(shapes, InversionConfig{});
  const auto inversions = inversion_count() - before;
  SrnfField residual(spec);
  for (const auto& r : m.registered) residual += r - m.mean_q;
  const double stationarity = l2_norm(residual);
  const double rms = centered_rms_distance(*m.mean_surface, base);
  const bool ok = rms < 5e-3 && stationarity < 1e-10 && inversions == 1;
  return {ok, fmt("RMS %.3e (limit 5e-3), stationarity %.3e (limit 1e-10), inversions %llu (required 1)", rms,
                  stationarity, static_cast<unsigned long long>(inversions))};
}

Outcome classification() {
  const GridSpec spec(32, 32);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<SrnfField> q;
  std::vector<std::string> labels;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 10; ++i) {
      SurfaceGrid f(spec);
      if (c == 0) {
        const double a = 0.05 * u(rng), b = 0.05 * u(rng);
        f = synth::star(spec, [=](const Vec3& e) { return 1.0 + a * e.x() * e.y() + b * (e.z() * e.z() - 1.0 / 3); });
      } else if (c == 1) {
        const double a = 1.0 + 0.05 * u(rng), b = 0.8 + 0.05 * u(rng), cz = 1.5 + 0.1 * u(rng);
        f = synth::ellipsoid(spec, a, b, cz);
      } else {
        const double r = 0.5 + 0.05 * u(rng), h = 1.0 + 0.1 * u(rng);
        f = synth::capsule(spec, r, h);
      }
      f = rescale_to_unit_area(f);
      const Rotation3 o = random_rotation(rng);
      const RigidReparam gamma{random_rotation(rng)};
      f = translate(transform_surface(o, gamma, f), Vec3(u(rng), u(rng), u(rng)));
      q.push_back(srnf_map(f));
      labels.push_back(c == 0 ? "blob" : c == 1 ? "ellipsoid" : "capsule");
    }
  const auto d = distance_matrix(q);
  const double knn1 = confusion_matrix(labels, loo_knn(d, labels, 1)).accuracy();
  const double knn3 = confusion_matrix(labels, loo_knn(d, labels, 3)).accuracy();
  const double gauss = confusion_matrix(labels, loo_gaussian(q, labels)).accuracy();
  const bool ok = knn1 == 1.0 && knn3 == 1.0 && gauss == 1.0;
  return {ok, fmt("LOO accuracy 1-NN %.3f, 3-NN %.3f, Gaussian %.3f (required 1)", knn1, knn3, gauss)};
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / fmt("srnf_acceptance_%d", static_cast<int>(::getpid()));
  const std::string cli = std::string("\"") + SRNF_CLI_PATH + "\"";
  // Each script line is run once per output directory; {d} is the directory.
  const std::vector<std::string> script{
      "synth --shape four_limb --nu 16 --nv 16 --unit-area --random-motion --seed 9 --out {d}/a.sgrid "
      "--off {d}/a.off --srnf {d}/a.qgrid",
      "synth --shape bent_capsule --params 1.2 --nu 16 --nv 16 --unit-area --seed 3 --random-motion --out {d}/b.sgrid",
      "synth --shape ellipsoid --params 1,0.8,1.3 --nu 16 --nv 16 --unit-area --out {d}/c.sgrid",
      "--levels 2 invert --target {d}/a.qgrid --out {d}/inv.sgrid --trace {d}/inv.csv --off {d}/inv.off",
      "--levels 2 geodesic --from {d}/c.sgrid --to {d}/b.sgrid -T 2 --out-dir {d}/geo",
      "--levels 2 mean {d}/a.sgrid {d}/b.sgrid {d}/c.sgrid --out {d}/mean.sgrid --srnf {d}/mean.qgrid",
      "--levels 2 pca {d}/a.sgrid {d}/b.sgrid {d}/c.sgrid --components 2 --model {d}/model.bin",
      "--levels 2 --seed 17 sample --model {d}/model.bin --count 2 --out-dir {d}/samples",
      "--levels 2 transfer --f1 {d}/c.sgrid --h1 {d}/b.sgrid --f2 {d}/a.sgrid --out {d}/transfer.sgrid",
      "classify --manifest {d}/manifest.txt --method knn -k 1 --confusion {d}/confusion.csv --report {d}/report.csv",
  };
  int failures = 0;
  std::string failed;
  for (const char* run : {"r1", "r2"}) {
    const fs::path dir = root / run / "out";
    const fs::path log = root / run / "log.txt";
    fs::create_directories(dir);
    std::ofstream(dir / "manifest.txt") << "twisted a.sgrid\ntwisted inv.sgrid\nsmooth b.sgrid\nsmooth c.sgrid\n";
    for (std::string line : script) {
      for (std::size_t at; (at = line.find("{d}")) != std::string::npos;) line.replace(at, 3, dir.string());
      const std::string cmd = cli + " " + line + " >> \"" + log.string() + "\" 2>&1";
      const int rc = std::system(cmd.c_str());
      if (!(WIFEXITED(rc) && (WEXITSTATUS(rc) == 0 || WEXITSTATUS(rc) == 2))) {
        ++failures;
        failed = line;
      }
    }
  }
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "r1" / "out")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const fs::path other = root / "r2" / "out" / fs::relative(entry.path(), root / "r1" / "out");
    if (read_bytes(entry.path()) != read_bytes(other)) ++differing;
  }
  fs::remove_all(root);
  const bool ok = failures == 0 && differing == 0 && files > 0;
  return {ok, fmt("%zu output files compared, %zu differ, %d commands failed%s%s", files, differing, failures,
                  failed.empty() ? "" : ": ", failed.c_str())};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 when the criterion states no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int k = 1; k < argc; ++k) {
    if (std::string(argv[k]) == "--only" && k + 1 < argc) {
      std::stringstream list(argv[++k]);
      for (std::string id; std::getline(list, id, ',');) only.insert(std::stoi(id));
    }
  }
  const std::vector<Criterion> criteria{
      {1, "isometry", 10, isometry},
      {2, "translation invariance", 1, translation},
      {3, "differential correctness", 30, differential},
      {4, "star-shaped inverse", 10, star_inverse},
      {5, "reconstruction round-trip", 30 * 60, reconstruction},
      {6, "energy decay", 10 * 60, energy_decay},
      {7, "multiresolution necessity", 15 * 60, multires_necessity},
      {8, "geodesic quality", 0, geodesic_quality},
      {9, "waypoint independence", 0, waypoint_independence},
      {10, "parallel transport triviality", 0, transport_triviality},
      {11, "deformation transfer", 0, deformation_transfer},
      {12, "Karcher mean", 0, karcher},
      {13, "classification", 10 * 60, classification},
      {14, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t);
    std::string timing = fmt("%.1fs", secs);
    if (c.budget_seconds > 0) {
      timing += fmt(" (limit %.0fs)", c.budget_seconds);
      if (secs >= c.budget_seconds) out.pass = false;
    }
    std::printf("%s %d %s: %s [%s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
