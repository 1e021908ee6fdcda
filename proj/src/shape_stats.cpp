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

#include "srnf/shape_stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "srnf/parallel.hpp"

namespace srnf {
namespace {

double squared(const SrnfField& r) { return l2_inner(r, r); }

constexpr double kTransportResidual = 1e-12;

bool is_identity(const Alignment& a) { return a.rotation.is_identity() && a.reparam.rotation.is_identity(); }

SurfaceGrid with_centroid(const SurfaceGrid& f, const Vec3& c) { return translate(f, c - centroid(f)); }

/// Both endpoints after registration, with their pyramids.
struct Endpoints {
  SurfaceGrid f1, f2;
  SrnfField q1, q2;
  Alignment alignment;
  std::vector<SurfaceGrid> f1_levels;
  std::vector<SrnfField> q1_levels, q2_levels;
  Vec3 c1, c2;
};

Endpoints prepare(const SurfaceGrid& f1, const SurfaceGrid& f2, const InversionConfig& cfg,
                  const GeodesicOptions& opts) {
  require_same_spec(f1.spec(), f2.spec(), "geodesic endpoints");
  Alignment a;
  a.energy = squared(srnf_map(f1) - srnf_map(f2));
  SurfaceGrid f2r = opts.register_endpoints ? register_surface(f1, f2, cfg.registration, &a) : f2;
  Endpoints e{f1, f2r, srnf_map(f1), srnf_map(f2r), a, build_pyramid(f1, cfg.n_levels).levels, {}, {},
              centroid(f1), centroid(f2r)};
  for (const auto& l : e.f1_levels) e.q1_levels.push_back(srnf_map(l));
  e.q2_levels = srnf_pyramid(f2r, cfg.n_levels);
  return e;
}

std::vector<SrnfField> blend(const std::vector<SrnfField>& a, const std::vector<SrnfField>& b, double tau) {
  std::vector<SrnfField> out;
  for (std::size_t l = 0; l < a.size(); ++l) out.push_back((1.0 - tau) * a[l] + tau * b[l]);
  return out;
}

struct WaypointSolve {
  Waypoint point;
  InversionResult inversion;
};

WaypointSolve solve_waypoint(const Endpoints& e, double tau, const InversionResult* previous,
                             const InversionConfig& cfg, const GeodesicOptions& opts) {
  const auto pyr = blend(e.q1_levels, e.q2_levels, tau);
  InversionResult res = previous ? invert_multires(pyr, previous->level_surfaces, cfg, previous->alignment)
                        : opts.init == GeodesicInit::sphere
                            ? invert_multires(pyr, area_matched_sphere(pyr.front()), cfg)
                            : invert_multires(pyr, e.f1_levels, cfg);
  SurfaceGrid alpha = with_centroid(surface_in_target_frame(res), (1.0 - tau) * e.c1 + tau * e.c2);
  SrnfField beta = (1.0 - tau) * e.q1 + tau * e.q2;
  const double energy = squared(srnf_map(alpha) - beta);
  return {Waypoint{tau, std::move(alpha), std::move(beta), energy}, std::move(res)};
}

}  // namespace

SurfaceGrid register_surface(const SurfaceGrid& f1, const SurfaceGrid& f2, const RegistrationOptions& opts,
                             Alignment* alignment) {
  const Alignment a = optimal_rigid_reparam(srnf_map(f1), srnf_map(f2), opts);
  if (alignment) *alignment = a;
  if (is_identity(a)) return f2;
  return transform_surface(a.rotation, a.reparam, f2);
}

GeodesicPath geodesic(const SurfaceGrid& f1, const SurfaceGrid& f2, int n_intervals, const InversionConfig& cfg,
                      const GeodesicOptions& opts) {
  if (n_intervals < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one interval");
  const Endpoints e = prepare(f1, f2, cfg, opts);
  GeodesicPath path;
  path.alignment = e.alignment;
  const InversionResult* previous = nullptr;
  for (int k = 0; k <= n_intervals; ++k) {
    const double tau = static_cast<double>(k) / n_intervals;
    path.taus.push_back(tau);
    const SurfaceGrid linear = (1.0 - tau) * e.f1 + tau * e.f2;
    SrnfField beta = (1.0 - tau) * e.q1 + tau * e.q2;
    path.linear_energies.push_back(squared(srnf_map(linear) - beta));
    if (k == 0 || k == n_intervals) {
      const SurfaceGrid& end = k == 0 ? e.f1 : e.f2;
      path.energies.push_back(squared(srnf_map(end) - beta));
      path.waypoints.push_back(end);
      path.srnf_waypoints.push_back(std::move(beta));
      continue;
    }
    WaypointSolve w = solve_waypoint(e, tau, previous, cfg, opts);
    path.waypoints.push_back(std::move(w.point.surface));
    path.srnf_waypoints.push_back(std::move(w.point.srnf));
    path.energies.push_back(w.point.energy);
    path.inversions.push_back(std::move(w.inversion));
    previous = &path.inversions.back();
  }
  return path;
}

Waypoint geodesic_waypoint(const SurfaceGrid& f1, const SurfaceGrid& f2, double tau, const InversionConfig& cfg,
                           const GeodesicOptions& opts) {
  const Endpoints e = prepare(f1, f2, cfg, opts);
  if (tau == 0.0 || tau == 1.0) {
    const SurfaceGrid& end = tau == 0.0 ? e.f1 : e.f2;
    return Waypoint{tau, end, tau == 0.0 ? e.q1 : e.q2, 0.0};
  }
  return solve_waypoint(e, tau, nullptr, cfg, opts).point;
}

InversionResult invert_from(const SrnfField& q, const SurfaceGrid& f0, const InversionConfig& cfg) {
  const BasisSet basis = level_basis(f0.spec(), cfg);
  InversionResult res = cfg.n_scales > 1
                            ? invert_multiscale(build_scale_ladder(q, cfg.n_scales, srnf_map(f0)), f0, basis, cfg)
                            : invert_single(q, f0, basis, cfg);
  res.surface = with_centroid(surface_in_target_frame(res), centroid(f0));
  res.alignment = Alignment{};
  return res;
}

SurfaceGrid shoot(const SurfaceGrid& f, const TangentField& v0, double tau, const InversionConfig& cfg) {
  if (tau == 0.0) return f;
  SrnfField beta = srnf_map(f);
  beta.axpy(tau, srnf_differential(f, v0));
  return invert_from(beta, f, cfg).surface;
}

TangentField inverse_exponential(const SurfaceGrid& f, const SurfaceGrid& f2, const InversionConfig& cfg,
                                 int max_iters) {
  require_same_spec(f.spec(), f2.spec(), "inverse_exponential");
  const BasisSet basis = level_basis(f.spec(), cfg);
  const SrnfLinearization lin(f);
  // CGLS on min_c ‖Q_*(Bc) − d‖².
  SrnfField r = srnf_map(f2) - lin.value();
  VecX x = VecX::Zero(static_cast<Eigen::Index>(basis.size()));
  VecX s = basis.project_dual(lin.adjoint(r));
  VecX p = s;
  double gamma = s.squaredNorm();
  const double gamma0 = gamma;
  for (int it = 0; it < max_iters && gamma > 1e-24 * gamma0 && gamma > 0.0; ++it) {
    const SrnfField ap = lin.differential(basis.expand(p));
    const double denom = squared(ap);
    if (!(denom > 0.0)) break;
    const double alpha = gamma / denom;
    x += alpha * p;
    r.axpy(-alpha, ap);
    s = basis.project_dual(lin.adjoint(r));
    const double gamma_new = s.squaredNorm();
    p = s + (gamma_new / gamma) * p;
    gamma = gamma_new;
  }
  return basis.expand(x);
}

TransportResult parallel_transport(const TangentField& v, const SurfaceGrid& f1, const SurfaceGrid& f2,
                                   const InversionConfig& cfg, double eps) {
  require_same_spec(f1.spec(), f2.spec(), "parallel_transport");
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  SrnfField w = srnf_differential(f1, v);
  SrnfField target = srnf_map(f2);
  target.axpy(eps, w);
  // The stopping floor is relative to the ε-perturbation, not to ‖q‖².
  InversionConfig local = cfg;
  const double scale = eps * eps * squared(w) / std::max(squared(target), 1e-300);
  local.absolute_tolerance = std::min(cfg.absolute_tolerance, kTransportResidual * scale);
  const InversionResult res = invert_from(target, f2, local);
  return {(1.0 / eps) * (res.surface - f2), std::move(w), res.final_energy};
}

SurfaceGrid transfer_deformation(const SurfaceGrid& f1, const SurfaceGrid& h1, const SurfaceGrid& f2,
                                 const InversionConfig& cfg, const TransferOptions& opts) {
  require_same_spec(f1.spec(), h1.spec(), "transfer_deformation");
  require_same_spec(f1.spec(), f2.spec(), "transfer_deformation");
  double s1 = 1.0, sh = 1.0, s2 = 1.0;
  if (opts.normalize_scale) {
    s1 = std::sqrt(surface_area(f1));
    sh = std::sqrt(surface_area(h1));
    s2 = std::sqrt(surface_area(f2));
    if (!(s1 > 0.0 && sh > 0.0 && s2 > 0.0)) throw Error(ErrorCode::kZeroArea, "degenerate input surface");
  }
  const SurfaceGrid f2n = (1.0 / s2) * f2;
  SrnfField target = srnf_map(f2n);
  target.axpy(opts.alpha / sh, srnf_map(h1));
  target.axpy(-opts.alpha / s1, srnf_map(f1));
  const InversionResult res = invert_from(target, f2n, cfg);
  const SurfaceGrid h2 = (s2 * std::pow(sh / s1, opts.alpha)) * res.surface;
  return with_centroid(h2, centroid(f2) + opts.alpha * (centroid(h1) - centroid(f1)));
}

// -------------------------------------------------------------- statistics

namespace {

struct RegisteredMean {
  SrnfField mean;
  std::vector<SrnfField> registered;
  std::vector<Alignment> alignments;
  int iterations = 0;
};

RegisteredMean registered_mean(const std::vector<SrnfField>& q, const RegistrationOptions& reg,
                               const MeanOptions& opts) {
  if (q.empty()) throw Error(ErrorCode::kEmptyInput, "no shapes");
  for (const auto& x : q) require_same_spec(q.front().spec(), x.spec(), "shape set");
  const std::size_t n = q.size();
  RegisteredMean out{q.front(), q, std::vector<Alignment>(n), 0};
  for (int it = 0; it < std::max(opts.max_iters, 1); ++it) {
    parallel_for(n, [&](std::size_t i) {
      out.alignments[i] = it == 0 ? optimal_rigid_reparam(out.mean, q[i], reg)
                                  : refine_alignment(out.mean, q[i], out.alignments[i], reg);
      const Alignment& a = out.alignments[i];
      out.registered[i] = is_identity(a) ? q[i] : act(a.rotation, a.reparam, q[i]);
    });
    SrnfField next(q.front().spec());
    for (const auto& r : out.registered) next += r;
    next *= 1.0 / static_cast<double>(n);
    const double change = l2_distance(next, out.mean) / std::max(l2_norm(out.mean), 1e-300);
    out.mean = std::move(next);
    out.iterations = it + 1;
    if (change < opts.tolerance) break;
  }
  return out;
}

ShapeModel to_model(RegisteredMean&& m) {
  ShapeModel model(m.mean.spec());
  model.mean_q = std::move(m.mean);
  model.registered = std::move(m.registered);
  model.alignments = std::move(m.alignments);
  model.iterations = m.iterations;
  return model;
}

std::vector<SrnfField> srnfs_of(const std::vector<SurfaceGrid>& shapes) {
  if (shapes.empty()) throw Error(ErrorCode::kEmptyInput, "no shapes");
  std::vector<SrnfField> q;
  q.reserve(shapes.size());
  for (const auto& f : shapes) q.push_back(srnf_map(f));
  return q;
}

void add_pca(ShapeModel& model, int n_components) {
  const std::size_t n = model.registered.size();
  if (n < 2) throw Error(ErrorCode::kInsufficientData, "PCA needs at least two shapes");
  std::vector<SrnfField> centered;
  for (const auto& r : model.registered) centered.push_back(r - model.mean_q);
  Eigen::MatrixXd gram(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) gram(a, b) = gram(b, a) = l2_inner(centered[a], centered[b]);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double trace = gram.trace();
  if (!(trace > 0.0)) throw Error(ErrorCode::kInsufficientData, "training shapes have no variance");
  const auto limit = n_components > 0 ? static_cast<std::size_t>(n_components) : n;
  for (Eigen::Index k = static_cast<Eigen::Index>(n) - 1; k >= 0 && model.components.size() < limit; --k) {
    const double lambda = eig.eigenvalues()[k];
    if (lambda <= 1e-12 * trace) break;
    SrnfField u(model.spec());
    for (std::size_t a = 0; a < n; ++a) u.axpy(eig.eigenvectors()(static_cast<Eigen::Index>(a), k), centered[a]);
    // Gram-eigenvector components lose orthogonality when λ is small.
    for (const auto& prev : model.components) u.axpy(-l2_inner(u, prev), prev);
    u *= 1.0 / l2_norm(u);
    model.components.push_back(std::move(u));
    model.singular_values.push_back(std::sqrt(lambda / static_cast<double>(n - 1)));
  }
}

SurfaceGrid mean_surface_of(const ShapeModel& model) {
  if (!model.mean_surface) throw Error(ErrorCode::kInvalidArgument, "model has no mean surface");
  return *model.mean_surface;
}

}  // namespace

ShapeModel karcher_mean(const std::vector<SurfaceGrid>& shapes, const InversionConfig& cfg,
                        const MeanOptions& opts) {
  ShapeModel model = to_model(registered_mean(srnfs_of(shapes), cfg.registration, opts));
  const InversionResult res = invert(model.mean_q, cfg);
  model.mean_surface = surface_in_target_frame(res);
  model.mean_converged = res.converged;
  return model;
}

ShapeModel srnf_statistics(const std::vector<SrnfField>& srnfs, int n_components, const RegistrationOptions& reg,
                           const MeanOptions& opts) {
  if (srnfs.size() < 2) throw Error(ErrorCode::kInsufficientData, "PCA needs at least two shapes");
  ShapeModel model = to_model(registered_mean(srnfs, reg, opts));
  add_pca(model, n_components);
  return model;
}

ShapeModel pca_model(const std::vector<SurfaceGrid>& shapes, int n_components, const InversionConfig& cfg,
                     const MeanOptions& opts) {
  if (shapes.size() < 2) throw Error(ErrorCode::kInsufficientData, "PCA needs at least two shapes");
  ShapeModel model = srnf_statistics(srnfs_of(shapes), n_components, cfg.registration, opts);
  const InversionResult res = invert(model.mean_q, cfg);
  model.mean_surface = surface_in_target_frame(res);
  model.mean_converged = res.converged;
  return model;
}

VecX model_coefficients(const ShapeModel& model, const SrnfField& q) {
  const SrnfField r = q - model.mean_q;
  VecX c(static_cast<Eigen::Index>(model.components.size()));
  for (std::size_t k = 0; k < model.components.size(); ++k) {
    c[static_cast<Eigen::Index>(k)] = l2_inner(r, model.components[k]);
  }
  return c;
}

SrnfField model_srnf(const ShapeModel& model, const VecX& coefficients) {
  if (static_cast<std::size_t>(coefficients.size()) > model.components.size()) {
    throw Error(ErrorCode::kInvalidArgument, "more coefficients than components");
  }
  SrnfField q = model.mean_q;
  for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
    if (coefficients[k] != 0.0) q.axpy(coefficients[k], model.components[static_cast<std::size_t>(k)]);
  }
  return q;
}

ModeSurface synthesize(const ShapeModel& model, const VecX& coefficients, const InversionConfig& cfg) {
  const SurfaceGrid mean = mean_surface_of(model);
  const SrnfField target = model_srnf(model, coefficients);
  const double threshold = kModeValidity * squared(model.mean_q);
  if (coefficients.isZero(0.0)) {
    const double e = squared(srnf_map(mean) - target);
    return {mean, e, e <= threshold, true};
  }
  InversionResult res = invert_from(target, mean, cfg);
  const double e = squared(srnf_map(res.surface) - target);
  return {std::move(res.surface), e, e <= threshold, res.converged};
}

ModeSurface mode_surface(const ShapeModel& model, int k, double lambda, const InversionConfig& cfg) {
  if (k < 0 || static_cast<std::size_t>(k) >= model.components.size()) {
    throw Error(ErrorCode::kInvalidArgument, "mode index out of range");
  }
  VecX c = VecX::Zero(static_cast<Eigen::Index>(model.components.size()));
  c[k] = lambda;
  return synthesize(model, c, cfg);
}

VecX draw_coefficients(const ShapeModel& model, std::mt19937_64& rng, double truncation) {
  if (!(truncation > 0.0)) throw Error(ErrorCode::kInvalidArgument, "truncation must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  VecX c(static_cast<Eigen::Index>(model.singular_values.size()));
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    double z;
    do {
      z = normal(rng);
    } while (std::abs(z) > truncation);
    c[k] = z * model.singular_values[static_cast<std::size_t>(k)];
  }
  return c;
}

ModeSurface sample_random(const ShapeModel& model, std::uint64_t seed, double truncation,
                          const InversionConfig& cfg) {
  std::mt19937_64 rng(seed);
  return synthesize(model, draw_coefficients(model, rng, truncation), cfg);
}

// ---------------------------------------------------------- classification

double srnf_distance(const SrnfField& q1, const SrnfField& q2, const RegistrationOptions& opts) {
  const double a = optimal_rigid_reparam(q1, q2, opts).energy;
  const double b = optimal_rigid_reparam(q2, q1, opts).energy;
  return std::sqrt(std::max(std::min(a, b), 0.0));
}

double elastic_distance(const SurfaceGrid& f1, const SurfaceGrid& f2, const RegistrationOptions& opts) {
  return srnf_distance(srnf_map(f1), srnf_map(f2), opts);
}

Eigen::MatrixXd distance_matrix(const std::vector<SrnfField>& srnfs, const RegistrationOptions& opts) {
  const std::size_t n = srnfs.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const double x = srnf_distance(srnfs[i], srnfs[j], opts);
    d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x;
    d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = x;
  });
  return d;
}

std::string vote_knn(const std::vector<double>& distances, const std::vector<std::string>& labels, int k) {
  if (distances.empty()) throw Error(ErrorCode::kEmptyTraining, "no training shapes");
  if (distances.size() != labels.size()) throw Error(ErrorCode::kInvalidArgument, "one label per distance");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
  std::map<std::string, int> votes;
  for (std::size_t r = 0; r < m; ++r) ++votes[labels[order[r]]];
  int best = 0;
  for (const auto& [label, count] : votes) best = std::max(best, count);
  for (std::size_t r = 0; r < m; ++r) {
    if (votes[labels[order[r]]] == best) return labels[order[r]];
  }
  return labels[order.front()];
}

std::string classify_knn(const std::vector<LabeledShape>& train, const SurfaceGrid& query, int k,
                         const RegistrationOptions& opts) {
  if (train.empty()) throw Error(ErrorCode::kEmptyTraining, "no training shapes");
  const SrnfField q = srnf_map(query);
  std::vector<double> d(train.size());
  std::vector<std::string> labels;
  for (const auto& t : train) labels.push_back(t.label);
  parallel_for(train.size(), [&](std::size_t i) { d[i] = srnf_distance(q, srnf_map(train[i].surface), opts); });
  return vote_knn(d, labels, k);
}

double mahalanobis_squared(const ShapeModel& model, const SrnfField& q, const RegistrationOptions& opts) {
  if (model.components.empty()) throw Error(ErrorCode::kInsufficientData, "class model has no variance");
  const Alignment a = optimal_rigid_reparam(model.mean_q, q, opts);
  const SrnfField qa = is_identity(a) ? q : act(a.rotation, a.reparam, q);
  const VecX c = model_coefficients(model, qa);
  double total = 0.0;
  for (double s : model.singular_values) total += s * s;
  std::size_t kept = 0;
  double acc = 0.0;
  while (kept < model.singular_values.size() && acc < kRetainedVariance * total) {
    acc += model.singular_values[kept] * model.singular_values[kept];
    ++kept;
  }
  const double floor = model.singular_values[kept - 1] * model.singular_values[kept - 1];
  double d2 = 0.0, explained = 0.0;
  for (std::size_t k = 0; k < kept; ++k) {
    const double ck = c[static_cast<Eigen::Index>(k)];
    const double var = model.singular_values[k] * model.singular_values[k];
    d2 += ck * ck / var;
    explained += ck * ck;
  }
  const double residual = std::max(squared(qa - model.mean_q) - explained, 0.0);
  return d2 + residual / floor;
}

std::size_t classify_gaussian_index(const std::vector<ClassModel>& models, const SrnfField& q,
                                    const RegistrationOptions& opts) {
  if (models.empty()) throw Error(ErrorCode::kEmptyTraining, "no class models");
  std::vector<double> d(models.size());
  parallel_for(models.size(), [&](std::size_t i) { d[i] = mahalanobis_squared(models[i].model, q, opts); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] < d[best]) best = i;
  }
  return best;
}

std::string classify_gaussian(const std::vector<ClassModel>& models, const SurfaceGrid& query,
                              const RegistrationOptions& opts) {
  return models[classify_gaussian_index(models, srnf_map(query), opts)].label;
}

std::vector<ClassModel> fit_class_models(const std::vector<SrnfField>& srnfs, const std::vector<std::string>& labels,
                                         const RegistrationOptions& reg) {
  if (srnfs.size() != labels.size()) throw Error(ErrorCode::kInvalidArgument, "one label per shape");
  if (srnfs.empty()) throw Error(ErrorCode::kEmptyTraining, "no training shapes");
  std::map<std::string, std::vector<SrnfField>> groups;
  for (std::size_t i = 0; i < srnfs.size(); ++i) groups[labels[i]].push_back(srnfs[i]);
  std::vector<ClassModel> models;
  for (auto& [label, members] : groups) {
    if (members.size() < 2) {
      throw Error(ErrorCode::kInsufficientData, "class '" + label + "' has fewer than two shapes");
    }
    models.push_back({label, srnf_statistics(members, 0, reg)});
  }
  return models;
}

double ConfusionMatrix::accuracy() const {
  const int total = counts.sum();
  return total > 0 ? static_cast<double>(counts.trace()) / total : 0.0;
}

ConfusionMatrix confusion_matrix(const std::vector<std::string>& truth, const std::vector<std::string>& predicted) {
  if (truth.size() != predicted.size()) throw Error(ErrorCode::kInvalidArgument, "label count mismatch");
  std::vector<std::string> classes(truth);
  classes.insert(classes.end(), predicted.begin(), predicted.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  const auto index = [&](const std::string& s) {
    return std::lower_bound(classes.begin(), classes.end(), s) - classes.begin();
  };
  ConfusionMatrix cm{classes, Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(classes.size()),
                                                    static_cast<Eigen::Index>(classes.size()))};
  for (std::size_t i = 0; i < truth.size(); ++i) ++cm.counts(index(truth[i]), index(predicted[i]));
  return cm;
}

std::vector<std::string> loo_knn(const Eigen::MatrixXd& distances, const std::vector<std::string>& labels, int k) {
  const auto n = static_cast<std::size_t>(distances.rows());
  if (labels.size() != n) throw Error(ErrorCode::kInvalidArgument, "one label per row");
  if (n < 2) throw Error(ErrorCode::kEmptyTraining, "leave-one-out needs two shapes");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d;
    std::vector<std::string> l;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      d.push_back(distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      l.push_back(labels[j]);
    }
    out.push_back(vote_knn(d, l, k));
  }
  return out;
}

std::vector<std::string> loo_gaussian(const std::vector<SrnfField>& srnfs, const std::vector<std::string>& labels,
                                      const RegistrationOptions& reg) {
  if (srnfs.size() != labels.size()) throw Error(ErrorCode::kInvalidArgument, "one label per shape");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < srnfs.size(); ++i) {
    std::vector<SrnfField> q;
    std::vector<std::string> l;
    for (std::size_t j = 0; j < srnfs.size(); ++j) {
      if (j == i) continue;
      q.push_back(srnfs[j]);
      l.push_back(labels[j]);
    }
    const auto models = fit_class_models(q, l, reg);
    out.push_back(models[classify_gaussian_index(models, srnfs[i], reg)].label);
  }
  return out;
}

}  // namespace srnf
