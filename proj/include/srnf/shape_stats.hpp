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

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "srnf/inversion.hpp"
#include "srnf/registration.hpp"

namespace srnf {

// ---------------------------------------------------------------- geodesics

enum class GeodesicInit {
  /// Every level of the first waypoint starts from the matching level of f1.
  first_shape,
  /// The first waypoint starts from an area-matched sphere on the coarsest grid.
  sphere,
};

struct GeodesicOptions {
  GeodesicInit init = GeodesicInit::first_shape;
  /// Register f2 to f1 before blending.
  bool register_endpoints = true;
};

struct GeodesicPath {
  std::vector<double> taus;
  /// α(τ), in the frame of f1. waypoints.front() is f1, waypoints.back() the
  /// registered f2.
  std::vector<SurfaceGrid> waypoints;
  /// β(τ) = (1 − τ)Q(f1) + τQ(f2 registered).
  std::vector<SrnfField> srnf_waypoints;
  /// ‖Q(α(τ)) − β(τ)‖².
  std::vector<double> energies;
  /// ‖Q((1 − τ)f1 + τf2) − β(τ)‖² for the registered f2.
  std::vector<double> linear_energies;
  Alignment alignment;
  std::vector<InversionResult> inversions;  // interior waypoints only
};

/// T + 1 waypoints at τ = k/T, each warm-started from the previous one.
GeodesicPath geodesic(const SurfaceGrid& f1, const SurfaceGrid& f2, int n_intervals,
                      const InversionConfig& cfg, const GeodesicOptions& opts = {});

struct Waypoint {
  double tau = 0.0;
  SurfaceGrid surface;
  SrnfField srnf;
  double energy = 0.0;
};

/// One waypoint computed on its own, as the first interior waypoint of a path.
Waypoint geodesic_waypoint(const SurfaceGrid& f1, const SurfaceGrid& f2, double tau,
                           const InversionConfig& cfg, const GeodesicOptions& opts = {});

/// f2 carried to f1 by the optimal (O, γ) between their SRNFs.
SurfaceGrid register_surface(const SurfaceGrid& f1, const SurfaceGrid& f2,
                             const RegistrationOptions& opts = {}, Alignment* alignment = nullptr);

// -------------------------------------------------- tangent-space operations

/// Inverts q starting from f0 on f0's grid along a cfg.n_scales ladder from
/// Q(f0). The result is returned in q's frame with the centroid of f0.
InversionResult invert_from(const SrnfField& q, const SurfaceGrid& f0, const InversionConfig& cfg);

/// Inverts Q(f) + τQ_{*,f}(v0) starting from f.
SurfaceGrid shoot(const SurfaceGrid& f, const TangentField& v0, double tau, const InversionConfig& cfg);

/// Least-squares v with Q_{*,f}(v) ≈ Q(f2) − Q(f), in the span of the level basis.
TangentField inverse_exponential(const SurfaceGrid& f, const SurfaceGrid& f2, const InversionConfig& cfg,
                                 int max_iters = 400);

struct TransportResult {
  TangentField vector;
  /// Q_{*,f1}(v); identical at both ends.
  SrnfField increment;
  double energy = 0.0;
};

TransportResult parallel_transport(const TangentField& v, const SurfaceGrid& f1, const SurfaceGrid& f2,
                                   const InversionConfig& cfg, double eps = 1e-3);

struct TransferOptions {
  double alpha = 1.0;
  /// Carry SRNF differences between unit-area copies; the result is scaled
  /// by √(area(f2)·area(h1)/area(f1)).
  bool normalize_scale = true;
};

/// Inverts Q(f2) + α(Q(h1) − Q(f1)) starting from f2. h1 and f2 must already
/// be registered to f1.
SurfaceGrid transfer_deformation(const SurfaceGrid& f1, const SurfaceGrid& h1, const SurfaceGrid& f2,
                                 const InversionConfig& cfg, const TransferOptions& opts = {});

// -------------------------------------------------------------- statistics

struct ShapeModel {
  SrnfField mean_q;
  std::vector<SrnfField> components;
  /// Per-component standard deviation √(λ_k/(n − 1)), non-increasing.
  std::vector<double> singular_values;
  std::optional<SurfaceGrid> mean_surface;
  bool mean_converged = true;
  /// Training SRNFs after registration to mean_q; the first shape fixes the frame.
  std::vector<SrnfField> registered;
  std::vector<Alignment> alignments;
  int iterations = 0;

  explicit ShapeModel(const GridSpec& spec) : mean_q(spec) {}
  const GridSpec& spec() const noexcept { return mean_q.spec(); }
};

struct MeanOptions {
  int max_iters = 50;
  double tolerance = 1e-6;
};

/// Registered Euclidean mean of the SRNFs followed by exactly one inversion.
ShapeModel karcher_mean(const std::vector<SurfaceGrid>& shapes, const InversionConfig& cfg,
                        const MeanOptions& opts = {});

/// Registration, mean and PCA of Q(shapes) without inverting anything.
/// n_components ≤ 0 keeps every nonzero component.
ShapeModel srnf_statistics(const std::vector<SrnfField>& srnfs, int n_components,
                           const RegistrationOptions& reg = {}, const MeanOptions& opts = {});

/// srnf_statistics of Q(shapes) plus the inverted mean surface.
ShapeModel pca_model(const std::vector<SurfaceGrid>& shapes, int n_components, const InversionConfig& cfg,
                     const MeanOptions& opts = {});

/// ⟨q − mean_q, u_k⟩ for every component.
VecX model_coefficients(const ShapeModel& model, const SrnfField& q);
SrnfField model_srnf(const ShapeModel& model, const VecX& coefficients);

struct ModeSurface {
  SurfaceGrid surface;
  double energy = 0.0;
  /// energy ≤ 1e-3·‖mean_q‖².
  bool valid = true;
  bool converged = true;
};

inline constexpr double kModeValidity = 1e-3;

/// Inverts mean_q + λ·u_k starting from the mean surface.
ModeSurface mode_surface(const ShapeModel& model, int k, double lambda, const InversionConfig& cfg);

/// c_k ~ N(0, σ_k²) restricted to |c_k| ≤ truncation·σ_k.
VecX draw_coefficients(const ShapeModel& model, std::mt19937_64& rng, double truncation = 3.0);

ModeSurface sample_random(const ShapeModel& model, std::uint64_t seed, double truncation,
                          const InversionConfig& cfg);
/// Inverts model_srnf(model, c) starting from the mean surface.
ModeSurface synthesize(const ShapeModel& model, const VecX& coefficients, const InversionConfig& cfg);

// ---------------------------------------------------------- classification

/// min over both registration directions of ‖q1 − act(O*, γ*, q2)‖.
double srnf_distance(const SrnfField& q1, const SrnfField& q2, const RegistrationOptions& opts = {});
double elastic_distance(const SurfaceGrid& f1, const SurfaceGrid& f2, const RegistrationOptions& opts = {});

/// Symmetric matrix of srnf_distance, zero diagonal.
Eigen::MatrixXd distance_matrix(const std::vector<SrnfField>& srnfs, const RegistrationOptions& opts = {});

struct LabeledShape {
  SurfaceGrid surface;
  std::string label;
};

/// Majority vote over the k nearest; a tied vote goes to the tied class with
/// the nearest member.
std::string vote_knn(const std::vector<double>& distances, const std::vector<std::string>& labels, int k);

std::string classify_knn(const std::vector<LabeledShape>& train, const SurfaceGrid& query, int k,
                         const RegistrationOptions& opts = {});

struct ClassModel {
  std::string label;
  ShapeModel model;
};

inline constexpr double kRetainedVariance = 0.95;

/// Squared Mahalanobis distance of q to the model after registering q to
/// its mean. Components are kept up to 95% of the variance; the residual
/// uses the smallest kept variance.
double mahalanobis_squared(const ShapeModel& model, const SrnfField& q, const RegistrationOptions& opts = {});

/// Index of the nearest model; the lowest index wins an exact tie.
std::size_t classify_gaussian_index(const std::vector<ClassModel>& models, const SrnfField& q,
                                    const RegistrationOptions& opts = {});
std::string classify_gaussian(const std::vector<ClassModel>& models, const SurfaceGrid& query,
                              const RegistrationOptions& opts = {});

/// Per-class SRNF statistics for classify_gaussian.
std::vector<ClassModel> fit_class_models(const std::vector<SrnfField>& srnfs,
                                         const std::vector<std::string>& labels,
                                         const RegistrationOptions& reg = {});

struct ConfusionMatrix {
  std::vector<std::string> classes;  // sorted
  Eigen::MatrixXi counts;            // rows truth, columns prediction
  double accuracy() const;
};

ConfusionMatrix confusion_matrix(const std::vector<std::string>& truth,
                                 const std::vector<std::string>& predicted);

/// Leave-one-out predictions from a precomputed distance matrix.
std::vector<std::string> loo_knn(const Eigen::MatrixXd& distances, const std::vector<std::string>& labels,
                                 int k);
/// Leave-one-out predictions refitting the class models without each query.
std::vector<std::string> loo_gaussian(const std::vector<SrnfField>& srnfs,
                                      const std::vector<std::string>& labels,
                                      const RegistrationOptions& reg = {});

}  // namespace srnf
