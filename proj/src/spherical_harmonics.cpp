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

#include "srnf/spherical_harmonics.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "cache.hpp"

namespace srnf {

namespace {

constexpr double kPi = std::numbers::pi;

inline int packed(int l, int m) { return l * (l + 1) / 2 + m; }

}  // namespace

void associated_legendre(int max_degree, double v, std::span<double> out) {
  const double x = std::cos(v);
  const double s = std::sin(v);
  out[0] = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 1; m <= max_degree; ++m) {
    out[packed(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * out[packed(m - 1, m - 1)];
  }
  for (int m = 0; m < max_degree; ++m) {
    out[packed(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * out[packed(m, m)];
  }
  for (int m = 0; m <= max_degree; ++m) {
    for (int l = m + 2; l <= max_degree; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      out[packed(l, m)] = a * (x * out[packed(l - 1, m)] - b * out[packed(l - 2, m)]);
    }
  }
}

int SphericalTransform::exact_degree(const GridSpec& spec) noexcept {
  return std::min(spec.n_v(), spec.n_u()) / 2 - 1;
}

SphericalTransform::SphericalTransform(const GridSpec& spec, int max_degree)
    : spec_(spec), max_degree_(max_degree) {
  if (max_degree < 0) throw Error(ErrorCode::kInvalidArgument, "negative SH degree");
  if (spec.n_v() < 2 * max_degree || spec.n_u() <= 2 * max_degree) {
    throw Error(ErrorCode::kGridTooCoarse, "degree " + std::to_string(max_degree) +
                                               " aliases on a " + std::to_string(spec.n_u()) +
                                               "x" + std::to_string(spec.n_v()) + " grid");
  }
  const int L = max_degree;
  const int nu = spec.n_u();
  const int nv = spec.n_v();

  // Polar quadrature: full weight = du · wv_j, and the azimuthal factor of
  // each real harmonic has discrete squared norm 2π/du · du = 2π.
  const auto& w = quadrature_weights(spec);
  wv_.resize(nv);
  for (int j = 0; j < nv; ++j) wv_[j] = w[spec.index(0, j)] / spec.du() * 2.0 * kPi;

  std::vector<double> table(packed(L, L) + 1);
  std::vector<Eigen::MatrixXd> raw(L + 1);
  for (int m = 0; m <= L; ++m) raw[m].resize(L - m + 1, nv);
  for (int j = 0; j < nv; ++j) {
    associated_legendre(L, spec.v(j), table);
    for (int m = 0; m <= L; ++m) {
      for (int l = m; l <= L; ++l) raw[m](l - m, j) = table[packed(l, m)];
    }
  }

  profiles_.resize(L + 1);
  triangular_.resize(L + 1);
  for (int m = 0; m <= L; ++m) {
    const int n = L - m + 1;
    Eigen::MatrixXd q = raw[m];
    Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n);
    auto inner = [&](int a, int b) {
      double s = 0.0;
      for (int j = 0; j < nv; ++j) s += wv_[j] * q(a, j) * q(b, j);
      return s;
    };
    // Two sweeps of modified Gram–Schmidt.
    for (int r = 0; r < n; ++r) {
      for (int pass = 0; pass < 2; ++pass) {
        for (int p = 0; p < r; ++p) {
          const double c = inner(r, p);
          q.row(r) -= c * q.row(p);
          t.row(r) -= c * t.row(p);
        }
      }
      const double nrm = std::sqrt(inner(r, r));
      if (!(nrm > 1e-12)) {
        throw Error(ErrorCode::kGridTooCoarse, "SH profiles are rank deficient on this grid");
      }
      q.row(r) /= nrm;
      t.row(r) /= nrm;
    }
    profiles_[m] = std::move(q);
    triangular_[m] = std::move(t);
  }

  cos_table_.resize(L + 1, nu);
  sin_table_.resize(L + 1, nu);
  for (int m = 0; m <= L; ++m) {
    for (int i = 0; i < nu; ++i) {
      const double u = spec.u(i);
      cos_table_(m, i) = m == 0 ? 1.0 : std::sqrt(2.0) * std::cos(m * u);
      sin_table_(m, i) = m == 0 ? 0.0 : std::sqrt(2.0) * std::sin(m * u);
    }
  }
}

std::shared_ptr<const SphericalTransform> SphericalTransform::get(const GridSpec& spec,
                                                                  int max_degree) {
  static detail::KeyedCache<std::tuple<int, int, int>, SphericalTransform> cache;
  return cache.get({spec.n_u(), spec.n_v(), max_degree},
                   [&] { return SphericalTransform(spec.with_differentiation(Differentiation::spectral), max_degree); });
}

VecX SphericalTransform::analyze(std::span<const double> f) const {
  std::vector<Vec3> tmp(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) tmp[k] = Vec3(f[k], 0.0, 0.0);
  return analyze(std::span<const Vec3>(tmp)).col(0);
}

void SphericalTransform::synthesize(const VecX& coeffs, std::span<double> out) const {
  CoeffMatrix c = CoeffMatrix::Zero(coeffs.size(), 3);
  c.col(0) = coeffs;
  std::vector<Vec3> tmp(out.size());
  synthesize(c, tmp);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = tmp[k].x();
}

CoeffMatrix SphericalTransform::analyze(std::span<const Vec3> f) const {
  const int L = max_degree_;
  const int nu = spec_.n_u();
  const int nv = spec_.n_v();
  const double du = spec_.du() / (2.0 * kPi);
  // Azimuthal transform: a_cos(m, j), a_sin(m, j), per channel.
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 3>> acos(L + 1), asin(L + 1);
  for (int m = 0; m <= L; ++m) {
    acos[m] = Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(nv, 3);
    asin[m] = Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(nv, 3);
  }
  for (int i = 0; i < nu; ++i) {
    const Vec3* row = &f[spec_.index(i, 0)];
    for (int m = 0; m <= L; ++m) {
      const double c = cos_table_(m, i) * du;
      const double s = sin_table_(m, i) * du;
      auto& ac = acos[m];
      auto& as = asin[m];
      for (int j = 0; j < nv; ++j) {
        ac.row(j) += c * row[j].transpose();
        if (m > 0) as.row(j) += s * row[j].transpose();
      }
    }
  }
  CoeffMatrix out = CoeffMatrix::Zero(count(), 3);
  for (int m = 0; m <= L; ++m) {
    for (int j = 0; j < nv; ++j) {
      acos[m].row(j) *= wv_[j];
      asin[m].row(j) *= wv_[j];
    }
    const Eigen::Matrix<double, Eigen::Dynamic, 3> pc = profiles_[m] * acos[m];
    const Eigen::Matrix<double, Eigen::Dynamic, 3> ps = profiles_[m] * asin[m];
    for (int l = m; l <= L; ++l) {
      out.row(index(l, m)) = pc.row(l - m);
      if (m > 0) out.row(index(l, -m)) = ps.row(l - m);
    }
  }
  return out;
}

void SphericalTransform::synthesize(const CoeffMatrix& coeffs, std::span<Vec3> out) const {
  if (coeffs.rows() != count()) {
    throw Error(ErrorCode::kBasisMismatch, "coefficient count does not match SH degree");
  }
  const int L = max_degree_;
  const int nu = spec_.n_u();
  const int nv = spec_.n_v();
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 3>> bcos(L + 1), bsin(L + 1);
  for (int m = 0; m <= L; ++m) {
    const int n = L - m + 1;
    Eigen::Matrix<double, Eigen::Dynamic, 3> cc(n, 3), cs(n, 3);
    for (int l = m; l <= L; ++l) {
      cc.row(l - m) = coeffs.row(index(l, m));
      cs.row(l - m) = m > 0 ? Eigen::RowVector3d(coeffs.row(index(l, -m))) : Eigen::RowVector3d::Zero();
    }
    bcos[m] = profiles_[m].transpose() * cc;
    bsin[m] = profiles_[m].transpose() * cs;
  }
  for (int i = 0; i < nu; ++i) {
    Vec3* row = &out[spec_.index(i, 0)];
    for (int j = 0; j < nv; ++j) row[j].setZero();
    for (int m = 0; m <= L; ++m) {
      const double c = cos_table_(m, i);
      const double s = sin_table_(m, i);
      const auto& bc = bcos[m];
      const auto& bs = bsin[m];
      for (int j = 0; j < nv; ++j) {
        row[j] += c * bc.row(j).transpose();
        if (m > 0) row[j] += s * bs.row(j).transpose();
      }
    }
  }
}

std::vector<double> SphericalTransform::basis_function(int k) const {
  VecX c = VecX::Zero(count());
  c[k] = 1.0;
  std::vector<double> out(spec_.size());
  synthesize(c, out);
  return out;
}

void SphericalTransform::evaluate(double u, double v, std::span<double> out) const {
  const int L = max_degree_;
  std::vector<double> table(packed(L, L) + 1);
  associated_legendre(L, v, table);
  for (int m = 0; m <= L; ++m) {
    const int n = L - m + 1;
    VecX p(n);
    for (int l = m; l <= L; ++l) p[l - m] = table[packed(l, m)];
    const VecX q = triangular_[m] * p;
    const double c = m == 0 ? 1.0 : std::sqrt(2.0) * std::cos(m * u);
    const double s = std::sqrt(2.0) * std::sin(m * u);
    for (int l = m; l <= L; ++l) {
      out[index(l, m)] = c * q[l - m];
      if (m > 0) out[index(l, -m)] = s * q[l - m];
    }
  }
}

namespace {

// Ivanic–Ruedenberg recursion for real spherical harmonic rotations.
class RotationRecursion {
 public:
  RotationRecursion(const Mat3& r, int max_degree) : blocks_(max_degree + 1) {
    blocks_[0] = Eigen::MatrixXd::Identity(1, 1);
    if (max_degree == 0) return;
    // Degree-1 harmonics are proportional to (y, z, x).
    const int perm[3] = {1, 2, 0};
    blocks_[1].resize(3, 3);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) blocks_[1](a, b) = r(perm[a], perm[b]);
    }
    for (int l = 2; l <= max_degree; ++l) build(l);
  }

  std::vector<Eigen::MatrixXd> take() { return std::move(blocks_); }

 private:
  double r1(int i, int j) const { return blocks_[1](i + 1, j + 1); }
  double prev(int l, int a, int b) const { return blocks_[l - 1](a + l - 1, b + l - 1); }

  double p(int i, int l, int a, int b) const {
    if (b == l) return r1(i, 1) * prev(l, a, l - 1) - r1(i, -1) * prev(l, a, -l + 1);
    if (b == -l) return r1(i, 1) * prev(l, a, -l + 1) + r1(i, -1) * prev(l, a, l - 1);
    return r1(i, 0) * prev(l, a, b);
  }

  double u_term(int l, int m, int n) const { return p(0, l, m, n); }

  double v_term(int l, int m, int n) const {
    if (m == 0) return p(1, l, 1, n) + p(-1, l, -1, n);
    if (m > 0) {
      const bool d = m == 1;
      return p(1, l, m - 1, n) * std::sqrt(d ? 2.0 : 1.0) - (d ? 0.0 : p(-1, l, -m + 1, n));
    }
    const bool d = m == -1;
    return (d ? 0.0 : p(1, l, m + 1, n)) + p(-1, l, -m - 1, n) * std::sqrt(d ? 2.0 : 1.0);
  }

  double w_term(int l, int m, int n) const {
    if (m > 0) return p(1, l, m + 1, n) + p(-1, l, -m - 1, n);
    return p(1, l, m - 1, n) - p(-1, l, -m + 1, n);
  }

  void build(int l) {
    blocks_[l].resize(2 * l + 1, 2 * l + 1);
    for (int m = -l; m <= l; ++m) {
      for (int n = -l; n <= l; ++n) {
        const int am = std::abs(m);
        const double d = m == 0 ? 1.0 : 0.0;
        const double denom = std::abs(n) == l ? 2.0 * l * (2.0 * l - 1.0) : double(l + n) * (l - n);
        const double uc = std::sqrt(double(l + m) * (l - m) / denom);
        const double vc = 0.5 * std::sqrt((1.0 + d) * (l + am - 1.0) * (l + am) / denom) * (1.0 - 2.0 * d);
        const double wc = -0.5 * std::sqrt(double(l - am - 1) * (l - am) / denom) * (1.0 - d);
        double value = 0.0;
        if (uc != 0.0) value += uc * u_term(l, m, n);
        if (vc != 0.0) value += vc * v_term(l, m, n);
        if (wc != 0.0) value += wc * w_term(l, m, n);
        blocks_[l](m + l, n + l) = value;
      }
    }
  }

  std::vector<Eigen::MatrixXd> blocks_;
};

}  // namespace

std::vector<Eigen::MatrixXd> sh_rotation_blocks(const Mat3& rotation, int max_degree) {
  return RotationRecursion(rotation, max_degree).take();
}

CoeffMatrix rotate_coefficients(const std::vector<Eigen::MatrixXd>& blocks, const CoeffMatrix& c) {
  CoeffMatrix out(c.rows(), 3);
  const int L = static_cast<int>(blocks.size()) - 1;
  if (c.rows() != SphericalTransform::count_for(L)) {
    throw Error(ErrorCode::kBasisMismatch, "rotation degree does not match coefficients");
  }
  for (int l = 0; l <= L; ++l) {
    const int off = l * l;
    out.middleRows(off, 2 * l + 1) = blocks[l] * c.middleRows(off, 2 * l + 1);
  }
  return out;
}

}  // namespace srnf
