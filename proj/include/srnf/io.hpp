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

#include <iosfwd>
#include <string>

#include "srnf/basis.hpp"
#include "srnf/inversion.hpp"
#include "srnf/shape_stats.hpp"

namespace srnf::io {

// Text grids: a header line `SGRID n_u n_v` (QGRID for SRNFs), then one
// `x y z` line per sample in flat-index order, 17 significant digits.
// Blank lines and lines starting with '#' are skipped on input.
void write_sgrid(std::ostream& out, const SurfaceGrid& f);
void write_qgrid(std::ostream& out, const SrnfField& q);
SurfaceGrid read_sgrid(std::istream& in, Differentiation diff = Differentiation::spectral);
SrnfField read_qgrid(std::istream& in, Differentiation diff = Differentiation::spectral);

/// Quad mesh with one fan of triangles around an added vertex per pole.
/// Faces are ordered so that their right-hand normals point outward.
void write_off(std::ostream& out, const SurfaceGrid& f);
/// Reads a mesh produced by write_off; the pole vertices are discarded.
SurfaceGrid read_off(std::istream& in, Differentiation diff = Differentiation::spectral);

/// `BASIS v1`: SH bases store only their degree; dense bases store every
/// element, singular value and the optional mean as little-endian f64.
void write_basis(std::ostream& out, const BasisSet& basis);
BasisSet read_basis(std::istream& in);

/// `MODEL v1`: spec, mean_q, components, singular values and mean surface.
void write_model(std::ostream& out, const ShapeModel& model);
ShapeModel read_model(std::istream& in);

/// `iter,level,scale,energy,grad_norm`, one row per report of every stage.
void write_trace_csv(std::ostream& out, const InversionResult& result);

/// 17-significant-digit rendering shared by every text writer.
std::string format_double(double x);

// Path helpers; failures to open raise Io, and parse errors name the path.
SurfaceGrid load_surface(const std::string& path);
SrnfField load_srnf(const std::string& path);
void save_surface(const std::string& path, const SurfaceGrid& f);
void save_srnf(const std::string& path, const SrnfField& q);
void save_off(const std::string& path, const SurfaceGrid& f);
BasisSet load_basis(const std::string& path);
void save_basis(const std::string& path, const BasisSet& basis);
ShapeModel load_model(const std::string& path);
void save_model(const std::string& path, const ShapeModel& model);

}  // namespace srnf::io
