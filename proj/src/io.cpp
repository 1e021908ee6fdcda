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

#include "srnf/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace srnf::io {
namespace {

Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
}

/// Line reader that tracks 1-based line numbers and skips comments.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }
  std::size_t number() const noexcept { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

template <class Tag>
void write_grid(std::ostream& out, const GridField<Tag>& f, const char* magic) {
  out << magic << ' ' << f.spec().n_u() << ' ' << f.spec().n_v() << '\n';
  for (const auto& x : f.values()) {
    out << format_double(x.x()) << ' ' << format_double(x.y()) << ' ' << format_double(x.z()) << '\n';
  }
}

std::vector<double> parse_numbers(const std::string& line, std::size_t expected, std::size_t number) {
  std::istringstream ss(line);
  std::vector<double> v;
  std::string tok;
  while (ss >> tok) {
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw parse_error(number, "not a number: '" + tok + "'");
    v.push_back(x);
  }
  if (v.size() != expected) {
    throw parse_error(number, "expected " + std::to_string(expected) + " values, found " + std::to_string(v.size()));
  }
  return v;
}

int parse_int(const std::string& tok, std::size_t number) {
  std::size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw parse_error(number, "not an integer: '" + tok + "'");
  }
  if (used != tok.size()) throw parse_error(number, "not an integer: '" + tok + "'");
  return x;
}

GridSpec parse_spec(int n_u, int n_v, Differentiation diff, std::size_t number) {
  try {
    return GridSpec(n_u, n_v, diff);
  } catch (const Error& e) {
    throw parse_error(number, e.what());
  }
}

template <class Tag>
GridField<Tag> read_grid(std::istream& in, const char* magic, Differentiation diff) {
  LineReader r(in);
  std::string line;
  if (!r.next(line)) throw parse_error(r.number() + 1, std::string("missing ") + magic + " header");
  std::istringstream head(line);
  std::string word, a, b, extra;
  head >> word >> a >> b;
  if (word != magic || a.empty() || b.empty() || (head >> extra)) {
    throw parse_error(r.number(), std::string("expected '") + magic + " <n_u> <n_v>'");
  }
  const GridSpec spec = parse_spec(parse_int(a, r.number()), parse_int(b, r.number()), diff, r.number());
  GridField<Tag> f(spec);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (!r.next(line)) {
      throw parse_error(r.number() + 1, "expected " + std::to_string(spec.size()) + " samples, found " +
                                            std::to_string(k));
    }
    const auto v = parse_numbers(line, 3, r.number());
    f[k] = Vec3(v[0], v[1], v[2]);
  }
  if (r.next(line)) throw parse_error(r.number(), "unexpected data after the last sample");
  return f;
}

// ------------------------------------------------------------ binary I/O

void put_u64(std::ostream& out, std::uint64_t x) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((x >> (8 * i)) & 0xff);
  out.write(b.data(), 8);
}
void put_i64(std::ostream& out, std::int64_t x) { put_u64(out, static_cast<std::uint64_t>(x)); }
void put_f64(std::ostream& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }

class BinaryReader {
 public:
  BinaryReader(std::istream& in, const char* what) : in_(in), what_(what) {}

  std::uint64_t u64() {
    std::array<unsigned char, 8> b;
    in_.read(reinterpret_cast<char*>(b.data()), 8);
    if (in_.gcount() != 8) throw Error(ErrorCode::kParse, std::string(what_) + ": truncated at byte " + std::to_string(offset_));
    offset_ += 8;
    std::uint64_t x = 0;
    for (int i = 7; i >= 0; --i) x = (x << 8) | b[static_cast<std::size_t>(i)];
    return x;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  /// Bounded count for a following payload.
  std::size_t count(std::uint64_t limit) {
    const std::uint64_t n = u64();
    if (n > limit) fail("count " + std::to_string(n) + " exceeds " + std::to_string(limit));
    return static_cast<std::size_t>(n);
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::kParse, std::string(what_) + ": " + why + " at byte " + std::to_string(offset_));
  }
  void magic(const std::string& expected) {
    std::string got(expected.size(), '\0');
    in_.read(got.data(), static_cast<std::streamsize>(got.size()));
    if (static_cast<std::size_t>(in_.gcount()) != got.size() || got != expected) {
      throw Error(ErrorCode::kParse, std::string(what_) + ": missing '" + expected.substr(0, expected.size() - 1) + "' header");
    }
    offset_ += got.size();
  }
  void end() {
    if (in_.peek() != std::char_traits<char>::eof()) fail("trailing bytes");
  }

 private:
  std::istream& in_;
  const char* what_;
  std::size_t offset_ = 0;
};

constexpr std::uint64_t kMaxGrid = 1u << 14;
constexpr std::uint64_t kMaxCount = 1u << 20;

void put_spec(std::ostream& out, const GridSpec& spec) {
  put_i64(out, spec.n_u());
  put_i64(out, spec.n_v());
  put_u64(out, spec.differentiation() == Differentiation::spectral ? 0 : 1);
}

GridSpec get_spec(BinaryReader& r) {
  const std::int64_t n_u = r.i64(), n_v = r.i64();
  const std::uint64_t d = r.u64();
  if (n_u <= 0 || n_v <= 0 || static_cast<std::uint64_t>(n_u) > kMaxGrid ||
      static_cast<std::uint64_t>(n_v) > kMaxGrid || d > 1) {
    r.fail("invalid grid header");
  }
  try {
    return GridSpec(static_cast<int>(n_u), static_cast<int>(n_v),
                    d == 0 ? Differentiation::spectral : Differentiation::finite_difference);
  } catch (const Error& e) {
    r.fail(e.what());
  }
}

template <class Tag>
void put_field(std::ostream& out, const GridField<Tag>& f) {
  for (const auto& x : f.values()) {
    put_f64(out, x.x());
    put_f64(out, x.y());
    put_f64(out, x.z());
  }
}

template <class Tag>
GridField<Tag> get_field(BinaryReader& r, const GridSpec& spec) {
  GridField<Tag> f(spec);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double x = r.f64(), y = r.f64(), z = r.f64();
    f[k] = Vec3(x, y, z);
  }
  return f;
}

std::ifstream open_in(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return in;
}

template <class F>
void write_file(const std::string& path, bool binary, F&& body) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  body(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

template <class F>
auto read_file(const std::string& path, bool binary, F&& body) {
  auto in = open_in(path, binary);
  try {
    return body(in);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    const std::string prefix = std::string(to_string(ErrorCode::kParse)) + ": ";
    throw Error(ErrorCode::kParse, path + ": " + std::string(e.what()).substr(prefix.size()));
  }
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) return "0";  // folds -0 so equal surfaces print identically
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_sgrid(std::ostream& out, const SurfaceGrid& f) { write_grid(out, f, "SGRID"); }
void write_qgrid(std::ostream& out, const SrnfField& q) { write_grid(out, q, "QGRID"); }
SurfaceGrid read_sgrid(std::istream& in, Differentiation diff) { return read_grid<SurfaceTag>(in, "SGRID", diff); }
SrnfField read_qgrid(std::istream& in, Differentiation diff) { return read_grid<SrnfTag>(in, "QGRID", diff); }

void write_off(std::ostream& out, const SurfaceGrid& f) {
  const GridSpec& s = f.spec();
  const int nu = s.n_u(), nv = s.n_v();
  Vec3 north = Vec3::Zero(), south = Vec3::Zero();
  for (int i = 0; i < nu; ++i) {
    north += f(i, 0);
    south += f(i, nv - 1);
  }
  north /= nu;
  south /= nu;
  const std::size_t n = s.size();
  out << "OFF\n" << n + 2 << ' ' << static_cast<std::size_t>(nu) * (nv + 1) << " 0\n";
  for (const auto& x : f.values()) {
    out << format_double(x.x()) << ' ' << format_double(x.y()) << ' ' << format_double(x.z()) << '\n';
  }
  for (const Vec3& p : {north, south}) {
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  }
  for (int i = 0; i < nu; ++i) {
    const int ip = (i + 1) % nu;
    for (int j = 0; j + 1 < nv; ++j) {
      out << "4 " << s.index(i, j) << ' ' << s.index(i, j + 1) << ' ' << s.index(ip, j + 1) << ' '
          << s.index(ip, j) << '\n';
    }
  }
  for (int i = 0; i < nu; ++i) {
    const int ip = (i + 1) % nu;
    out << "3 " << n << ' ' << s.index(i, 0) << ' ' << s.index(ip, 0) << '\n';
    out << "3 " << n + 1 << ' ' << s.index(ip, nv - 1) << ' ' << s.index(i, nv - 1) << '\n';
  }
}

SurfaceGrid read_off(std::istream& in, Differentiation diff) {
  LineReader r(in);
  std::string line;
  if (!r.next(line) || line.substr(0, 3) != "OFF") throw parse_error(r.number(), "missing OFF header");
  std::string rest = line.substr(3);
  if (rest.find_first_not_of(" \t\r") == std::string::npos && !r.next(line)) {
    throw parse_error(r.number() + 1, "missing OFF counts");
  } else if (rest.find_first_not_of(" \t\r") != std::string::npos) {
    line = rest;
  }
  const auto counts = parse_numbers(line, 3, r.number());
  const auto nverts = static_cast<long long>(counts[0]), nfaces = static_cast<long long>(counts[1]);
  const long long nu = nfaces - (nverts - 2);
  if (nverts < 3 || nu <= 0 || (nverts - 2) % nu != 0) {
    throw parse_error(r.number(), "vertex and face counts do not describe a grid mesh");
  }
  const long long nv = (nverts - 2) / nu;
  const GridSpec spec = parse_spec(static_cast<int>(nu), static_cast<int>(nv), diff, r.number());
  SurfaceGrid f(spec);
  for (long long k = 0; k < nverts; ++k) {
    if (!r.next(line)) throw parse_error(r.number() + 1, "missing vertices");
    const auto v = parse_numbers(line, 3, r.number());
    if (k < static_cast<long long>(spec.size())) f[static_cast<std::size_t>(k)] = Vec3(v[0], v[1], v[2]);
  }
  // Faces must match the layout written by write_off.
  std::ostringstream expected;
  write_off(expected, f);
  std::istringstream ref(expected.str());
  std::string ref_line;
  for (long long k = 0; k < nverts + 2; ++k) std::getline(ref, ref_line);
  for (long long k = 0; k < nfaces; ++k) {
    if (!r.next(line)) throw parse_error(r.number() + 1, "missing faces");
    std::getline(ref, ref_line);
    std::istringstream a(line), b(ref_line);
    std::vector<long long> fa, fb;
    for (long long x; a >> x;) fa.push_back(x);
    for (long long x; b >> x;) fb.push_back(x);
    if (fa != fb) throw parse_error(r.number(), "face does not follow the grid layout");
  }
  return f;
}

void write_basis(std::ostream& out, const BasisSet& basis) {
  out << "BASIS v1\n";
  const std::uint64_t kind = basis.kind() == BasisKind::spherical_harmonic ? 0 : basis.kind() == BasisKind::pca ? 1 : 2;
  put_u64(out, kind);
  put_spec(out, basis.spec());
  put_u64(out, basis.size());
  if (basis.kind() == BasisKind::spherical_harmonic) {
    put_i64(out, basis.max_degree());
    return;
  }
  for (std::size_t j = 0; j < basis.size(); ++j) put_field(out, basis.element(j));
  put_u64(out, basis.singular_values().size());
  for (double s : basis.singular_values()) put_f64(out, s);
  put_u64(out, basis.mean() ? 1 : 0);
  if (basis.mean()) put_field(out, *basis.mean());
}

BasisSet read_basis(std::istream& in) {
  BinaryReader r(in, "BASIS");
  r.magic("BASIS v1\n");
  const std::uint64_t kind = r.u64();
  if (kind > 2) r.fail("unknown basis kind");
  const GridSpec spec = get_spec(r);
  const std::size_t count = r.count(kMaxCount);
  if (kind == 0) {
    const std::int64_t degree = r.i64();
    if (degree < 0 || static_cast<std::uint64_t>(3 * (degree + 1) * (degree + 1)) != count) {
      r.fail("degree does not match the element count");
    }
    r.end();
    return BasisSet::spherical_harmonic(spec, static_cast<int>(degree));
  }
  std::vector<TangentField> elements;
  for (std::size_t j = 0; j < count; ++j) elements.push_back(get_field<TangentTag>(r, spec));
  std::vector<double> sv(r.count(kMaxCount));
  for (double& s : sv) s = r.f64();
  std::optional<SurfaceGrid> mean;
  const std::uint64_t has_mean = r.u64();
  if (has_mean > 1) r.fail("invalid mean flag");
  if (has_mean) mean = get_field<SurfaceTag>(r, spec);
  r.end();
  return BasisSet::dense(kind == 1 ? BasisKind::pca : BasisKind::concatenated, spec, std::move(elements),
                         std::move(sv), std::move(mean));
}

void write_model(std::ostream& out, const ShapeModel& model) {
  out << "MODEL v1\n";
  put_spec(out, model.spec());
  put_u64(out, model.components.size());
  put_field(out, model.mean_q);
  for (const auto& u : model.components) put_field(out, u);
  for (double s : model.singular_values) put_f64(out, s);
  put_u64(out, model.mean_surface ? 1 : 0);
  if (model.mean_surface) put_field(out, *model.mean_surface);
}

ShapeModel read_model(std::istream& in) {
  BinaryReader r(in, "MODEL");
  r.magic("MODEL v1\n");
  const GridSpec spec = get_spec(r);
  const std::size_t count = r.count(kMaxCount);
  ShapeModel model(spec);
  model.mean_q = get_field<SrnfTag>(r, spec);
  for (std::size_t k = 0; k < count; ++k) model.components.push_back(get_field<SrnfTag>(r, spec));
  for (std::size_t k = 0; k < count; ++k) model.singular_values.push_back(r.f64());
  const std::uint64_t has_mean = r.u64();
  if (has_mean > 1) r.fail("invalid mean flag");
  if (has_mean) model.mean_surface = get_field<SurfaceTag>(r, spec);
  r.end();
  return model;
}

void write_trace_csv(std::ostream& out, const InversionResult& result) {
  out << "iter,level,scale,energy,grad_norm\n";
  for (const auto& stage : result.trace) {
    for (const auto& rep : stage.reports) {
      out << rep.iteration << ',' << stage.level << ',' << stage.scale << ',' << format_double(rep.energy) << ','
          << format_double(rep.gradient_norm) << '\n';
    }
  }
}

SurfaceGrid load_surface(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".off") == 0) {
    return read_file(path, false, [](std::istream& in) { return read_off(in); });
  }
  return read_file(path, false, [](std::istream& in) { return read_sgrid(in); });
}
SrnfField load_srnf(const std::string& path) {
  return read_file(path, false, [](std::istream& in) { return read_qgrid(in); });
}
void save_surface(const std::string& path, const SurfaceGrid& f) {
  write_file(path, false, [&](std::ostream& out) { write_sgrid(out, f); });
}
void save_srnf(const std::string& path, const SrnfField& q) {
  write_file(path, false, [&](std::ostream& out) { write_qgrid(out, q); });
}
void save_off(const std::string& path, const SurfaceGrid& f) {
  write_file(path, false, [&](std::ostream& out) { write_off(out, f); });
}
BasisSet load_basis(const std::string& path) {
  return read_file(path, true, [](std::istream& in) { return read_basis(in); });
}
void save_basis(const std::string& path, const BasisSet& basis) {
  write_file(path, true, [&](std::ostream& out) { write_basis(out, basis); });
}
ShapeModel load_model(const std::string& path) {
  return read_file(path, true, [](std::istream& in) { return read_model(in); });
}
void save_model(const std::string& path, const ShapeModel& model) {
  write_file(path, true, [&](std::ostream& out) { write_model(out, model); });
}

}  // namespace srnf::io
