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

#include "run_config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "srnf/io.hpp"

namespace srnf::cli {
namespace {

Error bad_value(const std::string& key, const std::string& value, const char* what) {
  return Error(ErrorCode::kInvalidArgument, "'" + key + "' expects " + what + ", got '" + value + "'");
}

/// The message of `e` without its leading error name.
std::string detail(const Error& e) {
  const std::string what = e.what();
  const auto colon = what.find(": ");
  return colon == std::string::npos ? what : what.substr(colon + 2);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string shortest(double x) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, p) : io::format_double(x);
}

template <class Int>
Int to_int(const std::string& key, const std::string& s) {
  Int x{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw bad_value(key, s, "an integer");
  return x;
}

double to_double(const std::string& key, const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw bad_value(key, s, "a number");
  return x;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw bad_value(key, s, "true or false");
}

Knob int_knob(std::string name, std::string help, int InversionConfig::*field) {
  return {name, std::move(help), [field](const RunConfig& c) { return std::to_string(c.inversion.*field); },
          [name, field](RunConfig& c, const std::string& v) { c.inversion.*field = to_int<int>(name, v); }};
}

Knob real_knob(std::string name, std::string help, double InversionConfig::*field) {
  return {name, std::move(help), [field](const RunConfig& c) { return shortest(c.inversion.*field); },
          [name, field](RunConfig& c, const std::string& v) { c.inversion.*field = to_double(name, v); }};
}

Knob bool_knob(std::string name, std::string help, bool InversionConfig::*field) {
  return {name, std::move(help), [field](const RunConfig& c) { return c.inversion.*field ? "true" : "false"; },
          [name, field](RunConfig& c, const std::string& v) { c.inversion.*field = to_bool(name, v); }};
}

Knob reg_knob(std::string name, std::string help, int RegistrationOptions::*field) {
  return {name, std::move(help),
          [field](const RunConfig& c) { return std::to_string(c.inversion.registration.*field); },
          [name, field](RunConfig& c, const std::string& v) {
            c.inversion.registration.*field = to_int<int>(name, v);
          }};
}

std::vector<Knob> make_knobs() {
  std::vector<Knob> k;
  k.push_back({"basis", "deformation basis: sh:<degree> or pca:<BASIS file>",
               [](const RunConfig& c) { return c.basis; },
               [](RunConfig& c, const std::string& v) {
                 if (v.rfind("sh:", 0) == 0) {
                   c.inversion.max_degree = to_int<int>("basis", v.substr(3));
                 } else if (v.rfind("pca:", 0) != 0 || v.size() == 4) {
                   throw bad_value("basis", v, "sh:<degree> or pca:<file>");
                 }
                 c.basis = v;
               }});
  k.push_back({"init", "initial surface: sphere, star, or a surface file",
               [](const RunConfig& c) { return c.init; }, [](RunConfig& c, const std::string& v) {
                 if (v.empty()) throw bad_value("init", v, "sphere, star or a path");
                 c.init = v;
               }});
  k.push_back(int_knob("levels", "multiresolution levels (1 disables the pyramid)", &InversionConfig::n_levels));
  k.push_back(int_knob("scales", "rungs of the SRNF ladder on the coarsest level", &InversionConfig::n_scales));
  k.push_back(int_knob("max_iters_coarse", "iteration cap per stage below the finest level",
                       &InversionConfig::max_iters_coarse));
  k.push_back(int_knob("max_iters_fine", "iteration cap on the finest level of a pyramid",
                       &InversionConfig::max_iters_fine));
  k.push_back(real_knob("tolerance", "relative energy decrease counted as stalled", &InversionConfig::tolerance));
  k.push_back(int_knob("patience", "stalled iterations before a stage stops", &InversionConfig::patience));
  k.push_back(real_knob("absolute_tolerance", "energy/|q|^2 treated as zero", &InversionConfig::absolute_tolerance));
  k.push_back({"step_rule", "first trial step: bb or normalized",
               [](const RunConfig& c) {
                 return c.inversion.step_rule == StepRule::barzilai_borwein ? "bb" : "normalized";
               },
               [](RunConfig& c, const std::string& v) {
                 if (v == "bb") {
                   c.inversion.step_rule = StepRule::barzilai_borwein;
                 } else if (v == "normalized") {
                   c.inversion.step_rule = StepRule::normalized;
                 } else {
                   throw bad_value("step_rule", v, "bb or normalized");
                 }
               }});
  k.push_back(real_knob("initial_step", "trial step scale when no BB length exists", &InversionConfig::initial_step));
  k.push_back(int_knob("max_halvings", "backtracking halvings per iteration", &InversionConfig::max_halvings));
  k.push_back(real_knob("sobolev_weight", "SH degree damping of the descent direction (0 = plain L2)",
                        &InversionConfig::sobolev_weight));
  k.push_back(int_knob("realign_every", "iterations between alignment refinements (0 = never)",
                       &InversionConfig::realign_every));
  k.push_back(bool_knob("register_target", "global registration before the first stage",
                        &InversionConfig::register_target));
  k.push_back(bool_knob("pin_centroid", "translate each stage result to the origin", &InversionConfig::pin_centroid));
  k.push_back(reg_knob("restarts", "registration restart rotations", &RegistrationOptions::n_restarts));
  k.push_back(reg_knob("refined", "restarts that receive local refinement", &RegistrationOptions::n_refined));
  k.push_back(reg_knob("refine_iters", "local refinement iterations", &RegistrationOptions::refine_iters));
  k.push_back({"seed", "seed of the single random generator", [](const RunConfig& c) { return std::to_string(c.seed); },
               [](RunConfig& c, const std::string& v) { c.seed = to_int<std::uint64_t>("seed", v); }});
  k.push_back({"threads", "worker thread cap (0 = all cores)",
               [](const RunConfig& c) { return std::to_string(c.threads); },
               [](RunConfig& c, const std::string& v) {
                 c.threads = to_int<int>("threads", v);
                 if (c.threads < 0) throw bad_value("threads", v, "a non-negative integer");
               }});
  return k;
}

}  // namespace

const std::vector<Knob>& knobs() {
  static const std::vector<Knob> k = make_knobs();
  return k;
}

std::string flag_name(const Knob& k) {
  std::string s = "--" + k.name;
  for (char& c : s) {
    if (c == '_') c = '-';
  }
  return s;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& k : knobs()) {
    if (k.name == key) {
      k.set(cfg, value);
      return;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown key '" + key + "'");
}

void apply_config(RunConfig& cfg, std::istream& in) {
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(number) + ": expected 'key = value'");
    }
    try {
      apply_setting(cfg, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(number) + ": " + detail(e));
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config '" + path + "'");
  try {
    apply_config(cfg, in);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, path + ": " + detail(e));
  }
}

InversionConfig resolve_inversion(const RunConfig& cfg) {
  InversionConfig inv = cfg.inversion;
  if (cfg.basis.rfind("pca:", 0) == 0) {
    inv.basis_kind = BasisKind::pca;
    inv.basis = std::make_shared<const BasisSet>(io::load_basis(cfg.basis.substr(4)));
  } else {
    inv.basis_kind = BasisKind::spherical_harmonic;
    inv.basis.reset();
  }
  return inv;
}

}  // namespace srnf::cli
