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

#include <sstream>

#include "doctest.h"
#include "run_config.hpp"

using namespace srnf;
using srnf::cli::RunConfig;

namespace {

std::string config_error(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  try {
    cli::apply_config(cfg, in);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config file sets knobs and skips comments") {
  RunConfig cfg;
  std::istringstream in(
      "# inversion\n"
      "levels = 2\n"
      "  scales=3   # inline comment\n"
      "\n"
      "step_rule = normalized\n"
      "tolerance = 1e-6\n"
      "pin_centroid = false\n"
      "basis = sh:12\n"
      "restarts = 24\n"
      "seed = 99\n");
  cli::apply_config(cfg, in);
  CHECK(cfg.inversion.n_levels == 2);
  CHECK(cfg.inversion.n_scales == 3);
  CHECK(cfg.inversion.step_rule == StepRule::normalized);
  CHECK(cfg.inversion.tolerance == 1e-6);
  CHECK_FALSE(cfg.inversion.pin_centroid);
  CHECK(cfg.inversion.max_degree == 12);
  CHECK(cfg.inversion.registration.n_restarts == 24);
  CHECK(cfg.seed == 99);
}

TEST_CASE("config errors name the line") {
  CHECK(config_error("levels = 2\nbogus = 1\n").find("line 2: unknown key 'bogus'") != std::string::npos);
  CHECK(config_error("levels 2\n").find("line 1") != std::string::npos);
  CHECK(config_error("\n\nlevels = two\n").find("line 3") != std::string::npos);
  CHECK(config_error("register_target = maybe\n").find("line 1") != std::string::npos);
  CHECK(config_error("basis = legendre:3\n").find("line 1") != std::string::npos);
  CHECK(config_error("threads = -1\n").find("line 1") != std::string::npos);
  CHECK(config_error("levels = 2\n").empty());
}

TEST_CASE("every knob round-trips its default and has a flag") {
  const RunConfig defaults;
  for (const auto& k : cli::knobs()) {
    CAPTURE(k.name);
    RunConfig c;
    cli::apply_setting(c, k.name, k.get(defaults));
    CHECK(k.get(c) == k.get(defaults));
    CHECK(cli::flag_name(k).rfind("--", 0) == 0);
    CHECK(cli::flag_name(k).find('_') == std::string::npos);
  }
  RunConfig c;
  CHECK_THROWS_AS(cli::apply_setting(c, "nonexistent", "1"), Error);
}

TEST_CASE("defaults mirror the library configuration") {
  const RunConfig rc;
  const InversionConfig inv;
  CHECK(rc.inversion.n_levels == inv.n_levels);
  CHECK(rc.inversion.max_degree == 34);
  const InversionConfig resolved = cli::resolve_inversion(rc);
  CHECK(resolved.basis_kind == BasisKind::spherical_harmonic);
  CHECK_FALSE(resolved.basis);
}
