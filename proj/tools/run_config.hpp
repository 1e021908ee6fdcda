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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "srnf/inversion.hpp"

namespace srnf::cli {

/// Every tunable shared by the subcommands. Config files and command-line
/// flags write the same fields; flags are applied after the file.
struct RunConfig {
  InversionConfig inversion;
  /// `sh:<degree>` or `pca:<BASIS file>`.
  std::string basis = "sh:34";
  /// `sphere`, `star`, or an SGRID/OFF path.
  std::string init = "sphere";
  std::uint64_t seed = 0;
  /// 0 uses every hardware thread.
  int threads = 0;
};

struct Knob {
  std::string name;  // config key; the flag is --name with '_' → '-'
  std::string help;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<Knob>& knobs();
std::string flag_name(const Knob& k);

/// Throws InvalidArgument for unknown keys or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// `key = value` lines; '#' starts a comment. Errors carry line numbers.
void apply_config(RunConfig& cfg, std::istream& in);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// cfg.inversion with the basis specification resolved for `spec`.
InversionConfig resolve_inversion(const RunConfig& cfg);

}  // namespace srnf::cli
