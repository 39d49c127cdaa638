// Copyright 2026 The spinqpt Authors
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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace spinqpt::cli {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv };

struct RunConfig {
  std::string subcommand;
  double r = 1.0;
  double gdtau = 0.0;
  // Set when --gdtau was given explicitly (sweeps otherwise use 0 and 0.1).
  bool gdtau_given = false;
  // Empty means the subcommand's default.
  std::string method;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double r_min = 0.0;
  double r_max = 1.0;
  int r_steps = 21;
  std::string out;
  Format format = Format::Json;
  unsigned jobs = 0;
  // Verification tolerance, or the bisection tolerance in r for
  // entanglement-threshold. Unset means the subcommand's default.
  std::optional<double> tol;
  std::optional<double> g_mev;
  bool timing = false;
  // Negative-control hook for ideal-check.
  double inject_angle_error = 0.0;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  std::vector<double> r_grid() const;
};

struct Report {
  Json json;
  // Tabular form, when the command has one.
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
  int status = 0;
};

Report cmd_ideal_check(const RunConfig& cfg);
Report cmd_qpt(const RunConfig& cfg);
Report cmd_fidelity_sweep(const RunConfig& cfg);
Report cmd_entanglement_threshold(const RunConfig& cfg);
Report cmd_chi_grid(const RunConfig& cfg);

/// Serialized report. CSV uses 12 significant digits; JSON uses shortest
/// round-trip doubles.
std::string render(const Report& report, Format format);

std::string version();

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinqpt::cli
