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

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spinqpt/dynamics.hpp"
#include "spinqpt/montecarlo.hpp"
#include "spinqpt/qcore.hpp"

namespace spinqpt {

/// Spin state declared by a blockade readout of the edge qubit.
enum class Outcome { Up, Down };

struct Project {
  Outcome declared = Outcome::Up;
  bool operator==(const Project&) const = default;
};

/// Free exchange evolution; mean duration in units of 1/g.
struct Evolve {
  double mean_time = std::numbers::pi / 4.0;
  bool operator==(const Evolve&) const = default;
};

enum class RotationScope { X, A, Global };

struct Rotate {
  RotationScope scope = RotationScope::Global;
  Axis axis = Axis::x;
  double theta = 0.0;
  bool operator==(const Rotate&) const = default;
};

using MeasurePrimitive = std::variant<Project, Evolve, Rotate>;

/// An ordered measurement experiment. Invariants (checked on construction,
/// std::invalid_argument otherwise): at least one step, the last step is a
/// Project, every Evolve has mean_time > 0 and every Rotate a finite angle.
class MeasureSequence {
 public:
  explicit MeasureSequence(std::vector<MeasurePrimitive> steps);

  const std::vector<MeasurePrimitive>& steps() const { return steps_; }
  std::size_t projection_count() const;

  bool operator==(const MeasureSequence&) const = default;

 private:
  std::vector<MeasurePrimitive> steps_;
};

/// Branch weights of the polarization-limited readout.
struct BranchWeight {
  double correct = 1.0;
  double error = 0.0;
  static BranchWeight from_polarization(double r);
};

/// (1+r)/2 · P_d ρ P_d + (1−r)/2 · P_d̄ ρ P_d̄ for declared outcome d. Not
/// normalized: the trace is the probability of the declaration.
Op4 blockade_map(const Op4& rho, Outcome declared, double r);

/// Joint probability that every Project step reports its declared outcome.
/// Evolve steps use the Gaussian-averaged exchange channel, rotations are
/// exact. Linear in `rho`, so any operator is accepted.
double sequence_probability(const MeasureSequence& seq, const Op4& rho,
                            const NoiseParams& noise);
double sequence_probability(const MeasureSequence& seq,
                            const DensityMatrix4& rho, const NoiseParams& noise);

/// Monte Carlo estimate: one Gaussian duration per Evolve step and one
/// readout branch per Project step, per sample.
McEstimate sequence_probability_mc(const MeasureSequence& seq, const Op4& rho,
                                   const NoiseParams& noise,
                                   const McOptions& opts,
                                   std::uint64_t stream = 0);
McEstimate sequence_probability_mc(const MeasureSequence& seq, const Ket4& psi,
                                   const NoiseParams& noise,
                                   const McOptions& opts,
                                   std::uint64_t stream = 0);

/// E with Tr[Eρ] equal to the noiseless success probability.
Op4 ideal_effect_operator(const MeasureSequence& seq, double g);

/// A sequence with its step operators precomputed for one noise setting.
/// Used by the evaluators above and by the tomography Monte Carlo path.
class SequenceRunner {
 public:
  SequenceRunner(const MeasureSequence& seq, const NoiseParams& noise);

  double probability(const Op4& rho) const;
  /// One trajectory; the returned weight has mean equal to probability().
  double sample(const Op4& rho, Rng& rng) const;
  double sample(const Ket4& psi, Rng& rng) const;

 private:
  struct Step {
    enum class Kind { Project, Evolve, Rotate } kind;
    Outcome declared = Outcome::Up;
    double mean_time = 0.0;
    Op4 rotation = Op4::Identity();
    int evolve_index = -1;
  };

  NoiseParams noise_;
  std::vector<Step> steps_;
  std::vector<SpectralPropagator> propagators_;
  std::vector<QuantumChannel> averaged_;
};

// Text form, one primitive per line:
//   P+ | P- | E <mean time in units of 1/g> | R <X|A|G> <x|y|z> <theta>
// Blank lines and lines starting with '#' are ignored when parsing.
std::string to_text(const MeasureSequence& seq);
/// Throws std::invalid_argument with the offending line number.
MeasureSequence parse_sequence(std::string_view text);

}  // namespace spinqpt
