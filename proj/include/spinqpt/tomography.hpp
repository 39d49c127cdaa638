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

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinqpt/blockade.hpp"
#include "spinqpt/dynamics.hpp"
#include "spinqpt/process_matrix.hpp"

namespace spinqpt {

/// A tomography design that cannot determine every state parameter.
class ConfigurationError : public std::runtime_error {
 public:
  ConfigurationError(const std::string& what, int achieved_rank)
      : std::runtime_error(what), achieved_rank_(achieved_rank) {}
  int achieved_rank() const { return achieved_rank_; }

 private:
  int achieved_rank_;
};

/// Orthonormal Hermitian basis σ_a ⊗ σ_b / 2, a, b ∈ {1, x, y, z}, a-major.
const std::array<Op4, 16>& hermitian_basis();

/// Sequences, their ideal effects, and the real design matrix whose rows are
/// Tr[E_i B_j] for each effect followed by the normalization row Tr[B_j].
struct TomographyDesign {
  std::vector<MeasureSequence> sequences;
  std::vector<Op4> effects;
  Eigen::MatrixXd design_matrix;

  int rank() const;
};

/// Builds the design matrix for arbitrary sequences. Throws
/// ConfigurationError if the rank is below 16.
TomographyDesign make_design(std::vector<MeasureSequence> sequences, double g);

/// Rank of the design matrix built from `sequences` (plus normalization).
int design_rank(const std::vector<MeasureSequence>& sequences, double g);

/// The shipped 15-sequence design. Each sequence reads the edge qubit, swaps
/// the qubits with a quarter-period exchange step, and reads again, so X and
/// A are each measured once in one of {z↑, z↓, x↑, y↑} (the pair z↓z↓ is
/// implied by normalization). Only global rotations are used. Sequence #1 is
/// [P↑, E(π/4g), P↑], whose effect is |1⟩⟨1|.
TomographyDesign design_sequences(double g);

/// Linear inversion with the ideal effects. `probabilities` has one entry
/// per sequence; the normalization Tr ρ = 1 is appended internally. The
/// result is Hermitian but not repaired to be positive.
Op4 reconstruct_state(const std::vector<double>& probabilities,
                      const TomographyDesign& design);

/// Labels of the sixteen preparable inputs.
struct QptLabel {
  enum class Kind { Diagonal, Plus, Minus };
  Kind kind = Kind::Diagonal;
  int m = 1;  // 1-based
  int n = 1;  // 1-based, m < n for superpositions

  auto operator<=>(const QptLabel&) const = default;
  std::string name() const;
};

struct QptInput {
  QptLabel label;
  Ket4 ket;
  DensityMatrix4 density() const { return DensityMatrix4::pure(ket); }
};

/// |m⟩ for m = 1..4, then |+;mn⟩ = (|m⟩+|n⟩)/√2 and |−;mn⟩ = (|m⟩+i|n⟩)/√2
/// for m < n.
std::vector<QptInput> qpt_input_states();

/// 𝓔(E_mn) from the outputs on the sixteen inputs, by linearity:
/// 𝓔(E_mn) = 𝓔(+;mn) + i 𝓔(−;mn) − (1+i)/2 (𝓔(m) + 𝓔(n)) for m ≠ n, and
/// 𝓔(E_nm) = 𝓔(E_mn)†. Throws std::invalid_argument if an input is missing.
ChannelAction assemble_channel_action(const std::map<QptLabel, Op4>& outputs);

enum class QptMethod { Pipeline, ClosedForm, MonteCarlo };

std::string to_string(QptMethod method);
/// Accepts "pipeline", "closed-form"/"closed_form", "montecarlo"/"monte_carlo".
QptMethod parse_qpt_method(std::string_view text);

struct QptOptions {
  QptMethod method = QptMethod::Pipeline;
  McOptions mc;
  FluctuationMode fluctuation = FluctuationMode::IndependentSegments;
};

struct QptResult {
  ProcessMatrix chi;
  /// Sequence probabilities, [input][sequence], empty for closed form.
  std::vector<std::vector<double>> probabilities;
  /// Monte Carlo only: standard errors of the probabilities and of the χ
  /// entries (real and imaginary parts).
  std::vector<std::vector<double>> probability_std_errors;
  std::optional<Eigen::Matrix<double, 16, 16>> chi_std_error_real;
  std::optional<Eigen::Matrix<double, 16, 16>> chi_std_error_imag;
};

/// Full process tomography of the noisy CNOT with the shipped design.
QptResult run_qpt(const NoiseParams& noise, const QptOptions& options = {});
QptResult run_qpt(const NoiseParams& noise, const QptOptions& options,
                  const TomographyDesign& design);

/// Reconstructed output for input (|1⟩+|3⟩)/√2 with polarization r.
Op4 entanglement_probe_state(const TomographyDesign& design, double r,
                             double gdtau);

struct ThresholdSample {
  double r = 0.0;
  double min_pt_eigenvalue = 0.0;
  double negativity = 0.0;
};

struct ThresholdResult {
  bool found = false;
  double r_star = 0.0;
  ThresholdSample at_zero;
  ThresholdSample at_one;
  /// The coarse bracketing grid, ascending in r.
  std::vector<ThresholdSample> curve;
  /// Every bisection evaluation, in order.
  std::vector<ThresholdSample> history;
};

/// Smallest r whose reconstructed probe state is entangled (negative partial
/// transpose), located by a 64-step scan of [0, 1] followed by bisection to
/// `tolerance`. Throws std::invalid_argument if tolerance ≤ 0.
ThresholdResult entanglement_threshold(const TomographyDesign& design,
                                       double gdtau, double tolerance = 1e-4);

}  // namespace spinqpt
