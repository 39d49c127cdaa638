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

#include <array>

#include "spinqpt/process_matrix.hpp"
#include "spinqpt/qcore.hpp"

namespace spinqpt {

/// Every scalar entering the closed-form process matrix. Suffixes spell the
/// sign labels: alpha1_pm is α⁽¹⁾ with subscript "+−".
struct CoefficientSet {
  double r = 1.0;
  double d = 1.0;
  double a_plus = 1.0, a_minus = 0.0;
  double b_plus = 1.0, b_minus = 0.0;
  double c_plus = 1.0, c_minus = 0.0;

  double beta1_plus = 0.0, beta1_minus = 0.0;
  double beta2_plus = 0.0, beta2_minus = 0.0;
  double beta3_plus = 0.0, beta3_minus = 0.0;

  double alpha1_pp = 0.0, alpha1_pm = 0.0, alpha1_mp = 0.0, alpha1_mm = 0.0;
  double alpha2_pp = 0.0, alpha2_pm = 0.0, alpha2_mp = 0.0, alpha2_mm = 0.0;
  double alpha3_pp = 0.0, alpha3_pm = 0.0, alpha3_mp = 0.0, alpha3_mm = 0.0;
  double alpha4_plus = 0.0, alpha4_minus = 0.0;
  double alpha5_plus = 0.0, alpha5_minus = 0.0;
  Complex alpha6_plus, alpha6_minus;
};

/// Throws std::invalid_argument unless 0 ≤ r ≤ 1 and gdtau ≥ 0.
CoefficientSet coefficients(double r, double gdtau);

/// The eleven 4×4 blocks M1..M11 (without the global 1/4).
struct ChiBlocks {
  std::array<Op4, 11> blocks;
  const Op4& M(int i) const { return blocks.at(static_cast<std::size_t>(i - 1)); }
};

ChiBlocks chi_blocks(const CoefficientSet& c);

/// χ(r, Δτ) = ¼ [[M1, M7, 0, 0], [M8, M2, 0, 0], [M9, M10, M5, M3],
///              [M11, 0, M4, M6]] in kChiOrdering.
ProcessMatrix chi_closed_form(double r, double gdtau);

/// The explicit single-element expression for χ_{11,11}, evaluated
/// independently of the block assembly.
double chi_1111(double r, double gdtau);

/// Averaged noisy-CNOT output for input |1⟩⟨1|, as printed:
/// (1/8){(1+d)(3+d)|1⟩⟨1| + (1−d)(3−d)|2⟩⟨2|
///       + (1−d²)(|3⟩⟨3| + |4⟩⟨4| + |1⟩⟨2| + h.c.)}.
Op4 averaged_cnot_output_11(double gdtau);

/// F(r, Δτ) = (1/32){α⁽¹⁾₊₊ + α⁽²⁾₊₊ + 2(2c₊rα⁽³⁾₊₊ + c₊²rα⁽⁴⁾₊ + c₊r²α⁽⁵⁾₊)}.
double fidelity_closed_form(double r, double gdtau);

}  // namespace spinqpt
