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
#include <string>
#include <utility>

#include "spinqpt/qcore.hpp"

namespace spinqpt {

using Chi16 = Eigen::Matrix<Complex, 16, 16>;

/// Row/column ordering of χ, 1-based operator labels (m, n) for E_mn.
inline constexpr std::array<std::pair<int, int>, 16> kChiOrdering{{
    {1, 1}, {2, 2}, {3, 3}, {4, 4},
    {1, 2}, {2, 1}, {3, 4}, {4, 3},
    {1, 3}, {3, 1}, {2, 4}, {4, 2},
    {1, 4}, {4, 1}, {2, 3}, {3, 2},
}};

/// Position of E_mn (1-based m, n) in kChiOrdering.
int chi_index(int m, int n);
/// "E11", "E22", ... in ordering.
std::array<std::string, 16> chi_labels();

/// Channel action on every basis operator: action[k][l] = 𝓔(|k⟩⟨l|),
/// 0-based.
using ChannelAction = std::array<std::array<Op4, 4>, 4>;

/// χ_{mn,kl} = ⟨m|𝓔(|k⟩⟨l|)|n⟩, rows indexed by output (m,n) and columns by
/// input (k,l), both in kChiOrdering.
class ProcessMatrix {
 public:
  ProcessMatrix() : chi_(Chi16::Zero()) {}
  explicit ProcessMatrix(const Chi16& chi) : chi_(chi) {}

  static ProcessMatrix from_action(const ChannelAction& action);
  static ProcessMatrix from_channel(const QuantumChannel& ch);

  const Chi16& matrix() const { return chi_; }
  /// 1-based indices, χ_{mn,kl}.
  Complex element(int m, int n, int k, int l) const;

  /// max |χ_{mn,kl} − conj(χ_{nm,lk})|
  double hermiticity_symmetry_error() const;
  /// max |Σ_m χ_{mm,kl} − δ_kl|
  double trace_preservation_error() const;

 private:
  Chi16 chi_;
};

ProcessMatrix ideal_cnot_process_matrix();

/// (1/16) Re Σ conj(χ_ideal[mn,kl]) χ[mn,kl].
double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& chi_ideal);

double max_abs_deviation(const ProcessMatrix& a, const ProcessMatrix& b);

}  // namespace spinqpt
