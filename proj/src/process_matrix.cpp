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

#include "spinqpt/process_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace spinqpt {

int chi_index(int m, int n) {
  for (int i = 0; i < 16; ++i) {
    if (kChiOrdering[i].first == m && kChiOrdering[i].second == n) return i;
  }
  throw std::out_of_range("chi_index: indices must be in 1..4");
}

std::array<std::string, 16> chi_labels() {
  std::array<std::string, 16> labels;
  for (int i = 0; i < 16; ++i) {
    labels[i] = "E" + std::to_string(kChiOrdering[i].first) +
                std::to_string(kChiOrdering[i].second);
  }
  return labels;
}

ProcessMatrix ProcessMatrix::from_action(const ChannelAction& action) {
  Chi16 chi;
  for (int col = 0; col < 16; ++col) {
    const auto [k, l] = kChiOrdering[col];
    const Op4& out = action[k - 1][l - 1];
    for (int row = 0; row < 16; ++row) {
      const auto [m, n] = kChiOrdering[row];
      chi(row, col) = out(m - 1, n - 1);
    }
  }
  return ProcessMatrix(chi);
}

ProcessMatrix ProcessMatrix::from_channel(const QuantumChannel& ch) {
  ChannelAction action;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) action[k][l] = ch.apply(basis_op(k, l));
  }
  return from_action(action);
}

Complex ProcessMatrix::element(int m, int n, int k, int l) const {
  return chi_(chi_index(m, n), chi_index(k, l));
}

double ProcessMatrix::hermiticity_symmetry_error() const {
  double err = 0.0;
  for (const auto& [m, n] : kChiOrdering) {
    for (const auto& [k, l] : kChiOrdering) {
      err = std::max(err, std::abs(element(m, n, k, l) -
                                   std::conj(element(n, m, l, k))));
    }
  }
  return err;
}

double ProcessMatrix::trace_preservation_error() const {
  double err = 0.0;
  for (const auto& [k, l] : kChiOrdering) {
    Complex sum = 0.0;
    for (int m = 1; m <= 4; ++m) sum += element(m, m, k, l);
    err = std::max(err, std::abs(sum - (k == l ? 1.0 : 0.0)));
  }
  return err;
}

ProcessMatrix ideal_cnot_process_matrix() {
  // Built from the permutation U|k⟩ = |π(k)⟩, π = (1, 2, 4, 3), so that the
  // ideal reference is exact and independent of the gate synthesis.
  constexpr std::array<int, 4> perm{1, 2, 4, 3};
  Chi16 chi = Chi16::Zero();
  for (const auto& [k, l] : kChiOrdering) {
    chi(chi_index(perm[k - 1], perm[l - 1]), chi_index(k, l)) = 1.0;
  }
  return ProcessMatrix(chi);
}

double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& chi_ideal) {
  return chi_ideal.matrix().conjugate().cwiseProduct(chi.matrix()).sum().real() /
         16.0;
}

double max_abs_deviation(const ProcessMatrix& a, const ProcessMatrix& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace spinqpt
