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
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spinqpt {

using Complex = std::complex<double>;

/// General dense complex matrix. Used at API boundaries where the shape is
/// only known at runtime.
using CMatrix = Eigen::MatrixXcd;

/// Operator on the two-qubit space (X ⊗ A).
using Op4 = Eigen::Matrix4cd;
using Ket4 = Eigen::Vector4cd;

/// Superoperator acting on column-stacked 4×4 operators.
using Super16 = Eigen::Matrix<Complex, 16, 16>;
using Vec16 = Eigen::Matrix<Complex, 16, 1>;

namespace tol {
inline constexpr double kStructural = 1e-10;
inline constexpr double kCrossMethod = 1e-12;
inline constexpr double kChoiSlack = 1e-9;
}  // namespace tol

enum class Qubit { X, A };
enum class Axis { x, y, z };

// Basis ordering shared by every module: index 0..3 is |1⟩..|4⟩ =
// |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩, first spin is the edge qubit X, second is A.
// Spin up is the +1 eigenstate of σz.
inline constexpr std::array<std::string_view, 4> kBasisLabels{"uu", "ud", "du",
                                                              "dd"};

Ket4 basis_ket(int index);
/// |m⟩⟨n| with 0-based indices.
Op4 basis_op(int m, int n);

/// 2×2 Pauli matrix for the given axis.
Eigen::Matrix2cd pauli(Axis axis);
/// Embeds a single-qubit operator on `qubit`, identity on the other.
Op4 embed(Qubit qubit, const Eigen::Matrix2cd& op);
/// Projector onto spin up (or down) of the edge qubit X.
Op4 edge_projector(bool up);

Op4 adjoint(const Op4& m);
double hermiticity_error(const CMatrix& m);

/// Eigenvalues of (M + M†)/2, ascending.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m);

/// Column-stacking vectorization: vec(ρ)[i + 4j] = ρ(i, j).
Vec16 vectorize(const Op4& rho);
Op4 unvectorize(const Vec16& v);

/// Validated two-qubit density matrix: Hermitian, unit trace and positive
/// semidefinite, each within 1e-10. Construction throws std::invalid_argument
/// on violation. Reconstructed tomography outputs, which need not be
/// physical, are carried as plain Op4 instead.
class DensityMatrix4 {
 public:
  explicit DensityMatrix4(const Op4& mat);
  static DensityMatrix4 pure(const Ket4& ket);

  const Op4& matrix() const { return mat_; }
  Complex operator()(int i, int j) const { return mat_(i, j); }
  double purity() const;

 private:
  Op4 mat_;
};

/// A linear map on 4×4 operators stored as a 16×16 superoperator, with an
/// optional Kraus decomposition.
class QuantumChannel {
 public:
  static QuantumChannel identity();
  static QuantumChannel unitary(const Op4& u);
  /// Throws std::invalid_argument if the Kraus list is empty.
  static QuantumChannel from_kraus(std::vector<Op4> kraus);
  static QuantumChannel from_superop(const Super16& superop);

  const Super16& superop() const { return superop_; }
  const std::optional<std::vector<Op4>>& kraus() const { return kraus_; }

  Op4 apply(const Op4& rho) const;

  /// `next ∘ this`: apply this channel first, then `next`.
  QuantumChannel then(const QuantumChannel& next) const;

 private:
  QuantumChannel() = default;

  Super16 superop_ = Super16::Zero();
  std::optional<std::vector<Op4>> kraus_;
};

/// Applies the channel to a runtime-shaped operator. Throws
/// std::invalid_argument unless `rho` is 4×4.
CMatrix apply_channel(const QuantumChannel& ch, const CMatrix& rho);

/// Unnormalized Choi matrix Σ_kl |k⟩⟨l| ⊗ 𝓔(|k⟩⟨l|); trace 4 for a
/// trace-preserving map. Rows/cols are indexed input-major: 4k + m.
Eigen::Matrix<Complex, 16, 16> choi_matrix(const QuantumChannel& ch);

/// Largest deviation of Tr 𝓔(|k⟩⟨l|) from δ_kl.
double trace_preservation_error(const QuantumChannel& ch);

/// Completely positive and trace preserving within `tolerance`. Throws
/// std::invalid_argument if tolerance ≤ 0.
bool is_cptp(const QuantumChannel& ch, double tolerance);

/// Transpose on one tensor factor.
Op4 partial_transpose(const Op4& rho, Qubit subsystem);

/// Smallest eigenvalue of the partial transpose on A; negative iff a
/// two-qubit state is entangled.
double min_partial_transpose_eigenvalue(const Op4& rho);

/// Sum of |negative eigenvalues| of the partial transpose.
double negativity(const Op4& rho);

}  // namespace spinqpt
