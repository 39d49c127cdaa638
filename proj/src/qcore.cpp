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

#include "spinqpt/qcore.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace spinqpt {

namespace {
const Complex kI{0.0, 1.0};
}  // namespace

Ket4 basis_ket(int index) {
  if (index < 0 || index > 3) {
    throw std::out_of_range("basis_ket: index " + std::to_string(index));
  }
  Ket4 k = Ket4::Zero();
  k(index) = 1.0;
  return k;
}

Op4 basis_op(int m, int n) { return basis_ket(m) * basis_ket(n).adjoint(); }

Eigen::Matrix2cd pauli(Axis axis) {
  Eigen::Matrix2cd p;
  switch (axis) {
    case Axis::x:
      p << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::y:
      p << 0.0, -kI, kI, 0.0;
      break;
    case Axis::z:
      p << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return p;
}

Op4 embed(Qubit qubit, const Eigen::Matrix2cd& op) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd& left = qubit == Qubit::X ? op : id;
  const Eigen::Matrix2cd& right = qubit == Qubit::X ? id : op;
  Op4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = left(i, j) * right;
    }
  }
  return out;
}

Op4 edge_projector(bool up) {
  Op4 p = Op4::Zero();
  const int offset = up ? 0 : 2;
  p(offset, offset) = 1.0;
  p(offset + 1, offset + 1) = 1.0;
  return p;
}

Op4 adjoint(const Op4& m) { return m.adjoint(); }

double hermiticity_error(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermiticity_error: matrix is not square");
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Vec16 vectorize(const Op4& rho) {
  Vec16 v;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      v(i + 4 * j) = rho(i, j);
    }
  }
  return v;
}

Op4 unvectorize(const Vec16& v) {
  Op4 rho;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      rho(i, j) = v(i + 4 * j);
    }
  }
  return rho;
}

// ---------------------------------------------------------------------------
// DensityMatrix4

DensityMatrix4::DensityMatrix4(const Op4& mat) : mat_(mat) {
  if (hermiticity_error(mat_) > tol::kStructural) {
    throw std::invalid_argument("DensityMatrix4: matrix is not Hermitian");
  }
  if (std::abs(mat_.trace() - 1.0) > tol::kStructural) {
    throw std::invalid_argument("DensityMatrix4: trace is not 1");
  }
  if (hermitian_eigenvalues(mat_).minCoeff() < -tol::kStructural) {
    throw std::invalid_argument("DensityMatrix4: negative eigenvalue");
  }
}

DensityMatrix4 DensityMatrix4::pure(const Ket4& ket) {
  const Ket4 n = ket.normalized();
  return DensityMatrix4(n * n.adjoint());
}

double DensityMatrix4::purity() const { return (mat_ * mat_).trace().real(); }

// ---------------------------------------------------------------------------
// QuantumChannel

QuantumChannel QuantumChannel::identity() {
  QuantumChannel ch;
  ch.superop_ = Super16::Identity();
  ch.kraus_ = std::vector<Op4>{Op4::Identity()};
  return ch;
}

QuantumChannel QuantumChannel::unitary(const Op4& u) {
  return from_kraus({u});
}

QuantumChannel QuantumChannel::from_kraus(std::vector<Op4> kraus) {
  if (kraus.empty()) {
    throw std::invalid_argument("QuantumChannel: empty Kraus list");
  }
  QuantumChannel ch;
  // vec(A ρ A†) = (conj(A) ⊗ A) vec(ρ) under column stacking.
  for (const Op4& a : kraus) {
    const Op4 ac = a.conjugate();
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        ch.superop_.block<4, 4>(4 * i, 4 * j) += ac(i, j) * a;
      }
    }
  }
  ch.kraus_ = std::move(kraus);
  return ch;
}

QuantumChannel QuantumChannel::from_superop(const Super16& superop) {
  QuantumChannel ch;
  ch.superop_ = superop;
  return ch;
}

Op4 QuantumChannel::apply(const Op4& rho) const {
  return unvectorize(superop_ * vectorize(rho));
}

QuantumChannel QuantumChannel::then(const QuantumChannel& next) const {
  QuantumChannel ch;
  ch.superop_ = next.superop_ * superop_;
  if (kraus_ && next.kraus_) {
    std::vector<Op4> kraus;
    kraus.reserve(kraus_->size() * next.kraus_->size());
    for (const Op4& b : *next.kraus_) {
      for (const Op4& a : *kraus_) {
        kraus.push_back(b * a);
      }
    }
    ch.kraus_ = std::move(kraus);
  }
  return ch;
}

CMatrix apply_channel(const QuantumChannel& ch, const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("apply_channel: expected a 4x4 operator, got " +
                                std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()));
  }
  return ch.apply(Op4(rho));
}

Eigen::Matrix<Complex, 16, 16> choi_matrix(const QuantumChannel& ch) {
  Eigen::Matrix<Complex, 16, 16> choi = Eigen::Matrix<Complex, 16, 16>::Zero();
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      choi.block<4, 4>(4 * k, 4 * l) = ch.apply(basis_op(k, l));
    }
  }
  return choi;
}

double trace_preservation_error(const QuantumChannel& ch) {
  double err = 0.0;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      const Complex expected = k == l ? 1.0 : 0.0;
      err = std::max(err, std::abs(ch.apply(basis_op(k, l)).trace() - expected));
    }
  }
  return err;
}

bool is_cptp(const QuantumChannel& ch, double tolerance) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("is_cptp: tolerance must be positive");
  }
  if (trace_preservation_error(ch) > tolerance) {
    return false;
  }
  const auto choi = choi_matrix(ch);
  if (hermiticity_error(choi) > tolerance) {
    return false;
  }
  return hermitian_eigenvalues(choi).minCoeff() >= -tolerance;
}

Op4 partial_transpose(const Op4& rho, Qubit subsystem) {
  // rho index = 2*x + a
  Op4 out;
  for (int x = 0; x < 2; ++x) {
    for (int a = 0; a < 2; ++a) {
      for (int xp = 0; xp < 2; ++xp) {
        for (int ap = 0; ap < 2; ++ap) {
          const int row = 2 * x + a;
          const int col = 2 * xp + ap;
          if (subsystem == Qubit::A) {
            out(row, col) = rho(2 * x + ap, 2 * xp + a);
          } else {
            out(row, col) = rho(2 * xp + a, 2 * x + ap);
          }
        }
      }
    }
  }
  return out;
}

double min_partial_transpose_eigenvalue(const Op4& rho) {
  return hermitian_eigenvalues(partial_transpose(rho, Qubit::A)).minCoeff();
}

double negativity(const Op4& rho) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(partial_transpose(rho, Qubit::A));
  double n = 0.0;
  for (double e : ev) {
    if (e < 0.0) n -= e;
  }
  return n;
}

}  // namespace spinqpt
