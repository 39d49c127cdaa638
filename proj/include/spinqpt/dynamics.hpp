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

#include <numbers>

#include "spinqpt/montecarlo.hpp"
#include "spinqpt/qcore.hpp"

namespace spinqpt {

/// Noise model. Units: ħ = 1, times in units of 1/g. Only the product
/// g·delta_tau enters any result.
struct NoiseParams {
  double g = 1.0;
  double delta_tau = 0.0;
  double r = 1.0;

  /// Builds parameters from the dimensionless g·Δτ with g = 1.
  static NoiseParams from_dimensionless(double r, double gdtau);

  /// Throws std::invalid_argument unless g > 0, Δτ ≥ 0 and 0 ≤ r ≤ 1.
  void validate() const;
  double gdtau() const { return g * delta_tau; }
  /// Dephasing factor d = exp(-2 (g Δτ)^2).
  double dephasing() const;
};

/// Mean durations fixed by the exchange energy.
struct GateSchedule {
  double g = 1.0;
  /// Total exchange time of the σzσz stage of the CNOT.
  double tau0_cnot() const { return 3.0 * std::numbers::pi / (4.0 * g); }
  /// Free-evolution step used inside tomography sequences (a SWAP up to phase).
  double tau0_tomo() const { return std::numbers::pi / (4.0 * g); }
};

/// H = g (σx⊗σx + σy⊗σy + σz⊗σz).
Op4 exchange_hamiltonian(double g);

/// exp(-i H t) through the eigendecomposition. Throws std::invalid_argument
/// if H is not Hermitian within 1e-10.
Op4 evolve_unitary(const Op4& hamiltonian, double t);

/// exp(-i θ σ_axis / 2) on one qubit.
Op4 local_rotation(Qubit qubit, Axis axis, double theta);
/// The same rotation applied to both qubits.
Op4 global_rotation(Axis axis, double theta);

Op4 hadamard(Qubit qubit);

/// exp(-i g t σz^X σz^A).
Op4 isolated_zz_unitary(double g, double t);

/// R_z^X(π) exp(-iHt/2) R_z^X(π) exp(-iHt/2). Equals exp(-i g t σzσz) up to
/// a global phase.
Op4 term_isolation_unitary(double g, double t);

/// Same sequence with the two exchange segments of independent durations
/// (first segment applied first).
Op4 term_isolation_segments(double g, double first, double second);

/// |↑⟩⟨↑| ⊗ 1 + |↓⟩⟨↓| ⊗ σx: X controls, A is the target.
Op4 cnot_reference();

/// Gates applied before and after the σzσz stage of the synthesized CNOT.
Op4 cnot_pre_gates();
Op4 cnot_post_gates();

/// H^A R_z^X(π/2) R_z^A(π/2) exp(-i (3π/4) σzσz) H^A, with the σzσz stage
/// realized by term isolation at t = 3π/(4g). `angle_error` perturbs both
/// R_z angles and exists only for negative-control checks.
Op4 cnot_unitary(double g, double angle_error = 0.0);

/// Largest phase-invariant distance 1 − |Tr(U†V)|/4.
double phase_invariant_distance(const Op4& u, const Op4& v);

/// ⟨U(τ) ρ U(τ)†⟩ for U(τ) = exp(-iHτ), τ ~ N(tau0, delta_tau²), averaged
/// exactly: the coherence between eigenstates with gap ΔE picks up
/// exp(-iΔE τ0) exp(-(ΔE Δτ)²/2).
QuantumChannel gaussian_averaged_channel(const Op4& hamiltonian, double tau0,
                                         double delta_tau);

/// Where the CNOT timing noise enters.
enum class FluctuationMode {
  /// Both exchange segments of the term-isolation sequence fluctuate
  /// independently, each with duration ~ N(τ0/2, (Δτ/2)²).
  IndependentSegments,
  /// Only the effective σzσz exponent fluctuates, τ ~ N(τ0, Δτ²).
  EffectiveExponent,
};

/// The CNOT with Gaussian timing noise, averaged analytically. Local gates
/// are exact.
QuantumChannel noisy_cnot_channel(
    const NoiseParams& noise,
    FluctuationMode mode = FluctuationMode::IndependentSegments);

/// Gaussian draw with mean tau0 and standard deviation delta_tau. Negative
/// values are returned as drawn.
double sample_duration(double tau0, double delta_tau, Rng& rng);

/// Fast exp(-iHt) for a fixed Hermitian H at many times t.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const Op4& hamiltonian);

  Op4 unitary(double t) const;
  Ket4 apply(const Ket4& psi, double t) const;
  const Eigen::Vector4d& energies() const { return energies_; }
  const Op4& eigenvectors() const { return vectors_; }

 private:
  Eigen::Vector4d energies_;
  Op4 vectors_;
};

/// Draws one CNOT unitary under the given fluctuation mode.
Op4 sample_noisy_cnot_unitary(const NoiseParams& noise, FluctuationMode mode,
                              Rng& rng);

/// Monte Carlo estimate of the Gaussian-averaged channel: entrywise mean
/// superoperator and standard errors (real and imaginary parts separately).
struct ChannelEstimate {
  Super16 mean;
  Eigen::Matrix<double, 16, 16> std_error_real;
  Eigen::Matrix<double, 16, 16> std_error_imag;
};
ChannelEstimate monte_carlo_averaged_channel(const Op4& hamiltonian, double tau0,
                                             double delta_tau,
                                             const McOptions& opts);

/// τ = π/(4g) in picoseconds for g given in meV. Reporting only.
double tomography_step_picoseconds(double g_mev);

}  // namespace spinqpt
