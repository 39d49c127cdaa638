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

#include "spinqpt/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace spinqpt {

namespace {

const Complex kI{0.0, 1.0};

// ħ in meV·ps.
constexpr double kHbarMevPs = 0.6582119569;

Op4 rz_x_pi() { return local_rotation(Qubit::X, Axis::z, std::numbers::pi); }

}  // namespace

NoiseParams NoiseParams::from_dimensionless(double r, double gdtau) {
  NoiseParams p{1.0, gdtau, r};
  p.validate();
  return p;
}

void NoiseParams::validate() const {
  if (!(g > 0.0)) throw std::invalid_argument("NoiseParams: g must be > 0");
  if (!(delta_tau >= 0.0)) {
    throw std::invalid_argument("NoiseParams: delta_tau must be >= 0");
  }
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("NoiseParams: r must lie in [0, 1]");
  }
}

double NoiseParams::dephasing() const {
  const double x = gdtau();
  return std::exp(-2.0 * x * x);
}

Op4 exchange_hamiltonian(double g) {
  if (!(g > 0.0)) throw std::invalid_argument("exchange_hamiltonian: g <= 0");
  Op4 h = Op4::Zero();
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    h += embed(Qubit::X, pauli(a)) * embed(Qubit::A, pauli(a));
  }
  return g * h;
}

Op4 evolve_unitary(const Op4& hamiltonian, double t) {
  if (hermiticity_error(hamiltonian) > tol::kStructural) {
    throw std::invalid_argument("evolve_unitary: Hamiltonian is not Hermitian");
  }
  return SpectralPropagator(hamiltonian).unitary(t);
}

Op4 local_rotation(Qubit qubit, Axis axis, double theta) {
  const Eigen::Matrix2cd r =
      std::cos(theta / 2.0) * Eigen::Matrix2cd::Identity() -
      kI * std::sin(theta / 2.0) * pauli(axis);
  return embed(qubit, r);
}

Op4 global_rotation(Axis axis, double theta) {
  return local_rotation(Qubit::X, axis, theta) *
         local_rotation(Qubit::A, axis, theta);
}

Op4 hadamard(Qubit qubit) {
  return embed(qubit, (pauli(Axis::x) + pauli(Axis::z)) / std::sqrt(2.0));
}

Op4 isolated_zz_unitary(double g, double t) {
  const Complex minus = std::exp(-kI * g * t);
  const Complex plus = std::exp(kI * g * t);
  Op4 u = Op4::Zero();
  u.diagonal() << minus, plus, plus, minus;
  return u;
}

Op4 term_isolation_segments(double g, double first, double second) {
  const SpectralPropagator prop(exchange_hamiltonian(g));
  const Op4 rz = rz_x_pi();
  return rz * prop.unitary(second) * rz * prop.unitary(first);
}

Op4 term_isolation_unitary(double g, double t) {
  return term_isolation_segments(g, t / 2.0, t / 2.0);
}

Op4 cnot_reference() {
  const Op4 up = edge_projector(true);
  const Op4 down = edge_projector(false);
  return up + down * embed(Qubit::A, pauli(Axis::x));
}

Op4 cnot_pre_gates() { return hadamard(Qubit::A); }

Op4 cnot_post_gates() {
  return hadamard(Qubit::A) *
         local_rotation(Qubit::X, Axis::z, std::numbers::pi / 2.0) *
         local_rotation(Qubit::A, Axis::z, std::numbers::pi / 2.0);
}

Op4 cnot_unitary(double g, double angle_error) {
  const double angle = std::numbers::pi / 2.0 + angle_error;
  const Op4 post = hadamard(Qubit::A) *
                   local_rotation(Qubit::X, Axis::z, angle) *
                   local_rotation(Qubit::A, Axis::z, angle);
  const GateSchedule schedule{g};
  return post * term_isolation_unitary(g, schedule.tau0_cnot()) *
         cnot_pre_gates();
}

double phase_invariant_distance(const Op4& u, const Op4& v) {
  return 1.0 - std::abs((u.adjoint() * v).trace()) / 4.0;
}

QuantumChannel gaussian_averaged_channel(const Op4& hamiltonian, double tau0,
                                         double delta_tau) {
  if (!(delta_tau >= 0.0)) {
    throw std::invalid_argument("gaussian_averaged_channel: delta_tau < 0");
  }
  if (delta_tau == 0.0) {
    return QuantumChannel::unitary(evolve_unitary(hamiltonian, tau0));
  }
  const SpectralPropagator prop(hamiltonian);
  const Op4& v = prop.eigenvectors();
  const Eigen::Vector4d& e = prop.energies();

  // Basis change into the eigenbasis, damping, and back.
  const QuantumChannel to_eigen = QuantumChannel::unitary(v.adjoint());
  Super16 damp = Super16::Zero();
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 4; ++j) {
      const double gap = e(j) - e(k);
      const double envelope = std::exp(-0.5 * gap * gap * delta_tau * delta_tau);
      damp(j + 4 * k, j + 4 * k) = std::exp(-kI * gap * tau0) * envelope;
    }
  }
  const QuantumChannel from_eigen = QuantumChannel::unitary(v);
  return QuantumChannel::from_superop(from_eigen.superop() * damp *
                                      to_eigen.superop());
}

QuantumChannel noisy_cnot_channel(const NoiseParams& noise,
                                  FluctuationMode mode) {
  noise.validate();
  const GateSchedule schedule{noise.g};
  const QuantumChannel pre = QuantumChannel::unitary(cnot_pre_gates());
  const QuantumChannel post = QuantumChannel::unitary(cnot_post_gates());

  if (mode == FluctuationMode::EffectiveExponent) {
    const Op4 zz = noise.g * embed(Qubit::X, pauli(Axis::z)) *
                   embed(Qubit::A, pauli(Axis::z));
    return pre
        .then(gaussian_averaged_channel(zz, schedule.tau0_cnot(),
                                        noise.delta_tau))
        .then(post);
  }

  const QuantumChannel segment =
      gaussian_averaged_channel(exchange_hamiltonian(noise.g),
                                schedule.tau0_cnot() / 2.0,
                                noise.delta_tau / 2.0);
  const QuantumChannel rz = QuantumChannel::unitary(rz_x_pi());
  return pre.then(segment).then(rz).then(segment).then(rz).then(post);
}

double sample_duration(double tau0, double delta_tau, Rng& rng) {
  if (!(delta_tau >= 0.0)) {
    throw std::invalid_argument("sample_duration: delta_tau < 0");
  }
  if (delta_tau == 0.0) return tau0;
  std::normal_distribution<double> dist(tau0, delta_tau);
  return dist(rng);
}

SpectralPropagator::SpectralPropagator(const Op4& hamiltonian) {
  Eigen::SelfAdjointEigenSolver<Op4> solver(0.5 *
                                            (hamiltonian + hamiltonian.adjoint()));
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Op4 SpectralPropagator::unitary(double t) const {
  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::exp(-kI * energies_(k) * t);
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Ket4 SpectralPropagator::apply(const Ket4& psi, double t) const {
  Ket4 c = vectors_.adjoint() * psi;
  for (int k = 0; k < 4; ++k) c(k) *= std::exp(-kI * energies_(k) * t);
  return vectors_ * c;
}

Op4 sample_noisy_cnot_unitary(const NoiseParams& noise, FluctuationMode mode,
                              Rng& rng) {
  const GateSchedule schedule{noise.g};
  if (mode == FluctuationMode::EffectiveExponent) {
    const double t = sample_duration(schedule.tau0_cnot(), noise.delta_tau, rng);
    return cnot_post_gates() * isolated_zz_unitary(noise.g, t) *
           cnot_pre_gates();
  }
  const double half = schedule.tau0_cnot() / 2.0;
  const double first = sample_duration(half, noise.delta_tau / 2.0, rng);
  const double second = sample_duration(half, noise.delta_tau / 2.0, rng);
  return cnot_post_gates() * term_isolation_segments(noise.g, first, second) *
         cnot_pre_gates();
}

ChannelEstimate monte_carlo_averaged_channel(const Op4& hamiltonian, double tau0,
                                             double delta_tau,
                                             const McOptions& opts) {
  using Real16 = Eigen::Matrix<double, 16, 16>;
  const SpectralPropagator prop(hamiltonian);
  const std::size_t n = opts.samples;
  const std::size_t chunks = (n + kMcChunk - 1) / kMcChunk;
  struct Partial {
    Real16 re = Real16::Zero(), im = Real16::Zero();
    Real16 re2 = Real16::Zero(), im2 = Real16::Zero();
  };
  std::vector<Partial> partial(chunks);
  parallel_for(chunks, opts.jobs, [&](std::size_t c) {
    Rng rng(derive_seed(opts.seed, 0, c));
    Partial& p = partial[c];
    const std::size_t end = std::min(n, (c + 1) * kMcChunk);
    for (std::size_t i = c * kMcChunk; i < end; ++i) {
      const Op4 u = prop.unitary(sample_duration(tau0, delta_tau, rng));
      const Super16 s = QuantumChannel::unitary(u).superop();
      p.re += s.real();
      p.im += s.imag();
      p.re2 += s.real().cwiseAbs2();
      p.im2 += s.imag().cwiseAbs2();
    }
  });
  Partial total;
  for (const Partial& p : partial) {
    total.re += p.re;
    total.im += p.im;
    total.re2 += p.re2;
    total.im2 += p.im2;
  }
  const double dn = static_cast<double>(n);
  ChannelEstimate est;
  const Real16 mean_re = total.re / dn;
  const Real16 mean_im = total.im / dn;
  est.mean = mean_re.cast<Complex>() + kI * mean_im.cast<Complex>();
  auto stderr_of = [&](const Real16& sum2, const Real16& mean) {
    Real16 var = (sum2 / dn - mean.cwiseAbs2()).cwiseMax(0.0) * (dn / (dn - 1.0));
    return Real16((var / dn).cwiseSqrt());
  };
  est.std_error_real = stderr_of(total.re2, mean_re);
  est.std_error_imag = stderr_of(total.im2, mean_im);
  return est;
}

double tomography_step_picoseconds(double g_mev) {
  if (!(g_mev > 0.0)) {
    throw std::invalid_argument("tomography_step_picoseconds: g must be > 0");
  }
  return std::numbers::pi / 4.0 * kHbarMevPs / g_mev;
}

}  // namespace spinqpt
