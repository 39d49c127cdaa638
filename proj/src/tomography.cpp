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

#include "spinqpt/tomography.hpp"

#include <cmath>
#include <numbers>

#include "spinqpt/chi_analytic.hpp"

namespace spinqpt {

namespace {

const Complex kI{0.0, 1.0};

// Single-qubit readout setting: rotation that maps the measured basis state
// to spin up, and the declared outcome.
struct Setting {
  std::optional<Rotate> to_z;
  Outcome declared;
};

const std::array<Setting, 4>& settings() {
  static const std::array<Setting, 4> s{{
      {std::nullopt, Outcome::Up},                                         // z↑
      {std::nullopt, Outcome::Down},                                       // z↓
      {Rotate{RotationScope::Global, Axis::y, -std::numbers::pi / 2}, Outcome::Up},  // x↑
      {Rotate{RotationScope::Global, Axis::x, std::numbers::pi / 2}, Outcome::Up},   // y↑
  }};
  return s;
}

MeasureSequence product_sequence(const Setting& on_x, const Setting& on_a) {
  std::vector<MeasurePrimitive> steps;
  if (on_x.to_z) steps.emplace_back(*on_x.to_z);
  steps.emplace_back(Project{on_x.declared});
  steps.emplace_back(Evolve{std::numbers::pi / 4.0});
  if (on_x.to_z) {
    Rotate undo = *on_x.to_z;
    undo.theta = -undo.theta;
    steps.emplace_back(undo);
  }
  if (on_a.to_z) steps.emplace_back(*on_a.to_z);
  steps.emplace_back(Project{on_a.declared});
  return MeasureSequence(std::move(steps));
}

Eigen::MatrixXd design_rows(const std::vector<Op4>& effects) {
  const auto& basis = hermitian_basis();
  const Eigen::Index n = static_cast<Eigen::Index>(effects.size());
  Eigen::MatrixXd rows(n + 1, 16);
  for (Eigen::Index i = 0; i <= n; ++i) {
    const Op4 e = i < n ? effects[static_cast<std::size_t>(i)] : Op4::Identity();
    for (int j = 0; j < 16; ++j) rows(i, j) = (e * basis[j]).trace().real();
  }
  return rows;
}

int matrix_rank(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  svd.setThreshold(1e-10);
  return static_cast<int>(svd.rank());
}

// Draws the CNOT output ket for one trajectory of timing noise.
class CnotSampler {
 public:
  CnotSampler(const NoiseParams& noise, FluctuationMode mode)
      : noise_(noise),
        mode_(mode),
        exchange_(exchange_hamiltonian(noise.g)),
        pre_(cnot_pre_gates()),
        post_(cnot_post_gates()),
        rz_(local_rotation(Qubit::X, Axis::z, std::numbers::pi)) {}

  Ket4 apply(const Ket4& psi, Rng& rng) const {
    const GateSchedule schedule{noise_.g};
    Ket4 state = pre_ * psi;
    if (mode_ == FluctuationMode::EffectiveExponent) {
      const double t = sample_duration(schedule.tau0_cnot(), noise_.delta_tau, rng);
      state = isolated_zz_unitary(noise_.g, t).diagonal().cwiseProduct(state);
    } else {
      const double half = schedule.tau0_cnot() / 2.0;
      const double first = sample_duration(half, noise_.delta_tau / 2.0, rng);
      const double second = sample_duration(half, noise_.delta_tau / 2.0, rng);
      state = rz_ * exchange_.apply(rz_ * exchange_.apply(state, first), second);
    }
    return post_ * state;
  }

 private:
  NoiseParams noise_;
  FluctuationMode mode_;
  SpectralPropagator exchange_;
  Op4 pre_, post_, rz_;
};

ProcessMatrix chi_from_probabilities(const std::vector<QptInput>& inputs,
                                     const std::vector<std::vector<double>>& probs,
                                     const TomographyDesign& design) {
  std::map<QptLabel, Op4> outputs;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    outputs[inputs[j].label] = reconstruct_state(probs[j], design);
  }
  return ProcessMatrix::from_action(assemble_channel_action(outputs));
}

}  // namespace

const std::array<Op4, 16>& hermitian_basis() {
  static const std::array<Op4, 16> basis = [] {
    std::array<Eigen::Matrix2cd, 4> p{Eigen::Matrix2cd::Identity(), pauli(Axis::x),
                                      pauli(Axis::y), pauli(Axis::z)};
    std::array<Op4, 16> b;
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 4; ++c) {
        b[4 * a + c] = 0.5 * embed(Qubit::X, p[a]) * embed(Qubit::A, p[c]);
      }
    }
    return b;
  }();
  return basis;
}

int TomographyDesign::rank() const { return matrix_rank(design_matrix); }

int design_rank(const std::vector<MeasureSequence>& sequences, double g) {
  std::vector<Op4> effects;
  effects.reserve(sequences.size());
  for (const auto& s : sequences) effects.push_back(ideal_effect_operator(s, g));
  return matrix_rank(design_rows(effects));
}

TomographyDesign make_design(std::vector<MeasureSequence> sequences, double g) {
  TomographyDesign design;
  for (const auto& s : sequences) design.effects.push_back(ideal_effect_operator(s, g));
  design.sequences = std::move(sequences);
  design.design_matrix = design_rows(design.effects);
  const int rank = design.rank();
  if (rank < 16) {
    throw ConfigurationError(
        "tomography design is not informationally complete: rank " +
            std::to_string(rank) + " of 16",
        rank);
  }
  return design;
}

TomographyDesign design_sequences(double g) {
  std::vector<MeasureSequence> seqs;
  const auto& s = settings();
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (std::size_t a = 0; a < s.size(); ++a) {
      if (x == 1 && a == 1) continue;  // z↓z↓ = 1 − (the other three z pairs)
      seqs.push_back(product_sequence(s[x], s[a]));
    }
  }
  return make_design(std::move(seqs), g);
}

Op4 reconstruct_state(const std::vector<double>& probabilities,
                      const TomographyDesign& design) {
  if (probabilities.size() != design.sequences.size()) {
    throw std::invalid_argument("reconstruct_state: expected " +
                                std::to_string(design.sequences.size()) +
                                " probabilities, got " +
                                std::to_string(probabilities.size()));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(probabilities.size());
  Eigen::VectorXd rhs(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = probabilities[static_cast<std::size_t>(i)];
  rhs(n) = 1.0;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> solver(design.design_matrix);
  solver.setThreshold(1e-10);
  if (solver.rank() < 16) {
    throw ConfigurationError("reconstruct_state: singular design", 
                             static_cast<int>(solver.rank()));
  }
  const Eigen::VectorXd coeffs = solver.solve(rhs);
  const auto& basis = hermitian_basis();
  Op4 rho = Op4::Zero();
  for (int j = 0; j < 16; ++j) rho += coeffs(j) * basis[j];
  return rho;
}

std::string QptLabel::name() const {
  switch (kind) {
    case Kind::Diagonal:
      return std::to_string(m);
    case Kind::Plus:
      return "+;" + std::to_string(m) + std::to_string(n);
    case Kind::Minus:
      return "-;" + std::to_string(m) + std::to_string(n);
  }
  return "?";
}

std::vector<QptInput> qpt_input_states() {
  std::vector<QptInput> inputs;
  for (int m = 1; m <= 4; ++m) {
    inputs.push_back({{QptLabel::Kind::Diagonal, m, m}, basis_ket(m - 1)});
  }
  const double h = 1.0 / std::sqrt(2.0);
  for (int m = 1; m <= 4; ++m) {
    for (int n = m + 1; n <= 4; ++n) {
      inputs.push_back({{QptLabel::Kind::Plus, m, n},
                        h * (basis_ket(m - 1) + basis_ket(n - 1))});
      inputs.push_back({{QptLabel::Kind::Minus, m, n},
                        h * (basis_ket(m - 1) + kI * basis_ket(n - 1))});
    }
  }
  return inputs;
}

ChannelAction assemble_channel_action(const std::map<QptLabel, Op4>& outputs) {
  auto get = [&](QptLabel::Kind kind, int m, int n) -> const Op4& {
    const auto it = outputs.find(QptLabel{kind, m, n});
    if (it == outputs.end()) {
      throw std::invalid_argument("assemble_channel_action: missing output for input " +
                                  QptLabel{kind, m, n}.name());
    }
    return it->second;
  };
  ChannelAction action;
  for (int m = 1; m <= 4; ++m) {
    action[m - 1][m - 1] = get(QptLabel::Kind::Diagonal, m, m);
  }
  const Complex half_1pi{0.5, 0.5};
  const Complex half_1mi{0.5, -0.5};
  for (int m = 1; m <= 4; ++m) {
    for (int n = m + 1; n <= 4; ++n) {
      const Op4& plus = get(QptLabel::Kind::Plus, m, n);
      const Op4& minus = get(QptLabel::Kind::Minus, m, n);
      const Op4 diag = action[m - 1][m - 1] + action[n - 1][n - 1];
      action[m - 1][n - 1] = plus + kI * minus - half_1pi * diag;
      action[n - 1][m - 1] = plus - kI * minus - half_1mi * diag;
    }
  }
  return action;
}

std::string to_string(QptMethod method) {
  switch (method) {
    case QptMethod::Pipeline:
      return "pipeline";
    case QptMethod::ClosedForm:
      return "closed-form";
    case QptMethod::MonteCarlo:
      return "montecarlo";
  }
  return "?";
}

QptMethod parse_qpt_method(std::string_view text) {
  if (text == "pipeline") return QptMethod::Pipeline;
  if (text == "closed-form" || text == "closed_form") return QptMethod::ClosedForm;
  if (text == "montecarlo" || text == "monte_carlo") return QptMethod::MonteCarlo;
  throw std::invalid_argument("unknown QPT method '" + std::string(text) + "'");
}

QptResult run_qpt(const NoiseParams& noise, const QptOptions& options) {
  if (options.method == QptMethod::ClosedForm) {
    return run_qpt(noise, options, TomographyDesign{});
  }
  return run_qpt(noise, options, design_sequences(noise.g));
}

QptResult run_qpt(const NoiseParams& noise, const QptOptions& options,
                  const TomographyDesign& design) {
  noise.validate();
  QptResult result;
  if (options.method == QptMethod::ClosedForm) {
    result.chi = chi_closed_form(noise.r, noise.gdtau());
    return result;
  }

  const std::vector<QptInput> inputs = qpt_input_states();
  const std::size_t n_seq = design.sequences.size();
  std::vector<SequenceRunner> runners;
  runners.reserve(n_seq);
  for (const auto& s : design.sequences) runners.emplace_back(s, noise);

  result.probabilities.assign(inputs.size(), std::vector<double>(n_seq, 0.0));

  if (options.method == QptMethod::Pipeline) {
    const QuantumChannel cnot = noisy_cnot_channel(noise, options.fluctuation);
    parallel_for(inputs.size(), options.mc.jobs, [&](std::size_t j) {
      const Op4 out = cnot.apply(inputs[j].density().matrix());
      for (std::size_t i = 0; i < n_seq; ++i) {
        result.probabilities[j][i] = runners[i].probability(out);
      }
    });
    result.chi = chi_from_probabilities(inputs, result.probabilities, design);
    return result;
  }

  if (options.mc.samples < 1) {
    throw std::invalid_argument("run_qpt: Monte Carlo needs at least one sample");
  }
  const CnotSampler cnot(noise, options.fluctuation);
  result.probability_std_errors.assign(inputs.size(), std::vector<double>(n_seq, 0.0));
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    for (std::size_t i = 0; i < n_seq; ++i) {
      const Ket4& psi = inputs[j].ket;
      const SequenceRunner& runner = runners[i];
      const McEstimate est =
          estimate_mean(options.mc, 64 * j + i + 1, [&](Rng& rng) {
            return runner.sample(cnot.apply(psi, rng), rng);
          });
      result.probabilities[j][i] = est.mean;
      result.probability_std_errors[j][i] = est.std_error;
    }
  }
  result.chi = chi_from_probabilities(inputs, result.probabilities, design);

  // χ is affine in the probabilities; propagate independent errors through
  // the exact unit responses.
  Eigen::Matrix<double, 16, 16> var_re = Eigen::Matrix<double, 16, 16>::Zero();
  Eigen::Matrix<double, 16, 16> var_im = Eigen::Matrix<double, 16, 16>::Zero();
  std::vector<std::vector<double>> zero(inputs.size(), std::vector<double>(n_seq, 0.0));
  const Chi16 base = chi_from_probabilities(inputs, zero, design).matrix();
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    for (std::size_t i = 0; i < n_seq; ++i) {
      const double se = result.probability_std_errors[j][i];
      if (se == 0.0) continue;
      zero[j][i] = 1.0;
      const Chi16 response = chi_from_probabilities(inputs, zero, design).matrix() - base;
      zero[j][i] = 0.0;
      var_re += (se * se) * response.real().cwiseAbs2();
      var_im += (se * se) * response.imag().cwiseAbs2();
    }
  }
  result.chi_std_error_real = var_re.cwiseSqrt();
  result.chi_std_error_imag = var_im.cwiseSqrt();
  return result;
}

Op4 entanglement_probe_state(const TomographyDesign& design, double r,
                             double gdtau) {
  const NoiseParams noise = NoiseParams::from_dimensionless(r, gdtau);
  const Ket4 probe = (basis_ket(0) + basis_ket(2)) / std::sqrt(2.0);
  const Op4 out = noisy_cnot_channel(noise).apply(probe * probe.adjoint());
  std::vector<double> probs;
  probs.reserve(design.sequences.size());
  for (const auto& s : design.sequences) probs.push_back(sequence_probability(s, out, noise));
  return reconstruct_state(probs, design);
}

ThresholdResult entanglement_threshold(const TomographyDesign& design,
                                       double gdtau, double tolerance) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("entanglement_threshold: tolerance must be > 0");
  }
  auto evaluate = [&](double r) {
    const Op4 rho = entanglement_probe_state(design, r, gdtau);
    return ThresholdSample{r, min_partial_transpose_eigenvalue(rho), negativity(rho)};
  };

  ThresholdResult result;
  constexpr int kSteps = 64;
  for (int i = 0; i <= kSteps; ++i) {
    result.curve.push_back(evaluate(static_cast<double>(i) / kSteps));
  }
  result.at_zero = result.curve.front();
  result.at_one = result.curve.back();

  auto entangled = [](const ThresholdSample& s) { return s.min_pt_eigenvalue < 0.0; };
  if (entangled(result.curve.front())) {
    result.found = true;
    result.r_star = 0.0;
    return result;
  }
  for (int i = 1; i <= kSteps; ++i) {
    if (!entangled(result.curve[static_cast<std::size_t>(i)])) continue;
    double lo = result.curve[static_cast<std::size_t>(i - 1)].r;
    double hi = result.curve[static_cast<std::size_t>(i)].r;
    while (hi - lo > tolerance) {
      const double mid = 0.5 * (lo + hi);
      const ThresholdSample s = evaluate(mid);
      result.history.push_back(s);
      (entangled(s) ? hi : lo) = mid;
    }
    result.found = true;
    result.r_star = hi;
    return result;
  }
  return result;
}

}  // namespace spinqpt
