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

#include <gtest/gtest.h>

#include <numbers>

#include "spinqpt/chi_analytic.hpp"
#include "spinqpt/tomography.hpp"
#include "test_support.hpp"

using namespace spinqpt;
using spinqpt::testing::max_abs;
using spinqpt::testing::random_density;

namespace {
constexpr double kPi = std::numbers::pi;

const TomographyDesign& shipped() {
  static const TomographyDesign design = design_sequences(1.0);
  return design;
}

std::vector<double> ideal_probabilities(const Op4& rho, const TomographyDesign& design) {
  std::vector<double> p;
  for (const auto& e : design.effects) p.push_back((e * rho).trace().real());
  return p;
}

std::map<QptLabel, Op4> channel_outputs(const QuantumChannel& ch) {
  std::map<QptLabel, Op4> out;
  for (const auto& in : qpt_input_states()) {
    out[in.label] = ch.apply(in.ket * in.ket.adjoint());
  }
  return out;
}
}  // namespace

TEST(HermitianBasis, Orthonormal) {
  const auto& b = hermitian_basis();
  for (int i = 0; i < 16; ++i) {
    EXPECT_LT(hermiticity_error(b[i]), 1e-16);
    for (int j = 0; j < 16; ++j) {
      EXPECT_NEAR(std::abs((b[i] * b[j]).trace() - Complex(i == j)), 0.0, 1e-15);
    }
  }
}

TEST(Design, ShippedDesignIsComplete) {
  const auto& d = shipped();
  EXPECT_EQ(d.sequences.size(), 15u);
  EXPECT_EQ(d.effects.size(), 15u);
  EXPECT_EQ(d.design_matrix.rows(), 16);
  EXPECT_EQ(d.design_matrix.cols(), 16);
  EXPECT_EQ(d.rank(), 16);
  const MeasureSequence first({Project{Outcome::Up}, Evolve{kPi / 4}, Project{Outcome::Up}});
  EXPECT_EQ(d.sequences.front(), first);
  EXPECT_LT(max_abs(d.effects.front() - basis_op(0, 0)), 1e-12);
}

TEST(Design, IsMinimal) {
  const auto& d = shipped();
  for (std::size_t i = 0; i < d.sequences.size(); ++i) {
    auto fewer = d.sequences;
    fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
    EXPECT_EQ(design_rank(fewer, 1.0), 15) << "dropped #" << i + 1;
  }
}

TEST(Design, Deterministic) {
  const auto again = design_sequences(1.0);
  EXPECT_EQ(again.sequences, shipped().sequences);
  EXPECT_EQ(again.design_matrix, shipped().design_matrix);
}

TEST(Design, IncompleteDesignReportsRank) {
  const std::vector<MeasureSequence> seqs = {
      MeasureSequence({Project{Outcome::Up}}),
      MeasureSequence({Project{Outcome::Up}, Evolve{kPi / 4}, Project{Outcome::Up}})};
  try {
    make_design(seqs, 1.0);
    FAIL();
  } catch (const ConfigurationError& e) {
    EXPECT_EQ(e.achieved_rank(), 3);
  }
}

TEST(Reconstruct, RoundTrip) {
  std::mt19937_64 rng(20);
  for (int i = 0; i < 100; ++i) {
    const Op4 rho = random_density(rng);
    EXPECT_LT(max_abs(reconstruct_state(ideal_probabilities(rho, shipped()), shipped()) - rho),
              1e-10);
  }
  const Op4 mixed = Op4::Identity() / 4.0;
  EXPECT_LT(max_abs(reconstruct_state(ideal_probabilities(mixed, shipped()), shipped()) - mixed),
            1e-12);
}

TEST(Reconstruct, NoisyProbabilitiesOnUpUp) {
  // Ideal effects on noisy data: the (1,1) element comes out as (1+r)²/4.
  const auto noise = NoiseParams::from_dimensionless(0.6, 0.0);
  std::vector<double> p;
  for (const auto& seq : shipped().sequences) p.push_back(sequence_probability(seq, basis_op(0, 0), noise));
  EXPECT_NEAR(p.front(), 0.64, 1e-12);
  EXPECT_NEAR(reconstruct_state(p, shipped())(0, 0).real(), 0.64, 1e-12);
}

TEST(Reconstruct, Errors) {
  EXPECT_THROW(reconstruct_state({0.1, 0.2}, shipped()), std::invalid_argument);
  TomographyDesign broken = shipped();
  broken.design_matrix.row(3).setZero();
  EXPECT_THROW(reconstruct_state(std::vector<double>(15, 0.1), broken), ConfigurationError);
}

TEST(QptInputs, States) {
  const auto inputs = qpt_input_states();
  ASSERT_EQ(inputs.size(), 16u);
  for (const auto& in : inputs) {
    const auto rho = in.density();
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-15);
  }
  auto find = [&](QptLabel::Kind kind, int m, int n) {
    for (const auto& in : inputs) {
      if (in.label == QptLabel{kind, m, n}) return in.density().matrix();
    }
    throw std::logic_error("missing");
  };
  const Op4 plus = find(QptLabel::Kind::Plus, 1, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(plus(i, j) - 0.5), 0.0, 1e-15);
  }
  EXPECT_NEAR(std::abs(find(QptLabel::Kind::Minus, 1, 2)(0, 1) - Complex(0, -0.5)), 0.0, 1e-15);
  EXPECT_EQ(inputs.front().label.name(), "1");
}

TEST(Assemble, IdentityChannel) {
  const auto action = assemble_channel_action(channel_outputs(QuantumChannel::identity()));
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) EXPECT_LT(max_abs(action[k][l] - basis_op(k, l)), 1e-15);
  }
}

TEST(Assemble, CnotExamples) {
  const auto action =
      assemble_channel_action(channel_outputs(QuantumChannel::unitary(cnot_reference())));
  EXPECT_LT(max_abs(action[0][2] - basis_op(0, 3)), 1e-15);
  EXPECT_LT(max_abs(action[2][3] - basis_op(3, 2)), 1e-15);
}

TEST(Assemble, AdjointRelation) {
  const auto ch = noisy_cnot_channel(NoiseParams::from_dimensionless(0.7, 0.3));
  const auto action = assemble_channel_action(channel_outputs(ch));
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      EXPECT_LT(max_abs(action[k][l].adjoint() - action[l][k]), 1e-10);
      EXPECT_LT(max_abs(action[k][l] - ch.apply(basis_op(k, l))), 1e-12);
    }
  }
}

TEST(Assemble, MissingInput) {
  auto outputs = channel_outputs(QuantumChannel::identity());
  outputs.erase(QptLabel{QptLabel::Kind::Minus, 2, 4});
  EXPECT_THROW(assemble_channel_action(outputs), std::invalid_argument);
}

TEST(Method, Names) {
  EXPECT_EQ(parse_qpt_method("pipeline"), QptMethod::Pipeline);
  EXPECT_EQ(parse_qpt_method("closed-form"), QptMethod::ClosedForm);
  EXPECT_EQ(parse_qpt_method("monte_carlo"), QptMethod::MonteCarlo);
  EXPECT_EQ(parse_qpt_method(to_string(QptMethod::MonteCarlo)), QptMethod::MonteCarlo);
  EXPECT_THROW(parse_qpt_method("bogus"), std::invalid_argument);
}

TEST(Pipeline, IdealLimit) {
  const auto res = run_qpt(NoiseParams::from_dimensionless(1.0, 0.0));
  EXPECT_LT(max_abs_deviation(res.chi, ideal_cnot_process_matrix()), 1e-10);
  EXPECT_LT(res.chi.trace_preservation_error(), 1e-10);
  EXPECT_EQ(res.probabilities.size(), 16u);
}

TEST(Pipeline, Element1111MatchesFormulaOnGrid) {
  for (double r : {0.0, 0.25, 0.5, 0.6, 0.75, 1.0}) {
    for (double g : {0.0, 0.05, 0.1, 0.2}) {
      const auto res = run_qpt(NoiseParams::from_dimensionless(r, g));
      EXPECT_NEAR(res.chi.element(1, 1, 1, 1).real(), chi_1111(r, g), 1e-10) << r << " " << g;
    }
  }
  EXPECT_NEAR(run_qpt(NoiseParams::from_dimensionless(0.6, 0.0)).chi.element(1, 1, 1, 1).real(),
              0.64, 1e-12);
}

TEST(Pipeline, HermiticitySymmetry) {
  for (double r : {0.3, 0.9}) {
    for (double g : {0.0, 0.1}) {
      EXPECT_LT(run_qpt(NoiseParams::from_dimensionless(r, g)).chi.hermiticity_symmetry_error(),
                1e-10);
    }
  }
}

TEST(Pipeline, MatchesClosedFormWithoutDispersion) {
  for (double r : {0.0, 0.3, 0.6, 0.8, 1.0}) {
    const auto noise = NoiseParams::from_dimensionless(r, 0.0);
    EXPECT_LT(max_abs_deviation(run_qpt(noise).chi, chi_closed_form(r, 0.0)), 1e-10) << r;
  }
}

TEST(Pipeline, ClosedFormMethodDelegates) {
  const auto res = run_qpt(NoiseParams::from_dimensionless(0.8, 0.1), {QptMethod::ClosedForm});
  EXPECT_EQ(res.chi.matrix(), chi_closed_form(0.8, 0.1).matrix());
  EXPECT_TRUE(res.probabilities.empty());
}

TEST(Pipeline, ClosedFormFidelityNoDispersion) {
  for (double r : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    EXPECT_NEAR(process_fidelity(chi_closed_form(r, 0.0), ideal_cnot_process_matrix()),
                (1 + 3 * r) * (1 + 3 * r) / 16, 1e-10);
  }
  EXPECT_NEAR(process_fidelity(chi_closed_form(0.8, 0.0), ideal_cnot_process_matrix()), 0.7225,
              1e-12);
}

TEST(MonteCarlo, ConvergesToPipeline) {
  const auto noise = NoiseParams::from_dimensionless(0.8, 0.1);
  const auto exact = run_qpt(noise);
  QptOptions opts{QptMethod::MonteCarlo, {20000, 7, 0}};
  const auto mc = run_qpt(noise, opts);
  ASSERT_TRUE(mc.chi_std_error_real && mc.chi_std_error_imag);
  // Each real and imaginary component standardized by its own error.
  double z_max = 0.0;
  int components = 0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const Complex dev = mc.chi.matrix()(i, j) - exact.chi.matrix()(i, j);
      const double se_re = (*mc.chi_std_error_real)(i, j);
      const double se_im = (*mc.chi_std_error_imag)(i, j);
      if (se_re > 0) z_max = std::max(z_max, std::abs(dev.real()) / se_re), ++components;
      else EXPECT_LT(std::abs(dev.real()), 1e-12);
      if (se_im > 0) z_max = std::max(z_max, std::abs(dev.imag()) / se_im), ++components;
      else EXPECT_LT(std::abs(dev.imag()), 1e-12);
    }
  }
  EXPECT_GT(components, 400);
  EXPECT_LT(z_max, 5.0);
  // Probabilities individually within a few standard errors.
  int outliers = 0, total = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 15; ++j) {
      const double se = mc.probability_std_errors[i][j];
      if (se == 0.0) continue;
      ++total;
      outliers += std::abs(mc.probabilities[i][j] - exact.probabilities[i][j]) > 4 * se;
    }
  }
  EXPECT_GT(total, 100);
  EXPECT_LE(outliers, 1);
}

TEST(MonteCarlo, Deterministic) {
  const auto noise = NoiseParams::from_dimensionless(0.8, 0.1);
  const auto a = run_qpt(noise, {QptMethod::MonteCarlo, {3000, 9, 1}});
  const auto b = run_qpt(noise, {QptMethod::MonteCarlo, {3000, 9, 2}});
  EXPECT_EQ(a.chi.matrix(), b.chi.matrix());
}

TEST(Entanglement, ProbeStates) {
  const Op4 bell = entanglement_probe_state(shipped(), 1.0, 0.0);
  EXPECT_NEAR(negativity(bell), 0.5, 1e-10);
  EXPECT_NEAR(negativity(entanglement_probe_state(shipped(), 0.3, 0.0)), 0.0, 1e-12);
}

TEST(Entanglement, NegativityMonotoneInPolarization) {
  double prev = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double n = negativity(entanglement_probe_state(shipped(), i / 20.0, 0.0));
    EXPECT_GE(n, prev - 1e-12) << i;
    prev = n;
  }
}

TEST(Entanglement, Threshold) {
  const auto res = entanglement_threshold(shipped(), 0.0);
  ASSERT_TRUE(res.found);
  EXPECT_NEAR(res.r_star, 1.0 / std::sqrt(3.0), 2e-4);
  EXPECT_NEAR(res.r_star, 0.5774, 0.02);
  EXPECT_EQ(res.curve.size(), 65u);
  EXPECT_GT(res.at_zero.min_pt_eigenvalue, 0.0);
  EXPECT_LT(res.at_one.min_pt_eigenvalue, 0.0);
  EXPECT_THROW(entanglement_threshold(shipped(), 0.0, 0.0), std::invalid_argument);
}

TEST(Entanglement, DispersionRaisesThreshold) {
  const auto res = entanglement_threshold(shipped(), 0.2);
  ASSERT_TRUE(res.found);
  EXPECT_GT(res.r_star, 1.0 / std::sqrt(3.0));
}
