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

#include "spinqpt/chi_analytic.hpp"
#include "spinqpt/dynamics.hpp"
#include "test_support.hpp"

using namespace spinqpt;
using spinqpt::testing::max_abs;

namespace {
const double kR[] = {0.0, 0.25, 0.5, 0.75, 1.0};
const double kG[] = {0.0, 0.05, 0.1, 0.2};
}  // namespace

TEST(ProcessMatrix, Ordering) {
  EXPECT_EQ(chi_index(1, 1), 0);
  EXPECT_EQ(chi_index(4, 3), 7);
  EXPECT_EQ(chi_index(3, 2), 15);
  EXPECT_THROW(chi_index(0, 1), std::out_of_range);
  EXPECT_EQ(chi_labels()[4], "E12");
  EXPECT_EQ(chi_labels()[13], "E41");
}

TEST(ProcessMatrix, IdealCnotEntries) {
  const auto chi = ideal_cnot_process_matrix();
  // 𝓔(|3⟩⟨3|) = |4⟩⟨4|, 𝓔(|1⟩⟨3|) = |1⟩⟨4|.
  EXPECT_EQ(chi.element(4, 4, 3, 3), Complex(1.0));
  EXPECT_EQ(chi.element(1, 4, 1, 3), Complex(1.0));
  EXPECT_EQ(chi.element(3, 3, 3, 3), Complex(0.0));
  EXPECT_DOUBLE_EQ(chi.matrix().cwiseAbs().sum(), 16.0);
  const auto from_channel = ProcessMatrix::from_channel(QuantumChannel::unitary(cnot_reference()));
  EXPECT_LT(max_abs_deviation(chi, from_channel), 1e-15);
  EXPECT_NEAR(process_fidelity(chi, chi), 1.0, 1e-15);
  EXPECT_LT(chi.trace_preservation_error(), 1e-15);
  EXPECT_LT(chi.hermiticity_symmetry_error(), 1e-15);
}

TEST(ProcessMatrix, FidelityOfIdentityAgainstCnot) {
  // Only |1⟩⟨1|, |2⟩⟨2| and |1⟩⟨2|, |2⟩⟨1| are shared: 4/16.
  const auto id = ProcessMatrix::from_channel(QuantumChannel::identity());
  EXPECT_NEAR(process_fidelity(id, ideal_cnot_process_matrix()), 0.25, 1e-15);
}

TEST(Coefficients, ReferenceValues) {
  const auto c0 = coefficients(0.4, 0.0);
  EXPECT_EQ(c0.d, 1.0);
  EXPECT_EQ(c0.a_plus, 1.0);
  EXPECT_EQ(c0.c_minus, 0.0);
  EXPECT_EQ(c0.beta1_plus, 1.0);
  EXPECT_EQ(c0.beta3_minus, -1.0);
  const auto c = coefficients(0.4, 0.1);
  EXPECT_NEAR(c.d, 0.980199, 5e-7);
  EXPECT_NEAR(c.c_plus, 0.961558, 5e-7);
  EXPECT_NEAR(c.d * c.d * c.d * c.d, 0.923116, 5e-7);
  EXPECT_THROW(coefficients(-0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(coefficients(0.5, -1.0), std::invalid_argument);
}

TEST(Coefficients, Invariants) {
  for (double r : kR) {
    for (double g : kG) {
      const auto c = coefficients(r, g);
      EXPECT_GT(c.d, 0.0);
      EXPECT_LE(c.d, 1.0);
      EXPECT_NEAR(c.a_plus + c.a_minus, 1.0, 1e-15);
      EXPECT_NEAR(c.b_plus + c.b_minus, 1.0, 1e-15);
      EXPECT_NEAR(c.c_plus + c.c_minus, 1.0, 1e-15);
      const double d4 = std::pow(c.d, 4);
      EXPECT_NEAR(c.beta1_plus, c.a_plus * c.a_plus + c.c_minus * c.a_minus * c.a_minus, 1e-15);
      EXPECT_NEAR(c.beta2_minus, c.c_plus * c.a_minus * c.a_minus, 1e-15);
      EXPECT_NEAR(c.beta3_plus, c.a_plus - d4 * c.a_minus, 1e-15);
    }
  }
}

TEST(ChiBlocks, StatedProportionalities) {
  for (double r : kR) {
    for (double g : kG) {
      const auto c = coefficients(r, g);
      const auto m = chi_blocks(c);
      EXPECT_LT(max_abs(m.M(9) - c.c_minus * m.M(8)), 1e-14);
      EXPECT_LT(max_abs(m.M(10) - c.c_minus * m.M(2)), 1e-14);
    }
  }
}

TEST(ChiBlocks, VanishingBlocksWithoutDispersion) {
  for (double r : kR) {
    const auto m = chi_blocks(coefficients(r, 0.0));
    for (int i : {5, 7, 8, 9, 10, 11}) {
      EXPECT_EQ(max_abs(m.M(i)), 0.0) << "M" << i << " r=" << r;
    }
  }
}

TEST(ChiClosedForm, IdealLimit) {
  EXPECT_LT(max_abs_deviation(chi_closed_form(1.0, 0.0), ideal_cnot_process_matrix()), 1e-15);
}

TEST(ChiClosedForm, Element1111) {
  EXPECT_NEAR(chi_closed_form(0.6, 0.0).element(1, 1, 1, 1).real(), 0.64, 1e-15);
  EXPECT_DOUBLE_EQ(chi_1111(1.0, 0.0), 1.0);
  EXPECT_NEAR(chi_1111(0.6, 0.0), 0.64, 1e-15);
  for (double r : kR) {
    for (double g : kG) {
      const Complex e = chi_closed_form(r, g).element(1, 1, 1, 1);
      EXPECT_NEAR(e.real(), chi_1111(r, g), 1e-12) << r << " " << g;
      EXPECT_NEAR(e.imag(), 0.0, 1e-15);
    }
  }
}

TEST(ChiClosedForm, StructuralProperties) {
  for (double r : kR) {
    for (double g : kG) {
      const auto chi = chi_closed_form(r, g);
      EXPECT_LT(chi.hermiticity_symmetry_error(), 1e-12) << r << " " << g;
      EXPECT_LT(chi.trace_preservation_error(), 1e-12) << r << " " << g;
    }
  }
}

TEST(ChiClosedForm, PolarizationOnlySamples) {
  // Without dispersion each qubit is read with polarization r independently:
  // populations ((1+r)/2)², (1−r²)/4 for one flip, ((1−r)/2)² for two.
  for (double r : {0.6, 0.8}) {
    const auto chi = chi_closed_form(r, 0.0);
    const double hi = (1 + r) * (1 + r) / 4, one = (1 - r * r) / 4,
                 two = (1 - r) * (1 - r) / 4;
    EXPECT_NEAR(chi.element(1, 1, 1, 1).real(), hi, 1e-12);
    EXPECT_NEAR(chi.element(2, 2, 2, 2).real(), hi, 1e-12);
    EXPECT_NEAR(chi.element(4, 4, 3, 3).real(), hi, 1e-12);
    EXPECT_NEAR(chi.element(2, 2, 1, 1).real(), one, 1e-12);
    EXPECT_NEAR(chi.element(3, 3, 3, 3).real(), one, 1e-12);
    EXPECT_NEAR(chi.element(4, 4, 1, 1).real(), two, 1e-12);
    EXPECT_NEAR(chi.element(1, 1, 3, 3).real(), two, 1e-12);
    EXPECT_NEAR(std::abs(chi.element(1, 4, 1, 3)), r * r, 1e-12);
  }
}

TEST(AveragedOutput, PrintedForm) {
  EXPECT_LT(max_abs(averaged_cnot_output_11(0.0) - basis_op(0, 0)), 1e-15);
  const Op4 strong = averaged_cnot_output_11(50.0);
  Op4 expected = Op4::Zero();
  expected.diagonal() << 3.0 / 8, 3.0 / 8, 1.0 / 8, 1.0 / 8;
  expected(0, 1) = expected(1, 0) = 1.0 / 8;
  EXPECT_LT(max_abs(strong - expected), 1e-15);
  for (double g : {0.0, 0.05, 0.1, 0.3, 1.0}) {
    EXPECT_NEAR(averaged_cnot_output_11(g).trace().real(), 1.0, 1e-14);
  }
}

TEST(Fidelity, ReferenceValues) {
  EXPECT_NEAR(fidelity_closed_form(0.6, 0.0), 0.49, 1e-12);
  EXPECT_NEAR(fidelity_closed_form(1.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(fidelity_closed_form(1.0, 0.1), 0.943, 1e-3);
  EXPECT_NEAR(1.0 - fidelity_closed_form(1.0, 0.1), 0.05, 0.01);
}

TEST(Fidelity, NoDispersionFormula) {
  for (int i = 0; i <= 10; ++i) {
    const double r = i / 10.0;
    EXPECT_NEAR(fidelity_closed_form(r, 0.0), (1 + 3 * r) * (1 + 3 * r) / 16, 1e-12);
  }
}

TEST(Fidelity, AgreesWithOverlapDefinition) {
  const auto ideal = ideal_cnot_process_matrix();
  for (double r : kR) {
    for (double g : kG) {
      EXPECT_NEAR(process_fidelity(chi_closed_form(r, g), ideal), fidelity_closed_form(r, g),
                  1e-12)
          << r << " " << g;
    }
  }
}

TEST(Fidelity, DispersionLossGrowsWithPolarization) {
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double r = i / 100.0;
    const double loss = fidelity_closed_form(r, 0.0) - fidelity_closed_form(r, 0.1);
    EXPECT_GE(loss, prev - 1e-15) << r;
    prev = loss;
  }
}

TEST(Fidelity, DecreasesWithDispersion) {
  for (double r : {0.5, 1.0}) {
    double prev = 2.0;
    for (double g = 0.0; g <= 1.0; g += 0.05) {
      const double f = fidelity_closed_form(r, g);
      EXPECT_LE(f, prev + 1e-15);
      prev = f;
    }
  }
}
