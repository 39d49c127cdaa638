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

#include "spinqpt/chi_analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace spinqpt {

namespace {

void check_params(double r, double gdtau) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("chi_analytic: r must lie in [0, 1]");
  }
  if (!(gdtau >= 0.0)) {
    throw std::invalid_argument("chi_analytic: gdtau must be >= 0");
  }
}

double dephasing(double gdtau) { return std::exp(-2.0 * gdtau * gdtau); }

Op4 rows(std::initializer_list<std::initializer_list<Complex>> values) {
  Op4 m;
  int i = 0;
  for (const auto& row : values) {
    int j = 0;
    for (const Complex& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

CoefficientSet coefficients(double r, double gdtau) {
  check_params(r, gdtau);
  CoefficientSet c;
  c.r = r;
  const double d = dephasing(gdtau);
  const double d2 = d * d;
  const double d4 = d2 * d2;
  c.d = d;
  c.a_plus = 0.5 * (1.0 + d);
  c.a_minus = 0.5 * (1.0 - d);
  c.b_plus = 0.5 * (1.0 + d2);
  c.b_minus = 0.5 * (1.0 - d2);
  c.c_plus = 0.5 * (1.0 + d4);
  c.c_minus = 0.5 * (1.0 - d4);

  const double ap = c.a_plus, am = c.a_minus;
  c.beta1_plus = ap * ap + c.c_minus * am * am;
  c.beta1_minus = am * am + c.c_minus * ap * ap;
  c.beta2_plus = c.c_plus * ap * ap;
  c.beta2_minus = c.c_plus * am * am;
  c.beta3_plus = ap - d4 * am;
  c.beta3_minus = am - d4 * ap;

  const double r2 = r * r;
  c.alpha1_pp = 1.0 + 2.0 * c.beta1_plus * r + c.beta3_plus * r2;
  c.alpha1_pm = 1.0 + 2.0 * c.beta1_minus * r + c.beta3_minus * r2;
  c.alpha1_mp = 1.0 - 2.0 * c.beta1_plus * r + c.beta3_plus * r2;
  c.alpha1_mm = 1.0 - 2.0 * c.beta1_minus * r + c.beta3_minus * r2;

  // α⁽²⁾ pairs β⁽²⁾_± with β⁽³⁾_∓.
  c.alpha2_pp = 1.0 + 2.0 * c.beta2_plus * r - c.beta3_minus * r2;
  c.alpha2_pm = 1.0 + 2.0 * c.beta2_minus * r - c.beta3_plus * r2;
  c.alpha2_mp = 1.0 - 2.0 * c.beta2_plus * r - c.beta3_minus * r2;
  c.alpha2_mm = 1.0 - 2.0 * c.beta2_minus * r - c.beta3_plus * r2;

  c.alpha3_pp = ap * (ap + r);
  c.alpha3_pm = am * (am + r);
  c.alpha3_mp = ap * (ap - r);
  c.alpha3_mm = am * (am - r);

  c.alpha4_plus = 2.0 * d + (1.0 + c.b_plus) * r;
  c.alpha4_minus = 2.0 * d - (1.0 + c.b_plus) * r;
  c.alpha5_plus = 2.0 * ap * (1.0 + ap);
  c.alpha5_minus = -2.0 * am * (1.0 + am);

  const Complex one_plus_i{1.0, 1.0};
  c.alpha6_plus = 2.0 * one_plus_i * d * c.b_plus + c.c_plus * r;
  c.alpha6_minus = 2.0 * one_plus_i * d * c.b_plus - c.c_plus * r;
  return c;
}

ChiBlocks chi_blocks(const CoefficientSet& c) {
  const double r = c.r;
  const double bm = c.b_minus, cp = c.c_plus, cm = c.c_minus;
  ChiBlocks out;
  auto& M = out.blocks;

  M[0] = rows({{c.alpha1_pp, c.alpha1_pm, c.alpha1_mp, c.alpha1_mm},
               {c.alpha2_pm, c.alpha2_pp, c.alpha2_mm, c.alpha2_mp},
               {c.alpha2_mm, c.alpha2_mp, c.alpha2_pm, c.alpha2_pp},
               {c.alpha1_mp, c.alpha1_mm, c.alpha1_pp, c.alpha1_pm}});

  M[1] = 2.0 * cp * r *
         rows({{c.alpha3_pp, c.alpha3_pm, c.alpha3_mm, c.alpha3_mp},
               {c.alpha3_pm, c.alpha3_pp, c.alpha3_mp, c.alpha3_mm},
               {c.alpha3_mp, c.alpha3_mm, c.alpha3_pm, c.alpha3_pp},
               {c.alpha3_mm, c.alpha3_mp, c.alpha3_pp, c.alpha3_pm}});

  const double a4p = c.alpha4_plus, a4m = c.alpha4_minus, br = bm * r;
  M[2] = cp * cp * r *
         rows({{a4p, br, a4m, -br},
               {br, a4p, -br, a4m},
               {a4m, -br, a4p, br},
               {-br, a4m, br, a4p}});

  const double a5p = c.alpha5_plus, a5m = c.alpha5_minus;
  M[3] = cp * r * r *
         rows({{a5p, bm, a5m, -bm},
               {bm, a5p, -bm, a5m},
               {a5m, -bm, a5p, bm},
               {-bm, a5m, bm, a5p}});

  M[4] = bm * cp * cp * r * r *
         rows({{-1, 1, 1, -1}, {1, -1, -1, 1}, {1, -1, -1, 1}, {-1, 1, 1, -1}});

  const Complex p6 = c.alpha6_plus, m6 = c.alpha6_minus;
  const Complex p6c = std::conj(p6), m6c = std::conj(m6);
  M[5] = -bm * r *
         rows({{p6, m6c, m6, p6c},
               {m6, p6c, p6, m6c},
               {m6c, p6, p6c, m6},
               {p6c, m6, m6c, p6}});

  const double top = 1.0 + cm;
  M[6] = bm * r *
         rows({{top, top, top, top},
               {cp, cp, cp, cp},
               {-cp, -cp, -cp, -cp},
               {-top, -top, -top, -top}});

  M[7] = bm * cp * r *
         rows({{1, 1, -1, -1}, {1, 1, -1, -1}, {1, 1, -1, -1}, {1, 1, -1, -1}});
  M[8] = cm * M[7];
  M[9] = cm * M[1];
  M[10] = 2.0 * cm * r * r *
          rows({{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 1, 1, 1}, {1, 1, 1, 1}});
  return out;
}

ProcessMatrix chi_closed_form(double r, double gdtau) {
  const ChiBlocks b = chi_blocks(coefficients(r, gdtau));
  // Block layout by (block row, block column) -> M index, 0 = zero block.
  constexpr int layout[4][4] = {
      {1, 7, 0, 0}, {8, 2, 0, 0}, {9, 10, 5, 3}, {11, 0, 4, 6}};
  Chi16 chi = Chi16::Zero();
  for (int br = 0; br < 4; ++br) {
    for (int bc = 0; bc < 4; ++bc) {
      if (layout[br][bc] != 0) {
        chi.block<4, 4>(4 * br, 4 * bc) = 0.25 * b.M(layout[br][bc]);
      }
    }
  }
  return ProcessMatrix(chi);
}

double chi_1111(double r, double gdtau) {
  check_params(r, gdtau);
  const double d = dephasing(gdtau);
  const double d4 = std::pow(d, 4);
  const double linear = 2.0 * (1.0 + d) * (1.0 + d) + (1.0 - d4) * (1.0 - d) * (1.0 - d);
  const double quadratic = 2.0 * (1.0 + d - d4 * (1.0 - d));
  return (4.0 + linear * r + quadratic * r * r) / 16.0;
}

Op4 averaged_cnot_output_11(double gdtau) {
  check_params(1.0, gdtau);
  const double d = dephasing(gdtau);
  const double leak = 1.0 - d * d;
  Op4 rho = Op4::Zero();
  rho(0, 0) = (1.0 + d) * (3.0 + d);
  rho(1, 1) = (1.0 - d) * (3.0 - d);
  rho(2, 2) = leak;
  rho(3, 3) = leak;
  rho(0, 1) = leak;
  rho(1, 0) = leak;
  return rho / 8.0;
}

double fidelity_closed_form(double r, double gdtau) {
  const CoefficientSet c = coefficients(r, gdtau);
  const double cp = c.c_plus;
  return (c.alpha1_pp + c.alpha2_pp +
          2.0 * (2.0 * cp * r * c.alpha3_pp + cp * cp * r * c.alpha4_plus +
                 cp * r * r * c.alpha5_plus)) /
         32.0;
}

}  // namespace spinqpt
