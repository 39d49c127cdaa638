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

#include "spinqpt/blockade.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spinqpt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Op4 rotation_operator(const Rotate& rot) {
  switch (rot.scope) {
    case RotationScope::X:
      return local_rotation(Qubit::X, rot.axis, rot.theta);
    case RotationScope::A:
      return local_rotation(Qubit::A, rot.axis, rot.theta);
    case RotationScope::Global:
      return global_rotation(rot.axis, rot.theta);
  }
  return Op4::Identity();
}

bool declared_up(Outcome o) { return o == Outcome::Up; }

Outcome flipped(Outcome o) {
  return o == Outcome::Up ? Outcome::Down : Outcome::Up;
}

// P ρ P for an edge projector, without the dense products.
Op4 project_edge(const Op4& rho, Outcome actual) {
  const int keep = declared_up(actual) ? 0 : 2;
  Op4 out = Op4::Zero();
  out.block<2, 2>(keep, keep) = rho.block<2, 2>(keep, keep);
  return out;
}

Ket4 project_edge(const Ket4& psi, Outcome actual) {
  Ket4 out = psi;
  const int drop = declared_up(actual) ? 2 : 0;
  out(drop) = 0.0;
  out(drop + 1) = 0.0;
  return out;
}

}  // namespace

MeasureSequence::MeasureSequence(std::vector<MeasurePrimitive> steps)
    : steps_(std::move(steps)) {
  if (steps_.empty()) {
    throw std::invalid_argument("MeasureSequence: no steps");
  }
  if (!std::holds_alternative<Project>(steps_.back())) {
    throw std::invalid_argument("MeasureSequence: last step must be a projection");
  }
  for (const auto& step : steps_) {
    if (const auto* e = std::get_if<Evolve>(&step)) {
      if (!(e->mean_time > 0.0) || !std::isfinite(e->mean_time)) {
        throw std::invalid_argument("MeasureSequence: Evolve mean_time must be > 0");
      }
    } else if (const auto* r = std::get_if<Rotate>(&step)) {
      if (!std::isfinite(r->theta)) {
        throw std::invalid_argument("MeasureSequence: Rotate angle must be finite");
      }
    }
  }
}

std::size_t MeasureSequence::projection_count() const {
  std::size_t n = 0;
  for (const auto& s : steps_) n += std::holds_alternative<Project>(s);
  return n;
}

BranchWeight BranchWeight::from_polarization(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("BranchWeight: r must lie in [0, 1]");
  }
  return {(1.0 + r) / 2.0, (1.0 - r) / 2.0};
}

Op4 blockade_map(const Op4& rho, Outcome declared, double r) {
  const BranchWeight w = BranchWeight::from_polarization(r);
  return w.correct * project_edge(rho, declared) +
         w.error * project_edge(rho, flipped(declared));
}

// ---------------------------------------------------------------------------
// SequenceRunner

SequenceRunner::SequenceRunner(const MeasureSequence& seq,
                               const NoiseParams& noise)
    : noise_(noise) {
  noise_.validate();
  const Op4 h = exchange_hamiltonian(noise_.g);
  for (const auto& prim : seq.steps()) {
    Step step{};
    std::visit(Overloaded{
                   [&](const Project& p) {
                     step.kind = Step::Kind::Project;
                     step.declared = p.declared;
                   },
                   [&](const Evolve& e) {
                     step.kind = Step::Kind::Evolve;
                     step.mean_time = e.mean_time / noise_.g;
                     step.evolve_index = static_cast<int>(averaged_.size());
                     averaged_.push_back(gaussian_averaged_channel(
                         h, step.mean_time, noise_.delta_tau));
                   },
                   [&](const Rotate& r) {
                     step.kind = Step::Kind::Rotate;
                     step.rotation = rotation_operator(r);
                   },
               },
               prim);
    steps_.push_back(step);
  }
  propagators_.emplace_back(h);
}

double SequenceRunner::probability(const Op4& rho) const {
  Op4 state = rho;
  for (const Step& s : steps_) {
    switch (s.kind) {
      case Step::Kind::Project:
        state = blockade_map(state, s.declared, noise_.r);
        break;
      case Step::Kind::Evolve:
        state = averaged_[s.evolve_index].apply(state);
        break;
      case Step::Kind::Rotate:
        state = s.rotation * state * s.rotation.adjoint();
        break;
    }
  }
  return state.trace().real();
}

double SequenceRunner::sample(const Op4& rho, Rng& rng) const {
  std::bernoulli_distribution faithful((1.0 + noise_.r) / 2.0);
  const SpectralPropagator& prop = propagators_.front();
  Op4 state = rho;
  for (const Step& s : steps_) {
    switch (s.kind) {
      case Step::Kind::Project: {
        const Outcome actual = faithful(rng) ? s.declared : flipped(s.declared);
        state = project_edge(state, actual);
        break;
      }
      case Step::Kind::Evolve: {
        const Op4 u = prop.unitary(sample_duration(s.mean_time, noise_.delta_tau, rng));
        state = u * state * u.adjoint();
        break;
      }
      case Step::Kind::Rotate:
        state = s.rotation * state * s.rotation.adjoint();
        break;
    }
  }
  return state.trace().real();
}

double SequenceRunner::sample(const Ket4& psi, Rng& rng) const {
  std::bernoulli_distribution faithful((1.0 + noise_.r) / 2.0);
  const SpectralPropagator& prop = propagators_.front();
  Ket4 state = psi;
  for (const Step& s : steps_) {
    switch (s.kind) {
      case Step::Kind::Project: {
        const Outcome actual = faithful(rng) ? s.declared : flipped(s.declared);
        state = project_edge(state, actual);
        break;
      }
      case Step::Kind::Evolve:
        state = prop.apply(state, sample_duration(s.mean_time, noise_.delta_tau, rng));
        break;
      case Step::Kind::Rotate:
        state = s.rotation * state;
        break;
    }
  }
  return state.squaredNorm();
}

// ---------------------------------------------------------------------------

double sequence_probability(const MeasureSequence& seq, const Op4& rho,
                            const NoiseParams& noise) {
  return SequenceRunner(seq, noise).probability(rho);
}

double sequence_probability(const MeasureSequence& seq,
                            const DensityMatrix4& rho, const NoiseParams& noise) {
  return sequence_probability(seq, rho.matrix(), noise);
}

McEstimate sequence_probability_mc(const MeasureSequence& seq, const Op4& rho,
                                   const NoiseParams& noise,
                                   const McOptions& opts, std::uint64_t stream) {
  if (opts.samples < 1) {
    throw std::invalid_argument("sequence_probability_mc: need at least one sample");
  }
  const SequenceRunner runner(seq, noise);
  return estimate_mean(opts, stream,
                       [&](Rng& rng) { return runner.sample(rho, rng); });
}

McEstimate sequence_probability_mc(const MeasureSequence& seq, const Ket4& psi,
                                   const NoiseParams& noise,
                                   const McOptions& opts, std::uint64_t stream) {
  if (opts.samples < 1) {
    throw std::invalid_argument("sequence_probability_mc: need at least one sample");
  }
  const SequenceRunner runner(seq, noise);
  return estimate_mean(opts, stream,
                       [&](Rng& rng) { return runner.sample(psi, rng); });
}

Op4 ideal_effect_operator(const MeasureSequence& seq, double g) {
  if (!(g > 0.0)) throw std::invalid_argument("ideal_effect_operator: g <= 0");
  const Op4 h = exchange_hamiltonian(g);
  Op4 effect = Op4::Identity();
  const auto& steps = seq.steps();
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    std::visit(Overloaded{
                   [&](const Project& p) {
                     const Op4 proj = edge_projector(declared_up(p.declared));
                     effect = proj * effect * proj;
                   },
                   [&](const Evolve& e) {
                     const Op4 u = evolve_unitary(h, e.mean_time / g);
                     effect = u.adjoint() * effect * u;
                   },
                   [&](const Rotate& r) {
                     const Op4 u = rotation_operator(r);
                     effect = u.adjoint() * effect * u;
                   },
               },
               *it);
  }
  return 0.5 * (effect + effect.adjoint());
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, int line) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument("parse_sequence: line " + std::to_string(line) +
                                ": bad number '" + std::string(token) + "'");
  }
  return v;
}

char scope_char(RotationScope s) {
  switch (s) {
    case RotationScope::X:
      return 'X';
    case RotationScope::A:
      return 'A';
    case RotationScope::Global:
      return 'G';
  }
  return '?';
}

char axis_char(Axis a) {
  switch (a) {
    case Axis::x:
      return 'x';
    case Axis::y:
      return 'y';
    case Axis::z:
      return 'z';
  }
  return '?';
}

}  // namespace

std::string to_text(const MeasureSequence& seq) {
  std::string out;
  for (const auto& prim : seq.steps()) {
    std::visit(Overloaded{
                   [&](const Project& p) {
                     out += declared_up(p.declared) ? "P+" : "P-";
                   },
                   [&](const Evolve& e) { out += "E " + format_double(e.mean_time); },
                   [&](const Rotate& r) {
                     out += "R ";
                     out += scope_char(r.scope);
                     out += ' ';
                     out += axis_char(r.axis);
                     out += ' ';
                     out += format_double(r.theta);
                   },
               },
               prim);
    out += '\n';
  }
  return out;
}

MeasureSequence parse_sequence(std::string_view text) {
  std::vector<MeasurePrimitive> steps;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("parse_sequence: line " + std::to_string(line_no) +
                                ": " + why);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream line(raw);
    std::vector<std::string> tok;
    for (std::string t; line >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;

    if (tok[0] == "P+" || tok[0] == "P-") {
      if (tok.size() != 1) fail("unexpected tokens after " + tok[0]);
      steps.emplace_back(Project{tok[0] == "P+" ? Outcome::Up : Outcome::Down});
    } else if (tok[0] == "E") {
      if (tok.size() != 2) fail("expected 'E <mean_time>'");
      steps.emplace_back(Evolve{parse_double(tok[1], line_no)});
    } else if (tok[0] == "R") {
      if (tok.size() != 4 || tok[1].size() != 1 || tok[2].size() != 1) {
        fail("expected 'R <X|A|G> <x|y|z> <theta>'");
      }
      Rotate r;
      switch (tok[1][0]) {
        case 'X': r.scope = RotationScope::X; break;
        case 'A': r.scope = RotationScope::A; break;
        case 'G': r.scope = RotationScope::Global; break;
        default: fail("unknown rotation scope '" + tok[1] + "'");
      }
      switch (tok[2][0]) {
        case 'x': r.axis = Axis::x; break;
        case 'y': r.axis = Axis::y; break;
        case 'z': r.axis = Axis::z; break;
        default: fail("unknown rotation axis '" + tok[2] + "'");
      }
      r.theta = parse_double(tok[3], line_no);
      steps.emplace_back(r);
    } else {
      fail("unknown primitive '" + tok[0] + "'");
    }
  }
  return MeasureSequence(std::move(steps));
}

}  // namespace spinqpt
