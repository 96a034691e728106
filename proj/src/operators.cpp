// Copyright 2026 The qcrisk developers
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

#include "qcrisk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "qcrisk/errors.hpp"

namespace qcrisk {

namespace {

constexpr std::size_t kMaxPermutationBits = 24;

void require_qubit(std::size_t qubit, std::size_t arity, const char *role) {
    if (qubit >= arity) {
        throw std::invalid_argument(std::string(role) + " qubit " + std::to_string(qubit) +
                                    " out of range for arity " + std::to_string(arity));
    }
}

void validate_step(const Step &step, std::size_t arity) {
    if (const auto *gate = std::get_if<Gate>(&step)) {
        require_qubit(gate->target, arity, "target");
        for (std::size_t control : gate->controls) {
            require_qubit(control, arity, "control");
            if (control == gate->target) {
                throw std::invalid_argument("control qubit coincides with gate target");
            }
        }
    } else {
        const auto &perm = std::get<PhasedPermutation>(step);
        if (perm.qubits.empty() || perm.qubits.size() > kMaxPermutationBits) {
            throw std::invalid_argument("permutation register must span 1.." + std::to_string(kMaxPermutationBits) +
                                        " qubits");
        }
        std::set<std::size_t> seen;
        for (std::size_t qubit : perm.qubits) {
            require_qubit(qubit, arity, "register");
            if (!seen.insert(qubit).second) {
                throw std::invalid_argument("permutation register lists a qubit twice");
            }
        }
        const std::size_t size = std::size_t{1} << perm.qubits.size();
        if (perm.mapping.size() != size) {
            throw std::invalid_argument("permutation table size mismatch");
        }
        if (!perm.phases.empty() && perm.phases.size() != size) {
            throw std::invalid_argument("phase table size mismatch");
        }
        std::vector<bool> hit(size, false);
        for (std::uint64_t image : perm.mapping) {
            if (image >= size || hit[image]) {
                throw std::invalid_argument("mapping is not reversible: not a bijection on the register");
            }
            hit[image] = true;
        }
        for (const complex_t &phase : perm.phases) {
            if (std::abs(std::abs(phase) - 1.0) > 1e-12) {
                throw std::invalid_argument("permutation phases must have modulus one");
            }
        }
    }
}

void gate_matrix(const Gate &gate, complex_t u[2][2]) {
    switch (gate.kind) {
    case GateKind::X:
        u[0][0] = 0.0; u[0][1] = 1.0;
        u[1][0] = 1.0; u[1][1] = 0.0;
        break;
    case GateKind::H: {
        const double s = 1.0 / std::sqrt(2.0);
        u[0][0] = s; u[0][1] = s;
        u[1][0] = s; u[1][1] = -s;
        break;
    }
    case GateKind::Z:
        u[0][0] = 1.0; u[0][1] = 0.0;
        u[1][0] = 0.0; u[1][1] = -1.0;
        break;
    case GateKind::RY: {
        const double c = std::cos(gate.angle / 2.0);
        const double s = std::sin(gate.angle / 2.0);
        u[0][0] = c; u[0][1] = -s;
        u[1][0] = s; u[1][1] = c;
        break;
    }
    }
}

Step adjoint_step(const Step &step) {
    if (const auto *gate = std::get_if<Gate>(&step)) {
        Gate inverse = *gate;
        if (gate->kind == GateKind::RY) {
            inverse.angle = -gate->angle;
        }
        return inverse;
    }
    const auto &perm = std::get<PhasedPermutation>(step);
    PhasedPermutation inverse;
    inverse.qubits = perm.qubits;
    inverse.mapping.resize(perm.mapping.size());
    if (!perm.phases.empty()) {
        inverse.phases.resize(perm.phases.size());
    }
    for (std::uint64_t value = 0; value < perm.mapping.size(); ++value) {
        const std::uint64_t image = perm.mapping[value];
        inverse.mapping[image] = value;
        if (!perm.phases.empty()) {
            inverse.phases[image] = std::conj(perm.phases[value]);
        }
    }
    return inverse;
}

Step shifted_step(const Step &step, std::size_t offset) {
    if (const auto *gate = std::get_if<Gate>(&step)) {
        Gate moved = *gate;
        moved.target += offset;
        for (std::size_t &control : moved.controls) {
            control += offset;
        }
        return moved;
    }
    PhasedPermutation moved = std::get<PhasedPermutation>(step);
    for (std::size_t &qubit : moved.qubits) {
        qubit += offset;
    }
    return moved;
}

// Widens a permutation with control qubits appended as high bits of the local
// value; the original action fires only when every control bit is set.
PhasedPermutation controlled_permutation(const PhasedPermutation &perm, const std::vector<std::size_t> &controls) {
    PhasedPermutation gated;
    gated.qubits = perm.qubits;
    gated.qubits.insert(gated.qubits.end(), controls.begin(), controls.end());
    if (gated.qubits.size() > kMaxPermutationBits) {
        throw std::invalid_argument("controlled permutation register too wide");
    }
    const std::size_t low_bits = perm.qubits.size();
    const std::uint64_t low_mask = (std::uint64_t{1} << low_bits) - 1;
    const std::uint64_t control_mask = ((std::uint64_t{1} << controls.size()) - 1) << low_bits;
    const std::size_t size = std::size_t{1} << gated.qubits.size();
    gated.mapping.resize(size);
    const bool has_phases = !perm.phases.empty();
    if (has_phases) {
        gated.phases.assign(size, complex_t{1.0, 0.0});
    }
    for (std::uint64_t value = 0; value < size; ++value) {
        if ((value & control_mask) == control_mask) {
            gated.mapping[value] = (value & ~low_mask) | perm.mapping[value & low_mask];
            if (has_phases) {
                gated.phases[value] = perm.phases[value & low_mask];
            }
        } else {
            gated.mapping[value] = value;
        }
    }
    return gated;
}

} // namespace

Operator::Operator(std::size_t arity, std::string name, std::vector<Step> steps)
    : arity_(arity), name_(std::move(name)), steps_(std::move(steps)) {
    if (arity_ == 0) {
        throw std::invalid_argument("operator arity must be positive");
    }
    for (const Step &step : steps_) {
        validate_step(step, arity_);
    }
}

Operator Operator::identity(std::size_t arity, std::string name) {
    return Operator(arity, std::move(name), {});
}

Operator Operator::single_gate(std::size_t arity, GateKind kind, std::size_t target, double angle) {
    return Operator(arity, "gate", {Gate{kind, target, {}, angle}});
}

Operator Operator::diagonal(std::size_t arity, std::vector<std::size_t> qubits,
                            const std::function<complex_t(std::uint64_t)> &phase, std::string name) {
    if (qubits.empty() || qubits.size() > kMaxPermutationBits) {
        throw std::invalid_argument("diagonal register must span 1.." + std::to_string(kMaxPermutationBits) +
                                    " qubits");
    }
    const std::size_t size = std::size_t{1} << qubits.size();
    PhasedPermutation perm;
    perm.qubits = std::move(qubits);
    perm.mapping.resize(size);
    perm.phases.resize(size);
    for (std::uint64_t value = 0; value < size; ++value) {
        perm.mapping[value] = value;
        perm.phases[value] = phase(value);
    }
    return Operator(arity, std::move(name), {Step(std::move(perm))});
}

Operator Operator::multi_controlled_z(std::size_t arity, std::vector<std::size_t> qubits) {
    if (qubits.empty()) {
        throw std::invalid_argument("multi-controlled Z needs at least one qubit");
    }
    Gate z{GateKind::Z, qubits.front(), {qubits.begin() + 1, qubits.end()}, 0.0};
    return Operator(arity, "mcz", {std::move(z)});
}

Operator Operator::reflect_about_zero(std::size_t arity, std::vector<std::size_t> qubits) {
    if (qubits.empty()) {
        throw std::invalid_argument("zero reflection needs at least one qubit");
    }
    std::vector<Step> steps;
    for (std::size_t qubit : qubits) {
        steps.push_back(Gate{GateKind::X, qubit, {}, 0.0});
    }
    steps.push_back(Gate{GateKind::Z, qubits.front(), {qubits.begin() + 1, qubits.end()}, 0.0});
    for (std::size_t qubit : qubits) {
        steps.push_back(Gate{GateKind::X, qubit, {}, 0.0});
    }
    return Operator(arity, "reflect0", std::move(steps));
}

StateVector Operator::apply(const StateVector &state) const {
    if (state.n_qubits() != arity_) {
        throw std::invalid_argument("operator arity " + std::to_string(arity_) + " does not match state width " +
                                    std::to_string(state.n_qubits()));
    }
    StateVector result = state;
    for (const Step &step : steps_) {
        if (const auto *gate = std::get_if<Gate>(&step)) {
            complex_t u[2][2];
            gate_matrix(*gate, u);
            std::uint64_t control_mask = 0;
            for (std::size_t control : gate->controls) {
                control_mask |= std::uint64_t{1} << control;
            }
            result.apply_single_qubit(u, gate->target, control_mask);
        } else {
            const auto &perm = std::get<PhasedPermutation>(step);
            result.permute_basis(perm.qubits, perm.mapping, perm.phases);
        }
    }
    return result;
}

Operator Operator::adjoint() const {
    std::vector<Step> reversed;
    reversed.reserve(steps_.size());
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        reversed.push_back(adjoint_step(*it));
    }
    return Operator(arity_, name_ + "^dag", std::move(reversed));
}

Operator Operator::embedded(std::size_t new_arity, std::size_t offset) const {
    if (offset + arity_ > new_arity) {
        throw std::invalid_argument("embedding exceeds the target register");
    }
    std::vector<Step> moved;
    moved.reserve(steps_.size());
    for (const Step &step : steps_) {
        moved.push_back(shifted_step(step, offset));
    }
    return Operator(new_arity, name_, std::move(moved));
}

Operator Operator::then(const Operator &next) const {
    if (next.arity_ != arity_) {
        throw std::invalid_argument("composed operators must share an arity");
    }
    std::vector<Step> combined = steps_;
    combined.insert(combined.end(), next.steps_.begin(), next.steps_.end());
    return Operator(arity_, name_ + ";" + next.name_, std::move(combined));
}

Operator Operator::sequence(std::string name, const std::vector<Operator> &parts) {
    if (parts.empty()) {
        throw std::invalid_argument("empty operator sequence");
    }
    std::vector<Step> combined;
    for (const Operator &part : parts) {
        if (part.arity_ != parts.front().arity_) {
            throw std::invalid_argument("composed operators must share an arity");
        }
        combined.insert(combined.end(), part.steps_.begin(), part.steps_.end());
    }
    return Operator(parts.front().arity_, std::move(name), std::move(combined));
}

std::vector<std::size_t> Operator::support() const {
    std::set<std::size_t> touched;
    for (const Step &step : steps_) {
        if (const auto *gate = std::get_if<Gate>(&step)) {
            touched.insert(gate->target);
        } else {
            const auto &perm = std::get<PhasedPermutation>(step);
            touched.insert(perm.qubits.begin(), perm.qubits.end());
        }
    }
    return {touched.begin(), touched.end()};
}

Operator controlled(const Operator &op, const std::vector<std::size_t> &controls) {
    if (controls.empty()) {
        return op;
    }
    std::set<std::size_t> control_set(controls.begin(), controls.end());
    if (control_set.size() != controls.size()) {
        throw std::invalid_argument("duplicate control qubit");
    }
    for (std::size_t touched : op.support()) {
        if (control_set.count(touched) != 0) {
            throw std::invalid_argument("control qubit " + std::to_string(touched) +
                                        " overlaps the controlled operator's targets");
        }
    }
    std::size_t arity = op.arity();
    for (std::size_t control : controls) {
        arity = std::max(arity, control + 1);
    }
    std::vector<Step> gated;
    gated.reserve(op.steps().size());
    for (const Step &step : op.steps()) {
        if (const auto *gate = std::get_if<Gate>(&step)) {
            Gate widened = *gate;
            for (std::size_t control : controls) {
                if (std::find(widened.controls.begin(), widened.controls.end(), control) == widened.controls.end()) {
                    widened.controls.push_back(control);
                }
            }
            gated.emplace_back(std::move(widened));
        } else {
            gated.emplace_back(controlled_permutation(std::get<PhasedPermutation>(step), controls));
        }
    }
    return Operator(arity, "c-" + op.name(), std::move(gated));
}

Operator permutation_operator(std::size_t arity, std::vector<std::size_t> qubits,
                              const std::function<std::uint64_t(std::uint64_t)> &f, std::string name) {
    if (qubits.empty() || qubits.size() > kMaxPermutationBits) {
        throw std::invalid_argument("permutation register must span 1.." + std::to_string(kMaxPermutationBits) +
                                    " qubits");
    }
    const std::size_t size = std::size_t{1} << qubits.size();
    PhasedPermutation perm;
    perm.qubits = std::move(qubits);
    perm.mapping.resize(size);
    for (std::uint64_t value = 0; value < size; ++value) {
        perm.mapping[value] = f(value);
    }
    // The Operator constructor re-verifies bijectivity and rejects
    // irreversible maps.
    return Operator(arity, std::move(name), {Step(std::move(perm))});
}

StateVector apply(const Operator &op, const StateVector &state) {
    return op.apply(state);
}

} // namespace qcrisk
