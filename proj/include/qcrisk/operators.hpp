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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "qcrisk/statevector.hpp"

namespace qcrisk {

enum class GateKind { X, H, Z, RY };

/// One elementary gate: a single-qubit unitary with an optional set of
/// (positive) control qubits. Multi-controlled Z is GateKind::Z plus controls.
struct Gate {
    GateKind kind;
    std::size_t target;
    std::vector<std::size_t> controls;
    double angle = 0.0; // RY only
};

/// Relabeling of the computational basis on a qubit subset, with an optional
/// unit-modulus phase attached to each source value: |v> -> phase[v] |map[v]>.
/// Qubits outside `qubits` are untouched. `qubits[0]` is the LSB of the local
/// value. An identity mapping with nontrivial phases is a diagonal operator.
struct PhasedPermutation {
    std::vector<std::size_t> qubits;
    std::vector<std::uint64_t> mapping;
    std::vector<complex_t> phases; // empty means all-ones
};

using Step = std::variant<Gate, PhasedPermutation>;

/**
 * @brief A unitary on a fixed number of qubits, stored as a step sequence.
 *
 * Steps are either gates or phased basis permutations and are applied in
 * order. Operators are immutable after construction and cheap to share;
 * adjoint(), controlled() and embedded() derive new operators without
 * touching the original.
 */
class Operator {
  public:
    Operator(std::size_t arity, std::string name, std::vector<Step> steps);

    static Operator identity(std::size_t arity, std::string name = "I");

    /// Single gate as an operator; `arity` may exceed the touched qubits.
    static Operator single_gate(std::size_t arity, GateKind kind, std::size_t target, double angle = 0.0);

    /// Diagonal operator: phase(v) per value v of the listed qubits. Every
    /// phase must have modulus one.
    static Operator diagonal(std::size_t arity, std::vector<std::size_t> qubits,
                             const std::function<complex_t(std::uint64_t)> &phase, std::string name = "diag");

    /// Phase flip (-1) on basis states where all listed qubits are |1>.
    static Operator multi_controlled_z(std::size_t arity, std::vector<std::size_t> qubits);

    /// Phase flip (-1) on basis states where all listed qubits are |0>.
    static Operator reflect_about_zero(std::size_t arity, std::vector<std::size_t> qubits);

    std::size_t arity() const { return arity_; }
    const std::string &name() const { return name_; }
    const std::vector<Step> &steps() const { return steps_; }

    /// Applies this operator to a state of matching width; returns the new
    /// state. Throws std::invalid_argument on arity mismatch.
    StateVector apply(const StateVector &state) const;

    /// Reverse step order with each step inverted.
    Operator adjoint() const;

    /// Same action on a wider register, with every qubit index shifted up by
    /// `offset`.
    Operator embedded(std::size_t new_arity, std::size_t offset) const;

    /// Steps of `next` appended after this operator's steps.
    Operator then(const Operator &next) const;

    /// Operators applied left-to-right as one composite.
    static Operator sequence(std::string name, const std::vector<Operator> &parts);

    /// Qubits this operator acts on non-trivially (targets and permutation
    /// registers; control qubits excluded).
    std::vector<std::size_t> support() const;

  private:
    std::size_t arity_;
    std::string name_;
    std::vector<Step> steps_;
};

/// Wraps `op` so it acts only on the subspace where every control qubit is
/// |1>. Controls must be disjoint from the operator's support; the result is
/// widened if a control index lies beyond the current arity.
Operator controlled(const Operator &op, const std::vector<std::size_t> &controls);

/// Builds the unitary |b> -> |f(b)> on the listed qubits. `f` is checked for
/// bijectivity by exhaustive enumeration; a non-reversible map is rejected
/// with std::invalid_argument.
Operator permutation_operator(std::size_t arity, std::vector<std::size_t> qubits,
                              const std::function<std::uint64_t(std::uint64_t)> &f, std::string name = "perm");

/// Free-function form of Operator::apply.
StateVector apply(const Operator &op, const StateVector &state);

/**
 * @brief Qubit assignment for the loss-CDF circuit.
 *
 * Registers are contiguous and ordered: latent factor, one qubit per asset,
 * loss sum, then a single objective qubit. The latent register is empty for
 * the independent default model.
 */
struct RegisterLayout {
    std::size_t n_latent = 0; // n_Z
    std::size_t n_assets = 0; // K
    std::size_t n_sum = 0;    // n_S

    std::size_t latent_first() const { return 0; }
    std::size_t asset_first() const { return n_latent; }
    std::size_t sum_first() const { return n_latent + n_assets; }
    std::size_t objective() const { return n_latent + n_assets + n_sum; }
    std::size_t total_qubits() const { return n_latent + n_assets + n_sum + 1; }
};

} // namespace qcrisk
