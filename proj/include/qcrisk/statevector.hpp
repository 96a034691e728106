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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qcrisk {

using complex_t = std::complex<double>;

/// Hard cap on dense simulation width. 2^24 amplitudes is the largest state
/// this engine will allocate; requests beyond it raise SizeLimitError.
inline constexpr std::size_t kMaxSimQubits = 24;

/**
 * @brief Dense state vector over n qubits.
 *
 * Basis convention is little-endian throughout the project: qubit 0 is the
 * least significant bit of the basis index. States are treated as immutable
 * values; operators return transformed copies (see Operator::apply).
 */
class StateVector {
  public:
    /// All-zeros computational basis state |0...0>.
    explicit StateVector(std::size_t n_qubits);

    /// Computational basis state |index>.
    static StateVector basis_state(std::size_t n_qubits, std::uint64_t index);

    /// Takes ownership of a raw amplitude vector; size must be a power of two.
    static StateVector from_amplitudes(std::vector<complex_t> amplitudes);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<complex_t> &amplitudes() const { return amplitudes_; }
    complex_t amplitude(std::uint64_t basis) const { return amplitudes_[basis]; }

    /// Sum of |amplitude|^2 (should be 1 for a physical state).
    double norm_squared() const;

    /// Probability of measuring `outcome` (0 or 1) on one qubit.
    double qubit_probability(std::size_t qubit, int outcome) const;

    /// Marginal distribution over a contiguous qubit range, indexed by the
    /// register value read little-endian (qubit `first` is the LSB).
    std::vector<double> register_distribution(std::size_t first, std::size_t count) const;

    /// Per-basis-state probabilities |amplitude|^2.
    std::vector<double> probabilities() const;

    /// Max absolute amplitude difference to another state of equal width.
    double distance_to(const StateVector &other) const;

  private:
    friend class Operator;

    std::size_t n_qubits_;
    std::vector<complex_t> amplitudes_;

    // In-place kernels, reachable only through Operator application so that
    // the public surface stays value-semantic.
    void apply_single_qubit(const complex_t u[2][2], std::size_t target, std::uint64_t control_mask);
    void permute_basis(const std::vector<std::size_t> &qubits, const std::vector<std::uint64_t> &mapping,
                       const std::vector<complex_t> &phases);
};

/// Free-function form of StateVector::qubit_probability.
double probability_of(const StateVector &state, std::size_t qubit, int outcome);

} // namespace qcrisk
