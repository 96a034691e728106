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

#include "qcrisk/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qcrisk/errors.hpp"

namespace qcrisk {

namespace {

std::size_t checked_width(std::size_t n_qubits) {
    if (n_qubits > kMaxSimQubits) {
        throw SizeLimitError("state of " + std::to_string(n_qubits) + " qubits exceeds the dense-simulation limit of " +
                             std::to_string(kMaxSimQubits));
    }
    return n_qubits;
}

} // namespace

StateVector::StateVector(std::size_t n_qubits)
    : n_qubits_(checked_width(n_qubits)), amplitudes_(std::size_t{1} << n_qubits, complex_t{0.0, 0.0}) {
    amplitudes_[0] = complex_t{1.0, 0.0};
}

StateVector StateVector::basis_state(std::size_t n_qubits, std::uint64_t index) {
    StateVector state(n_qubits);
    if (index >= state.dim()) {
        throw std::invalid_argument("basis index out of range");
    }
    state.amplitudes_[0] = complex_t{0.0, 0.0};
    state.amplitudes_[index] = complex_t{1.0, 0.0};
    return state;
}

StateVector StateVector::from_amplitudes(std::vector<complex_t> amplitudes) {
    const std::size_t size = amplitudes.size();
    if (size == 0 || (size & (size - 1)) != 0) {
        throw std::invalid_argument("amplitude count must be a power of two");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < size) {
        ++n;
    }
    StateVector state(checked_width(n));
    state.amplitudes_ = std::move(amplitudes);
    return state;
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto &amp : amplitudes_) {
        total += std::norm(amp);
    }
    return total;
}

double StateVector::qubit_probability(std::size_t qubit, int outcome) const {
    if (qubit >= n_qubits_) {
        throw std::invalid_argument("qubit index out of range");
    }
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("outcome must be 0 or 1");
    }
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double total = 0.0;
    for (std::uint64_t b = 0; b < amplitudes_.size(); ++b) {
        if (((b & bit) != 0) == (outcome == 1)) {
            total += std::norm(amplitudes_[b]);
        }
    }
    return total;
}

std::vector<double> StateVector::register_distribution(std::size_t first, std::size_t count) const {
    if (first + count > n_qubits_) {
        throw std::invalid_argument("register range out of bounds");
    }
    std::vector<double> dist(std::size_t{1} << count, 0.0);
    const std::uint64_t mask = (count == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
    for (std::uint64_t b = 0; b < amplitudes_.size(); ++b) {
        dist[(b >> first) & mask] += std::norm(amplitudes_[b]);
    }
    return dist;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> probs(amplitudes_.size());
    for (std::uint64_t b = 0; b < amplitudes_.size(); ++b) {
        probs[b] = std::norm(amplitudes_[b]);
    }
    return probs;
}

double StateVector::distance_to(const StateVector &other) const {
    if (other.n_qubits_ != n_qubits_) {
        throw std::invalid_argument("states have different widths");
    }
    double worst = 0.0;
    for (std::uint64_t b = 0; b < amplitudes_.size(); ++b) {
        worst = std::max(worst, std::abs(amplitudes_[b] - other.amplitudes_[b]));
    }
    return worst;
}

void StateVector::apply_single_qubit(const complex_t u[2][2], std::size_t target, std::uint64_t control_mask) {
    const std::uint64_t target_bit = std::uint64_t{1} << target;
    for (std::uint64_t b = 0; b < amplitudes_.size(); ++b) {
        if ((b & target_bit) != 0 || (b & control_mask) != control_mask) {
            continue;
        }
        const std::uint64_t partner = b | target_bit;
        const complex_t a0 = amplitudes_[b];
        const complex_t a1 = amplitudes_[partner];
        amplitudes_[b] = u[0][0] * a0 + u[0][1] * a1;
        amplitudes_[partner] = u[1][0] * a0 + u[1][1] * a1;
    }
}

void StateVector::permute_basis(const std::vector<std::size_t> &qubits, const std::vector<std::uint64_t> &mapping,
                                const std::vector<complex_t> &phases) {
    std::vector<complex_t> next(amplitudes_.size(), complex_t{0.0, 0.0});
    for (std::uint64_t b = 0; b < amplitudes_.size(); ++b) {
        std::uint64_t value = 0;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            value |= ((b >> qubits[k]) & 1u) << k;
        }
        const std::uint64_t image = mapping[value];
        std::uint64_t destination = b;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            const std::uint64_t bit = std::uint64_t{1} << qubits[k];
            if (((image >> k) & 1u) != 0) {
                destination |= bit;
            } else {
                destination &= ~bit;
            }
        }
        const complex_t phase = phases.empty() ? complex_t{1.0, 0.0} : phases[value];
        next[destination] = phase * amplitudes_[b];
    }
    amplitudes_ = std::move(next);
}

double probability_of(const StateVector &state, std::size_t qubit, int outcome) {
    return state.qubit_probability(qubit, outcome);
}

} // namespace qcrisk
