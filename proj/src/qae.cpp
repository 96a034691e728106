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

#include "qcrisk/qae.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "qcrisk/errors.hpp"

namespace qcrisk {

double QaeResult::grid_value(std::size_t y) const {
    const double s = std::sin(static_cast<double>(y) * std::numbers::pi / static_cast<double>(outcome_probs.size()));
    return s * s;
}

double qae_error_bound(double a, double samples) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("amplitude must lie in [0, 1]");
    }
    if (!(samples >= 1.0)) {
        throw std::invalid_argument("sample count must be at least 1");
    }
    return 2.0 * std::sqrt(a * (1.0 - a)) * std::numbers::pi / samples +
           std::numbers::pi * std::numbers::pi / (samples * samples);
}

double median_estimate(std::vector<double> estimates) {
    if (estimates.empty()) {
        throw std::invalid_argument("median of an empty estimate list");
    }
    std::sort(estimates.begin(), estimates.end());
    return estimates[(estimates.size() - 1) / 2];
}

Operator fourier_transform(std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("Fourier transform needs at least one qubit");
    }
    std::vector<Step> steps;
    for (std::size_t q = m; q-- > 0;) {
        steps.push_back(Gate{GateKind::H, q, {}, 0.0});
        for (std::size_t k = q; k-- > 0;) {
            // Controlled phase exp(i pi / 2^(q-k)) between qubits k and q.
            const double angle = std::numbers::pi / static_cast<double>(std::uint64_t{1} << (q - k));
            const complex_t phase = std::polar(1.0, angle);
            PhasedPermutation cp;
            cp.qubits = {k, q};
            cp.mapping = {0, 1, 2, 3};
            cp.phases = {1.0, 1.0, 1.0, phase};
            steps.emplace_back(std::move(cp));
        }
    }
    // Bit-reversal swaps, each as three alternating CXs.
    for (std::size_t j = 0; j < m / 2; ++j) {
        const std::size_t a = j;
        const std::size_t b = m - 1 - j;
        steps.push_back(Gate{GateKind::X, b, {a}, 0.0});
        steps.push_back(Gate{GateKind::X, a, {b}, 0.0});
        steps.push_back(Gate{GateKind::X, b, {a}, 0.0});
    }
    return Operator(m, "QFT", std::move(steps));
}

namespace {

// Reflections inside the amplification operator, controlled by one
// evaluation qubit and routed through the kickback ancilla (held in |1>
// while the estimation loop runs).
Operator controlled_bad_state_reflection(std::size_t total, std::size_t objective, std::size_t eval_qubit,
                                         std::size_t ancilla) {
    return Operator(total, "c-reflect_bad",
                    {Gate{GateKind::X, objective, {}, 0.0},
                     Gate{GateKind::Z, ancilla, {objective, eval_qubit}, 0.0},
                     Gate{GateKind::X, objective, {}, 0.0}});
}

Operator controlled_zero_reflection(std::size_t total, std::size_t n_state, std::size_t eval_qubit,
                                    std::size_t ancilla) {
    std::vector<Step> steps;
    std::vector<std::size_t> controls;
    for (std::size_t q = 0; q < n_state; ++q) {
        steps.push_back(Gate{GateKind::X, q, {}, 0.0});
        controls.push_back(q);
    }
    controls.push_back(eval_qubit);
    steps.push_back(Gate{GateKind::Z, ancilla, controls, 0.0});
    for (std::size_t q = 0; q < n_state; ++q) {
        steps.push_back(Gate{GateKind::X, q, {}, 0.0});
    }
    return Operator(total, "c-reflect0", std::move(steps));
}

std::size_t argmax_estimate(const std::vector<double> &probs, const QaeResult &result) {
    std::size_t best = 0;
    double best_prob = probs[0];
    double best_value = result.grid_value(0);
    for (std::size_t y = 1; y < probs.size(); ++y) {
        const double value = result.grid_value(y);
        if (probs[y] > best_prob || (probs[y] == best_prob && value < best_value)) {
            best = y;
            best_prob = probs[y];
            best_value = value;
        }
    }
    return best;
}

// Uniform double in [0, 1) from the top 53 bits of the engine output; avoids
// std::uniform_real_distribution so sampled streams are reproducible across
// standard libraries.
double next_uniform(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

QaeResult run_amplitude_estimation(const Operator &state_prep, std::size_t objective, std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("amplitude estimation needs at least one evaluation qubit");
    }
    const std::size_t n_state = state_prep.arity();
    if (objective >= n_state) {
        throw std::invalid_argument("objective qubit outside the state register");
    }
    const std::size_t total = n_state + m + 1;
    if (total > kMaxSimQubits) {
        throw SizeLimitError("amplitude estimation would need " + std::to_string(total) +
                             " qubits, above the dense-simulation limit of " + std::to_string(kMaxSimQubits));
    }
    const std::size_t eval_first = n_state;
    const std::size_t ancilla = n_state + m;

    const Operator prep = state_prep.embedded(total, 0);
    const Operator prep_adjoint = prep.adjoint();

    StateVector state(total);
    state = prep.apply(state);
    for (std::size_t j = 0; j < m; ++j) {
        state = Operator::single_gate(total, GateKind::H, eval_first + j).apply(state);
    }
    state = Operator::single_gate(total, GateKind::X, ancilla).apply(state);

    // Controlled powers of the amplification operator: evaluation qubit j
    // controls 2^j applications. The oracle and its adjoint stay
    // uncontrolled; they cancel on the control-off branch because the
    // controlled reflections in between act as identity there.
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t eval_qubit = eval_first + j;
        const Operator reflect_bad = controlled_bad_state_reflection(total, objective, eval_qubit, ancilla);
        const Operator reflect_zero = controlled_zero_reflection(total, n_state, eval_qubit, ancilla);
        const std::uint64_t reps = std::uint64_t{1} << j;
        for (std::uint64_t r = 0; r < reps; ++r) {
            state = reflect_bad.apply(state);
            state = prep_adjoint.apply(state);
            state = reflect_zero.apply(state);
            state = prep.apply(state);
        }
    }

    state = Operator::single_gate(total, GateKind::X, ancilla).apply(state);
    state = fourier_transform(m).adjoint().embedded(total, eval_first).apply(state);

    QaeResult result;
    result.m = m;
    result.sample_count = std::size_t{1} << m;
    result.total_qubits = total;
    result.outcome_probs = state.register_distribution(eval_first, m);
    result.estimate = result.grid_value(argmax_estimate(result.outcome_probs, result));
    result.error_bound = qae_error_bound(result.estimate, static_cast<double>(result.sample_count));
    return result;
}

QaeResult run_amplitude_estimation(const CdfOracle &oracle, std::size_t m) {
    return run_amplitude_estimation(oracle.op, oracle.layout.objective(), m);
}

CdfPointEstimate estimate_cdf_point(const Portfolio &portfolio, const std::optional<LatentGrid> &grid,
                                    std::int64_t threshold, std::size_t m, LoadingMode mode,
                                    std::optional<std::size_t> shots, std::uint64_t seed) {
    const CdfOracle oracle = build_cdf_oracle(portfolio, grid, threshold, mode);
    CdfPointEstimate point;
    point.threshold = threshold;
    point.qae = run_amplitude_estimation(oracle, m);

    if (shots && *shots > 0) {
        std::vector<double> cumulative(point.qae.outcome_probs.size());
        double running = 0.0;
        for (std::size_t y = 0; y < cumulative.size(); ++y) {
            running += point.qae.outcome_probs[y];
            cumulative[y] = running;
        }
        std::mt19937_64 rng(seed);
        std::vector<std::uint64_t> counts(cumulative.size(), 0);
        for (std::size_t s = 0; s < *shots; ++s) {
            const double u = next_uniform(rng) * running;
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            const std::size_t y = std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
            ++counts[y];
        }
        std::size_t best = 0;
        for (std::size_t y = 1; y < counts.size(); ++y) {
            const bool better = counts[y] > counts[best] ||
                                (counts[y] == counts[best] && point.qae.grid_value(y) < point.qae.grid_value(best));
            if (better) {
                best = y;
            }
        }
        point.estimate = point.qae.grid_value(best);
    } else {
        point.estimate = point.qae.estimate;
    }
    point.error_bound = qae_error_bound(point.estimate, static_cast<double>(point.qae.sample_count));
    return point;
}

} // namespace qcrisk
