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

#include <cstdint>
#include <optional>
#include <vector>

#include "qcrisk/model_circuits.hpp"
#include "qcrisk/operators.hpp"

namespace qcrisk {

/**
 * @brief Outcome of one amplitude-estimation run.
 *
 * The evaluation register is read as an integer y in [0, 2^m); the point
 * estimate is the grid value sin^2(y pi / 2^m) of the most probable outcome,
 * with ties resolved toward the smaller grid value. `outcome_probs` is the
 * exact measurement distribution computed from the state vector, so repeated
 * runs are deterministic.
 */
struct QaeResult {
    std::size_t m = 0;            // evaluation qubits
    std::size_t sample_count = 0; // quantum samples M = 2^m used in bounds
    std::vector<double> outcome_probs;
    double estimate = 0.0;
    double error_bound = 0.0; // qae_error_bound(estimate, sample_count)
    std::size_t total_qubits = 0;

    double grid_value(std::size_t y) const;
};

/// Analytic estimation-error bound 2 pi sqrt(a(1-a))/M + pi^2/M^2.
double qae_error_bound(double a, double samples);

/// Lower median of a non-empty list of estimates.
double median_estimate(std::vector<double> estimates);

/// Canonical QFT (not its inverse) on m qubits, value read little-endian.
/// Exposed so tests can pin the transform against the DFT definition.
Operator fourier_transform(std::size_t m);

/// Phase estimation on the amplification operator of `state_prep`, whose
/// flagged amplitude lives on `objective` measuring |1>. Uses m evaluation
/// qubits plus one kickback ancilla for the reflections, so the full circuit
/// holds state_prep.arity() + m + 1 qubits.
QaeResult run_amplitude_estimation(const Operator &state_prep, std::size_t objective, std::size_t m);

/// Convenience overload for CDF oracles.
QaeResult run_amplitude_estimation(const CdfOracle &oracle, std::size_t m);

/// One CDF point estimated through QAE. With `shots` set, y is sampled from
/// the outcome distribution with a seeded generator and the estimate is the
/// empirical mode; without it the exact argmax is returned.
struct CdfPointEstimate {
    std::int64_t threshold = 0;
    double estimate = 0.0;
    double error_bound = 0.0;
    QaeResult qae;
};

CdfPointEstimate estimate_cdf_point(const Portfolio &portfolio, const std::optional<LatentGrid> &grid,
                                    std::int64_t threshold, std::size_t m, LoadingMode mode,
                                    std::optional<std::size_t> shots = std::nullopt, std::uint64_t seed = 0);

} // namespace qcrisk
