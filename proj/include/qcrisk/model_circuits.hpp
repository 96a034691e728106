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

#include "qcrisk/distributions.hpp"
#include "qcrisk/operators.hpp"

namespace qcrisk {

/// How the correlated model writes conditional default probabilities into the
/// asset qubits. Linear uses the first-order angle fit realized with one
/// rotation per asset plus one controlled rotation per latent qubit; Exact
/// applies one multi-controlled rotation per latent grid point and serves as
/// a validation reference.
enum class LoadingMode { Linear, Exact };

/// Loads the discretized factor distribution onto `grid.n_qubits` qubits:
/// |0..0> becomes sum_i sqrt(q_i) |i>. Built as a binary tree of controlled
/// RY rotations.
Operator build_latent_loader(const LatentGrid &grid);

/// Independent-model uncertainty loader on one qubit per asset: qubit k
/// measures |1> with probability pd0 of asset k.
Operator build_independent_loader(const Portfolio &portfolio);

/// Correlated-model uncertainty loader on n_Z + K qubits: latent register in
/// qubits [0, n_Z), asset k on qubit n_Z + k. `fits` must hold one entry per
/// asset, computed on `grid` (Linear mode only; Exact ignores it).
Operator build_gci_loader(const Portfolio &portfolio, const LatentGrid &grid, const std::vector<AngleFit> &fits,
                          LoadingMode mode);

/// Weighted-sum permutation on K + n_S qubits (assets low, sum high):
/// XOR-adds lgd_1 x_1 + ... + lgd_K x_K into the sum register. Self-inverse;
/// coincides with plain addition when the sum register starts at zero.
Operator build_weighted_sum(const Portfolio &portfolio);

/// Comparator permutation on n_sum + 1 qubits: flips the top (objective)
/// qubit exactly when the sum-register value is <= threshold. The threshold
/// must be representable in the sum register.
Operator build_loss_comparator(std::int64_t threshold, std::size_t n_sum);

/**
 * @brief The loss-CDF state-preparation oracle.
 *
 * Applying `op` to |0...0> leaves the objective qubit measuring |1> with
 * probability P[total loss <= threshold] under the loaded model.
 */
struct CdfOracle {
    Operator op = Operator::identity(1);
    RegisterLayout layout;
    std::int64_t threshold = 0;
    LoadingMode mode = LoadingMode::Linear;
    std::optional<LatentGrid> grid; // empty for the independent model
    std::vector<AngleFit> fits;     // per asset; empty unless Linear + grid
};

/// Composes loader, weighted sum and comparator. Passing no grid selects the
/// independent model (the mode argument is then irrelevant).
CdfOracle build_cdf_oracle(const Portfolio &portfolio, const std::optional<LatentGrid> &grid, std::int64_t threshold,
                           LoadingMode mode = LoadingMode::Linear);

/// Grover-style amplification operator derived from a CDF oracle, composed
/// as oracle * zero-reflection * adjoint-oracle * bad-state-reflection. Its
/// eigenphases on the span of the oracle output are +-2 arcsin(sqrt(a)).
struct GroverOperator {
    Operator op;
};

GroverOperator build_grover_operator(const CdfOracle &oracle);

} // namespace qcrisk
