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

#include "qcrisk/model_circuits.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qcrisk/errors.hpp"

namespace qcrisk {

namespace {

// Multi-controlled RY that fires on a specific bit pattern of the control
// qubits: controls whose pattern bit is 0 are wrapped in X gates.
void push_pattern_controlled_ry(std::vector<Step> &steps, std::size_t target, double angle,
                                const std::vector<std::size_t> &control_qubits, std::uint64_t pattern) {
    std::vector<std::size_t> wrapped;
    for (std::size_t c = 0; c < control_qubits.size(); ++c) {
        if (((pattern >> c) & 1u) == 0) {
            wrapped.push_back(control_qubits[c]);
        }
    }
    for (std::size_t qubit : wrapped) {
        steps.push_back(Gate{GateKind::X, qubit, {}, 0.0});
    }
    steps.push_back(Gate{GateKind::RY, target, control_qubits, angle});
    for (std::size_t qubit : wrapped) {
        steps.push_back(Gate{GateKind::X, qubit, {}, 0.0});
    }
}

} // namespace

Operator build_latent_loader(const LatentGrid &grid) {
    const std::size_t n = grid.n_qubits;
    std::vector<Step> steps;
    // Subtree probabilities, most significant bit first: at level l the grid
    // splits into 2^l blocks; each block's qubit is rotated so the two
    // halves carry the correct conditional mass.
    for (std::size_t level = 0; level < n; ++level) {
        const std::size_t target = n - 1 - level;          // qubit being prepared
        const std::size_t block = std::size_t{1} << target; // grid points per half-block
        std::vector<std::size_t> controls;
        for (std::size_t c = target + 1; c < n; ++c) {
            controls.push_back(c);
        }
        for (std::uint64_t prefix = 0; prefix < (std::uint64_t{1} << level); ++prefix) {
            double mass_low = 0.0;
            double mass_high = 0.0;
            const std::size_t base = static_cast<std::size_t>(prefix) * 2 * block;
            for (std::size_t i = 0; i < block; ++i) {
                mass_low += grid.prob(base + i);
                mass_high += grid.prob(base + block + i);
            }
            if (mass_low + mass_high <= 0.0) {
                continue;
            }
            const double angle = 2.0 * std::atan2(std::sqrt(mass_high), std::sqrt(mass_low));
            // controls[j] = target+1+j holds grid-index bit target+1+j, which
            // is bit j of the block prefix, so the control pattern is the
            // prefix itself.
            if (controls.empty()) {
                steps.push_back(Gate{GateKind::RY, target, {}, angle});
            } else {
                push_pattern_controlled_ry(steps, target, angle, controls, prefix);
            }
        }
    }
    return Operator(n, "latent_loader", std::move(steps));
}

Operator build_independent_loader(const Portfolio &portfolio) {
    std::vector<Step> steps;
    steps.reserve(portfolio.size());
    for (std::size_t k = 0; k < portfolio.size(); ++k) {
        steps.push_back(Gate{GateKind::RY, k, {}, angle_from_probability(portfolio.asset(k).pd0)});
    }
    return Operator(portfolio.size(), "U_independent", std::move(steps));
}

Operator build_gci_loader(const Portfolio &portfolio, const LatentGrid &grid, const std::vector<AngleFit> &fits,
                          LoadingMode mode) {
    const std::size_t n_latent = grid.n_qubits;
    const std::size_t arity = n_latent + portfolio.size();
    if (mode == LoadingMode::Linear && fits.size() != portfolio.size()) {
        throw std::invalid_argument("one angle fit per asset is required in linear mode");
    }

    std::vector<Step> steps;
    {
        const Operator loader = build_latent_loader(grid);
        steps.insert(steps.end(), loader.steps().begin(), loader.steps().end());
    }

    std::vector<std::size_t> latent_qubits(n_latent);
    for (std::size_t j = 0; j < n_latent; ++j) {
        latent_qubits[j] = j;
    }

    for (std::size_t k = 0; k < portfolio.size(); ++k) {
        const std::size_t target = n_latent + k;
        if (mode == LoadingMode::Linear) {
            // Affine angle in the grid index: one free rotation by the
            // intercept, then one controlled rotation per latent qubit whose
            // angle is the slope weighted by that bit's place value.
            steps.push_back(Gate{GateKind::RY, target, {}, fits[k].intercept});
            for (std::size_t j = 0; j < n_latent; ++j) {
                const double angle = fits[k].slope * static_cast<double>(std::uint64_t{1} << j);
                steps.push_back(Gate{GateKind::RY, target, {latent_qubits[j]}, angle});
            }
        } else {
            for (std::uint64_t i = 0; i < grid.size(); ++i) {
                const double angle = angle_from_probability(conditional_pd(portfolio.asset(k), grid.z(i)));
                push_pattern_controlled_ry(steps, target, angle, latent_qubits, i);
            }
        }
    }
    return Operator(arity, "U_gci", std::move(steps));
}

Operator build_weighted_sum(const Portfolio &portfolio) {
    const std::size_t n_assets = portfolio.size();
    const std::size_t n_sum = portfolio.sum_register_width();
    const std::size_t arity = n_assets + n_sum;

    std::vector<std::size_t> qubits(arity);
    for (std::size_t q = 0; q < arity; ++q) {
        qubits[q] = q;
    }
    const std::uint64_t asset_mask = (std::uint64_t{1} << n_assets) - 1;
    std::vector<std::int64_t> weights(n_assets);
    for (std::size_t k = 0; k < n_assets; ++k) {
        weights[k] = portfolio.asset(k).lgd;
    }
    return permutation_operator(
        arity, qubits,
        [=](std::uint64_t value) {
            const std::uint64_t assets = value & asset_mask;
            std::uint64_t weighted = 0;
            for (std::size_t k = 0; k < n_assets; ++k) {
                if ((assets >> k) & 1u) {
                    weighted += static_cast<std::uint64_t>(weights[k]);
                }
            }
            return value ^ (weighted << n_assets);
        },
        "S_weighted_sum");
}

Operator build_loss_comparator(std::int64_t threshold, std::size_t n_sum) {
    const std::int64_t max_value = (std::int64_t{1} << n_sum) - 1;
    if (threshold < 0 || threshold > max_value) {
        throw std::invalid_argument("threshold " + std::to_string(threshold) + " not representable in " +
                                    std::to_string(n_sum) + " sum qubits");
    }
    const std::size_t arity = n_sum + 1;
    std::vector<std::size_t> qubits(arity);
    for (std::size_t q = 0; q < arity; ++q) {
        qubits[q] = q;
    }
    const std::uint64_t sum_mask = (std::uint64_t{1} << n_sum) - 1;
    return permutation_operator(
        arity, qubits,
        [=](std::uint64_t value) {
            const bool flip = static_cast<std::int64_t>(value & sum_mask) <= threshold;
            return flip ? value ^ (std::uint64_t{1} << n_sum) : value;
        },
        "C_le_" + std::to_string(threshold));
}

CdfOracle build_cdf_oracle(const Portfolio &portfolio, const std::optional<LatentGrid> &grid, std::int64_t threshold,
                           LoadingMode mode) {
    CdfOracle oracle;
    oracle.layout =
        RegisterLayout{grid ? grid->n_qubits : 0, portfolio.size(), portfolio.sum_register_width()};
    oracle.threshold = threshold;
    oracle.mode = mode;
    oracle.grid = grid;

    const std::size_t arity = oracle.layout.total_qubits();
    if (arity > kMaxSimQubits) {
        throw SizeLimitError("CDF circuit needs " + std::to_string(arity) +
                             " qubits, above the dense-simulation limit of " + std::to_string(kMaxSimQubits));
    }
    Operator loader = Operator::identity(1);
    if (grid) {
        if (mode == LoadingMode::Linear) {
            oracle.fits.reserve(portfolio.size());
            for (const Asset &asset : portfolio.assets()) {
                oracle.fits.push_back(fit_linear_angles(asset, *grid));
            }
        }
        loader = build_gci_loader(portfolio, *grid, oracle.fits, mode).embedded(arity, 0);
    } else {
        loader = build_independent_loader(portfolio).embedded(arity, oracle.layout.asset_first());
    }
    const Operator sum = build_weighted_sum(portfolio).embedded(arity, oracle.layout.asset_first());
    const Operator comparator =
        build_loss_comparator(threshold, oracle.layout.n_sum).embedded(arity, oracle.layout.sum_first());

    oracle.op = Operator::sequence("A", {loader, sum, comparator});
    return oracle;
}

GroverOperator build_grover_operator(const CdfOracle &oracle) {
    const std::size_t arity = oracle.op.arity();
    const std::size_t objective = oracle.layout.objective();

    // Phase flip on the unflagged component: -1 exactly when the objective
    // qubit is |0>, realized as an X-wrapped Z.
    Operator reflect_bad(arity, "reflect_bad",
                         {Gate{GateKind::X, objective, {}, 0.0}, Gate{GateKind::Z, objective, {}, 0.0},
                          Gate{GateKind::X, objective, {}, 0.0}});

    std::vector<std::size_t> all(arity);
    for (std::size_t q = 0; q < arity; ++q) {
        all[q] = q;
    }
    const Operator reflect_zero = Operator::reflect_about_zero(arity, all);

    return GroverOperator{
        Operator::sequence("Q", {reflect_bad, oracle.op.adjoint(), reflect_zero, oracle.op})};
}

} // namespace qcrisk
