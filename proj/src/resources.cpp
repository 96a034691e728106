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

#include "qcrisk/resources.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcrisk {

namespace {

void validate(const ResourceParams &params) {
    if (params.n_assets < 1) {
        throw std::invalid_argument("asset count is required and must be positive");
    }
    if (!(params.epsilon > 0.0 && params.epsilon < 1.0)) {
        throw std::invalid_argument("rotation synthesis error must lie in (0, 1)");
    }
    if (!(params.gate_time_s > 0.0)) {
        throw std::invalid_argument("gate time must be positive");
    }
    if (params.z_copies && (*params.z_copies < 1 || *params.z_copies > params.n_assets)) {
        throw std::invalid_argument("z-register copy count must lie in [1, K]");
    }
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
    return (a + b - 1) / b;
}

/// floor(log2(n)) for n >= 1, in integer arithmetic.
std::int64_t floor_log2(std::uint64_t n) {
    std::int64_t r = -1;
    while (n != 0) {
        n >>= 1;
        ++r;
    }
    return r;
}

std::uint64_t ceil_log2(std::uint64_t n) {
    std::uint64_t bits = 0;
    while ((std::uint64_t{1} << bits) < n) {
        ++bits;
    }
    return bits;
}

/// floor(log2(n / 3)), exact for all n >= 1 (negative for n < 3): the
/// largest t with 3 * 2^t <= n.
std::int64_t floor_log2_third(std::uint64_t n) {
    if (n < 3) {
        // 3 * 2^-1 = 1.5 <= 2, 3 * 2^-2 = 0.75 <= 1.
        return n == 2 ? -1 : -2;
    }
    std::int64_t t = 0;
    while ((std::uint64_t{3} << (t + 1)) <= n) {
        ++t;
    }
    return t;
}

std::uint64_t round_two_significant(std::uint64_t value) {
    if (value < 100) {
        return value;
    }
    std::uint64_t scale = 1;
    while (value / scale >= 100) {
        scale *= 10;
    }
    return (value + scale / 2) / scale * scale;
}

} // namespace

RotationCosts rotation_costs(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("rotation synthesis error must lie in (0, 1)");
    }
    const double bits = std::log2(1.0 / epsilon);
    RotationCosts costs;
    costs.single = static_cast<std::uint64_t>(std::ceil(3.0 * bits - 4.0));
    costs.controlled = static_cast<std::uint64_t>(std::ceil(3.0 * bits - 2.0));
    return costs;
}

std::uint64_t loader_depth(const ResourceParams &params) {
    validate(params);
    const RotationCosts costs = rotation_costs(params.epsilon);
    if (params.n_latent == 0) {
        return costs.single;
    }
    const std::uint64_t w = params.z_copies.value_or(params.n_assets);
    const std::uint64_t rotation_layers = ceil_div(params.n_latent * params.n_assets, w);
    return costs.single + costs.controlled * rotation_layers;
}

std::uint64_t adder_tree_depth(const ResourceParams &params) {
    validate(params);
    if (params.n_assets < 2 || params.n_sum < 2) {
        throw std::invalid_argument("the adder tree formula needs K >= 2 and n_S >= 2");
    }
    const std::int64_t per_level =
        floor_log2(params.n_sum) + floor_log2_third(params.n_sum) + 7;
    return ceil_log2(params.n_assets) * static_cast<std::uint64_t>(per_level);
}

std::uint64_t comparator_depth(const ResourceParams &params) {
    validate(params);
    if (params.n_sum < 2) {
        throw std::invalid_argument("the comparator formula needs n_S >= 2");
    }
    return 2 * static_cast<std::uint64_t>(floor_log2(params.n_sum - 1)) + 9;
}

ResourceReport estimate_resources(const ResourceParams &params) {
    validate(params);
    ResourceReport report;
    report.depth_loader = loader_depth(params);
    report.depth_sum = (params.n_assets >= 2 && params.n_sum >= 2) ? adder_tree_depth(params) : 0;
    report.depth_comparator = params.n_sum >= 2 ? comparator_depth(params) : 0;
    report.depth_oracle = report.depth_loader + report.depth_sum + report.depth_comparator;
    report.depth_oracle_rounded = round_two_significant(report.depth_oracle);

    const std::uint64_t applications = (std::uint64_t{1} << (params.m_eval + 1)) - 1;
    report.oracle_calls = static_cast<std::uint64_t>(std::max<std::size_t>(params.n_sum, 1)) * applications;
    report.qft_free_halving = params.qft_free_halving;
    const std::uint64_t divisor = params.qft_free_halving ? 2 : 1;
    report.total_depth = report.oracle_calls * report.depth_oracle / divisor;
    report.total_depth_rounded = report.oracle_calls * report.depth_oracle_rounded / divisor;
    report.runtime_s = static_cast<double>(report.total_depth) * params.gate_time_s;
    report.runtime_rounded_s = static_cast<double>(report.total_depth_rounded) * params.gate_time_s;

    const std::uint64_t w = params.z_copies.value_or(params.n_assets);
    report.z_copy_count = w;
    report.z_copy_ancillas = params.n_latent * (w - 1);
    report.z_copy_cnot_depth = w > 1 ? 2 * ceil_log2(w) : 0;

    report.excluded = {
        {"inverse QFT", "applied once on the evaluation register; negligible next to the controlled powers"},
        {"reflection gates", "one multi-controlled Z each per amplification step, log-depth with ancillas"},
        {"Clifford gates", "orders of magnitude faster than T gates on the assumed hardware"},
        {"swap overhead", "topology mapping roughly doubles CNOT counts, which the T-depth dwarfs"},
        {"median repetitions", "independent runs, assumed to execute on parallel devices"},
    };
    if ((params.n_assets & (params.n_assets - 1)) != 0) {
        report.notes.push_back("asset count rounded up to the next power of two in log2 terms");
    }
    return report;
}

} // namespace qcrisk
