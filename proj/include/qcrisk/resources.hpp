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
#include <string>
#include <vector>

namespace qcrisk {

/**
 * @brief Problem shape for the fault-tolerant cost model.
 *
 * Depth formulas assume the asset count is a power of two; other values are
 * rounded up to the next power for the divide-and-conquer terms and the
 * report carries a note. `z_copies` (w) is the number of entangled copies of
 * the latent register used to parallelize the loader; it defaults to the
 * asset count, which makes the loader depth independent of K.
 */
struct ResourceParams {
    std::uint64_t n_assets = 0; // K
    std::size_t n_latent = 0;   // n_Z
    std::size_t n_sum = 0;      // n_S
    std::size_t m_eval = 0;     // evaluation qubits
    double epsilon = 0.0009765625; // 2^-10, rotation synthesis error
    double gate_time_s = 1e-4;
    bool qft_free_halving = false;
    std::optional<std::uint64_t> z_copies; // w in [1, K]
};

struct RotationCosts {
    std::uint64_t single = 0;     // T-depth of one Y rotation
    std::uint64_t controlled = 0; // T-depth of one controlled Y rotation
};

/// Synthesis T-depths ceil(3 log2(1/eps) - 4) and ceil(3 log2(1/eps) - 2).
RotationCosts rotation_costs(double epsilon);

/// T-depth of the uncertainty loader: one uncontrolled rotation layer plus
/// ceil(n_Z K / w) controlled rotation layers.
std::uint64_t loader_depth(const ResourceParams &params);

/// Toffoli-depth of the divide-and-conquer weighted sum:
/// ceil(log2 K) * (floor(log2 n_S) + floor(log2(n_S/3)) + 7).
std::uint64_t adder_tree_depth(const ResourceParams &params);

/// Toffoli-depth of the fixed-value comparator: 2 floor(log2(n_S - 1)) + 9.
std::uint64_t comparator_depth(const ResourceParams &params);

/// One named cost the model intentionally leaves at zero depth.
struct ExcludedCost {
    std::string item;
    std::string reason;
};

struct ResourceReport {
    std::uint64_t depth_loader = 0;
    std::uint64_t depth_sum = 0;
    std::uint64_t depth_comparator = 0;
    std::uint64_t depth_oracle = 0;         // sum of the three operators
    std::uint64_t depth_oracle_rounded = 0; // two significant figures
    std::uint64_t oracle_calls = 0;         // n_S (2^(m+1) - 1)
    std::uint64_t total_depth = 0;          // oracle_calls * depth_oracle, halved if QFT-free
    std::uint64_t total_depth_rounded = 0;  // same, from the rounded oracle depth
    double runtime_s = 0.0;
    double runtime_rounded_s = 0.0;
    bool qft_free_halving = false;

    std::uint64_t z_copy_count = 0;       // w
    std::uint64_t z_copy_ancillas = 0;    // n_Z (w - 1)
    std::uint64_t z_copy_cnot_depth = 0;  // 2 ceil(log2 w)
    std::vector<ExcludedCost> excluded;
    std::vector<std::string> notes;
};

ResourceReport estimate_resources(const ResourceParams &params);

} // namespace qcrisk
