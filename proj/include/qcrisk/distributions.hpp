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
#include <vector>

namespace qcrisk {

/// Standard normal CDF. Rejects non-finite input.
double normal_cdf(double x);

/// Standard normal quantile function; p must lie strictly inside (0, 1).
/// Accuracy: |normal_cdf(normal_inv_cdf(p)) - p| stays below 1e-12.
double normal_inv_cdf(double p);

/// Standard normal density.
double normal_pdf(double x);

/// Rotation angle 2*arcsin(sqrt(p)) that encodes probability p in a qubit:
/// RY by this angle maps |0> to a state measuring |1> with probability p.
double angle_from_probability(double p);

/// One obligor: integer loss given default, base default probability and
/// sensitivity to the systematic factor.
struct Asset {
    std::int64_t lgd = 1;
    double pd0 = 0.0;
    double rho = 0.0;
};

/// Ordered list of assets. Construction validates every field and fixes the
/// derived sum-register width n_S = floor(log2(lgd_1 + ... + lgd_K)) + 1.
class Portfolio {
  public:
    explicit Portfolio(std::vector<Asset> assets);

    const std::vector<Asset> &assets() const { return assets_; }
    const Asset &asset(std::size_t k) const { return assets_[k]; }
    std::size_t size() const { return assets_.size(); }
    std::int64_t total_lgd() const { return total_lgd_; }
    std::size_t sum_register_width() const { return n_sum_; }

  private:
    std::vector<Asset> assets_;
    std::int64_t total_lgd_ = 0;
    std::size_t n_sum_ = 0;
};

/// Default probability of an asset conditioned on a realization z of the
/// systematic factor, under the Gaussian conditional independence model.
/// Strictly decreasing in z when rho > 0; equal to pd0 when rho == 0.
double conditional_pd(const Asset &asset, double z);

/// Derivative of conditional_pd with respect to z (used for discretization
/// error reporting).
double conditional_pd_derivative(const Asset &asset, double z);

/**
 * @brief Truncated, discretized standard normal factor.
 *
 * Grid points follow the affine map z_i = slope * i + offset for
 * i in [0, 2^n_qubits); the end points sit at -z_max and +z_max. Weights are
 * the normal density at the grid points, renormalized to sum to one.
 */
struct LatentGrid {
    std::size_t n_qubits = 0;
    double z_max = 0.0;
    double slope = 0.0;  // a_z
    double offset = 0.0; // b_z
    std::vector<double> points;
    std::vector<double> probs;

    std::size_t size() const { return points.size(); }
    double z(std::size_t i) const { return points[i]; }
    double prob(std::size_t i) const { return probs[i]; }
};

LatentGrid build_latent_grid(std::size_t n_qubits, double z_max);

/**
 * @brief First-order fit of the per-asset rotation angle over a latent grid.
 *
 * The fit minimizes the grid-probability-weighted squared error of
 * slope * i + intercept against angle_from_probability(conditional_pd(z_i)),
 * taken over grid indices i. `residual` is the worst absolute angle error of
 * the unclamped line over the grid.
 */
struct AngleFit {
    double slope = 0.0;     // a_k, per grid index
    double intercept = 0.0; // b_k
    double residual = 0.0;

    double angle_at(std::size_t i) const { return slope * static_cast<double>(i) + intercept; }
    /// Line value clamped into [0, pi], the range of valid rotation angles.
    double clamped_angle_at(std::size_t i) const;
};

AngleFit fit_linear_angles(const Asset &asset, const LatentGrid &grid);

} // namespace qcrisk
