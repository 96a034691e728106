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

#include "qcrisk/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qcrisk/errors.hpp"
#include "qcrisk/statevector.hpp"

namespace qcrisk {

double normal_cdf(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("normal_cdf requires a finite argument");
    }
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

// Acklam's rational approximation of the standard normal quantile,
// accurate to about 1e-9 before refinement.
double inv_cdf_seed(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
                                    1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                    6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                    -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                    3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace

double normal_inv_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_inv_cdf requires p strictly inside (0, 1)");
    }
    double x = inv_cdf_seed(p);
    // Two Halley refinement steps push the seed to full double precision.
    for (int iter = 0; iter < 2; ++iter) {
        const double err = normal_cdf(x) - p;
        const double density = normal_pdf(x);
        if (density == 0.0) {
            break;
        }
        const double step = err / density;
        x -= step / (1.0 + 0.5 * x * step);
    }
    return x;
}

double angle_from_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("probability must lie in [0, 1]");
    }
    return 2.0 * std::asin(std::sqrt(p));
}

Portfolio::Portfolio(std::vector<Asset> assets) : assets_(std::move(assets)) {
    if (assets_.empty()) {
        throw std::invalid_argument("portfolio must contain at least one asset");
    }
    for (std::size_t k = 0; k < assets_.size(); ++k) {
        const Asset &asset = assets_[k];
        const std::string where = "asset " + std::to_string(k + 1) + ": ";
        if (asset.lgd < 1) {
            throw std::invalid_argument(where + "lgd must be a positive integer");
        }
        if (!(asset.pd0 > 0.0 && asset.pd0 < 1.0)) {
            throw std::invalid_argument(where + "pd0 must lie strictly inside (0, 1)");
        }
        if (!(asset.rho >= 0.0 && asset.rho < 1.0)) {
            throw std::invalid_argument(where + "rho must lie in [0, 1)");
        }
        if (asset.lgd > std::numeric_limits<std::int64_t>::max() - total_lgd_) {
            throw std::invalid_argument(where + "loss units overflow the portfolio total");
        }
        total_lgd_ += asset.lgd;
    }
    n_sum_ = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(total_lgd_)))) + 1;
    // Guard the floor against rounding at exact powers of two.
    while ((std::int64_t{1} << n_sum_) <= total_lgd_) {
        ++n_sum_;
    }
    while (n_sum_ > 1 && (std::int64_t{1} << (n_sum_ - 1)) > total_lgd_) {
        --n_sum_;
    }
}

double conditional_pd(const Asset &asset, double z) {
    if (asset.rho == 0.0) {
        return asset.pd0;
    }
    const double threshold = normal_inv_cdf(asset.pd0);
    return normal_cdf((threshold - std::sqrt(asset.rho) * z) / std::sqrt(1.0 - asset.rho));
}

double conditional_pd_derivative(const Asset &asset, double z) {
    if (asset.rho == 0.0) {
        return 0.0;
    }
    const double threshold = normal_inv_cdf(asset.pd0);
    const double scale = std::sqrt(asset.rho) / std::sqrt(1.0 - asset.rho);
    const double arg = (threshold - std::sqrt(asset.rho) * z) / std::sqrt(1.0 - asset.rho);
    return -normal_pdf(arg) * scale;
}

LatentGrid build_latent_grid(std::size_t n_qubits, double z_max) {
    if (n_qubits == 0) {
        throw std::invalid_argument("latent grid needs at least one qubit");
    }
    if (!(z_max > 0.0)) {
        throw std::invalid_argument("z_max must be positive");
    }
    LatentGrid grid;
    grid.n_qubits = n_qubits;
    grid.z_max = z_max;
    const std::size_t count = std::size_t{1} << n_qubits;
    grid.slope = 2.0 * z_max / static_cast<double>(count - 1);
    grid.offset = -z_max;
    grid.points.resize(count);
    grid.probs.resize(count);
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        grid.points[i] = grid.slope * static_cast<double>(i) + grid.offset;
        grid.probs[i] = normal_pdf(grid.points[i]);
        total += grid.probs[i];
    }
    for (double &q : grid.probs) {
        q /= total;
    }
    return grid;
}

double AngleFit::clamped_angle_at(std::size_t i) const {
    const double raw = angle_at(i);
    if (raw < 0.0) {
        return 0.0;
    }
    if (raw > std::numbers::pi) {
        return std::numbers::pi;
    }
    return raw;
}

AngleFit fit_linear_angles(const Asset &asset, const LatentGrid &grid) {
    // Weighted least squares in centroid form over grid indices, weights q_i.
    double mean_i = 0.0;
    double mean_theta = 0.0;
    std::vector<double> angles(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        angles[i] = angle_from_probability(conditional_pd(asset, grid.z(i)));
        mean_i += grid.prob(i) * static_cast<double>(i);
        mean_theta += grid.prob(i) * angles[i];
    }
    double covariance = 0.0;
    double variance = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double di = static_cast<double>(i) - mean_i;
        covariance += grid.prob(i) * di * (angles[i] - mean_theta);
        variance += grid.prob(i) * di * di;
    }
    AngleFit fit;
    fit.slope = variance > 0.0 ? covariance / variance : 0.0;
    fit.intercept = mean_theta - fit.slope * mean_i;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        fit.residual = std::max(fit.residual, std::abs(fit.angle_at(i) - angles[i]));
    }
    return fit;
}

} // namespace qcrisk
