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

#include <cmath>
#include <doctest.h>
#include <numbers>
#include <stdexcept>

#include "qcrisk/distributions.hpp"

using namespace qcrisk;

namespace {

// Independent oracle for the normal CDF: composite Simpson integration of the
// density from 0 to x. Uses only <cmath> arithmetic, no erfc.
double normal_cdf_oracle(double x) {
    const double a = 0.0;
    const double b = std::abs(x);
    const int panels = 20000;
    const double h = (b - a) / panels;
    const auto density = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
    double sum = density(a) + density(b);
    for (int i = 1; i < panels; ++i) {
        sum += density(a + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    const double half_integral = sum * h / 3.0;
    return x >= 0.0 ? 0.5 + half_integral : 0.5 - half_integral;
}

// Independent least-squares oracle: explicit 2x2 normal equations solved with
// Cramer's rule (the implementation uses the centroid form instead).
void weighted_ls_oracle(const Asset &asset, const LatentGrid &grid, double &slope, double &intercept) {
    double s_w = 0.0, s_wi = 0.0, s_wii = 0.0, s_wt = 0.0, s_wit = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid.prob(i);
        const double x = static_cast<double>(i);
        const double theta = angle_from_probability(conditional_pd(asset, grid.z(i)));
        s_w += w;
        s_wi += w * x;
        s_wii += w * x * x;
        s_wt += w * theta;
        s_wit += w * x * theta;
    }
    const double det = s_wii * s_w - s_wi * s_wi;
    slope = (s_wit * s_w - s_wi * s_wt) / det;
    intercept = (s_wii * s_wt - s_wi * s_wit) / det;
}

double weighted_squared_error(const Asset &asset, const LatentGrid &grid, double slope, double intercept) {
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double theta = angle_from_probability(conditional_pd(asset, grid.z(i)));
        const double err = slope * static_cast<double>(i) + intercept - theta;
        total += grid.prob(i) * err * err;
    }
    return total;
}

const Asset kAsset1{1, 0.15, 0.1};
const Asset kAsset2{2, 0.25, 0.05};

} // namespace

TEST_CASE("normal CDF matches the quadrature oracle") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    for (double x : {0.5, 1.0, 2.0}) {
        CHECK(normal_cdf(-x) == doctest::Approx(1.0 - normal_cdf(x)).epsilon(1e-13));
    }
    // Frozen from the oracle: normal_cdf_oracle(1.959964) = 0.97500001985...
    CHECK(std::abs(normal_cdf(1.959964) - 0.975) < 1e-6);
    for (double x : {-3.5, -1.2, -0.3, 0.0, 0.7, 1.959964, 2.8, 4.0}) {
        CHECK(std::abs(normal_cdf(x) - normal_cdf_oracle(x)) < 1e-10);
    }
    CHECK_THROWS_AS((void)normal_cdf(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS((void)normal_cdf(INFINITY), std::invalid_argument);
}

TEST_CASE("normal quantile inverts the CDF") {
    CHECK(std::abs(normal_inv_cdf(0.5)) < 1e-10);
    for (double p : {0.001, 0.15, 0.25, 0.999}) {
        CHECK(std::abs(normal_cdf(normal_inv_cdf(p)) - p) < 1e-8);
    }
    CHECK(std::abs(normal_inv_cdf(0.975) - 1.959964) < 1e-6);
    CHECK_THROWS_AS((void)normal_inv_cdf(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)normal_inv_cdf(1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)normal_inv_cdf(-0.1), std::invalid_argument);
}

TEST_CASE("latent grid geometry and weights") {
    const LatentGrid two = build_latent_grid(1, 1.0);
    CHECK(two.z(0) == doctest::Approx(-1.0));
    CHECK(two.z(1) == doctest::Approx(1.0));
    CHECK(two.prob(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(two.prob(1) == doctest::Approx(0.5).epsilon(1e-14));

    const LatentGrid four = build_latent_grid(2, 2.0);
    double total = 0.0;
    for (std::size_t i = 0; i < four.size(); ++i) {
        total += four.prob(i);
        CHECK(four.z(i) == doctest::Approx(four.slope * static_cast<double>(i) + four.offset));
    }
    CHECK(std::abs(total - 1.0) < 1e-12);

    const LatentGrid eight = build_latent_grid(3, 3.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < eight.size(); ++i) {
        mean += eight.prob(i) * eight.z(i);
    }
    CHECK(std::abs(mean) < 1e-12);

    for (std::size_t n : {1, 2, 3, 4, 5, 6}) {
        const LatentGrid grid = build_latent_grid(n, 3.0);
        CHECK(grid.z(0) == doctest::Approx(-3.0));
        CHECK(grid.z(grid.size() - 1) == doctest::Approx(3.0));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(grid.prob(i) > 0.0);
            CHECK(std::abs(grid.prob(i) - grid.prob(grid.size() - 1 - i)) < 1e-12);
        }
    }
    CHECK_THROWS_AS((void)build_latent_grid(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)build_latent_grid(2, 0.0), std::invalid_argument);
}

TEST_CASE("conditional default probability follows the copula formula") {
    const Asset flat{1, 0.3, 0.0};
    for (double z : {-2.0, 0.0, 1.5}) {
        CHECK(conditional_pd(flat, z) == doctest::Approx(0.3));
    }

    // Evaluated through the independent CDF oracle.
    const double expected = normal_cdf_oracle(normal_inv_cdf(0.15) / std::sqrt(0.9));
    CHECK(std::abs(conditional_pd(kAsset1, 0.0) - expected) < 1e-9);

    double previous = conditional_pd(kAsset1, -4.0);
    for (double z = -3.5; z <= 4.0; z += 0.5) {
        const double current = conditional_pd(kAsset1, z);
        CHECK(current < previous);
        CHECK(current > 0.0);
        CHECK(current < 1.0);
        previous = current;
    }
}

TEST_CASE("law of total probability over the grid") {
    for (const Asset &asset : {kAsset1, kAsset2}) {
        for (std::size_t n : {1, 2, 3, 4, 5, 6}) {
            const LatentGrid grid = build_latent_grid(n, 3.0);
            double mixed = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                mixed += grid.prob(i) * conditional_pd(asset, grid.z(i));
            }
            CHECK(mixed > 0.0);
            CHECK(mixed < 1.0);
        }
    }
}

TEST_CASE("probability-to-angle mapping") {
    CHECK(angle_from_probability(0.0) == doctest::Approx(0.0));
    CHECK(angle_from_probability(0.25) == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-13));
    CHECK(angle_from_probability(1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
    for (double p : {0.01, 0.15, 0.5, 0.83, 0.999}) {
        const double theta = angle_from_probability(p);
        CHECK(std::abs(std::pow(std::sin(theta / 2.0), 2) - p) < 1e-12);
        CHECK(theta >= 0.0);
        CHECK(theta <= std::numbers::pi);
    }
    CHECK_THROWS_AS((void)angle_from_probability(-0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)angle_from_probability(1.1), std::invalid_argument);
}

TEST_CASE("portfolio validation and sum-register width") {
    const Portfolio reference({kAsset1, kAsset2});
    CHECK(reference.total_lgd() == 3);
    CHECK(reference.sum_register_width() == 2);
    CHECK(Portfolio({Asset{4, 0.1, 0.0}}).sum_register_width() == 3);
    CHECK(Portfolio({Asset{1, 0.1, 0.0}}).sum_register_width() == 1);

    CHECK_THROWS_AS(Portfolio({}), std::invalid_argument);
    CHECK_THROWS_AS(Portfolio({Asset{0, 0.1, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Portfolio({Asset{1, 0.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Portfolio({Asset{1, 1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Portfolio({Asset{1, 0.1, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Portfolio({Asset{1, 0.1, -0.2}}), std::invalid_argument);
}

TEST_CASE("angle fit degenerates correctly") {
    const LatentGrid grid = build_latent_grid(3, 3.0);
    const Asset flat{1, 0.2, 0.0};
    const AngleFit fit = fit_linear_angles(flat, grid);
    CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(2.0 * std::asin(std::sqrt(0.2))).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);

    const LatentGrid two_points = build_latent_grid(1, 2.0);
    const AngleFit interpolation = fit_linear_angles(kAsset2, two_points);
    CHECK(interpolation.residual < 1e-12);
}

TEST_CASE("angle fit agrees with the normal-equations oracle") {
    const LatentGrid grid = build_latent_grid(2, 2.0);
    for (const Asset &asset : {kAsset1, kAsset2}) {
        const AngleFit fit = fit_linear_angles(asset, grid);
        double slope = 0.0, intercept = 0.0;
        weighted_ls_oracle(asset, grid, slope, intercept);
        CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-12));
        CHECK(fit.intercept == doctest::Approx(intercept).epsilon(1e-12));

        double oracle_residual = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double theta = angle_from_probability(conditional_pd(asset, grid.z(i)));
            oracle_residual =
                std::max(oracle_residual, std::abs(slope * static_cast<double>(i) + intercept - theta));
        }
        CHECK(fit.residual == doctest::Approx(oracle_residual).epsilon(1e-10));
    }
}

TEST_CASE("fit optimality under small perturbations") {
    for (std::size_t n : {2, 3}) {
        const LatentGrid grid = build_latent_grid(n, 3.0);
        for (const Asset &asset : {kAsset1, kAsset2}) {
            const AngleFit fit = fit_linear_angles(asset, grid);
            const double base = weighted_squared_error(asset, grid, fit.slope, fit.intercept);
            for (double ds : {-1e-6, 0.0, 1e-6}) {
                for (double di : {-1e-6, 0.0, 1e-6}) {
                    CHECK(weighted_squared_error(asset, grid, fit.slope + ds, fit.intercept + di) >= base - 1e-18);
                }
            }
        }
    }
}

TEST_CASE("clamped fit angles stay inside the valid rotation range") {
    for (std::size_t n : {1, 2, 4}) {
        const LatentGrid grid = build_latent_grid(n, 4.0);
        for (const Asset &asset : {kAsset1, kAsset2, Asset{1, 0.97, 0.8}}) {
            const AngleFit fit = fit_linear_angles(asset, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                CHECK(fit.clamped_angle_at(i) >= 0.0);
                CHECK(fit.clamped_angle_at(i) <= std::numbers::pi);
            }
        }
    }
}
