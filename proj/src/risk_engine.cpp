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

#include "qcrisk/risk_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "qcrisk/errors.hpp"
#include "qcrisk/qae.hpp"

namespace qcrisk {

namespace {

constexpr std::size_t kMaxEnumerationBits = 24;
constexpr double kCdfTolerance = 1e-12;

double next_uniform(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<std::vector<double>> conditional_pd_table(const Portfolio &portfolio, const LatentGrid &grid) {
    std::vector<std::vector<double>> table(grid.size(), std::vector<double>(portfolio.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < portfolio.size(); ++k) {
            table[i][k] = conditional_pd(portfolio.asset(k), grid.z(i));
        }
    }
    return table;
}

// Adds the loss law conditioned on fixed per-asset default probabilities,
// scaled by `weight`, into `probs`.
void accumulate_conditional_law(const Portfolio &portfolio, const std::vector<double> &pds, double weight,
                                std::vector<double> &probs) {
    const std::size_t patterns = std::size_t{1} << portfolio.size();
    for (std::uint64_t x = 0; x < patterns; ++x) {
        double probability = weight;
        std::int64_t loss = 0;
        for (std::size_t k = 0; k < portfolio.size(); ++k) {
            if ((x >> k) & 1u) {
                probability *= pds[k];
                loss += portfolio.asset(k).lgd;
            } else {
                probability *= 1.0 - pds[k];
            }
        }
        probs[static_cast<std::size_t>(loss)] += probability;
    }
}

double classical_expected_loss(const Portfolio &portfolio, const std::optional<LatentGrid> &grid) {
    return grid ? expected_loss_gci(portfolio, *grid) : expected_loss_independent(portfolio);
}

} // namespace

double DiscreteDistribution::mean() const {
    double total = 0.0;
    for (std::size_t value = 0; value < probs.size(); ++value) {
        total += static_cast<double>(value) * probs[value];
    }
    return total;
}

std::vector<double> DiscreteDistribution::cumulative() const {
    std::vector<double> cdf(probs.size());
    double running = 0.0;
    for (std::size_t value = 0; value < probs.size(); ++value) {
        running += probs[value];
        cdf[value] = running;
    }
    return cdf;
}

DiscreteDistribution exact_loss_distribution(const Portfolio &portfolio, const std::optional<LatentGrid> &grid) {
    const std::size_t latent_bits = grid ? grid->n_qubits : 0;
    if (portfolio.size() + latent_bits > kMaxEnumerationBits) {
        throw SizeLimitError("exact enumeration over " + std::to_string(portfolio.size() + latent_bits) +
                             " bits exceeds the budget of " + std::to_string(kMaxEnumerationBits));
    }
    DiscreteDistribution distribution;
    distribution.probs.assign(std::size_t{1} << portfolio.sum_register_width(), 0.0);
    if (grid) {
        const auto table = conditional_pd_table(portfolio, *grid);
        for (std::size_t i = 0; i < grid->size(); ++i) {
            accumulate_conditional_law(portfolio, table[i], grid->prob(i), distribution.probs);
        }
    } else {
        std::vector<double> pds(portfolio.size());
        for (std::size_t k = 0; k < portfolio.size(); ++k) {
            pds[k] = portfolio.asset(k).pd0;
        }
        accumulate_conditional_law(portfolio, pds, 1.0, distribution.probs);
    }
    return distribution;
}

double expected_loss_independent(const Portfolio &portfolio) {
    double total = 0.0;
    for (const Asset &asset : portfolio.assets()) {
        total += static_cast<double>(asset.lgd) * asset.pd0;
    }
    return total;
}

double expected_loss_gci(const Portfolio &portfolio, const LatentGrid &grid) {
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double conditional = 0.0;
        for (const Asset &asset : portfolio.assets()) {
            conditional += static_cast<double>(asset.lgd) * conditional_pd(asset, grid.z(i));
        }
        total += grid.prob(i) * conditional;
    }
    return total;
}

GciExpectedLossDiagnostic expected_loss_gci_diagnostic(const Portfolio &portfolio, const LatentGrid &grid,
                                                       std::size_t quadrature_points) {
    if (quadrature_points < 2) {
        throw std::invalid_argument("quadrature needs at least two points");
    }
    GciExpectedLossDiagnostic diagnostic;
    diagnostic.grid_value = expected_loss_gci(portfolio, grid);

    const auto weighted_pd_sum = [&](double z) {
        double total = 0.0;
        for (const Asset &asset : portfolio.assets()) {
            total += static_cast<double>(asset.lgd) * conditional_pd(asset, z);
        }
        return total;
    };

    // Trapezoid rule over +-10 standard deviations; the truncated tails are
    // below 1e-22 of the portfolio notional.
    const double limit = 10.0;
    const double step = 2.0 * limit / static_cast<double>(quadrature_points - 1);
    double integral = 0.0;
    for (std::size_t p = 0; p < quadrature_points; ++p) {
        const double z = -limit + step * static_cast<double>(p);
        const double weight = (p == 0 || p + 1 == quadrature_points) ? 0.5 : 1.0;
        integral += weight * weighted_pd_sum(z) * normal_pdf(z);
    }
    diagnostic.continuous_value = integral * step;

    // Error budget of the grid value: up to one grid step of integrand drift
    // inside the truncation window plus the mass-weighted tails outside it.
    double max_slope = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double slope = 0.0;
        for (const Asset &asset : portfolio.assets()) {
            slope += static_cast<double>(asset.lgd) * std::abs(conditional_pd_derivative(asset, grid.z(i)));
        }
        max_slope = std::max(max_slope, slope);
    }
    const double tail_mass = 1.0 - normal_cdf(grid.z_max);
    diagnostic.discretization_bound =
        grid.slope * max_slope + tail_mass * (weighted_pd_sum(-grid.z_max) + weighted_pd_sum(grid.z_max));
    return diagnostic;
}

std::int64_t value_at_risk(const DiscreteDistribution &distribution, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1]");
    }
    const std::vector<double> cdf = distribution.cumulative();
    for (std::size_t value = 0; value < cdf.size(); ++value) {
        if (cdf[value] >= alpha - kCdfTolerance) {
            return static_cast<std::int64_t>(value);
        }
    }
    return static_cast<std::int64_t>(cdf.size()) - 1;
}

RiskReport var_bisection_qae(const Portfolio &portfolio, const std::optional<LatentGrid> &grid, double alpha,
                             const QaeRunOptions &options) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1]");
    }
    RiskReport report;
    report.alpha = alpha;
    report.method = "qae";
    report.expected_loss = classical_expected_loss(portfolio, grid);

    // Virtual bracket: CDF(-1) = 0, CDF(2^n_sum - 1) = 1 since every loss is
    // representable in the sum register.
    std::int64_t lo = -1;
    std::int64_t hi = (std::int64_t{1} << portfolio.sum_register_width()) - 1;
    std::uint64_t probe_index = 0;
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        // Decorrelate shot streams across probes while keeping the whole
        // search a pure function of the seed.
        const std::uint64_t probe_seed = options.shots ? splitmix64(options.seed ^ (probe_index + 1)) : options.seed;
        const CdfPointEstimate point =
            estimate_cdf_point(portfolio, grid, mid, options.m, options.mode, options.shots, probe_seed);
        ++probe_index;

        double envelope = point.estimate;
        for (const BisectionProbe &probe : report.trace) {
            if ((probe.threshold < mid && probe.estimate > point.estimate) ||
                (probe.threshold > mid && probe.estimate < point.estimate)) {
                report.monotone_warning = true;
            }
            if (probe.threshold <= mid) {
                envelope = std::max(envelope, probe.estimate);
            }
        }
        report.trace.push_back(BisectionProbe{mid, point.estimate, point.error_bound});

        if (envelope >= alpha) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    report.var = hi;
    report.ecr = static_cast<double>(report.var) - report.expected_loss;
    return report;
}

RiskReport ecr_exact(const Portfolio &portfolio, const std::optional<LatentGrid> &grid, double alpha) {
    RiskReport report;
    report.alpha = alpha;
    report.method = "exact";
    report.expected_loss = classical_expected_loss(portfolio, grid);
    report.var = value_at_risk(exact_loss_distribution(portfolio, grid), alpha);
    report.ecr = static_cast<double>(report.var) - report.expected_loss;
    return report;
}

RiskReport ecr_qae(const Portfolio &portfolio, const std::optional<LatentGrid> &grid, double alpha,
                   const QaeRunOptions &options) {
    return var_bisection_qae(portfolio, grid, alpha, options);
}

MonteCarloResult simulate_monte_carlo(const Portfolio &portfolio, const std::optional<LatentGrid> &grid,
                                      std::size_t samples, double alpha, std::uint64_t seed,
                                      std::size_t partitions) {
    if (samples < 1) {
        throw std::invalid_argument("at least one sample is required");
    }
    if (partitions < 1 || partitions > samples) {
        throw std::invalid_argument("partition count must lie in [1, samples]");
    }

    std::vector<double> latent_cdf;
    std::vector<std::vector<double>> pd_table;
    if (grid) {
        latent_cdf.resize(grid->size());
        double running = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) {
            running += grid->prob(i);
            latent_cdf[i] = running;
        }
        latent_cdf.back() = 1.0;
        pd_table = conditional_pd_table(portfolio, *grid);
    }
    std::vector<double> independent_pds(portfolio.size());
    for (std::size_t k = 0; k < portfolio.size(); ++k) {
        independent_pds[k] = portfolio.asset(k).pd0;
    }

    std::vector<std::uint64_t> counts(std::size_t{1} << portfolio.sum_register_width(), 0);
    for (std::size_t part = 0; part < partitions; ++part) {
        const std::size_t begin = part * samples / partitions;
        const std::size_t end = (part + 1) * samples / partitions;
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(part + 1)));
        for (std::size_t s = begin; s < end; ++s) {
            const std::vector<double> *pds = &independent_pds;
            if (grid) {
                const double u = next_uniform(rng);
                const auto it = std::upper_bound(latent_cdf.begin(), latent_cdf.end(), u);
                const std::size_t i = std::min<std::size_t>(it - latent_cdf.begin(), latent_cdf.size() - 1);
                pds = &pd_table[i];
            }
            std::int64_t loss = 0;
            for (std::size_t k = 0; k < portfolio.size(); ++k) {
                if (next_uniform(rng) < (*pds)[k]) {
                    loss += portfolio.asset(k).lgd;
                }
            }
            ++counts[static_cast<std::size_t>(loss)];
        }
    }

    MonteCarloResult result;
    result.distribution.probs.resize(counts.size());
    for (std::size_t value = 0; value < counts.size(); ++value) {
        result.distribution.probs[value] = static_cast<double>(counts[value]) / static_cast<double>(samples);
    }
    result.report.alpha = alpha;
    result.report.method = "mc";
    result.report.expected_loss = result.distribution.mean();
    result.report.var = value_at_risk(result.distribution, alpha);
    result.report.ecr = static_cast<double>(result.report.var) - result.report.expected_loss;
    return result;
}

} // namespace qcrisk
