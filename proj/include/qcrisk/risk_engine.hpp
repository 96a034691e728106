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

#include "qcrisk/distributions.hpp"
#include "qcrisk/model_circuits.hpp"

namespace qcrisk {

/// Law of the integer total loss on the support [0, 2^n_sum).
struct DiscreteDistribution {
    std::vector<double> probs;

    double mean() const;
    std::vector<double> cumulative() const;
};

/// Ground truth by full enumeration of latent grid points and default
/// patterns. Pass no grid for the independent model. Rejects instances whose
/// enumeration exceeds the combined-bit budget.
DiscreteDistribution exact_loss_distribution(const Portfolio &portfolio, const std::optional<LatentGrid> &grid);

/// Closed-form expected total loss of the independent model.
double expected_loss_independent(const Portfolio &portfolio);

/// Expected total loss of the correlated model on the same discretized grid
/// the quantum circuits load, keeping risk figures internally consistent.
double expected_loss_gci(const Portfolio &portfolio, const LatentGrid &grid);

/// Diagnostic companion to expected_loss_gci: the continuous-factor integral
/// evaluated by trapezoid quadrature, together with a bound on the
/// grid-discretization error (one grid step of drift plus truncated tails).
struct GciExpectedLossDiagnostic {
    double grid_value = 0.0;
    double continuous_value = 0.0;
    double discretization_bound = 0.0;
};

GciExpectedLossDiagnostic expected_loss_gci_diagnostic(const Portfolio &portfolio, const LatentGrid &grid,
                                                       std::size_t quadrature_points = 1000000);

/// Smallest loss level whose CDF reaches alpha; alpha in (0, 1].
std::int64_t value_at_risk(const DiscreteDistribution &distribution, double alpha);

struct BisectionProbe {
    std::int64_t threshold = 0;
    double estimate = 0.0;
    double bound = 0.0;
};

struct RiskReport {
    double alpha = 0.0;
    double expected_loss = 0.0;
    std::int64_t var = 0;
    double ecr = 0.0; // var - expected_loss, by construction
    std::string method;
    std::vector<BisectionProbe> trace;
    /// Set when QAE probes came back non-monotone across thresholds; the
    /// search then follows the monotone envelope of the raw estimates.
    bool monotone_warning = false;
};

struct QaeRunOptions {
    std::size_t m = 4;
    LoadingMode mode = LoadingMode::Linear;
    std::optional<std::size_t> shots;
    std::uint64_t seed = 0;
};

/// Bisection VaR search over integer loss levels driven by QAE-estimated CDF
/// values. The bracket starts at (-1, 2^n_sum - 1], whose upper end has CDF 1
/// by construction, so at most n_sum probes are spent.
RiskReport var_bisection_qae(const Portfolio &portfolio, const std::optional<LatentGrid> &grid, double alpha,
                             const QaeRunOptions &options);

/// Economic capital from the exact loss distribution.
RiskReport ecr_exact(const Portfolio &portfolio, const std::optional<LatentGrid> &grid, double alpha);

/// Economic capital with the VaR taken from the QAE bisection. The expected
/// loss is always computed classically.
RiskReport ecr_qae(const Portfolio &portfolio, const std::optional<LatentGrid> &grid, double alpha,
                   const QaeRunOptions &options);

struct MonteCarloResult {
    DiscreteDistribution distribution;
    RiskReport report;
};

/// Seeded Monte Carlo baseline: draws a latent grid point (GCI) and then the
/// per-asset defaults. `partitions` splits the sample budget into
/// independently seeded streams so a parallel driver stays deterministic for
/// a given (seed, partitions) pair; the result is identical whether the
/// partitions run serially or not.
MonteCarloResult simulate_monte_carlo(const Portfolio &portfolio, const std::optional<LatentGrid> &grid,
                                      std::size_t samples, double alpha, std::uint64_t seed,
                                      std::size_t partitions = 1);

} // namespace qcrisk
