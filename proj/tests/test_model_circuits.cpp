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
#include <complex>
#include <doctest.h>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "qcrisk/model_circuits.hpp"

using namespace qcrisk;

namespace {

const Portfolio &reference_portfolio() {
    static const Portfolio portfolio({Asset{1, 0.15, 0.1}, Asset{2, 0.25, 0.05}});
    return portfolio;
}

// Classical joint law over (grid index, default pattern), by direct
// multiplication of conditional Bernoulli factors.
double joint_probability(const Portfolio &portfolio, const LatentGrid &grid, std::size_t i, std::uint64_t pattern) {
    double p = grid.prob(i);
    for (std::size_t k = 0; k < portfolio.size(); ++k) {
        const double pd = conditional_pd(portfolio.asset(k), grid.z(i));
        p *= ((pattern >> k) & 1u) ? pd : 1.0 - pd;
    }
    return p;
}

StateVector random_state(std::size_t n, std::mt19937 &rng) {
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    StateVector state(n);
    for (int g = 0; g < 20; ++g) {
        const std::size_t q = rng() % n;
        if (rng() % 2 == 0) {
            state = Operator::single_gate(n, GateKind::H, q).apply(state);
        } else {
            state = Operator::single_gate(n, GateKind::RY, q, angle(rng)).apply(state);
        }
        const std::size_t c = rng() % n;
        if (c != q) {
            state = Operator(n, "cx", {Gate{GateKind::X, q, {c}, 0.0}}).apply(state);
        }
    }
    return state;
}

} // namespace

TEST_CASE("latent loader prepares sqrt(q_i) amplitudes") {
    for (std::size_t n : {1, 2, 3, 4}) {
        for (double z_max : {2.0, 3.0}) {
            const LatentGrid grid = build_latent_grid(n, z_max);
            const auto state = build_latent_loader(grid).apply(StateVector(n));
            for (std::size_t i = 0; i < grid.size(); ++i) {
                CHECK(std::abs(state.amplitude(i) - complex_t{std::sqrt(grid.prob(i)), 0.0}) < 1e-12);
            }
        }
    }
}

TEST_CASE("independent loader sets per-asset default probabilities") {
    const Portfolio one_asset({Asset{1, 0.15, 0.0}});
    const auto single = build_independent_loader(one_asset).apply(StateVector(1));
    CHECK(std::abs(probability_of(single, 0, 1) - 0.15) < 1e-12);

    const auto pair = build_independent_loader(reference_portfolio()).apply(StateVector(2));
    const auto probs = pair.probabilities();
    CHECK(probs[0b11] == doctest::Approx(0.15 * 0.25).epsilon(1e-12));
    CHECK(probs[0b00] == doctest::Approx(0.85 * 0.75).epsilon(1e-12));
    CHECK(probs[0b01] == doctest::Approx(0.15 * 0.75).epsilon(1e-12));

    // Vanishing default probabilities leave the register in |0...0>.
    const Portfolio tiny({Asset{1, 1e-14, 0.0}, Asset{1, 1e-14, 0.0}});
    const auto idle = build_independent_loader(tiny).apply(StateVector(2));
    CHECK(std::abs(idle.amplitude(0) - complex_t{1.0, 0.0}) < 1e-13);
}

TEST_CASE("gci loader reduces to the independent model at zero sensitivity") {
    const Portfolio uncorrelated({Asset{1, 0.15, 0.0}, Asset{2, 0.25, 0.0}});
    const LatentGrid grid = build_latent_grid(2, 3.0);
    std::vector<AngleFit> fits;
    for (const Asset &asset : uncorrelated.assets()) {
        fits.push_back(fit_linear_angles(asset, grid));
    }
    for (LoadingMode mode : {LoadingMode::Linear, LoadingMode::Exact}) {
        const auto state = build_gci_loader(uncorrelated, grid, fits, mode).apply(StateVector(4));
        CHECK(std::abs(probability_of(state, 2, 1) - 0.15) < 1e-12);
        CHECK(std::abs(probability_of(state, 3, 1) - 0.25) < 1e-12);
    }
}

TEST_CASE("linear-mode marginals match the closed-form angle sum") {
    const Portfolio &portfolio = reference_portfolio();
    const LatentGrid grid = build_latent_grid(2, 2.0);
    std::vector<AngleFit> fits;
    for (const Asset &asset : portfolio.assets()) {
        fits.push_back(fit_linear_angles(asset, grid));
    }
    const auto state = build_gci_loader(portfolio, grid, fits, LoadingMode::Linear).apply(StateVector(4));
    for (std::size_t k = 0; k < portfolio.size(); ++k) {
        double expected = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            expected += grid.prob(i) * std::pow(std::sin(fits[k].angle_at(i) / 2.0), 2);
        }
        CHECK(std::abs(probability_of(state, 2 + k, 1) - expected) < 1e-12);
    }
}

TEST_CASE("exact-mode loader reproduces the brute-force joint law") {
    const Portfolio &portfolio = reference_portfolio();
    const LatentGrid grid = build_latent_grid(2, 2.0);
    const auto state = build_gci_loader(portfolio, grid, {}, LoadingMode::Exact).apply(StateVector(4));
    const auto probs = state.probabilities();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::uint64_t pattern = 0; pattern < 4; ++pattern) {
            const std::uint64_t basis = i | (pattern << 2);
            CHECK(std::abs(probs[basis] - joint_probability(portfolio, grid, i, pattern)) < 1e-12);
        }
    }
}

TEST_CASE("weighted sum writes lgd-weighted totals") {
    const Portfolio &portfolio = reference_portfolio(); // lgd = (1, 2), n_sum = 2
    const Operator sum = build_weighted_sum(portfolio);
    CHECK(sum.arity() == 4);

    for (std::uint64_t pattern = 0; pattern < 4; ++pattern) {
        const auto out = sum.apply(StateVector::basis_state(4, pattern));
        const std::uint64_t expected_total = (pattern & 1u) * 1 + ((pattern >> 1) & 1u) * 2;
        const std::uint64_t expected_basis = pattern | (expected_total << 2);
        CHECK(std::abs(out.amplitude(expected_basis) - complex_t{1.0, 0.0}) < 1e-14);
    }
}

TEST_CASE("weighted sum is a self-inverse XOR accumulator") {
    std::mt19937 rng(5);
    const Operator sum = build_weighted_sum(reference_portfolio());
    const auto state = random_state(4, rng);
    const auto twice = sum.apply(sum.apply(state));
    CHECK(twice.distance_to(state) < 1e-12);
}

TEST_CASE("comparator flips the objective exactly on small-enough sums") {
    const Operator cmp = build_loss_comparator(5, 4);
    for (std::uint64_t value = 0; value < 16; ++value) {
        const auto out = cmp.apply(StateVector::basis_state(5, value));
        const std::uint64_t expected = value <= 5 ? value | (1u << 4) : value;
        CHECK(std::abs(out.amplitude(expected) - complex_t{1.0, 0.0}) < 1e-14);
    }

    const auto zero_case = build_loss_comparator(0, 2).apply(StateVector::basis_state(3, 0));
    CHECK(std::abs(zero_case.amplitude(0b100) - complex_t{1.0, 0.0}) < 1e-14);
    const auto above = build_loss_comparator(2, 2).apply(StateVector::basis_state(3, 3));
    CHECK(std::abs(above.amplitude(3) - complex_t{1.0, 0.0}) < 1e-14);

    CHECK_THROWS_AS((void)build_loss_comparator(4, 2), std::invalid_argument);
    CHECK_THROWS_AS((void)build_loss_comparator(-1, 2), std::invalid_argument);
}

TEST_CASE("cdf oracle hits trivial thresholds and stays monotone") {
    const Portfolio &portfolio = reference_portfolio();
    const LatentGrid grid = build_latent_grid(2, 2.0);

    const CdfOracle all = build_cdf_oracle(portfolio, grid, 3, LoadingMode::Exact);
    const auto saturated = all.op.apply(StateVector(all.layout.total_qubits()));
    CHECK(std::abs(probability_of(saturated, all.layout.objective(), 1) - 1.0) < 1e-12);

    double closed_form = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        closed_form += joint_probability(portfolio, grid, i, 0b00);
    }
    const CdfOracle none = build_cdf_oracle(portfolio, grid, 0, LoadingMode::Exact);
    const auto floor_state = none.op.apply(StateVector(none.layout.total_qubits()));
    CHECK(std::abs(probability_of(floor_state, none.layout.objective(), 1) - closed_form) < 1e-12);

    double previous = 0.0;
    for (std::int64_t x = 0; x <= 3; ++x) {
        const CdfOracle oracle = build_cdf_oracle(portfolio, grid, x, LoadingMode::Exact);
        const auto state = oracle.op.apply(StateVector(oracle.layout.total_qubits()));
        const double a = probability_of(state, oracle.layout.objective(), 1);
        CHECK(a >= previous - 1e-14);
        previous = a;
    }
}

TEST_CASE("linear loading error stays within the accumulated fit residual") {
    const Portfolio &portfolio = reference_portfolio();
    for (std::size_t n : {1, 2, 3}) {
        const LatentGrid grid = build_latent_grid(n, 3.0);
        double worst_residual = 0.0;
        for (const Asset &asset : portfolio.assets()) {
            worst_residual = std::max(worst_residual, fit_linear_angles(asset, grid).residual);
        }
        for (std::int64_t x = 0; x <= 3; ++x) {
            const CdfOracle linear = build_cdf_oracle(portfolio, grid, x, LoadingMode::Linear);
            const CdfOracle exact = build_cdf_oracle(portfolio, grid, x, LoadingMode::Exact);
            const auto a_linear = probability_of(
                linear.op.apply(StateVector(linear.layout.total_qubits())), linear.layout.objective(), 1);
            const auto a_exact = probability_of(exact.op.apply(StateVector(exact.layout.total_qubits())),
                                                exact.layout.objective(), 1);
            CHECK(std::abs(a_linear - a_exact) <=
                  static_cast<double>(portfolio.size()) * worst_residual + 1e-12);
        }
    }
}

TEST_CASE("register layout counts qubits the way the circuits expect") {
    const CdfOracle oracle = build_cdf_oracle(reference_portfolio(), build_latent_grid(2, 3.0), 2);
    CHECK(oracle.layout.n_latent == 2);
    CHECK(oracle.layout.n_assets == 2);
    CHECK(oracle.layout.n_sum == 2);
    CHECK(oracle.layout.objective() == 6);
    CHECK(oracle.layout.total_qubits() == 7);
    CHECK(oracle.op.arity() == 7);
}

TEST_CASE("amplification operator obeys the rotation identity") {
    const Portfolio &portfolio = reference_portfolio();
    const LatentGrid grid = build_latent_grid(2, 2.0);
    const CdfOracle oracle = build_cdf_oracle(portfolio, grid, 1, LoadingMode::Exact);
    const GroverOperator grover = build_grover_operator(oracle);

    const std::size_t n = oracle.layout.total_qubits();
    const std::size_t objective = oracle.layout.objective();
    auto state = oracle.op.apply(StateVector(n));
    const double a = probability_of(state, objective, 1);
    const double theta = std::asin(std::sqrt(a));

    for (int j = 1; j <= 3; ++j) {
        state = grover.op.apply(state);
        const double expected = std::pow(std::sin((2.0 * j + 1.0) * theta), 2);
        CHECK(std::abs(probability_of(state, objective, 1) - expected) < 1e-10);
    }
}

TEST_CASE("amplification operator is unitary") {
    std::mt19937 rng(9);
    const CdfOracle oracle = build_cdf_oracle(reference_portfolio(), build_latent_grid(2, 2.0), 1);
    const GroverOperator grover = build_grover_operator(oracle);
    for (int trial = 0; trial < 5; ++trial) {
        const auto state = random_state(oracle.layout.total_qubits(), rng);
        const auto round_trip = grover.op.adjoint().apply(grover.op.apply(state));
        CHECK(round_trip.distance_to(state) < 1e-10);
        CHECK(std::abs(grover.op.apply(state).norm_squared() - 1.0) < 1e-12);
    }
}

TEST_CASE("amplification eigenphases sit at twice the base angle") {
    const CdfOracle oracle =
        build_cdf_oracle(reference_portfolio(), build_latent_grid(2, 2.0), 1, LoadingMode::Exact);
    const GroverOperator grover = build_grover_operator(oracle);
    const std::size_t objective = oracle.layout.objective();
    const std::uint64_t objective_bit = std::uint64_t{1} << objective;

    const auto eta = oracle.op.apply(StateVector(oracle.layout.total_qubits()));
    const double a = probability_of(eta, objective, 1);
    const double theta = std::asin(std::sqrt(a));

    // Orthonormal basis of the invariant plane: the flagged and unflagged
    // components of the oracle output.
    std::vector<complex_t> good(eta.dim()), bad(eta.dim());
    for (std::uint64_t b = 0; b < eta.dim(); ++b) {
        if (b & objective_bit) {
            good[b] = eta.amplitude(b) / std::sqrt(a);
        } else {
            bad[b] = eta.amplitude(b) / std::sqrt(1.0 - a);
        }
    }
    const auto inner = [](const std::vector<complex_t> &u, const StateVector &v) {
        complex_t total{0.0, 0.0};
        for (std::uint64_t b = 0; b < v.dim(); ++b) {
            total += std::conj(u[b]) * v.amplitude(b);
        }
        return total;
    };
    const auto q_bad = grover.op.apply(StateVector::from_amplitudes(bad));
    const auto q_good = grover.op.apply(StateVector::from_amplitudes(good));
    const complex_t m00 = inner(bad, q_bad), m01 = inner(bad, q_good);
    const complex_t m10 = inner(good, q_bad), m11 = inner(good, q_good);

    // Eigenvalues of the restricted 2x2 block.
    const complex_t trace = m00 + m11;
    const complex_t det = m00 * m11 - m01 * m10;
    const complex_t disc = std::sqrt(trace * trace - 4.0 * det);
    const complex_t lambda1 = (trace + disc) / 2.0;
    const complex_t lambda2 = (trace - disc) / 2.0;

    CHECK(std::abs(std::abs(lambda1) - 1.0) < 1e-8);
    CHECK(std::abs(std::abs(lambda2) - 1.0) < 1e-8);
    CHECK(std::abs(std::abs(std::arg(lambda1)) - 2.0 * theta) < 1e-8);
    CHECK(std::abs(std::abs(std::arg(lambda2)) - 2.0 * theta) < 1e-8);
    CHECK(std::abs(std::arg(lambda1) + std::arg(lambda2)) < 1e-8); // opposite signs
}
