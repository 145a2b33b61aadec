// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/mc.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "detail/parallel.hpp"

namespace expmc {

namespace {

index_t checked_steps(double beta, double dt) {
    if (!(dt > 0.0) || !(beta > 0.0)) throw std::invalid_argument("beta and dt must be positive");
    const double ratio = beta / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * ratio || rounded < 1.0)
        throw std::invalid_argument("beta/dt must be a positive integer step count");
    return static_cast<index_t>(rounded);
}

std::uint32_t level_key(index_t steps) {
    return static_cast<std::uint32_t>(std::bit_width(static_cast<std::uint64_t>(steps)));
}

McResult finish(const detail::WelfordAcc& acc, double dt, index_t steps) {
    McResult r;
    r.samples = acc.n;
    r.estimate = acc.mean;
    r.std_error = acc.n > 1 ? std::sqrt(acc.variance() / static_cast<double>(acc.n)) : 0.0;
    r.dt = dt;
    r.steps = steps;
    r.wall_cost = acc.cost;
    return r;
}

}  // namespace

McResult mc_single_entry(const ChainDecomposition& dec, std::span<const double> u, index_t entry,
                         double beta, double dt, std::uint64_t samples, std::uint64_t seed,
                         int threads) {
    if (samples < 2) throw std::invalid_argument("at least 2 samples required");
    if (entry < 0 || entry >= dec.n) throw std::out_of_range("entry index outside matrix");
    const index_t steps = checked_steps(beta, dt);
    const LevelSampler sampler(dec, dt, steps);
    const std::uint32_t lvl = level_key(steps);

    auto acc = detail::parallel_samples<detail::WelfordAcc>(
        0, samples, threads, [&](std::uint64_t s, detail::WelfordAcc& a) {
            RngStream stream = stream_for(seed, lvl, s, /*lane=*/0);
            const FunctionalSample f = sampler.single(u, entry, stream);
            a.add(f.value, f.cost);
        });
    return finish(acc, dt, steps);
}

McResult mc_forward_scalar(const ChainDecomposition& dec_transpose, std::span<const double> u,
                           double beta, double dt, std::uint64_t samples, std::uint64_t seed,
                           int threads) {
    if (samples < 2) throw std::invalid_argument("at least 2 samples required");
    const index_t steps = checked_steps(beta, dt);
    const LevelSampler sampler(dec_transpose, dt, steps);
    const InitialDistribution init = make_initial_distribution(u);
    const std::uint32_t lvl = level_key(steps);

    auto acc = detail::parallel_samples<detail::WelfordAcc>(
        0, samples, threads, [&](std::uint64_t s, detail::WelfordAcc& a) {
            RngStream stream = stream_for(seed, lvl, s, /*lane=*/1);
            const FunctionalSample f = sampler.forward_single(init, stream);
            a.add(f.value, f.cost);
        });
    return finish(acc, dt, steps);
}

McResult mc_auto(const ChainDecomposition& dec, std::span<const double> u, index_t entry,
                 double beta, double epsilon, std::uint64_t seed, int threads) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    constexpr std::uint64_t kPilot = 1000;  // tunable pilot size

    // Pilot at two adjacent power-of-two step sizes for the Richardson
    // estimate of the O(dt^2) splitting-bias constant.
    int ka = 2;
    if (dec.d_max > 0.0) {
        const int l0 = static_cast<int>(
            std::max<long>(0, std::lround(std::log2(2.0 * beta * dec.d_max))));
        ka = std::max(ka, l0);
    }
    const double dt_a = beta / static_cast<double>(index_t{1} << ka);
    const double dt_b = 0.5 * dt_a;
    const McResult pilot_a = mc_single_entry(dec, u, entry, beta, dt_a, kPilot, seed + 1, threads);
    const McResult pilot_b = mc_single_entry(dec, u, entry, beta, dt_b, kPilot, seed + 2, threads);

    const double c = std::abs(pilot_a.estimate - pilot_b.estimate) / (dt_a * dt_a - dt_b * dt_b);
    int k = 0;
    while (true) {
        const double dt = beta / static_cast<double>(index_t{1} << k);
        if (c * dt * dt <= epsilon / 2.0) break;
        ++k;
        if (k > 62) throw std::overflow_error("epsilon requires more steps than a 64-bit count");
    }
    const double dt = beta / static_cast<double>(index_t{1} << k);

    const double pilot_var = pilot_b.std_error * pilot_b.std_error * static_cast<double>(kPilot);
    const std::uint64_t m = std::max<std::uint64_t>(
        2, static_cast<std::uint64_t>(std::ceil(2.0 * pilot_var / (epsilon * epsilon))));

    McResult r = mc_single_entry(dec, u, entry, beta, dt, m, seed, threads);
    r.wall_cost += pilot_a.wall_cost + pilot_b.wall_cost;
    return r;
}

}  // namespace expmc
