// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expmc {

InitialDistribution make_initial_distribution(std::span<const double> u) {
    InitialDistribution init;
    init.cdf.resize(u.size());
    double total = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (u[j] < 0.0)
            throw std::invalid_argument("forward sampling requires a nonnegative vector");
        total += u[j];
        init.cdf[j] = total;
    }
    if (!(total > 0.0))
        throw std::invalid_argument("forward sampling requires sum(u) > 0");
    for (double& c : init.cdf) c /= total;
    init.cdf.back() = 1.0;
    init.total = total;
    return init;
}

namespace {

index_t sample_initial(const InitialDistribution& init, RngStream& stream) {
    const double v = stream.next_uniform();
    const auto it = std::upper_bound(init.cdf.begin(), init.cdf.end(), v);
    return static_cast<index_t>(it - init.cdf.begin());
}

}  // namespace

// One interval of length dt. `first_q` is 1 - e^{-rate[state] dt};
// comparing the uniform against it decides no-jump in CDF space, which is
// the inverse-CDF exponential draw without evaluating the log until the
// jump branch actually needs the jump time.
static index_t evolve_common(const ChainDecomposition& dec, index_t state, int& sign,
                             std::uint64_t& draws, std::uint64_t& jumps, double remaining,
                             double first_q, RngStream& stream) {
    double q = first_q;
    for (;;) {
        const double rate = dec.rate[static_cast<std::size_t>(state)];
        if (rate == 0.0) break;  // absorbing row: holding time +inf
        const double u = stream.next_uniform();
        ++draws;
        if (u >= q) break;  // holding time exceeds the rest of the interval
        remaining -= -std::log1p(-u) / rate;
        ++jumps;

        const double v = stream.next_uniform();
        const double* cdf = dec.jump_cdf.data();
        const auto begin = static_cast<std::size_t>(dec.row_ptr[state]);
        const auto end = static_cast<std::size_t>(dec.row_ptr[state + 1]);
        const std::size_t k =
            static_cast<std::size_t>(std::upper_bound(cdf + begin, cdf + end, v) - cdf);
        const std::size_t kk = k < end ? k : end - 1;
        if (dec.sign[kk]) sign = -sign;
        state = dec.jump_target[kk];

        if (remaining <= 0.0) break;  // rounding pushed us past the boundary
        q = -std::expm1(-dec.rate[static_cast<std::size_t>(state)] * remaining);
    }
    return state;
}

PathState evolve_interval(const ChainDecomposition& dec, PathState start, double dt,
                          RngStream& stream) {
    if (start.state < 0 || start.state >= dec.n) throw std::out_of_range("path state outside matrix");
    if (!(dt > 0.0)) throw std::invalid_argument("interval length must be positive");
    std::uint64_t draws = 0;
    const double q =
        -std::expm1(-dec.rate[static_cast<std::size_t>(start.state)] * dt);
    start.state = evolve_common(dec, start.state, start.sign, draws, start.jumps, dt, q, stream);
    return start;
}

LevelSampler::LevelSampler(const ChainDecomposition& dec, double dt, index_t steps)
    : dec_(&dec), dt_(dt), steps_(steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
    if (steps < 1) throw std::invalid_argument("step count must be >= 1");
    nojump_.resize(static_cast<std::size_t>(dec.n));
    for (std::size_t i = 0; i < nojump_.size(); ++i)
        nojump_[i] = -std::expm1(-dec.rate[i] * dt);
}

inline index_t LevelSampler::advance(index_t state, int& sign, std::uint64_t& draws,
                                     std::uint64_t& jumps, RngStream& stream) const {
    return evolve_common(*dec_, state, sign, draws, jumps, dt_,
                         nojump_[static_cast<std::size_t>(state)], stream);
}

FunctionalSample LevelSampler::single(std::span<const double> u, index_t entry,
                                      RngStream& stream) const {
    if (entry < 0 || entry >= dec_->n) throw std::out_of_range("entry index outside matrix");
    const double* d = dec_->d.data();
    index_t state = entry;
    int sign = 1;
    std::uint64_t draws = 0, jumps = 0;
    double expo = 0.0;
    for (index_t n = 0; n < steps_; ++n) {
        const index_t s0 = state;
        state = advance(state, sign, draws, jumps, stream);
        expo += dt_ * 0.5 * (d[s0] + d[state]);
    }
    const double value = sign * std::exp(expo) * u[static_cast<std::size_t>(state)];
    return {value, draws + static_cast<std::uint64_t>(steps_)};
}

CoupledSample LevelSampler::coupled(std::span<const double> u, index_t entry,
                                    RngStream& stream) const {
    if (entry < 0 || entry >= dec_->n) throw std::out_of_range("entry index outside matrix");
    if (steps_ % 2 != 0) throw std::invalid_argument("coupled sampling needs an even step count");
    const double* d = dec_->d.data();
    index_t state = entry;
    int sign = 1;
    std::uint64_t draws = 0, jumps = 0;
    // Coarse exponent plus the fine-minus-coarse correction. Keeping the
    // correction separate makes the difference identically zero whenever d
    // is constant along the path (including every no-jump pair).
    double coarse = 0.0;
    double delta = 0.0;
    for (index_t m = 0; m < steps_ / 2; ++m) {
        const index_t s0 = state;
        state = advance(state, sign, draws, jumps, stream);
        const index_t s1 = state;
        state = advance(state, sign, draws, jumps, stream);
        const double half_ends = 0.5 * (d[s0] + d[state]);
        coarse += dt_ * (d[s0] + d[state]);
        delta += dt_ * (d[s1] - half_ends);
    }
    const double uf = sign * u[static_cast<std::size_t>(state)];
    return {uf * std::exp(coarse + delta), uf * std::exp(coarse),
            draws + static_cast<std::uint64_t>(steps_)};
}

FunctionalSample LevelSampler::forward_single(const InitialDistribution& init,
                                              RngStream& stream) const {
    const index_t start = sample_initial(init, stream);
    const double* d = dec_->d.data();
    index_t state = start;
    int sign = 1;
    std::uint64_t draws = 0, jumps = 0;
    double expo = 0.0;
    for (index_t n = 0; n < steps_; ++n) {
        const index_t s0 = state;
        state = advance(state, sign, draws, jumps, stream);
        expo += dt_ * 0.5 * (d[s0] + d[state]);
    }
    return {sign * std::exp(expo) * init.total, draws + static_cast<std::uint64_t>(steps_)};
}

CoupledSample LevelSampler::forward_coupled(const InitialDistribution& init,
                                            RngStream& stream) const {
    if (steps_ % 2 != 0) throw std::invalid_argument("coupled sampling needs an even step count");
    const index_t start = sample_initial(init, stream);
    const double* d = dec_->d.data();
    index_t state = start;
    int sign = 1;
    std::uint64_t draws = 0, jumps = 0;
    double coarse = 0.0;
    double delta = 0.0;
    for (index_t m = 0; m < steps_ / 2; ++m) {
        const index_t s0 = state;
        state = advance(state, sign, draws, jumps, stream);
        const index_t s1 = state;
        state = advance(state, sign, draws, jumps, stream);
        const double half_ends = 0.5 * (d[s0] + d[state]);
        coarse += dt_ * (d[s0] + d[state]);
        delta += dt_ * (d[s1] - half_ends);
    }
    const double scale = sign * init.total;
    return {scale * std::exp(coarse + delta), scale * std::exp(coarse),
            draws + static_cast<std::uint64_t>(steps_)};
}

FemSample LevelSampler::fem_single(std::span<const double> u, std::span<const double> load,
                                   index_t entry, std::span<const double> fine_w,
                                   RngStream& stream) const {
    if (entry < 0 || entry >= dec_->n) throw std::out_of_range("entry index outside matrix");
    if (static_cast<index_t>(fine_w.size()) != steps_ + 1)
        throw std::invalid_argument("quadrature weight length must be steps + 1");
    const double* d = dec_->d.data();
    index_t state = entry;
    int sign = 1;
    std::uint64_t draws = 0, jumps = 0;
    double expo = 0.0;
    double integ = fine_w[0] * load[static_cast<std::size_t>(entry)];
    for (index_t n = 0; n < steps_; ++n) {
        const index_t s0 = state;
        state = advance(state, sign, draws, jumps, stream);
        expo += dt_ * 0.5 * (d[s0] + d[state]);
        integ += fine_w[static_cast<std::size_t>(n) + 1] * sign * std::exp(expo) *
                 load[static_cast<std::size_t>(state)];
    }
    const double value = sign * std::exp(expo) * u[static_cast<std::size_t>(state)] + integ;
    return {value, draws + static_cast<std::uint64_t>(steps_)};
}

FemCoupledSample LevelSampler::fem_coupled(std::span<const double> load, index_t entry,
                                           std::span<const double> fine_w,
                                           std::span<const double> coarse_w,
                                           RngStream& stream) const {
    if (entry < 0 || entry >= dec_->n) throw std::out_of_range("entry index outside matrix");
    if (steps_ < 4 || steps_ % 4 != 0)
        throw std::invalid_argument("coupled quadrature needs a step count divisible by 4");
    if (static_cast<index_t>(fine_w.size()) != steps_ + 1 ||
        static_cast<index_t>(coarse_w.size()) != steps_ / 2 + 1)
        throw std::invalid_argument("quadrature weight length must be steps + 1");
    const double* d = dec_->d.data();
    index_t state = entry;
    int sign = 1;
    std::uint64_t draws = 0, jumps = 0;
    double coarse = 0.0;
    double delta = 0.0;
    double eta_f = 1.0, eta_c = 1.0;
    double integ_f = fine_w[0] * load[static_cast<std::size_t>(entry)];
    double integ_c = coarse_w[0] * load[static_cast<std::size_t>(entry)];
    for (index_t m = 0; m < steps_ / 2; ++m) {
        const index_t s0 = state;
        state = advance(state, sign, draws, jumps, stream);
        const index_t s1 = state;
        // fine node 2m+1: exponent so far plus the started pair's halves
        const double mid = coarse + delta + dt_ * 0.5 * (d[s0] + d[s1]);
        integ_f += fine_w[static_cast<std::size_t>(2 * m + 1)] * sign * std::exp(mid) *
                   load[static_cast<std::size_t>(s1)];
        state = advance(state, sign, draws, jumps, stream);
        const double half_ends = 0.5 * (d[s0] + d[state]);
        coarse += dt_ * (d[s0] + d[state]);
        delta += dt_ * (d[s1] - half_ends);
        eta_f = sign * std::exp(coarse + delta);
        eta_c = sign * std::exp(coarse);
        integ_f += fine_w[static_cast<std::size_t>(2 * m + 2)] * eta_f *
                   load[static_cast<std::size_t>(state)];
        integ_c += coarse_w[static_cast<std::size_t>(m + 1)] * eta_c *
                   load[static_cast<std::size_t>(state)];
    }
    return {eta_f, eta_c, integ_f, integ_c, state, draws + static_cast<std::uint64_t>(steps_)};
}

FunctionalSample single_functional(const ChainDecomposition& dec, std::span<const double> u,
                                   index_t entry, double dt, index_t steps, RngStream& stream) {
    return LevelSampler(dec, dt, steps).single(u, entry, stream);
}

CoupledSample coupled_functional(const ChainDecomposition& dec, std::span<const double> u,
                                 index_t entry, double dt, index_t steps, RngStream& stream) {
    return LevelSampler(dec, dt, steps).coupled(u, entry, stream);
}

FemCoupledSample coupled_functional_fem(const ChainDecomposition& dec, std::span<const double> u,
                                        std::span<const double> load, index_t entry, double dt,
                                        index_t steps, std::span<const double> fine_weights,
                                        RngStream& stream) {
    if (static_cast<index_t>(u.size()) != dec.n || static_cast<index_t>(load.size()) != dec.n)
        throw std::invalid_argument("vector length does not match decomposition");
    if (steps < 4 || steps % 4 != 0)
        throw std::invalid_argument("coupled quadrature needs a step count divisible by 4");
    std::vector<double> coarse_w(static_cast<std::size_t>(steps / 2) + 1);
    // Composite Simpson on the coarse grid, step 2 dt.
    const double h = 2.0 * dt / 3.0;
    for (std::size_t j = 0; j < coarse_w.size(); ++j) {
        const bool end = (j == 0 || j + 1 == coarse_w.size());
        coarse_w[j] = h * (end ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0));
    }
    return LevelSampler(dec, dt, steps).fem_coupled(load, entry, fine_weights, coarse_w, stream);
}

FunctionalSample forward_scalar_functional(const ChainDecomposition& dec_transpose,
                                           std::span<const double> u, double dt, index_t steps,
                                           RngStream& stream) {
    const InitialDistribution init = make_initial_distribution(u);
    return LevelSampler(dec_transpose, dt, steps).forward_single(init, stream);
}

}  // namespace expmc
