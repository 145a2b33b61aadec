// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "expmc/netgen.hpp"
#include "expmc/oracle.hpp"
#include "expmc/paths.hpp"
#include "test_support.hpp"

using namespace expmc;

namespace {

// Unsigned chain generator Q = -L: diag -rate_i, off-diagonal |a_ij|.
SparseMatrix chain_generator(const ChainDecomposition& dec) {
    std::vector<Triplet> trips;
    for (index_t i = 0; i < dec.n; ++i) {
        if (dec.rate[static_cast<std::size_t>(i)] != 0.0)
            trips.push_back({i, i, -dec.rate[static_cast<std::size_t>(i)]});
        for (index_t k = dec.row_ptr[i]; k < dec.row_ptr[i + 1]; ++k)
            trips.push_back({i, dec.jump_target[static_cast<std::size_t>(k)],
                             dec.jump_weight[static_cast<std::size_t>(k)]});
    }
    return SparseMatrix::from_triplets(dec.n, std::move(trips));
}

// Row i of the transition matrix e^{t Q}.
std::vector<double> transition_row(const ChainDecomposition& dec, index_t i, double t) {
    const SparseMatrix qt = chain_generator(dec).transposed();
    std::vector<double> e(static_cast<std::size_t>(dec.n), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    return dense_expmv(qt, e, t);
}

}  // namespace

TEST_CASE("evolve_interval on a diagonal matrix never moves") {
    const SparseMatrix a = SparseMatrix::from_triplets(3, {{0, 0, 1.0}, {1, 1, -2.0}});
    const ChainDecomposition dec = decompose(a);
    RngStream s = stream_for(1, 0, 0);
    const PathState out = evolve_interval(dec, {1, 1, 0}, 5.0, s);
    CHECK(out.state == 1);
    CHECK(out.sign == 1);
    CHECK(out.jumps == 0);
}

TEST_CASE("evolve_interval no-jump frequency matches the survival probability") {
    const SparseMatrix k2 = SparseMatrix::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}});
    const ChainDecomposition dec = decompose(k2);  // rate 1 in both states
    const int n = 1000000;
    int stays = 0;
    for (int i = 0; i < n; ++i) {
        RngStream s = stream_for(12, 0, static_cast<std::uint64_t>(i));
        if (evolve_interval(dec, {0, 1, 0}, 1.0, s).jumps == 0) ++stays;
    }
    const double p = std::exp(-1.0);
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(static_cast<double>(stays) / n - p) < 3.0 * sigma);
}

TEST_CASE("evolve_interval terminal distribution matches e^{Qt} rows") {
    const SparseMatrix a = SparseMatrix::from_triplets(
        3, {{0, 1, 1.0}, {0, 2, 0.5}, {1, 0, 0.7}, {1, 2, 0.2}, {2, 0, 0.4}});
    const ChainDecomposition dec = decompose(a);
    const double t = 1.7;  // long enough for several jumps
    const std::vector<double> p = transition_row(dec, 0, t);

    const int n = 400000;
    std::vector<int> hits(3, 0);
    for (int i = 0; i < n; ++i) {
        RngStream s = stream_for(13, 0, static_cast<std::uint64_t>(i));
        ++hits[static_cast<std::size_t>(evolve_interval(dec, {0, 1, 0}, t, s).state)];
    }
    for (std::size_t j = 0; j < 3; ++j) {
        const double sigma = std::sqrt(p[j] * (1.0 - p[j]) / n);
        CHECK(std::abs(static_cast<double>(hits[j]) / n - p[j]) < 3.0 * sigma);
    }
}

TEST_CASE("single_functional is deterministic and exact on diagonal matrices") {
    const SparseMatrix a = SparseMatrix::from_triplets(2, {{0, 0, 0.75}, {1, 1, -0.5}});
    const ChainDecomposition dec = decompose(a);
    const std::vector<double> u{3.0, 5.0};
    const double beta = 2.0;
    const LevelSampler sampler(dec, beta / 8.0, 8);
    double first = 0.0;
    for (int i = 0; i < 50; ++i) {
        RngStream s = stream_for(2, 3, static_cast<std::uint64_t>(i));
        const FunctionalSample f = sampler.single(u, 0, s);
        if (i == 0) first = f.value;
        CHECK(f.value == first);  // no jumps: every sample identical
        CHECK(f.cost == 8);       // absorbing rows draw nothing
    }
    CHECK(first == doctest::Approx(3.0 * std::exp(beta * 0.75)).epsilon(1e-14));
}

TEST_CASE("single_functional on K2 is exactly e (constant d telescopes)") {
    const SparseMatrix k2 = SparseMatrix::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}});
    const ChainDecomposition dec = decompose(k2);
    const std::vector<double> u{1.0, 1.0};
    const LevelSampler sampler(dec, 1.0 / 16.0, 16);
    const double expect = std::exp(1.0);
    for (int i = 0; i < 1000; ++i) {
        RngStream s = stream_for(3, 4, static_cast<std::uint64_t>(i));
        CHECK(sampler.single(u, 0, s).value == expect);
    }
}

TEST_CASE("single_functional unbiased for the Strang product on a small world") {
    const SparseMatrix a = smallw(100, 2, 0.1, 5);
    const ChainDecomposition dec = decompose(a);
    const std::vector<double> u(100, 1.0);
    const double beta = spectral_scale(dec);
    const index_t steps = 16;
    const LevelSampler sampler(dec, beta / static_cast<double>(steps), steps);

    const double ref = strang_reference(dec, u, beta, steps)[0];
    const int n = 400000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream s = stream_for(9, 4, static_cast<std::uint64_t>(i));
        const double v = sampler.single(u, 0, s).value;
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - ref) < 4.0 * se);
}

TEST_CASE("coupled difference is exactly zero on diagonal matrices") {
    const SparseMatrix a = SparseMatrix::from_triplets(2, {{0, 0, 1.5}, {1, 1, 0.25}});
    const ChainDecomposition dec = decompose(a);
    const std::vector<double> u{2.0, 1.0};
    const LevelSampler sampler(dec, 0.25, 8);
    for (int i = 0; i < 100; ++i) {
        RngStream s = stream_for(4, 3, static_cast<std::uint64_t>(i));
        const CoupledSample c = sampler.coupled(u, 0, s);
        CHECK(c.eta_fine - c.eta_coarse == 0.0);
        CHECK(c.eta_fine == doctest::Approx(2.0 * std::exp(2.0 * 1.5)).epsilon(1e-14));
    }
}

TEST_CASE("coupled level-1 mean difference matches the transition-matrix enumeration") {
    // two-state chain with distinct shifts and rates
    const SparseMatrix a = SparseMatrix::from_triplets(
        2, {{0, 0, 0.2}, {0, 1, 1.0}, {1, 0, 0.5}, {1, 1, -0.3}});
    const ChainDecomposition dec = decompose(a);
    const std::vector<double> u{0.7, 1.3};
    const double beta = 0.8;
    const double dt = beta / 2.0;
    const LevelSampler sampler(dec, dt, 2);

    // E[P_fine - P_coarse] = sum_{j,k} p_{0j}(dt) p_{jk}(dt)
    //   (e^{dt(d_0/2 + d_j + d_k/2)} - e^{dt(d_0 + d_k)}) u_k
    const std::vector<double> p0 = transition_row(dec, 0, dt);
    const std::vector<double> p1 = transition_row(dec, 1, dt);
    const std::vector<std::vector<double>> p{p0, p1};
    double expect = 0.0;
    double expect_fine = 0.0;
    for (index_t j = 0; j < 2; ++j)
        for (index_t k = 0; k < 2; ++k) {
            const double fine =
                std::exp(dt * (0.5 * dec.d[0] + dec.d[static_cast<std::size_t>(j)] +
                               0.5 * dec.d[static_cast<std::size_t>(k)]));
            const double coarse = std::exp(dt * (dec.d[0] + dec.d[static_cast<std::size_t>(k)]));
            const double w = p[0][static_cast<std::size_t>(j)] *
                             p[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                             u[static_cast<std::size_t>(k)];
            expect += w * (fine - coarse);
            expect_fine += w * fine;
        }

    const int n = 1000000;
    double sum = 0.0, sum_sq = 0.0, sum_f = 0.0, sum_f_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream s = stream_for(5, 1, static_cast<std::uint64_t>(i));
        const CoupledSample c = sampler.coupled(u, 0, s);
        const double d = c.eta_fine - c.eta_coarse;
        sum += d;
        sum_sq += d * d;
        sum_f += c.eta_fine;
        sum_f_sq += c.eta_fine * c.eta_fine;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - expect) < 3.0 * se);

    const double mean_f = sum_f / n;
    const double se_f = std::sqrt((sum_f_sq / n - mean_f * mean_f) / n);
    CHECK(std::abs(mean_f - expect_fine) < 3.0 * se_f);
}

TEST_CASE("telescoping: coarse mean at level l equals fine mean at level l-1") {
    const SparseMatrix a = smallw(200, 2, 0.1, 6);
    const ChainDecomposition dec = decompose(a);
    const std::vector<double> u(200, 1.0);
    const double beta = spectral_scale(dec);
    const int l = 4;
    const index_t nf = index_t{1} << l;
    const LevelSampler fine(dec, beta / static_cast<double>(nf), nf);
    const LevelSampler coarse_as_fine(dec, beta / static_cast<double>(nf / 2), nf / 2);

    const int n = 300000;
    double sc = 0.0, sc2 = 0.0, sf = 0.0, sf2 = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream s1 = stream_for(6, static_cast<std::uint32_t>(l), static_cast<std::uint64_t>(i));
        const CoupledSample c = fine.coupled(u, 0, s1);
        sc += c.eta_coarse;
        sc2 += c.eta_coarse * c.eta_coarse;
        RngStream s2 =
            stream_for(7, static_cast<std::uint32_t>(l - 1), static_cast<std::uint64_t>(i));
        const double v = coarse_as_fine.single(u, 0, s2).value;
        sf += v;
        sf2 += v * v;
    }
    const double mc = sc / n, mf = sf / n;
    const double se = std::sqrt((sc2 / n - mc * mc) / n + (sf2 / n - mf * mf) / n);
    CHECK(std::abs(mc - mf) < 4.0 * se);
}

TEST_CASE("sign flips track jump parity for negated matrices") {
    const SparseMatrix pos = SparseMatrix::from_triplets(
        3, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 0.5}, {2, 1, 0.5}});
    std::vector<Triplet> neg_trips;
    for (index_t i = 0; i < 3; ++i) {
        // same magnitudes, all off-diagonals negative
        for (index_t j = 0; j < 3; ++j)
            if (pos.at(i, j) != 0.0) neg_trips.push_back({i, j, -pos.at(i, j)});
    }
    const SparseMatrix neg = SparseMatrix::from_triplets(3, std::move(neg_trips));
    const ChainDecomposition dp = decompose(pos);
    const ChainDecomposition dn = decompose(neg);

    for (int i = 0; i < 200; ++i) {
        RngStream s1 = stream_for(8, 0, static_cast<std::uint64_t>(i));
        RngStream s2 = stream_for(8, 0, static_cast<std::uint64_t>(i));
        const PathState a = evolve_interval(dp, {0, 1, 0}, 2.0, s1);
        const PathState b = evolve_interval(dn, {0, 1, 0}, 2.0, s2);
        CHECK(a.state == b.state);  // identical jump chain
        CHECK(a.jumps == b.jumps);
        CHECK(a.sign == 1);
        CHECK(b.sign == (a.jumps % 2 == 0 ? 1 : -1));
    }
}

TEST_CASE("forward sampler on diagonal matrices") {
    const SparseMatrix a =
        SparseMatrix::from_triplets(3, {{0, 0, 0.3}, {1, 1, -0.2}, {2, 2, 1.1}});
    const ChainDecomposition dec_t = decompose(a.transposed());
    const std::vector<double> u{1.0, 1.0, 1.0};
    const InitialDistribution init = make_initial_distribution(u);
    const double beta = 1.0;
    const LevelSampler sampler(dec_t, beta / 4.0, 4);

    // expectation sum_i e^{beta d_i}; per-path value n e^{beta d_J}
    const double expect = std::exp(0.3) + std::exp(-0.2) + std::exp(1.1);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream s = stream_for(10, 2, static_cast<std::uint64_t>(i));
        const double v = sampler.forward_single(init, s).value;
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - expect) < 4.0 * se);
}

TEST_CASE("forward sampler on K2 is exactly 2e") {
    const SparseMatrix k2 = SparseMatrix::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}});
    const ChainDecomposition dec_t = decompose(k2.transposed());
    const std::vector<double> u{1.0, 1.0};
    const InitialDistribution init = make_initial_distribution(u);
    const LevelSampler sampler(dec_t, 0.25, 4);
    for (int i = 0; i < 500; ++i) {
        RngStream s = stream_for(11, 2, static_cast<std::uint64_t>(i));
        CHECK(sampler.forward_single(init, s).value ==
              doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-15));
    }
}

TEST_CASE("forward sampler rejects bad vectors") {
    CHECK_THROWS_AS(make_initial_distribution(std::vector<double>{1.0, -0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_initial_distribution(std::vector<double>{0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("forward sampler matches the transpose Strang product on a small world") {
    const SparseMatrix a = smallw(150, 2, 0.15, 21);
    const SparseMatrix at = a.transposed();
    const ChainDecomposition dec_t = decompose(at);
    std::vector<double> u(150);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.5 + (i % 3);
    const InitialDistribution init = make_initial_distribution(u);
    const double beta = spectral_scale(dec_t);
    const index_t steps = 8;
    const LevelSampler sampler(dec_t, beta / static_cast<double>(steps), steps);

    // E[value] = sum_j u_j (Strang_{A^T} 1)_j
    const std::vector<double> ones(150, 1.0);
    const std::vector<double> sv = strang_reference(dec_t, ones, beta, steps);
    double expect = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) expect += u[j] * sv[j];

    const int n = 400000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream s = stream_for(14, 3, static_cast<std::uint64_t>(i));
        const double v = sampler.forward_single(init, s).value;
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - expect) < 4.0 * se);
}

TEST_CASE("fem sampler with zero load reduces exactly to the coupled sampler") {
    const SparseMatrix a = smallw(60, 2, 0.2, 31);
    const ChainDecomposition dec = decompose(a);
    std::vector<double> u(60);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + 0.01 * static_cast<double>(i);
    const std::vector<double> zero(60, 0.0);
    const double beta = spectral_scale(dec);
    const index_t steps = 8;
    const double dt = beta / static_cast<double>(steps);
    const LevelSampler sampler(dec, dt, steps);

    std::vector<double> fine_w(static_cast<std::size_t>(steps) + 1);
    std::vector<double> coarse_w(static_cast<std::size_t>(steps / 2) + 1);
    for (std::size_t j = 0; j < fine_w.size(); ++j)
        fine_w[j] = (j == 0 || j + 1 == fine_w.size()) ? dt / 3.0
                    : (j % 2 == 1)                     ? 4.0 * dt / 3.0
                                                       : 2.0 * dt / 3.0;
    for (std::size_t j = 0; j < coarse_w.size(); ++j)
        coarse_w[j] = (j == 0 || j + 1 == coarse_w.size()) ? 2.0 * dt / 3.0
                      : (j % 2 == 1)                       ? 8.0 * dt / 3.0
                                                           : 4.0 * dt / 3.0;

    for (int i = 0; i < 300; ++i) {
        RngStream s1 = stream_for(15, 3, static_cast<std::uint64_t>(i));
        RngStream s2 = stream_for(15, 3, static_cast<std::uint64_t>(i));
        const CoupledSample c = sampler.coupled(u, 0, s1);
        const FemCoupledSample f = sampler.fem_coupled(zero, 0, fine_w, coarse_w, s2);
        CHECK(f.integ_fine == 0.0);
        CHECK(f.integ_coarse == 0.0);
        CHECK(f.eta_fine * u[static_cast<std::size_t>(f.terminal_state)] == c.eta_fine);
        CHECK(f.eta_coarse * u[static_cast<std::size_t>(f.terminal_state)] == c.eta_coarse);
        CHECK(f.cost == c.cost);  // quadrature consumes no draws
    }
}

TEST_CASE("fem sampler on a scalar problem reproduces the Simpson sum exactly") {
    // n = 1, a < 0: x = u0 e^{beta a} + int_0^beta e^{s a} g ds, Simpson-discretized
    const double aval = -1.3, g = 0.7, u0 = 2.0, beta = 1.0;
    const SparseMatrix a = SparseMatrix::from_triplets(1, {{0, 0, aval}});
    const ChainDecomposition dec = decompose(a);
    const std::vector<double> u{u0};
    const std::vector<double> load{g};
    const index_t steps = 16;
    const double dt = beta / static_cast<double>(steps);
    const LevelSampler sampler(dec, dt, steps);

    std::vector<double> fine_w(static_cast<std::size_t>(steps) + 1);
    for (std::size_t j = 0; j < fine_w.size(); ++j)
        fine_w[j] = ((j == 0 || j + 1 == fine_w.size()) ? 1.0 : (j % 2 == 1) ? 4.0 : 2.0) * dt / 3.0;

    double simpson = 0.0;
    for (std::size_t j = 0; j < fine_w.size(); ++j)
        simpson += fine_w[j] * std::exp(static_cast<double>(j) * dt * aval) * g;
    const double expect_exact = u0 * std::exp(beta * aval) + g / (-aval) * (1.0 - std::exp(beta * aval));

    RngStream s = stream_for(16, 4, 0);
    const FemSample f = sampler.fem_single(u, load, 0, fine_w, s);
    CHECK(f.value == doctest::Approx(u0 * std::exp(beta * aval) + simpson).epsilon(1e-14));
    // Simpson truncation for e^{s a}: (beta/180) dt^4 max|f''''| = a^4 e^0 g
    const double bound = beta / 180.0 * std::pow(dt, 4) * std::pow(aval, 4) * g;
    CHECK(std::abs(f.value - expect_exact) < 1.5 * bound);
}
