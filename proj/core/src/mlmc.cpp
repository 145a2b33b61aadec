// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/mlmc.hpp"

#include <cmath>
#include <stdexcept>

#include "detail/parallel.hpp"

namespace expmc {

double LevelStats::variance() const {
    if (samples < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, sum_sq / static_cast<double>(samples) - m * m);
}

int initial_level(double beta, double d_max) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (!(d_max > 0.0)) return 0;
    return static_cast<int>(std::max<long>(0, std::lround(std::log2(2.0 * beta * d_max))));
}

std::vector<std::uint64_t> optimal_allocation(std::span<const double> variances,
                                              std::span<const double> unit_costs, double epsilon) {
    if (variances.size() != unit_costs.size())
        throw std::invalid_argument("variance and cost arrays differ in length");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    double s = 0.0;
    for (std::size_t l = 0; l < variances.size(); ++l) {
        if (variances[l] < 0.0 || !(unit_costs[l] > 0.0))
            throw std::invalid_argument("require V_l >= 0 and C_l > 0");
        s += std::sqrt(variances[l] * unit_costs[l]);
    }
    std::vector<std::uint64_t> m(variances.size());
    const double scale = 2.0 / (epsilon * epsilon) * s;
    for (std::size_t l = 0; l < variances.size(); ++l) {
        const double raw = scale * std::sqrt(variances[l] / unit_costs[l]);
        m[l] = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(raw)));
    }
    return m;
}

double bias_estimate(std::span<const double> coupled_means) {
    if (coupled_means.size() < 2)
        throw std::invalid_argument("bias estimate needs at least two coupled levels");
    const double last = std::abs(coupled_means[coupled_means.size() - 1]);
    const double prev = std::abs(coupled_means[coupled_means.size() - 2]);
    return std::max(last, prev / 4.0) / 3.0;
}

double cost_model(double beta, double d_bar, double dt, double samples, double alpha_in,
                  double alpha_out) {
    return alpha_in * beta * d_bar * samples + alpha_out * (beta / dt) * samples;
}

namespace {

struct LevelDelta {
    LevelStats stats;
    double integ_sum = 0.0;  // fem: load-integral share of the summed values
};

// Composite Simpson weights scaled by the step (panel count must be even).
std::vector<double> scaled_simpson(index_t panels, double step) {
    std::vector<double> w(static_cast<std::size_t>(panels) + 1);
    const double h = step / 3.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const bool end = (j == 0 || j + 1 == w.size());
        w[j] = h * (end ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0));
    }
    return w;
}

LevelDelta run_level_ex(const MlmcProblem& p, int level, bool base_level,
                        std::uint64_t first_index, std::uint64_t additional, std::uint64_t seed,
                        int threads) {
    if (level < 0 || level > 62) throw std::invalid_argument("level outside [0, 62]");
    const index_t steps = index_t{1} << level;
    const double dt = p.beta / static_cast<double>(steps);
    const LevelSampler sampler(*p.dec, dt, steps);
    const std::uint32_t lvl = static_cast<std::uint32_t>(level);

    InitialDistribution init;
    if (p.mode == SampleMode::forward) init = make_initial_distribution(p.u);

    std::vector<double> fine_w, coarse_w;
    if (p.mode == SampleMode::fem) {
        fine_w = scaled_simpson(steps, dt);
        if (!base_level) coarse_w = scaled_simpson(steps / 2, 2.0 * dt);
    }

    const std::uint32_t lane = p.mode == SampleMode::entry    ? 0u
                               : p.mode == SampleMode::forward ? 1u
                                                               : 2u;

    detail::SumAcc acc = detail::parallel_samples<detail::SumAcc>(
        first_index, additional, threads, [&](std::uint64_t s, detail::SumAcc& a) {
            RngStream stream = stream_for(seed, lvl, s, lane);
            switch (p.mode) {
                case SampleMode::entry: {
                    if (base_level) {
                        const FunctionalSample f = sampler.single(p.u, p.entry, stream);
                        a.add(f.value, f.cost);
                    } else {
                        const CoupledSample c = sampler.coupled(p.u, p.entry, stream);
                        a.add(c.eta_fine - c.eta_coarse, c.cost);
                    }
                    break;
                }
                case SampleMode::forward: {
                    if (base_level) {
                        const FunctionalSample f = sampler.forward_single(init, stream);
                        a.add(f.value, f.cost);
                    } else {
                        const CoupledSample c = sampler.forward_coupled(init, stream);
                        a.add(c.eta_fine - c.eta_coarse, c.cost);
                    }
                    break;
                }
                case SampleMode::fem: {
                    if (base_level) {
                        const FemSample f = sampler.fem_single(p.u, p.load, p.entry, fine_w, stream);
                        a.add(f.value, f.cost);
                    } else {
                        const FemCoupledSample c =
                            sampler.fem_coupled(p.load, p.entry, fine_w, coarse_w, stream);
                        const double du = p.u[static_cast<std::size_t>(c.terminal_state)] *
                                          (c.eta_fine - c.eta_coarse);
                        const double di = c.integ_fine - c.integ_coarse;
                        a.add(du + di, c.cost);
                        a.extra += di;
                    }
                    break;
                }
            }
        });

    LevelDelta delta;
    delta.stats.level = level;
    delta.stats.sum = acc.sum;
    delta.stats.sum_sq = acc.sum_sq;
    delta.stats.samples = acc.n;
    delta.stats.cost = acc.cost;
    delta.integ_sum = acc.extra;
    return delta;
}

void validate_problem(const MlmcProblem& p) {
    if (p.dec == nullptr) throw std::invalid_argument("problem has no decomposition");
    if (static_cast<index_t>(p.u.size()) != p.dec->n)
        throw std::invalid_argument("vector length does not match decomposition");
    if (p.mode != SampleMode::forward && (p.entry < 0 || p.entry >= p.dec->n))
        throw std::out_of_range("entry index outside matrix");
    if (p.mode == SampleMode::fem && static_cast<index_t>(p.load.size()) != p.dec->n)
        throw std::invalid_argument("load length does not match decomposition");
    if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be positive");
}

}  // namespace

LevelStats run_level(const MlmcProblem& problem, int level, bool base_level,
                     std::uint64_t first_index, std::uint64_t additional, std::uint64_t seed,
                     int threads) {
    validate_problem(problem);
    return run_level_ex(problem, level, base_level, first_index, additional, seed, threads).stats;
}

MlmcResult mlmc_driver(const MlmcProblem& problem, const MlmcOptions& opt) {
    validate_problem(problem);
    if (!(opt.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

    int l0 = opt.l0_override >= 0 ? opt.l0_override
                                  : initial_level(problem.beta, problem.dec->d_max);
    // Coupled quadrature needs the coarse grid to carry a Simpson rule.
    if (problem.mode == SampleMode::fem) l0 = std::max(l0, 1);

    const int cap = l0 + opt.max_levels_above_l0;
    const double target = opt.epsilon / std::sqrt(2.0);

    struct Level {
        LevelStats stats;
        double integ_sum = 0.0;
    };
    std::vector<Level> levels;

    auto extend = [&](int level, std::uint64_t additional) {
        const std::size_t idx = static_cast<std::size_t>(level - l0);
        Level& entry = levels[idx];
        const LevelDelta d = run_level_ex(problem, level, level == l0, entry.stats.samples,
                                          additional, opt.seed, opt.threads);
        entry.stats.level = level;
        entry.stats.sum += d.stats.sum;
        entry.stats.sum_sq += d.stats.sum_sq;
        entry.stats.samples += d.stats.samples;
        entry.stats.cost += d.stats.cost;
        entry.integ_sum += d.integ_sum;
    };

    int top = std::min(l0 + 4, cap);
    for (int l = l0; l <= top; ++l) {
        levels.emplace_back();
        extend(l, opt.warmup);
    }

    MlmcResult result;
    result.l0 = l0;

    double stat_error = 0.0, bias = 0.0, quad = 0.0;
    bool converged = false;
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        std::vector<double> v, c;
        for (const Level& lv : levels) {
            v.push_back(lv.stats.variance());
            c.push_back(std::max(lv.stats.unit_cost(), 1.0));
        }
        const std::vector<std::uint64_t> want = optimal_allocation(v, c, opt.epsilon);
        for (std::size_t i = 0; i < levels.size(); ++i)
            if (want[i] > levels[i].stats.samples)
                extend(l0 + static_cast<int>(i), want[i] - levels[i].stats.samples);

        double vt = 0.0;
        for (const Level& lv : levels)
            vt += lv.stats.variance() / static_cast<double>(lv.stats.samples);
        stat_error = std::sqrt(vt);

        std::vector<double> means, integ_means;
        for (std::size_t i = 1; i < levels.size(); ++i) {
            means.push_back(levels[i].stats.mean());
            integ_means.push_back(levels[i].integ_sum /
                                  static_cast<double>(levels[i].stats.samples));
        }
        bias = bias_estimate(means);
        quad = problem.mode == SampleMode::fem ? bias_estimate(integ_means) : 0.0;

        if (stat_error <= target && bias <= target) {
            converged = true;
            break;
        }
        if (bias > target) {
            if (top == cap) break;  // level cap: report the partial result
            ++top;
            levels.emplace_back();
            extend(top, opt.warmup);
        }
    }

    result.L = top;
    result.statistical_error = stat_error;
    result.bias_estimate = bias;
    result.quadrature_bound = quad;
    result.converged = converged;
    for (const Level& lv : levels) {
        result.estimate += lv.stats.mean();
        result.total_cost += lv.stats.cost;
        result.levels.push_back(lv.stats);
    }
    return result;
}

}  // namespace expmc
