// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace expmc {

namespace {

double ls_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("slope fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

double fit_log2_slope(std::span<const double> x, std::span<const double> y) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (y[i] > 0.0) {
            xs.push_back(x[i]);
            ys.push_back(std::log2(y[i]));
        }
    return ls_slope(xs, ys);
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0.0 && y[i] > 0.0) {
            xs.push_back(std::log(x[i]));
            ys.push_back(std::log(y[i]));
        }
    return ls_slope(xs, ys);
}

LevelDecayReport bench_levels(const MlmcProblem& problem, int l0, int count,
                              std::uint64_t samples, std::uint64_t seed, int threads) {
    if (count < 2) throw std::invalid_argument("need at least two coupled levels");
    LevelDecayReport report;
    for (int l = l0 + 1; l <= l0 + count; ++l) {
        const LevelStats stats = run_level(problem, l, /*base_level=*/false, 0, samples, seed,
                                           threads);
        LevelDecayRow row;
        row.level = l;
        row.dt = problem.beta / static_cast<double>(index_t{1} << l);
        row.mean = stats.mean();
        row.variance = stats.variance();
        row.cost_per_sample = stats.unit_cost();
        report.rows.push_back(row);
    }

    std::vector<double> ls, means, vars, costs;
    for (const LevelDecayRow& r : report.rows) {
        ls.push_back(static_cast<double>(r.level));
        means.push_back(std::abs(r.mean));
        vars.push_back(r.variance);
        costs.push_back(r.cost_per_sample);
    }
    report.slope_mean = fit_log2_slope(ls, means);
    report.slope_variance = fit_log2_slope(ls, vars);
    const std::size_t half = report.rows.size() / 2;
    report.slope_cost_tail =
        fit_log2_slope(std::span(ls).subspan(half), std::span(costs).subspan(half));
    return report;
}

ComplexityReport bench_complexity(const MlmcProblem& problem, std::span<const double> epsilons,
                                  std::uint64_t seed, int threads) {
    if (problem.mode != SampleMode::entry)
        throw std::invalid_argument("complexity sweep runs on single-entry problems");
    ComplexityReport report;
    for (double eps : epsilons) {
        MlmcOptions opt;
        opt.epsilon = eps;
        opt.seed = seed;
        opt.threads = threads;
        double t0 = now_seconds();
        const MlmcResult ml = mlmc_driver(problem, opt);
        report.mlmc.push_back({eps, static_cast<double>(ml.total_cost), now_seconds() - t0});

        t0 = now_seconds();
        const McResult mc =
            mc_auto(*problem.dec, problem.u, problem.entry, problem.beta, eps, seed, threads);
        report.mc.push_back({eps, static_cast<double>(mc.wall_cost), now_seconds() - t0});
    }

    std::vector<double> eps, mlc, mcc;
    for (const ComplexityPoint& p : report.mlmc) {
        eps.push_back(p.epsilon);
        mlc.push_back(p.cost);
    }
    for (const ComplexityPoint& p : report.mc) mcc.push_back(p.cost);
    report.slope_mlmc = fit_loglog_slope(eps, mlc);
    report.slope_mc = fit_loglog_slope(eps, mcc);
    return report;
}

L0Report bench_l0(const MlmcProblem& problem, int l0_min, int l0_max, double epsilon,
                  std::uint64_t seed, int threads) {
    if (l0_min < 0 || l0_max < l0_min) throw std::invalid_argument("bad l0 range");
    L0Report report;
    report.heuristic_l0 = initial_level(problem.beta, problem.dec->d_max);
    double best = std::numeric_limits<double>::infinity();
    for (int l0 = l0_min; l0 <= l0_max; ++l0) {
        MlmcOptions opt;
        opt.epsilon = epsilon;
        opt.seed = seed;
        opt.threads = threads;
        opt.l0_override = l0;
        const MlmcResult r = mlmc_driver(problem, opt);
        const double cost = static_cast<double>(r.total_cost);
        report.points.push_back({l0, cost});
        if (cost < best) {
            best = cost;
            report.best_l0 = l0;
        }
    }
    return report;
}

void write_level_decay_csv(const LevelDecayReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "level,dt,mean,variance,cost_per_sample\n";
    for (const LevelDecayRow& r : report.rows)
        out << r.level << "," << r.dt << "," << r.mean << "," << r.variance << ","
            << r.cost_per_sample << "\n";
    out << "# slope_mean=" << report.slope_mean << " slope_variance=" << report.slope_variance
        << " slope_cost_tail=" << report.slope_cost_tail << "\n";
}

void write_complexity_csv(const ComplexityReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "method,epsilon,cost,wall_seconds\n";
    for (const ComplexityPoint& p : report.mlmc)
        out << "mlmc," << p.epsilon << "," << p.cost << "," << p.wall_seconds << "\n";
    for (const ComplexityPoint& p : report.mc)
        out << "mc," << p.epsilon << "," << p.cost << "," << p.wall_seconds << "\n";
    out << "# slope_mlmc=" << report.slope_mlmc << " slope_mc=" << report.slope_mc << "\n";
}

void write_l0_csv(const L0Report& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "l0,total_cost\n";
    for (const L0Point& p : report.points) out << p.l0 << "," << p.cost << "\n";
    out << "# best_l0=" << report.best_l0 << " heuristic_l0=" << report.heuristic_l0 << "\n";
}

}  // namespace expmc
