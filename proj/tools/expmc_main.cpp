// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0
//
// expmc: action of a matrix exponential on a vector by multilevel Monte
// Carlo over continuous-time Markov chain paths, plus the classical
// single-level estimator, network-communicability and PDE front ends, and
// the benchmark harness.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expmc/communicability.hpp"
#include "expmc/fem.hpp"
#include "expmc/harness.hpp"
#include "expmc/heat.hpp"
#include "expmc/io.hpp"
#include "expmc/netgen.hpp"
#include "expmc/oracle.hpp"

namespace {

using namespace expmc;

struct CommonFlags {
    std::uint64_t seed = 0;
    int threads = 0;
    double epsilon = 1e-3;
    std::string beta = "auto";
    int l0 = -1;
    std::string output;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_epsilon = true) {
    cmd->add_option("--seed", f.seed, "Global RNG seed");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    if (with_epsilon) cmd->add_option("--epsilon", f.epsilon, "Target accuracy");
    cmd->add_option("--beta", f.beta, "Inverse temperature / time scale, or 'auto'");
    cmd->add_option("--l0", f.l0, "Initial level (-1 = heuristic)");
    cmd->add_option("--output", f.output, "Write the result to this file");
    cmd->add_option("--format", f.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

struct InstanceFlags {
    std::string matrix;
    std::string kind = "smallw";
    index_t n = 1000;
    index_t k = 2;
    double p = 0.1;
    index_t d = 2;
    std::uint64_t gen_seed = 1;
};

void add_instance(CLI::App* cmd, InstanceFlags& g) {
    cmd->add_option("--matrix", g.matrix, "Matrix Market file (overrides the generator)");
    cmd->add_option("--kind", g.kind, "Generator kind: smallw or pref")
        ->check(CLI::IsMember({"smallw", "pref"}));
    cmd->add_option("--n", g.n, "Generated graph size");
    cmd->add_option("--k", g.k, "smallw: ring neighbours per side");
    cmd->add_option("--p", g.p, "smallw: shortcut probability");
    cmd->add_option("--d", g.d, "pref: edges per new node");
    cmd->add_option("--gen-seed", g.gen_seed, "Generator seed");
}

SparseMatrix load_instance(const InstanceFlags& g, std::string& echo) {
    if (!g.matrix.empty()) {
        echo = g.matrix;
        return read_matrix_market(g.matrix);
    }
    GraphSpec spec;
    spec.kind = g.kind == "pref" ? GraphSpec::Kind::pref : GraphSpec::Kind::smallw;
    spec.n = g.n;
    spec.ring_neighbors = g.k;
    spec.shortcut_prob = g.p;
    spec.edges_per_node = g.d;
    spec.seed = g.gen_seed;
    echo = g.kind + "(n=" + std::to_string(g.n) +
           (spec.kind == GraphSpec::Kind::smallw
                ? ",k=" + std::to_string(g.k) + ",p=" + std::to_string(g.p)
                : ",d=" + std::to_string(g.d)) +
           ",seed=" + std::to_string(g.gen_seed) + ")";
    return generate(spec);
}

std::optional<double> parse_beta(const std::string& s) {
    if (s == "auto") return std::nullopt;
    return std::stod(s);
}

MlmcOptions make_options(const CommonFlags& f) {
    MlmcOptions opt;
    opt.epsilon = f.epsilon;
    opt.seed = f.seed;
    opt.threads = f.threads;
    opt.l0_override = f.l0;
    return opt;
}

RunConfig make_config(const CommonFlags& f, double beta_used, const std::string& mode,
                      const std::string& instance) {
    RunConfig c;
    c.seed = f.seed;
    c.threads = f.threads;
    c.epsilon = f.epsilon;
    c.beta = beta_used;
    c.beta_auto = f.beta == "auto";
    c.l0 = f.l0;
    c.mode = mode;
    c.instance = instance;
    return c;
}

int emit(const ResultRecord& record, const CommonFlags& f) {
    const ResultFormat fmt = f.format == "csv" ? ResultFormat::csv : ResultFormat::json;
    if (f.output.empty())
        std::cout << format_result(record, fmt);
    else
        write_result(record, f.output, fmt);
    return record.converged ? 0 : 2;
}

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matrix exponential action by multilevel Monte Carlo"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    InstanceFlags gen_flags;
    std::string gen_output;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic network as Matrix Market");
    add_instance(gen, gen_flags);
    gen->add_option("--output", gen_output, "Output .mtx path")->required();

    // --- communicability ----------------------------------------------------
    CommonFlags tc_common;
    InstanceFlags tc_inst;
    CLI::App* tc = app.add_subcommand("communicability", "Total communicability (1, e^{bA} 1)");
    add_common(tc, tc_common);
    add_instance(tc, tc_inst);

    // --- entry ---------------------------------------------------------------
    CommonFlags en_common;
    InstanceFlags en_inst;
    index_t en_index = 0;
    std::string en_vector;
    CLI::App* en = app.add_subcommand("entry", "Single entry of e^{bA} u (u defaults to ones)");
    add_common(en, en_common);
    add_instance(en, en_inst);
    en->add_option("--index", en_index, "Entry index (0-based)");
    en->add_option("--vector", en_vector, "Vector file for u");

    // --- heat3d ---------------------------------------------------------------
    CommonFlags h_common;
    index_t h_nx = 16;
    double h_delta = 4.0;
    double h_time = 1.0;
    std::vector<double> h_point{0.0, 0.0, 0.0};
    CLI::App* heat = app.add_subcommand("heat3d", "3D heat equation value at a point");
    add_common(heat, h_common);
    heat->add_option("--nx", h_nx, "Grid panels per axis");
    heat->add_option("--delta", h_delta, "Domain half-width");
    heat->add_option("--time", h_time, "Evaluation time");
    heat->add_option("--point", h_point, "Evaluation point x y z")->expected(3);

    // --- convdiff ---------------------------------------------------------------
    CommonFlags c_common;
    std::string c_mass, c_stiff, c_load, c_u0;
    index_t c_node = 0;
    double c_time = 1.0;
    CLI::App* conv = app.add_subcommand("convdiff", "FEM convection-diffusion value at a node");
    add_common(conv, c_common);
    conv->add_option("--mass", c_mass, "Lumped mass matrix (.mtx)")->required();
    conv->add_option("--stiffness", c_stiff, "Stiffness matrix (.mtx)")->required();
    conv->add_option("--load", c_load, "Load vector file")->required();
    conv->add_option("--u0", c_u0, "Initial vector file")->required();
    conv->add_option("--node", c_node, "Node index (0-based)");
    conv->add_option("--time", c_time, "Evaluation time");

    // --- bench-levels ---------------------------------------------------------------
    CommonFlags bl_common;
    InstanceFlags bl_inst;
    index_t bl_node = 0;
    int bl_count = 5;
    std::uint64_t bl_samples = 100000;
    CLI::App* bl = app.add_subcommand("bench-levels", "Per-level mean/variance decay data");
    add_common(bl, bl_common, /*with_epsilon=*/false);
    add_instance(bl, bl_inst);
    bl->add_option("--node", bl_node, "Entry index");
    bl->add_option("--levels", bl_count, "Coupled levels above l0");
    bl->add_option("--samples", bl_samples, "Samples per level");

    // --- bench-complexity ---------------------------------------------------------------
    CommonFlags bc_common;
    InstanceFlags bc_inst;
    index_t bc_node = 0;
    std::vector<double> bc_eps{4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4};
    CLI::App* bc = app.add_subcommand("bench-complexity", "Cost vs accuracy, MLMC and MC");
    add_common(bc, bc_common, /*with_epsilon=*/false);
    add_instance(bc, bc_inst);
    bc->add_option("--node", bc_node, "Entry index");
    bc->add_option("--epsilons", bc_eps, "Accuracy sweep");

    // --- bench-l0 ---------------------------------------------------------------
    CommonFlags b0_common;
    InstanceFlags b0_inst;
    index_t b0_node = 0;
    int b0_min = 0, b0_max = 7;
    CLI::App* b0 = app.add_subcommand("bench-l0", "Total cost vs forced initial level");
    add_common(b0, b0_common);
    add_instance(b0, b0_inst);
    b0->add_option("--node", b0_node, "Entry index");
    b0->add_option("--l0-min", b0_min, "Smallest initial level");
    b0->add_option("--l0-max", b0_max, "Largest initial level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            std::string echo;
            const SparseMatrix m = load_instance(gen_flags, echo);
            write_matrix_market(m, gen_output, /*symmetric=*/true);
            const ChainDecomposition dec = decompose(m);
            std::cout << "wrote " << gen_output << " n=" << m.size() << " nnz=" << m.nnz()
                      << " d_max=" << dec.d_max << "\n";
            return 0;
        }

        if (tc->parsed()) {
            std::string echo;
            const SparseMatrix m = load_instance(tc_inst, echo);
            const double t0 = now_seconds();
            const MlmcResult r =
                total_communicability(m, parse_beta(tc_common.beta), make_options(tc_common));
            const double beta_used = parse_beta(tc_common.beta)
                                         .value_or(spectral_scale(decompose(m.transposed())));
            const ResultRecord rec = make_record(
                r, beta_used, make_config(tc_common, beta_used, "communicability", echo),
                now_seconds() - t0);
            return emit(rec, tc_common);
        }

        if (en->parsed()) {
            std::string echo;
            const SparseMatrix m = load_instance(en_inst, echo);
            const ChainDecomposition dec = decompose(m);
            std::vector<double> u;
            if (en_vector.empty())
                u.assign(static_cast<std::size_t>(m.size()), 1.0);
            else
                u = read_vector(en_vector);
            if (static_cast<index_t>(u.size()) != m.size())
                throw std::invalid_argument("vector length does not match the matrix");
            const double beta_used = parse_beta(en_common.beta).value_or(spectral_scale(dec));

            MlmcProblem problem;
            problem.dec = &dec;
            problem.u = u;
            problem.entry = en_index;
            problem.beta = beta_used;
            problem.mode = SampleMode::entry;
            const double t0 = now_seconds();
            const MlmcResult r = mlmc_driver(problem, make_options(en_common));
            const ResultRecord rec =
                make_record(r, beta_used, make_config(en_common, beta_used, "entry", echo),
                            now_seconds() - t0);
            return emit(rec, en_common);
        }

        if (heat->parsed()) {
            Grid3D grid{h_nx, h_delta};
            const double t0 = now_seconds();
            const MlmcResult r = solve_heat_point(
                grid, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); },
                {h_point[0], h_point[1], h_point[2]}, h_time, make_options(h_common));
            const double beta_used = h_time / (grid.spacing() * grid.spacing());
            const std::string echo = "heat3d(nx=" + std::to_string(h_nx) + ",delta=" +
                                     std::to_string(h_delta) + ",t=" + std::to_string(h_time) + ")";
            const ResultRecord rec = make_record(
                r, beta_used, make_config(h_common, beta_used, "heat3d", echo), now_seconds() - t0);
            return emit(rec, h_common);
        }

        if (conv->parsed()) {
            const FemSystem sys = load_fem_system(c_mass, c_stiff, c_load, c_u0);
            const double t0 = now_seconds();
            const MlmcResult r = solve_convdiff_point(sys, c_node, c_time, make_options(c_common));
            const std::string echo = "convdiff(" + c_stiff + ",node=" + std::to_string(c_node) +
                                     ",t=" + std::to_string(c_time) + ")";
            const ResultRecord rec = make_record(
                r, c_time, make_config(c_common, c_time, "convdiff", echo), now_seconds() - t0);
            return emit(rec, c_common);
        }

        if (bl->parsed()) {
            std::string echo;
            const SparseMatrix m = load_instance(bl_inst, echo);
            const ChainDecomposition dec = decompose(m);
            const std::vector<double> u(static_cast<std::size_t>(m.size()), 1.0);
            const double beta_used = parse_beta(bl_common.beta).value_or(spectral_scale(dec));
            MlmcProblem problem;
            problem.dec = &dec;
            problem.u = u;
            problem.entry = bl_node;
            problem.beta = beta_used;
            const int l0 = bl_common.l0 >= 0 ? bl_common.l0 : initial_level(beta_used, dec.d_max);
            const LevelDecayReport rep =
                bench_levels(problem, l0, bl_count, bl_samples, bl_common.seed, bl_common.threads);
            if (bl_common.output.empty()) {
                for (const LevelDecayRow& row : rep.rows)
                    std::cout << row.level << "," << row.mean << "," << row.variance << ","
                              << row.cost_per_sample << "\n";
            } else {
                write_level_decay_csv(rep, bl_common.output);
            }
            std::cout << "slope_mean=" << rep.slope_mean << " slope_variance=" << rep.slope_variance
                      << " slope_cost_tail=" << rep.slope_cost_tail << "\n";
            return 0;
        }

        if (bc->parsed()) {
            std::string echo;
            const SparseMatrix m = load_instance(bc_inst, echo);
            const ChainDecomposition dec = decompose(m);
            const std::vector<double> u(static_cast<std::size_t>(m.size()), 1.0);
            const double beta_used = parse_beta(bc_common.beta).value_or(spectral_scale(dec));
            MlmcProblem problem;
            problem.dec = &dec;
            problem.u = u;
            problem.entry = bc_node;
            problem.beta = beta_used;
            const ComplexityReport rep =
                bench_complexity(problem, bc_eps, bc_common.seed, bc_common.threads);
            if (!bc_common.output.empty()) write_complexity_csv(rep, bc_common.output);
            std::cout << "slope_mlmc=" << rep.slope_mlmc << " slope_mc=" << rep.slope_mc << "\n";
            return 0;
        }

        if (b0->parsed()) {
            std::string echo;
            const SparseMatrix m = load_instance(b0_inst, echo);
            const ChainDecomposition dec = decompose(m);
            const std::vector<double> u(static_cast<std::size_t>(m.size()), 1.0);
            const double beta_used = parse_beta(b0_common.beta).value_or(spectral_scale(dec));
            MlmcProblem problem;
            problem.dec = &dec;
            problem.u = u;
            problem.entry = b0_node;
            problem.beta = beta_used;
            const L0Report rep = bench_l0(problem, b0_min, b0_max, b0_common.epsilon,
                                          b0_common.seed, b0_common.threads);
            if (!b0_common.output.empty()) write_l0_csv(rep, b0_common.output);
            std::cout << "best_l0=" << rep.best_l0 << " heuristic_l0=" << rep.heuristic_l0 << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
