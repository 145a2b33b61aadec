// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expmc/chain.hpp"
#include "expmc/rng.hpp"

namespace expmc {

/// Position of a random path through the matrix indices.
struct PathState {
    index_t state = 0;
    int sign = 1;               // accumulated product of (-1)^{sigma} flips
    std::uint64_t jumps = 0;
};

/// One sample of a single-level functional: value and its cost in model
/// units (exponential draws + fine steps).
struct FunctionalSample {
    double value = 0.0;
    std::uint64_t cost = 0;
};

/// One coupled draw (P_l, P_{l-1}) evaluated on the same path.
struct CoupledSample {
    double eta_fine = 0.0;
    double eta_coarse = 0.0;
    std::uint64_t cost = 0;
};

/// Fine-only functional with the running quadrature accumulator (base level
/// of the inhomogeneous solver). value already combines terminal and
/// quadrature parts.
struct FemSample {
    double value = 0.0;
    std::uint64_t cost = 0;
};

/// Coupled draw for the inhomogeneous solver. eta_* are the bare terminal
/// functionals (no u factor; the caller applies u[terminal_state]), while
/// integ_* accumulate Simpson-weighted load contributions along the path,
/// fine and coarse grids respectively.
struct FemCoupledSample {
    double eta_fine = 0.0;
    double eta_coarse = 0.0;
    double integ_fine = 0.0;
    double integ_coarse = 0.0;
    index_t terminal_state = 0;
    std::uint64_t cost = 0;
};

/// Initial-state distribution for forward (full-vector) sampling:
/// P(start = j) = u_j / total with total = sum u_j. Requires u >= 0.
struct InitialDistribution {
    std::vector<double> cdf;
    double total = 0.0;
};

InitialDistribution make_initial_distribution(std::span<const double> u);

/// Simulates the chain for duration dt from `start`: exponential holding
/// times at the current row's rate, inverse-CDF neighbour jumps, sign flips
/// by the stored sigma bits. Absorbing rows (rate 0) never move.
PathState evolve_interval(const ChainDecomposition& dec, PathState start, double dt,
                          RngStream& stream);

/// Path machinery for one discretization level: N steps of size dt.
/// Precomputes the per-row no-jump thresholds 1 - e^{-rate dt} so the hot
/// no-jump branch costs one uniform and one compare.
class LevelSampler {
  public:
    LevelSampler(const ChainDecomposition& dec, double dt, index_t steps);

    double dt() const { return dt_; }
    index_t steps() const { return steps_; }

    /// One sample of the Strang-weighted product for entry `entry`
    /// (half d-weights at the interval ends, full weight at interior step
    /// boundaries), terminal factor u[end state].
    FunctionalSample single(std::span<const double> u, index_t entry, RngStream& stream) const;

    /// One coupled (P_l, P_{l-1}) draw on a shared path; steps() must be
    /// even. The coarse functional applies the Strang weights of step 2*dt
    /// to the same jump and sign sequence. When d is constant along the
    /// path the fine/coarse difference is exactly zero.
    CoupledSample coupled(std::span<const double> u, index_t entry, RngStream& stream) const;

    /// Forward-mode variants: the start state is drawn from `init`, the
    /// chain must be the decomposition of A^T, the terminal factor is
    /// replaced by the scale init.total.
    FunctionalSample forward_single(const InitialDistribution& init, RngStream& stream) const;
    CoupledSample forward_coupled(const InitialDistribution& init, RngStream& stream) const;

    /// Inhomogeneous variants: additionally accumulate w_j * eta(j) * load
    /// at every quadrature node state. fine_w has steps()+1 entries (already
    /// scaled by dt), coarse_w has steps()/2+1 entries (scaled by 2 dt).
    FemSample fem_single(std::span<const double> u, std::span<const double> load, index_t entry,
                         std::span<const double> fine_w, RngStream& stream) const;
    FemCoupledSample fem_coupled(std::span<const double> load, index_t entry,
                                 std::span<const double> fine_w, std::span<const double> coarse_w,
                                 RngStream& stream) const;

  private:
    index_t advance(index_t state, int& sign, std::uint64_t& draws, std::uint64_t& jumps,
                    RngStream& stream) const;

    const ChainDecomposition* dec_;
    double dt_;
    index_t steps_;
    std::vector<double> nojump_;  // 1 - exp(-rate_i dt)
};

/// Spec-surface conveniences; engines keep a LevelSampler per level instead.
FunctionalSample single_functional(const ChainDecomposition& dec, std::span<const double> u,
                                   index_t entry, double dt, index_t steps, RngStream& stream);
CoupledSample coupled_functional(const ChainDecomposition& dec, std::span<const double> u,
                                 index_t entry, double dt, index_t steps, RngStream& stream);
FemCoupledSample coupled_functional_fem(const ChainDecomposition& dec, std::span<const double> u,
                                        std::span<const double> load, index_t entry, double dt,
                                        index_t steps, std::span<const double> fine_weights,
                                        RngStream& stream);
FunctionalSample forward_scalar_functional(const ChainDecomposition& dec_transpose,
                                           std::span<const double> u, double dt, index_t steps,
                                           RngStream& stream);

}  // namespace expmc
