#pragma once

#include "cms/potential.hpp"
#include "cms/transfer.hpp"

#include <span>
#include <vector>

namespace cms {

/// Maximizing value of a Markov potential on a finite truncation: the maximum
/// mean weight over cycles. `cycle` starts at its smallest symbol and attains
/// `alpha` exactly (alpha is recomputed as the cycle's own mean).
struct MaxCycleCert {
    double alpha = 0.0;
    Word cycle;
};

enum class CycleMethod {
    Auto,       ///< Enumerate when n_symbols <= 12, Karp otherwise.
    Enumerate,  ///< Exhaustive simple-cycle enumeration.
    Karp,       ///< Karp's n*m recurrence plus a critical-graph certificate.
};

/// Ties (means within 1e-12 relative) break by shortest cycle, then
/// lexicographically smallest.
MaxCycleCert maximizing_value(const MarkovPotential& phi, CycleMethod method = CycleMethod::Auto);

struct SubActionOptions {
    double tol = 1e-12;
    /// 0 selects 1000 * n_symbols sweeps.
    int max_iter = 0;
};

/// Forward sub-action: V(b) = max_{a -> b} (phi(ab) + V(a) - alpha).
/// Max-plus value iteration from V = 0 with the max entry subtracted every
/// sweep. If the plain iteration cycles (periodic critical graph) it is
/// restarted from a critical column of the max-plus Kleene star, which is
/// already a fixed point. Throws ConvergenceError when neither settles, or when
/// the settled normalization shift is nonzero (alpha is not the maximizing value).
LogVector forward_subaction(const MarkovPotential& phi, double alpha, const SubActionOptions& opts = {});

/// Backward sub-action: V^T(a) = max_{a -> b} (phi(ab) + V^T(b) - alpha).
LogVector backward_subaction(const MarkovPotential& phi, double alpha, const SubActionOptions& opts = {});

/// max_b |max_{a -> b}(phi(ab) + V(a) - alpha) - V(b)|
double forward_calibration_residual(const MarkovPotential& phi, std::span<const double> v, double alpha);
/// max_a |max_{a -> b}(phi(ab) + V^T(b) - alpha) - V^T(a)|
double backward_calibration_residual(const MarkovPotential& phi, std::span<const double> v_T, double alpha);

/// Calibrated forward/backward pair. V and V^T are shifted by the same amount
/// so that max_a (V(a) + V^T(a)) = 0.
struct SubActionPair {
    double alpha = 0.0;
    Word maximizing_cycle;
    LogVector V;
    LogVector V_T;
    /// Edges with |phi(ab) + V(a) - V(b) - alpha| <= 1e-9.
    std::vector<Edge> omega_edges;
};

SubActionPair calibrated_pair(const MarkovPotential& phi, const SubActionOptions& opts = {});

/// Sub-actions as zero-temperature limits V = lim (1/t) log h_t, V^T = lim (1/t) log h^T_t.
struct ZeroTempSubAction {
    double t_max = 0.0;
    LogVector V;
    LogVector V_T;
    /// spread(V_{t_i} - V_{t_{i-1}}) for i >= 1 (spread = max - min, gauge-free).
    std::vector<double> cauchy;
    /// False raises a warning: the grid differences did not shrink at the end.
    bool cauchy_decreasing = true;
};

/// From spectra already computed along an increasing grid.
ZeroTempSubAction subaction_zero_temp(std::span<const SpectralData> spectra);
ZeroTempSubAction subaction_zero_temp(const MarkovPotential& phi, std::span<const double> t_grid,
                                      const EigenOptions& opts = {});

/// Edges realizing phi + V - V o sigma = alpha, and their recurrent part
/// (union of cycles inside that edge set).
struct NonWandering {
    std::vector<Edge> zero_defect_edges;
    std::vector<Edge> recurrent_edges;
    std::vector<Symbol> recurrent_symbols;
};

/// Throws std::runtime_error if the recurrent part is empty.
NonWandering nonwandering(const MarkovPotential& phi, const SubActionPair& pair, double tol = 1e-9);

/// phi(ab) + V(a) - V(b) - alpha for every edge, in edge-index order.
std::vector<double> edge_defects(const MarkovPotential& phi, const SubActionPair& pair);

/// max - min of a vector; 0 for empty.
double spread(std::span<const double> v);

} // namespace cms
