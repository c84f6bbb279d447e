#pragma once

#include "cms/ergodic_opt.hpp"
#include "cms/potential.hpp"
#include "cms/transfer.hpp"

#include <span>
#include <string>
#include <vector>

namespace cms {

/// A point x = preamble . cycle . cycle . ... of the one-sided shift.
class EventuallyPeriodicPoint {
public:
    /// Throws ShiftError if the cycle is empty or preamble.cycle.cycle[0] is
    /// not admissible in g.
    EventuallyPeriodicPoint(const ShiftGraph& g, Word preamble, Word cycle);

    /// x_i
    Symbol at(std::size_t i) const;
    const Word& preamble() const noexcept { return preamble_; }
    const Word& cycle() const noexcept { return cycle_; }
    std::size_t period() const noexcept { return cycle_.size(); }

    /// Text form "p0 p1 | c0 c1", the syntax accepted by parse_point.
    std::string to_string() const;

private:
    Word preamble_;
    Word cycle_;
};

/// Parses "2|1", "2 3|1", "|1 2" (symbols separated by spaces or commas).
EventuallyPeriodicPoint parse_point(const ShiftGraph& g, const std::string& text);

// All rate functions below work with the normalized potential phi - pair.alpha,
// so they may be called with either phi or phi - alpha.

/// F_k(x) = V(x0) + V^T(x_k) + sum_{i<k} (phi(x_i x_{i+1}) - alpha), k >= 0.
double f_k(const MarkovPotential& phi, const SubActionPair& pair, const EventuallyPeriodicPoint& x, std::size_t k);

/// I(x) = inf_{k >= 0} F_k(x), exact for eventually periodic x: kNegInf when
/// the cycle is sub-maximizing, otherwise the min over k <= |preamble| + period.
double rate_I(const MarkovPotential& phi, const SubActionPair& pair, const EventuallyPeriodicPoint& x);

/// sum_{i >= 0} (V(x_i) - V(x_{i+1}) + phi(x_i x_{i+1}) - alpha), summed in
/// closed form over the periodic tail.
double rate_I_series(const MarkovPotential& phi, const SubActionPair& pair, const EventuallyPeriodicPoint& x);

/// sup{ I(x) : x in [w] } = V(w0) + sum (phi - alpha) + V^T(wn); kNegInf if w is inadmissible.
double cylinder_sup_rate(const MarkovPotential& phi, const SubActionPair& pair, std::span<const Symbol> word);

/// Extends w through backward-calibrated edges (smallest successor first)
/// until a symbol repeats. The result attains cylinder_sup_rate(w).
EventuallyPeriodicPoint greedy_extension(const MarkovPotential& phi, const SubActionPair& pair,
                                         std::span<const Symbol> word);

/// Empirical check of lim (1/t) log mu_t([w]) = sup_{[w]} I along a t-grid.
struct LdpReport {
    Word word;
    /// Bilateral position of w0; 0 for unilateral reports.
    long offset = 0;
    std::vector<double> t;
    std::vector<double> log_measure_over_t;
    std::vector<double> gap;
    double target = 0.0;
    /// Gap non-increasing (within 1e-12) over the last half of the grid.
    bool gap_decreasing = false;
    double final_gap = 0.0;
    /// gap_decreasing && final_gap < kLdpGapThreshold.
    bool success = false;
};

inline constexpr double kLdpGapThreshold = 0.05;

LdpReport ldp_report(const MarkovPotential& phi, const SubActionPair& pair, std::span<const Symbol> word,
                     std::span<const SpectralData> spectra);

/// Fills gap, gap_decreasing, final_gap and success from log_measure_over_t and target.
void summarize_gaps(LdpReport& report);

/// Word as CSV/file-name token: symbols joined by '-'.
std::string word_label(std::span<const Symbol> word);

} // namespace cms
