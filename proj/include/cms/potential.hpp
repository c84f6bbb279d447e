#pragma once

#include "cms/log_domain.hpp"
#include "cms/shift.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace cms {

/// Analytic information about the symbols beyond the truncation, supplied by
/// generator families. Explicit edge lists carry none.
struct TailModel {
    /// Upper bound on sum_{a > N} e^{sup(phi|[a])}.
    double sum_bound = 0.0;
    /// Per-symbol sups tend to -infinity along the family rule.
    bool coercive = false;
};

/// Markov potential phi(ab) stored per edge of its graph. Off the edge set the
/// potential reads as kNegInf, which makes it total on S x S.
class MarkovPotential {
public:
    MarkovPotential(ShiftGraph graph, std::vector<double> edge_values, std::optional<TailModel> tail = std::nullopt);

    static MarkovPotential from_function(ShiftGraph graph, const std::function<double(Symbol, Symbol)>& phi,
                                         std::optional<TailModel> tail = std::nullopt);

    const ShiftGraph& graph() const noexcept { return graph_; }
    int n_symbols() const noexcept { return graph_.n_symbols(); }

    /// phi(ab), or kNegInf when a -> b is forbidden.
    double operator()(Symbol a, Symbol b) const;
    double on_edge(std::size_t edge_index) const { return values_.at(edge_index); }
    std::span<const double> edge_values() const noexcept { return values_; }

    const std::optional<TailModel>& tail() const noexcept { return tail_; }

private:
    ShiftGraph graph_;
    std::vector<double> values_;
    std::optional<TailModel> tail_;
};

/// phi(ab) = c0 + c1 * (a + b) on a generator family, with the analytic tail
/// attached for the renewal family. The paper-style fixtures are all of this
/// form: F0 = (0, 0) on full-shift(2), F1 = (2, -1) on full-shift(2),
/// F2 = (0, -1/2) on renewal-shift(N).
MarkovPotential linear_potential(const ShiftGraph& graph, double c0, double c1);

struct PotentialReport {
    double v1 = 0.0;
    /// sup(phi|[a]) for a = 1..N, stored 0-based.
    std::vector<double> symbol_sups;
    /// sum_{a <= N} e^{sup(phi|[a])}
    double truncated_sum = 0.0;
    /// truncated_sum plus the family's tail bound; equal to truncated_sum when
    /// no tail information is available.
    double summability_sum = 0.0;
    bool has_tail_information = false;
    /// From the tail model; always false without tail information.
    bool coercive = false;
};

/// V_1(phi) = sup |phi(x0 x1) - phi(y0 y1)| over x0 = y0.
double first_variation(const MarkovPotential& phi);

PotentialReport summability_report(const MarkovPotential& phi);

/// phi^T(ab) = phi(ba) on the transposed graph.
MarkovPotential transpose_potential(const MarkovPotential& phi);

/// phi - alpha on every edge.
MarkovPotential normalize_to_zero_max(const MarkovPotential& phi, double alpha);

} // namespace cms
