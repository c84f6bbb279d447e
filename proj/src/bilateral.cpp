#include "cms/bilateral.hpp"

#include "cms/equilibrium.hpp"
#include "cms/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cms {

InvolutionKernel involution_kernel(const MarkovPotential& phi) {
    return {MarkovPotential(phi.graph(), {phi.edge_values().begin(), phi.edge_values().end()})};
}

double kernel_identity_defect(const MarkovPotential& phi, const InvolutionKernel& kernel) {
    const ShiftGraph& g = phi.graph();
    double worst = 0.0;
    for (std::size_t first = 0; first < g.edge_count(); ++first) {
        const Edge& e1 = g.edge(first);  // x_{-2} -> x_{-1}
        for (std::size_t second : g.out_edge_indices(e1.to)) {  // x_{-1} -> x_0
            const double lhs = phi.on_edge(first) + kernel.W.on_edge(second);
            const double rhs = phi.on_edge(second) + kernel.W.on_edge(first);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

TwoSidedPoint::TwoSidedPoint(const ShiftGraph& g, EventuallyPeriodicPoint past, EventuallyPeriodicPoint future)
    : past_(std::move(past)), future_(std::move(future)) {
    // The past reads leftwards along real edges: x_{-i-2} -> x_{-i-1}.
    const std::size_t horizon = past_.preamble().size() + past_.period();
    for (std::size_t i = 0; i < horizon; ++i) {
        if (!g.has_edge(past_.at(i + 1), past_.at(i))) {
            throw ShiftError("past " + past_.to_string() + " is not admissible");
        }
    }
    if (!g.has_edge(past_.at(0), future_.at(0))) {
        throw ShiftError("glue edge " + std::to_string(past_.at(0)) + "->" + std::to_string(future_.at(0)) +
                         " is not admissible");
    }
}

Symbol TwoSidedPoint::at(long i) const {
    return i >= 0 ? future_.at(static_cast<std::size_t>(i)) : past_.at(static_cast<std::size_t>(-i - 1));
}

TwoSidedPoint with_canonical_past(const ShiftGraph& g, EventuallyPeriodicPoint future) {
    Word trail{g.predecessors(future.at(0)).front()};
    std::vector<long> seen_at(static_cast<std::size_t>(g.n_symbols()) + 1, -1);
    seen_at[trail.front()] = 0;
    for (;;) {
        const Symbol next = g.predecessors(trail.back()).front();
        if (seen_at[next] >= 0) {
            const auto start = seen_at[next];
            Word preamble(trail.begin(), trail.begin() + start);
            Word cycle(trail.begin() + start, trail.end());
            EventuallyPeriodicPoint past(transpose_graph(g), std::move(preamble), std::move(cycle));
            return TwoSidedPoint(g, std::move(past), std::move(future));
        }
        seen_at[next] = static_cast<long>(trail.size());
        trail.push_back(next);
    }
}

double hat_cylinder_log_measure(const BilateralCylinder& c, const SpectralData& sd, const MarkovPotential& phi) {
    return cylinder_log_measure(sd, phi, c.word);
}

double rate_hat(const MarkovPotential& phi, const SubActionPair& pair, const InvolutionKernel& kernel,
                const TwoSidedPoint& x) {
    const auto& V = pair.V;
    const auto& VT = pair.V_T;
    const double alpha = pair.alpha;
    const EventuallyPeriodicPoint& fut = x.future();
    const Word& cyc = fut.cycle();
    double period_sum = 0.0;
    for (std::size_t i = 0; i < cyc.size(); ++i) period_sum += phi(cyc[i], cyc[(i + 1) % cyc.size()]) - alpha;
    if (period_sum < -1e-9 * std::max(1.0, std::abs(alpha)) * static_cast<double>(cyc.size())) return kNegInf;

    double acc = V[x.at(0) - 1] + VT[x.at(-1) - 1] - (kernel.W(x.at(-1), x.at(0)) - alpha);
    // Terms i > |preamble| lie on the periodic tail and sum to zero per period.
    const long last = static_cast<long>(fut.preamble().size());
    for (long i = 0; i <= last; ++i) {
        const Symbol prev = x.at(i - 1);
        const Symbol cur = x.at(i);
        acc += VT[cur - 1] - VT[prev - 1] + phi(prev, cur) - alpha;
    }
    return acc;
}

bool rate_hat_hypothesis(const MarkovPotential& phi, const SubActionPair& pair, const TwoSidedPoint& x) {
    return !is_neg_inf(rate_I(phi, pair, x.future()));
}

double kernel_tail_term(const SubActionPair& pair, const InvolutionKernel& kernel, const TwoSidedPoint& x, long k) {
    const Symbol a = x.at(k - 1);
    const Symbol b = x.at(k);
    return kernel.W(a, b) - pair.alpha - pair.V_T[a - 1] - pair.V[b - 1];
}

LdpReport bilateral_ldp_report(const MarkovPotential& phi, const SubActionPair& pair, const BilateralCylinder& c,
                               std::span<const SpectralData> spectra) {
    LdpReport r = ldp_report(phi, pair, c.word, spectra);
    r.offset = c.offset;
    // Recompute through the bilateral measure so the offset path is exercised.
    for (std::size_t i = 0; i < spectra.size(); ++i) {
        r.log_measure_over_t[i] = hat_cylinder_log_measure(c, spectra[i], phi) / spectra[i].t;
    }
    summarize_gaps(r);
    return r;
}

} // namespace cms
