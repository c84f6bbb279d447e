#include "cms/ldp.hpp"

#include "cms/equilibrium.hpp"
#include "cms/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cms {

namespace {

// Sub-maximizing cycles have strictly negative normalized weight.
bool cycle_is_maximizing(const MarkovPotential& phi, const SubActionPair& pair, const EventuallyPeriodicPoint& x) {
    const Word& c = x.cycle();
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) sum += phi(c[i], c[(i + 1) % c.size()]) - pair.alpha;
    return sum >= -1e-9 * std::max(1.0, std::abs(pair.alpha)) * static_cast<double>(c.size());
}

Word parse_symbols(const std::string& text) {
    std::string cleaned = text;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    Word out;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) throw ShiftError("bad symbol '" + token + "'");
        out.push_back(value);
    }
    return out;
}

} // namespace

EventuallyPeriodicPoint::EventuallyPeriodicPoint(const ShiftGraph& g, Word preamble, Word cycle)
    : preamble_(std::move(preamble)), cycle_(std::move(cycle)) {
    if (cycle_.empty()) throw ShiftError("eventually periodic point needs a nonempty cycle");
    Word check = preamble_;
    check.insert(check.end(), cycle_.begin(), cycle_.end());
    check.push_back(cycle_.front());
    if (!is_admissible(g, check)) throw ShiftError("point " + to_string() + " is not admissible");
}

Symbol EventuallyPeriodicPoint::at(std::size_t i) const {
    if (i < preamble_.size()) return preamble_[i];
    return cycle_[(i - preamble_.size()) % cycle_.size()];
}

std::string EventuallyPeriodicPoint::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < preamble_.size(); ++i) out << (i ? " " : "") << preamble_[i];
    out << "|";
    for (std::size_t i = 0; i < cycle_.size(); ++i) out << (i ? " " : "") << cycle_[i];
    return out.str();
}

EventuallyPeriodicPoint parse_point(const ShiftGraph& g, const std::string& text) {
    const auto bar = text.find('|');
    if (bar == std::string::npos || text.find('|', bar + 1) != std::string::npos) {
        throw ShiftError("point '" + text + "' must have the form <preamble>|<cycle>");
    }
    return EventuallyPeriodicPoint(g, parse_symbols(text.substr(0, bar)), parse_symbols(text.substr(bar + 1)));
}

double f_k(const MarkovPotential& phi, const SubActionPair& pair, const EventuallyPeriodicPoint& x, std::size_t k) {
    double acc = pair.V[x.at(0) - 1] + pair.V_T[x.at(k) - 1];
    for (std::size_t i = 0; i < k; ++i) acc += phi(x.at(i), x.at(i + 1)) - pair.alpha;
    return acc;
}

double rate_I(const MarkovPotential& phi, const SubActionPair& pair, const EventuallyPeriodicPoint& x) {
    if (!cycle_is_maximizing(phi, pair, x)) return kNegInf;
    // F_{k+p} = F_k on the periodic tail, so the inf is reached within one period.
    const std::size_t horizon = x.preamble().size() + x.period();
    double best = f_k(phi, pair, x, 0);
    double running = best - pair.V_T[x.at(0) - 1];
    for (std::size_t k = 1; k <= horizon; ++k) {
        running += phi(x.at(k - 1), x.at(k)) - pair.alpha;
        best = std::min(best, running + pair.V_T[x.at(k) - 1]);
    }
    return best;
}

double rate_I_series(const MarkovPotential& phi, const SubActionPair& pair, const EventuallyPeriodicPoint& x) {
    if (!cycle_is_maximizing(phi, pair, x)) return kNegInf;
    // Partial sums repeat with the period once the tail is reached.
    const std::size_t horizon = x.preamble().size() + x.period();
    double acc = 0.0;
    for (std::size_t i = 0; i < horizon; ++i) {
        const Symbol a = x.at(i);
        const Symbol b = x.at(i + 1);
        acc += pair.V[a - 1] - pair.V[b - 1] + phi(a, b) - pair.alpha;
    }
    return acc;
}

double cylinder_sup_rate(const MarkovPotential& phi, const SubActionPair& pair, std::span<const Symbol> word) {
    if (word.empty() || !is_admissible(phi.graph(), word)) return kNegInf;
    double acc = pair.V[word.front() - 1] + pair.V_T[word.back() - 1];
    for (std::size_t i = 0; i + 1 < word.size(); ++i) acc += phi(word[i], word[i + 1]) - pair.alpha;
    return acc;
}

EventuallyPeriodicPoint greedy_extension(const MarkovPotential& phi, const SubActionPair& pair,
                                         std::span<const Symbol> word) {
    const ShiftGraph& g = phi.graph();
    if (word.empty() || !is_admissible(g, word)) throw ShiftError("greedy_extension needs an admissible word");
    Word trail{word.back()};
    std::vector<long> seen_at(static_cast<std::size_t>(g.n_symbols()) + 1, -1);
    seen_at[word.back()] = 0;
    for (;;) {
        const Symbol a = trail.back();
        Symbol next = 0;
        const auto succ = g.successors(a);
        const auto idxs = g.out_edge_indices(a);
        for (std::size_t k = 0; k < succ.size(); ++k) {
            const double slack = pair.V_T[a - 1] - (phi.on_edge(idxs[k]) - pair.alpha + pair.V_T[succ[k] - 1]);
            if (std::abs(slack) <= 1e-9) {
                next = succ[k];
                break;
            }
        }
        if (next == 0) throw ShiftError("backward sub-action is not calibrated at symbol " + std::to_string(a));
        if (seen_at[next] >= 0) {
            const auto start = static_cast<std::size_t>(seen_at[next]);
            Word preamble(word.begin(), word.end() - 1);
            preamble.insert(preamble.end(), trail.begin(), trail.begin() + static_cast<long>(start));
            Word cycle(trail.begin() + static_cast<long>(start), trail.end());
            return EventuallyPeriodicPoint(g, std::move(preamble), std::move(cycle));
        }
        seen_at[next] = static_cast<long>(trail.size());
        trail.push_back(next);
    }
}

LdpReport ldp_report(const MarkovPotential& phi, const SubActionPair& pair, std::span<const Symbol> word,
                     std::span<const SpectralData> spectra) {
    if (!is_admissible(phi.graph(), word) || word.empty()) {
        throw ShiftError("ldp_report needs an admissible word, got " + word_label(word));
    }
    LdpReport r;
    r.word.assign(word.begin(), word.end());
    r.target = cylinder_sup_rate(phi, pair, word);
    for (const SpectralData& sd : spectra) {
        const double scaled = cylinder_log_measure(sd, phi, word) / sd.t;
        r.t.push_back(sd.t);
        r.log_measure_over_t.push_back(scaled);
    }
    summarize_gaps(r);
    return r;
}

void summarize_gaps(LdpReport& r) {
    r.gap.clear();
    for (double x : r.log_measure_over_t) r.gap.push_back(std::abs(x - r.target));
    r.gap_decreasing = true;
    for (std::size_t i = r.gap.size() / 2; i + 1 < r.gap.size(); ++i) {
        if (r.gap[i + 1] > r.gap[i] + 1e-12) r.gap_decreasing = false;
    }
    r.final_gap = r.gap.empty() ? std::numeric_limits<double>::infinity() : r.gap.back();
    r.success = r.gap_decreasing && r.final_gap < kLdpGapThreshold;
}

std::string word_label(std::span<const Symbol> word) {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(word[i]);
    }
    return out;
}

} // namespace cms
