#include "cms/shift.hpp"

#include "cms/errors.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

namespace cms {

namespace {

std::string edge_str(const Edge& e) {
    return std::to_string(e.from) + "->" + std::to_string(e.to);
}

std::vector<bool> reachable_from(const ShiftGraph& g, Symbol start, bool reverse) {
    std::vector<bool> seen(static_cast<std::size_t>(g.n_symbols()) + 1, false);
    std::vector<Symbol> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        const Symbol a = stack.back();
        stack.pop_back();
        for (Symbol b : reverse ? g.predecessors(a) : g.successors(a)) {
            if (!seen[b]) {
                seen[b] = true;
                stack.push_back(b);
            }
        }
    }
    return seen;
}

} // namespace

ShiftGraph::ShiftGraph(int n_symbols, std::vector<Edge> edges, ShiftFamily family)
    : n_(n_symbols), family_(family), edges_(std::move(edges)) {
    if (n_ < 1) throw ShiftError("alphabet bound must be at least 1");
    for (const Edge& e : edges_) {
        if (!contains(e.from) || !contains(e.to)) {
            throw ShiftError("edge " + edge_str(e) + " outside alphabet {1.." + std::to_string(n_) + "}");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
        throw ShiftError("duplicate edge " + edge_str(*dup));
    }

    const auto n = static_cast<std::size_t>(n_);
    std::vector<std::size_t> out_deg(n + 2, 0), in_deg(n + 2, 0);
    for (const Edge& e : edges_) {
        ++out_deg[e.from];
        ++in_deg[e.to];
    }
    for (Symbol a = 1; a <= n_; ++a) {
        if (out_deg[a] == 0) throw ShiftError("symbol " + std::to_string(a) + " has no successor");
        if (in_deg[a] == 0) throw ShiftError("symbol " + std::to_string(a) + " has no predecessor");
    }

    out_offset_.assign(n + 2, 0);
    in_offset_.assign(n + 2, 0);
    for (std::size_t a = 1; a <= n; ++a) {
        out_offset_[a + 1] = out_offset_[a] + out_deg[a];
        in_offset_[a + 1] = in_offset_[a] + in_deg[a];
    }
    out_targets_.resize(edges_.size());
    out_index_.resize(edges_.size());
    in_sources_.resize(edges_.size());
    in_index_.resize(edges_.size());
    std::vector<std::size_t> in_fill(in_offset_.begin(), in_offset_.end());
    // edges_ is sorted by (from, to), so both CSR views come out sorted.
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        out_targets_[i] = e.to;
        out_index_[i] = i;
        const std::size_t slot = in_fill[e.to]++;
        in_sources_[slot] = e.from;
        in_index_[slot] = i;
    }
}

std::span<const Symbol> ShiftGraph::successors(Symbol a) const {
    if (!contains(a)) throw ShiftError("symbol " + std::to_string(a) + " outside alphabet");
    return std::span<const Symbol>(out_targets_).subspan(out_offset_[a], out_offset_[a + 1] - out_offset_[a]);
}

std::span<const Symbol> ShiftGraph::predecessors(Symbol b) const {
    if (!contains(b)) throw ShiftError("symbol " + std::to_string(b) + " outside alphabet");
    return std::span<const Symbol>(in_sources_).subspan(in_offset_[b], in_offset_[b + 1] - in_offset_[b]);
}

std::span<const std::size_t> ShiftGraph::out_edge_indices(Symbol a) const {
    if (!contains(a)) throw ShiftError("symbol " + std::to_string(a) + " outside alphabet");
    return std::span<const std::size_t>(out_index_).subspan(out_offset_[a], out_offset_[a + 1] - out_offset_[a]);
}

std::span<const std::size_t> ShiftGraph::in_edge_indices(Symbol b) const {
    if (!contains(b)) throw ShiftError("symbol " + std::to_string(b) + " outside alphabet");
    return std::span<const std::size_t>(in_index_).subspan(in_offset_[b], in_offset_[b + 1] - in_offset_[b]);
}

std::optional<std::size_t> ShiftGraph::edge_index(Symbol a, Symbol b) const {
    if (!contains(a) || !contains(b)) return std::nullopt;
    const auto succ = successors(a);
    const auto it = std::lower_bound(succ.begin(), succ.end(), b);
    if (it == succ.end() || *it != b) return std::nullopt;
    return out_offset_[a] + static_cast<std::size_t>(it - succ.begin());
}

ShiftGraph build_shift(const ShiftSpec& spec) {
    const int n = spec.alphabet_bound;
    if (n < 1) throw ShiftError("alphabet bound must be at least 1");
    std::vector<Edge> edges;
    switch (spec.family) {
    case ShiftFamily::FullShift:
        for (Symbol a = 1; a <= n; ++a)
            for (Symbol b = 1; b <= n; ++b) edges.push_back({a, b});
        break;
    case ShiftFamily::RenewalShift:
        for (Symbol a = 1; a <= n; ++a) edges.push_back({1, a});
        for (Symbol a = 2; a <= n; ++a) edges.push_back({a, a - 1});
        break;
    case ShiftFamily::ExplicitEdges:
        edges = spec.edges;
        break;
    }
    return ShiftGraph(n, std::move(edges), spec.family);
}

bool is_admissible(const ShiftGraph& g, std::span<const Symbol> word) {
    for (Symbol s : word) {
        if (!g.contains(s)) return false;
    }
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        if (!g.has_edge(word[i], word[i + 1])) return false;
    }
    return true;
}

bool is_topologically_transitive(const ShiftGraph& g) {
    const auto fwd = reachable_from(g, 1, false);
    const auto bwd = reachable_from(g, 1, true);
    for (Symbol a = 1; a <= g.n_symbols(); ++a) {
        if (!fwd[a] || !bwd[a]) return false;
    }
    return true;
}

int graph_period(const ShiftGraph& g) {
    std::vector<long> level(static_cast<std::size_t>(g.n_symbols()) + 1, -1);
    std::queue<Symbol> queue;
    level[1] = 0;
    queue.push(1);
    while (!queue.empty()) {
        const Symbol a = queue.front();
        queue.pop();
        for (Symbol b : g.successors(a)) {
            if (level[b] < 0) {
                level[b] = level[a] + 1;
                queue.push(b);
            }
        }
    }
    long period = 0;
    for (const Edge& e : g.edges()) {
        if (level[e.from] < 0 || level[e.to] < 0) continue;
        period = std::gcd(period, std::abs(level[e.from] + 1 - level[e.to]));
    }
    return static_cast<int>(period);
}

ShiftGraph transpose_graph(const ShiftGraph& g) {
    std::vector<Edge> reversed;
    reversed.reserve(g.edge_count());
    for (const Edge& e : g.edges()) reversed.push_back({e.to, e.from});
    return ShiftGraph(g.n_symbols(), std::move(reversed), ShiftFamily::ExplicitEdges);
}

} // namespace cms
