#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cms {

/// Alphabet symbols are 1-based: the truncated alphabet is {1, ..., N}.
using Symbol = int;

/// Finite word w_0 ... w_n; its length |w| = n + 1 is just size().
using Word = std::vector<Symbol>;

struct Edge {
    Symbol from = 0;
    Symbol to = 0;

    auto operator<=>(const Edge&) const = default;
};

enum class ShiftFamily { ExplicitEdges, FullShift, RenewalShift };

/// Description of a truncated countable Markov shift.
///
/// FullShift(n): complete graph on n symbols.
/// RenewalShift(N): edges 1 -> a for all a <= N and a -> a-1 for 2 <= a <= N.
/// ExplicitEdges: the listed edges over {1, ..., alphabet_bound}.
struct ShiftSpec {
    ShiftFamily family = ShiftFamily::ExplicitEdges;
    int alphabet_bound = 0;
    std::vector<Edge> edges;

    static ShiftSpec full_shift(int n) { return {ShiftFamily::FullShift, n, {}}; }
    static ShiftSpec renewal_shift(int n) { return {ShiftFamily::RenewalShift, n, {}}; }
    static ShiftSpec explicit_edges(int n, std::vector<Edge> edges) {
        return {ShiftFamily::ExplicitEdges, n, std::move(edges)};
    }
};

/// Incidence structure of a finite truncation. Edges are stored in CSR order
/// (sorted by source, then target); the position of an edge in that order is
/// its edge index, used by every edge-indexed quantity downstream.
class ShiftGraph {
public:
    /// Validates: symbols in range, no duplicates, every symbol has a
    /// successor and a predecessor. Throws ShiftError otherwise.
    ShiftGraph(int n_symbols, std::vector<Edge> edges, ShiftFamily family = ShiftFamily::ExplicitEdges);

    int n_symbols() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    ShiftFamily family() const noexcept { return family_; }

    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t index) const { return edges_.at(index); }

    /// Sorted successors of a.
    std::span<const Symbol> successors(Symbol a) const;
    /// Sorted predecessors of b.
    std::span<const Symbol> predecessors(Symbol b) const;
    /// Edge indices of (a, b) for b in successors(a), same order.
    std::span<const std::size_t> out_edge_indices(Symbol a) const;
    /// Edge indices of (a, b) for a in predecessors(b), same order.
    std::span<const std::size_t> in_edge_indices(Symbol b) const;

    bool contains(Symbol a) const noexcept { return a >= 1 && a <= n_; }
    bool has_edge(Symbol a, Symbol b) const { return edge_index(a, b).has_value(); }
    std::optional<std::size_t> edge_index(Symbol a, Symbol b) const;

    bool operator==(const ShiftGraph& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    int n_;
    ShiftFamily family_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offset_;
    std::vector<Symbol> out_targets_;
    std::vector<std::size_t> out_index_;
    std::vector<std::size_t> in_offset_;
    std::vector<Symbol> in_sources_;
    std::vector<std::size_t> in_index_;
};

/// Word w_k at bilateral position offset, ..., offset + n.
struct BilateralCylinder {
    Word word;
    long offset = 0;
};

ShiftGraph build_shift(const ShiftSpec& spec);

/// True iff every symbol is in range and each consecutive pair is an edge.
/// Out-of-range symbols make the word inadmissible rather than throwing.
bool is_admissible(const ShiftGraph& g, std::span<const Symbol> word);

/// Strong connectivity of the truncated graph.
bool is_topologically_transitive(const ShiftGraph& g);

/// gcd of cycle lengths of a strongly connected graph (1 = aperiodic).
int graph_period(const ShiftGraph& g);

ShiftGraph transpose_graph(const ShiftGraph& g);

} // namespace cms
