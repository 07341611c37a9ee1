#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace mcn {

using Label = std::uint64_t;

struct Edge {
    Label from;
    Label to;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable sparse digraph over natural-number labels.
//
// Nodes are kept in ascending label order and addressed internally by their
// position in that order. Successor lists are stored in CSR form and are
// strictly increasing, so iterating a node's successors visits labels in
// ascending order.
class Digraph {
public:
    Digraph() = default;

    // Builds a graph from a node set and an edge list. Labels may be given in
    // any order; duplicates in `labels` are merged. Every edge endpoint must be
    // a node, self-loops and parallel edges are rejected.
    Digraph(std::vector<Label> labels, std::vector<Edge> edges)
    {
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        labels_ = std::move(labels);

        std::sort(edges.begin(), edges.end());
        offsets_.assign(labels_.size() + 1, 0);
        targets_.reserve(edges.size());
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const Edge& edge = edges[e];
            if (edge.from == edge.to)
                throw validation_error("self-loop on node " + std::to_string(edge.from));
            if (e > 0 && edges[e - 1] == edge)
                throw validation_error("duplicate edge " + std::to_string(edge.from) + " -> " +
                                       std::to_string(edge.to));
            const std::size_t u = require_index(edge.from);
            const std::size_t v = require_index(edge.to);
            ++offsets_[u + 1];
            targets_.push_back(v);
        }
        for (std::size_t i = 0; i < labels_.size(); ++i)
            offsets_[i + 1] += offsets_[i];
    }

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return targets_.size(); }
    bool empty() const noexcept { return labels_.empty(); }

    std::span<const Label> labels() const noexcept { return labels_; }
    Label label(std::size_t index) const { return labels_.at(index); }

    std::optional<std::size_t> index_of(Label label) const noexcept
    {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
        if (it == labels_.end() || *it != label)
            return std::nullopt;
        return static_cast<std::size_t>(it - labels_.begin());
    }

    bool contains(Label label) const noexcept { return index_of(label).has_value(); }

    std::size_t require_index(Label label) const
    {
        if (auto idx = index_of(label))
            return *idx;
        throw lookup_error("node " + std::to_string(label) + " is not in the graph");
    }

    // Successors of the node at `index`, as internal indices (ascending).
    std::span<const std::size_t> successor_indices(std::size_t index) const
    {
        return {targets_.data() + offsets_[index], offsets_[index + 1] - offsets_[index]};
    }

    std::size_t out_degree_at(std::size_t index) const { return offsets_[index + 1] - offsets_[index]; }

    std::vector<Label> successors(Label label) const
    {
        std::vector<Label> out;
        for (std::size_t v : successor_indices(require_index(label)))
            out.push_back(labels_[v]);
        return out;
    }

    bool has_edge(Label from, Label to) const
    {
        auto u = index_of(from);
        auto v = index_of(to);
        if (!u || !v)
            return false;
        auto succ = successor_indices(*u);
        return std::binary_search(succ.begin(), succ.end(), *v);
    }

    // All edges ascending by (from, to).
    std::vector<Edge> edges() const
    {
        std::vector<Edge> out;
        out.reserve(edge_count());
        for (std::size_t u = 0; u < node_count(); ++u)
            for (std::size_t v : successor_indices(u))
                out.push_back({labels_[u], labels_[v]});
        return out;
    }

    // Subgraph induced by the nodes whose `keep` flag is set.
    Digraph induced(const std::vector<bool>& keep) const
    {
        Digraph g;
        std::vector<std::size_t> remap(node_count(), 0);
        for (std::size_t i = 0; i < node_count(); ++i) {
            if (keep[i]) {
                remap[i] = g.labels_.size();
                g.labels_.push_back(labels_[i]);
            }
        }
        g.offsets_.assign(g.labels_.size() + 1, 0);
        for (std::size_t u = 0; u < node_count(); ++u) {
            if (!keep[u])
                continue;
            for (std::size_t v : successor_indices(u)) {
                if (keep[v]) {
                    g.targets_.push_back(remap[v]);
                    ++g.offsets_[remap[u] + 1];
                }
            }
        }
        for (std::size_t i = 0; i < g.labels_.size(); ++i)
            g.offsets_[i + 1] += g.offsets_[i];
        return g;
    }

    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    friend class DigraphBuilder;

    std::vector<Label> labels_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::size_t> targets_;
};

// Appends successor lists node by node in ascending label order. Used by the
// layer constructors, which already produce sorted, duplicate-free output and
// would otherwise pay for a sort of ~N ln N edges.
class DigraphBuilder {
public:
    explicit DigraphBuilder(std::vector<Label> ascending_labels)
    {
        g_.labels_ = std::move(ascending_labels);
        g_.offsets_.clear();
        g_.offsets_.reserve(g_.labels_.size() + 1);
        g_.offsets_.push_back(0);
    }

    void reserve_edges(std::size_t n) { g_.targets_.reserve(n); }

    // Successors of the next node, as indices into the label vector; must be
    // strictly increasing.
    void push_node(std::span<const std::size_t> successor_indices)
    {
        g_.targets_.insert(g_.targets_.end(), successor_indices.begin(), successor_indices.end());
        g_.offsets_.push_back(g_.targets_.size());
    }

    Digraph finish() &&
    {
        if (g_.offsets_.size() != g_.labels_.size() + 1)
            throw std::logic_error("DigraphBuilder: successor lists missing for some nodes");
        return std::move(g_);
    }

private:
    Digraph g_;
};

} // namespace mcn
