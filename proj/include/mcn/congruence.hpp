#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "digraph.hpp"
#include "errors.hpp"

namespace mcn {

// One congruence layer G(r, N): nodes {r+1, ..., N}, edge i -> j iff i < j and
// j mod i == r.
struct LayerSpec {
    std::uint64_t r = 0;
    std::uint64_t n = 0;

    void validate() const
    {
        if (n < r + 2)
            throw validation_error("invalid layer: need N >= r + 2 (got r=" + std::to_string(r) +
                                   ", N=" + std::to_string(n) + ")");
    }

    std::uint64_t node_count() const noexcept { return n - r; }
    Label first_label() const noexcept { return r + 1; }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

inline Digraph build_layer(const LayerSpec& spec)
{
    spec.validate();
    const std::uint64_t r = spec.r;
    const std::uint64_t n = spec.n;

    std::vector<Label> labels;
    labels.reserve(spec.node_count());
    for (Label m = r + 1; m <= n; ++m)
        labels.push_back(m);

    DigraphBuilder builder(std::move(labels));
    // Harmonic-sum estimate of the edge count.
    builder.reserve_edges(static_cast<std::size_t>(
        static_cast<double>(spec.node_count()) * (std::log(static_cast<double>(n)) + 1.0)));

    const std::uint64_t first_multiple = r == 0 ? 2 : 1;
    std::vector<std::size_t> succ;
    for (Label m = r + 1; m <= n; ++m) {
        succ.clear();
        // j = q*m + r, written to stay clear of overflow near the top of the range
        for (std::uint64_t q = first_multiple; m <= (n - r) / q; ++q)
            succ.push_back(static_cast<std::size_t>(q * m + r - (r + 1)));
        builder.push_node(succ);
    }
    return std::move(builder).finish();
}

inline std::size_t out_degree(const Digraph& g, Label m)
{
    return g.out_degree_at(g.require_index(m));
}

// Closed-form out-degree of node m in G(r, N).
inline std::uint64_t layer_out_degree(const LayerSpec& spec, Label m)
{
    if (m <= spec.r || m > spec.n)
        throw lookup_error("node " + std::to_string(m) + " is not in G(" + std::to_string(spec.r) +
                           "," + std::to_string(spec.n) + ")");
    return spec.r > 0 ? (spec.n - spec.r) / m : spec.n / m - 1;
}

// Arithmetic progression root, root + r, root + 2r, ... inside one layer.
struct Chain {
    Label root = 0;
    std::vector<Label> members;

    friend bool operator==(const Chain&, const Chain&) = default;
};

// Splits the node set of G(r>0, N) into the r chains i + n*r (1 <= i <= r),
// rooted at r+1, ..., 2r.
inline std::vector<Chain> extract_chains(const LayerSpec& spec)
{
    spec.validate();
    if (spec.r == 0)
        throw domain_error("the r = 0 layer has no chain decomposition");

    std::vector<Chain> chains;
    chains.reserve(spec.r);
    for (std::uint64_t i = 1; i <= spec.r; ++i) {
        Chain chain;
        chain.root = i + spec.r;
        for (Label x = chain.root; x <= spec.n; x += spec.r) {
            chain.members.push_back(x);
            if (spec.n - x < spec.r)
                break;
        }
        if (!chain.members.empty())
            chains.push_back(std::move(chain));
    }
    return chains;
}

struct DegreeHistogram {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total_nodes = 0;

    double probability(std::uint64_t k) const
    {
        if (total_nodes == 0)
            return 0.0;
        auto it = counts.find(k);
        return it == counts.end() ? 0.0
                                  : static_cast<double>(it->second) / static_cast<double>(total_nodes);
    }

    std::uint64_t weighted_sum() const
    {
        std::uint64_t s = 0;
        for (auto [k, c] : counts)
            s += k * c;
        return s;
    }
};

// Out-degree histogram over every node of the graph, zero-degree nodes included.
inline DegreeHistogram empirical_distribution(const Digraph& g)
{
    DegreeHistogram h;
    h.total_nodes = g.node_count();
    for (std::size_t i = 0; i < g.node_count(); ++i)
        ++h.counts[g.out_degree_at(i)];
    return h;
}

// Large-N out-degree law: 1/(k(k+1)) for r > 0 (k >= 1) and 1/((k+1)(k+2))
// for the divisibility layer (k >= 0).
inline double theoretical_pk(std::uint64_t r, std::uint64_t k)
{
    if (r > 0) {
        if (k == 0)
            throw domain_error("theoretical P(k) for r > 0 is defined for k >= 1");
        const double kd = static_cast<double>(k);
        return 1.0 / (kd * (kd + 1.0));
    }
    const double kd = static_cast<double>(k);
    return 1.0 / ((kd + 1.0) * (kd + 2.0));
}

// Exact mean out-degree: integer edge sum over node count.
inline double average_degree(const Digraph& g)
{
    if (g.node_count() == 0)
        return 0.0;
    return static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

// Mean out-degree over nodes that have at least one out-link.
inline double average_degree_active(const Digraph& g)
{
    std::uint64_t active = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i)
        active += g.out_degree_at(i) > 0 ? 1 : 0;
    if (active == 0)
        return 0.0;
    return static_cast<double>(g.edge_count()) / static_cast<double>(active);
}

inline double theoretical_average_degree(const LayerSpec& spec)
{
    spec.validate();
    constexpr double C = std::numbers::egamma;
    if (spec.r == 0)
        return std::log(static_cast<double>(spec.n)) + 2.0 * C - 2.0;

    const std::uint64_t size = spec.n - spec.r;
    std::uint64_t head = 0;
    for (std::uint64_t i = 1; i <= spec.r; ++i)
        head += size / i;
    return std::log(static_cast<double>(size)) + 2.0 * C - 1.0 -
           static_cast<double>(head) / static_cast<double>(size);
}

// Layers over a common ceiling N, keyed by remainder.
class MultiplexNetwork {
public:
    explicit MultiplexNetwork(std::uint64_t n) : n_(n) {}

    MultiplexNetwork(std::uint64_t n, const std::vector<std::uint64_t>& remainders) : n_(n)
    {
        for (auto r : remainders)
            add_layer(r);
    }

    // Returns the existing layer when r is already present.
    const Digraph& add_layer(std::uint64_t r)
    {
        if (auto it = layers_.find(r); it != layers_.end())
            return it->second;
        return layers_.emplace(r, build_layer({r, n_})).first->second;
    }

    std::uint64_t ceiling() const noexcept { return n_; }
    std::size_t layer_count() const noexcept { return layers_.size(); }
    bool has_layer(std::uint64_t r) const { return layers_.contains(r); }

    const Digraph& layer(std::uint64_t r) const
    {
        auto it = layers_.find(r);
        if (it == layers_.end())
            throw lookup_error("no layer with remainder " + std::to_string(r));
        return it->second;
    }

    const std::map<std::uint64_t, Digraph>& layers() const noexcept { return layers_; }

private:
    std::uint64_t n_;
    std::map<std::uint64_t, Digraph> layers_;
};

} // namespace mcn
