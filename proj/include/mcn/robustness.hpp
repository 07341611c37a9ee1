#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "controllability.hpp"
#include "digraph.hpp"
#include "errors.hpp"
#include "random.hpp"

namespace mcn {

enum class AttackStrategy { random, targeted };

inline std::string_view to_string(AttackStrategy s)
{
    return s == AttackStrategy::random ? "random" : "targeted";
}

inline AttackStrategy parse_attack_strategy(std::string_view s)
{
    if (s == "random")
        return AttackStrategy::random;
    if (s == "targeted")
        return AttackStrategy::targeted;
    throw validation_error("unknown attack strategy '" + std::string(s) + "'");
}

// Number of nodes removed at fraction p. The epsilon absorbs grid values such
// as 0.3 = 0.29999... so that p * n lands on the intended integer.
inline std::size_t removal_count(double p, std::size_t n)
{
    return static_cast<std::size_t>(std::floor(p * static_cast<double>(n) + 1e-9));
}

// Node indices ordered for a targeted attack: descending out-degree, ties by
// ascending label.
inline std::vector<std::size_t> targeted_order(const Digraph& g)
{
    std::vector<std::size_t> order(g.node_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return g.out_degree_at(a) > g.out_degree_at(b);
    });
    return order;
}

// Induced subgraph after deleting floor(p * n) nodes. Random attacks draw a
// uniform subset from `seed`; targeted attacks ignore the seed.
inline Digraph remove_nodes(const Digraph& g, AttackStrategy strategy, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p < 1.0))
        throw validation_error("removal fraction must lie in [0, 1), got " + std::to_string(p));
    const std::size_t n = g.node_count();
    const std::size_t k = removal_count(p, n);
    if (k == 0)
        return g;

    std::vector<bool> keep(n, true);
    if (strategy == AttackStrategy::targeted) {
        const auto order = targeted_order(g);
        for (std::size_t i = 0; i < k; ++i)
            keep[order[i]] = false;
    } else {
        // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        Rng rng(seed);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(idx[i], idx[j]);
            keep[idx[i]] = false;
        }
    }
    return g.induced(keep);
}

struct AttackPoint {
    double p = 0.0;
    double nd_mean = 0.0;
    double nd_std = 0.0;
    std::size_t trials = 0;

    friend bool operator==(const AttackPoint&, const AttackPoint&) = default;
};

struct AttackCurve {
    AttackStrategy strategy = AttackStrategy::random;
    std::uint64_t seed = 0;
    std::vector<AttackPoint> points;

    friend bool operator==(const AttackCurve&, const AttackCurve&) = default;
};

// Evenly spaced grid 0, pmax/steps, ..., pmax.
inline std::vector<double> linear_grid(double pmax, std::size_t steps)
{
    if (steps == 0)
        throw validation_error("grid needs at least one step");
    if (!(pmax > 0.0 && pmax < 1.0))
        throw validation_error("pmax must lie in (0, 1)");
    std::vector<double> grid;
    for (std::size_t i = 0; i <= steps; ++i)
        grid.push_back(pmax * static_cast<double>(i) / static_cast<double>(steps));
    return grid;
}

// Driver density (matching method) on the surviving subgraph at each p.
// Random trials are seeded by derive_seed(seed, {p index, trial}); targeted
// attacks are deterministic and always run a single trial. nd_std is the
// population standard deviation over trials.
inline AttackCurve attack_curve(const Digraph& g, AttackStrategy strategy, const std::vector<double>& p_grid,
                                std::size_t trials, std::uint64_t seed)
{
    if (trials == 0)
        throw validation_error("attack_curve needs at least one trial");
    if (strategy == AttackStrategy::targeted)
        trials = 1;
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        if (!(p_grid[i] >= 0.0 && p_grid[i] < 1.0))
            throw validation_error("removal fraction must lie in [0, 1)");
        if (i > 0 && !(p_grid[i] > p_grid[i - 1]))
            throw validation_error("removal fractions must be strictly increasing");
    }

    AttackCurve curve;
    curve.strategy = strategy;
    curve.seed = seed;
    std::vector<double> samples(trials);
    for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
        const double p = p_grid[pi];
        if (removal_count(p, g.node_count()) >= g.node_count())
            throw validation_error("no nodes survive at p = " + std::to_string(p));
        for (std::size_t t = 0; t < trials; ++t) {
            const Digraph sub = remove_nodes(g, strategy, p, derive_seed(seed, {pi, t}));
            samples[t] = min_drivers_matching(sub).density;
        }
        double mean = 0.0;
        for (double s : samples)
            mean += s;
        mean /= static_cast<double>(trials);
        double var = 0.0;
        for (double s : samples)
            var += (s - mean) * (s - mean);
        var /= static_cast<double>(trials);
        curve.points.push_back({p, mean, std::sqrt(var), trials});
    }
    return curve;
}

// Directed static model: node i in {1..n} has weight i^(-alpha), alpha =
// 1/(gamma - 1); source and target are drawn independently by weight.
struct StaticModelSpec {
    std::size_t n = 0;
    double gamma = 0.0;
    double kbar = 0.0;
    std::uint64_t seed = 0;

    std::size_t edge_target() const { return static_cast<std::size_t>(std::llround(kbar * static_cast<double>(n))); }

    void validate() const
    {
        if (n < 2)
            throw validation_error("static model needs n >= 2");
        if (!(gamma > 2.0))
            throw validation_error("static model needs gamma > 2");
        if (!(kbar > 0.0))
            throw validation_error("static model needs kbar > 0");
        if (edge_target() > n * (n - 1))
            throw validation_error("requested " + std::to_string(edge_target()) + " edges exceed n(n-1) = " +
                                   std::to_string(n * (n - 1)));
    }
};

inline Digraph generate_static_sf(const StaticModelSpec& spec)
{
    spec.validate();
    const std::size_t n = spec.n;
    const std::size_t m = spec.edge_target();
    const double alpha = 1.0 / (spec.gamma - 1.0);

    std::vector<double> cumulative(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += std::pow(static_cast<double>(i + 1), -alpha);
        cumulative[i] = total;
    }

    Rng rng(spec.seed);
    auto draw = [&]() -> std::size_t {
        const double x = rng.uniform01() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
        return it == cumulative.end() ? n - 1 : static_cast<std::size_t>(it - cumulative.begin());
    };

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(m * 2);
    std::vector<Edge> edges;
    edges.reserve(m);
    const std::size_t max_draws = 100 * m;
    std::size_t draws = 0;
    while (edges.size() < m) {
        if (draws++ >= max_draws)
            throw validation_error("static model gave up after " + std::to_string(max_draws) +
                                   " draws; too many duplicate edges for this (n, gamma, kbar)");
        const std::size_t s = draw();
        const std::size_t t = draw();
        if (s == t)
            continue;
        if (!seen.insert(static_cast<std::uint64_t>(s) * n + t).second)
            continue;
        edges.push_back({s + 1, t + 1});
    }

    std::vector<Label> labels(n);
    std::iota(labels.begin(), labels.end(), Label{1});
    return Digraph(std::move(labels), std::move(edges));
}

} // namespace mcn
