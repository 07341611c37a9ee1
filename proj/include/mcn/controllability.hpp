#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string_view>
#include <utility>
#include <vector>

#include "digraph.hpp"
#include "errors.hpp"
#include "prime_field.hpp"
#include "random.hpp"

namespace mcn {

struct Weighting {
    enum class Kind { unit, random };
    Kind kind = Kind::unit;
    std::uint64_t seed = 0;

    static Weighting unit() { return {}; }
    static Weighting random(std::uint64_t seed) { return {Kind::random, seed}; }
};

struct MatrixEntry {
    std::size_t row;
    std::size_t col;
    std::uint64_t weight;

    friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

// Coupling matrix A (transpose of the adjacency matrix) over GF(2^61 - 1).
// Rows and columns follow the ascending node-label order of the source graph;
// an edge i -> j puts a nonzero at (index(j), index(i)).
class CouplingMatrix {
public:
    using SparseRow = std::vector<std::pair<std::size_t, std::uint64_t>>;

    explicit CouplingMatrix(std::size_t dimension) : rows_(dimension) {}

    std::size_t dimension() const noexcept { return rows_.size(); }

    // Row j: (column, weight) pairs, columns strictly increasing.
    const SparseRow& row(std::size_t j) const { return rows_.at(j); }

    std::size_t nonzero_count() const noexcept
    {
        std::size_t n = 0;
        for (const auto& r : rows_)
            n += r.size();
        return n;
    }

    std::uint64_t at(std::size_t row, std::size_t col) const
    {
        const auto& r = rows_.at(row);
        auto it = std::lower_bound(r.begin(), r.end(), col,
                                   [](const auto& e, std::size_t c) { return e.first < c; });
        return it != r.end() && it->first == col ? it->second : 0;
    }

    std::vector<MatrixEntry> entries() const
    {
        std::vector<MatrixEntry> out;
        for (std::size_t j = 0; j < rows_.size(); ++j)
            for (auto [i, w] : rows_[j])
                out.push_back({j, i, w});
        return out;
    }

    std::vector<std::vector<std::uint64_t>> dense() const
    {
        std::vector<std::vector<std::uint64_t>> m(dimension(), std::vector<std::uint64_t>(dimension(), 0));
        for (std::size_t j = 0; j < rows_.size(); ++j)
            for (auto [i, w] : rows_[j])
                m[j][i] = w;
        return m;
    }

    bool strictly_lower_triangular() const
    {
        for (std::size_t j = 0; j < rows_.size(); ++j)
            if (!rows_[j].empty() && rows_[j].back().first >= j)
                return false;
        return true;
    }

private:
    friend CouplingMatrix coupling_matrix(const Digraph&, Weighting);
    std::vector<SparseRow> rows_;
};

inline CouplingMatrix coupling_matrix(const Digraph& g, Weighting weighting = Weighting::unit())
{
    CouplingMatrix a(g.node_count());
    std::optional<Rng> rng;
    if (weighting.kind == Weighting::Kind::random)
        rng.emplace(weighting.seed);

    // Edges are visited ascending by source, so each row receives its columns in
    // increasing order.
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        for (std::size_t j : g.successor_indices(i)) {
            const std::uint64_t w = rng ? 1 + rng->below(field::modulus - 1) : 1;
            a.rows_[j].emplace_back(i, w);
        }
    }
    return a;
}

struct EliminationResult {
    std::size_t rank = 0;
    // pivot_row[j] is set when row j joined the row basis.
    std::vector<bool> pivot_row;
};

namespace detail {

inline void axpy_into(CouplingMatrix::SparseRow& target, std::uint64_t factor,
                      const CouplingMatrix::SparseRow& basis, CouplingMatrix::SparseRow& scratch)
{
    // target -= factor * basis, both sorted by column.
    scratch.clear();
    auto a = target.begin();
    auto b = basis.begin();
    while (a != target.end() || b != basis.end()) {
        if (b == basis.end() || (a != target.end() && a->first < b->first)) {
            scratch.push_back(*a++);
        } else if (a == target.end() || b->first < a->first) {
            scratch.emplace_back(b->first, field::sub(0, field::mul(factor, b->second)));
            ++b;
        } else {
            const std::uint64_t v = field::sub(a->second, field::mul(factor, b->second));
            if (v != 0)
                scratch.emplace_back(a->first, v);
            ++a;
            ++b;
        }
    }
    target.swap(scratch);
}

} // namespace detail

// Sparse Gaussian elimination over rows. Rows are inserted from the highest
// index down and pivot on their largest column, so the rows left outside the
// basis are the lowest-indexed ones possible. On congruence layers row j's
// largest column is j - r, distinct per row, and no fill-in occurs.
inline EliminationResult eliminate_rows(const CouplingMatrix& a)
{
    const std::size_t n = a.dimension();
    EliminationResult result;
    result.pivot_row.assign(n, false);

    std::vector<std::optional<CouplingMatrix::SparseRow>> basis(n);
    CouplingMatrix::SparseRow work, scratch;

    for (std::size_t j = n; j-- > 0;) {
        work = a.row(j);
        while (!work.empty()) {
            const auto [lead, value] = work.back();
            if (!basis[lead]) {
                const std::uint64_t inv = field::inverse(value);
                for (auto& e : work)
                    e.second = field::mul(e.second, inv);
                basis[lead] = std::move(work);
                work.clear();
                result.pivot_row[j] = true;
                ++result.rank;
                break;
            }
            detail::axpy_into(work, value, *basis[lead], scratch);
        }
    }
    return result;
}

inline std::size_t rank(const CouplingMatrix& a) { return eliminate_rows(a).rank; }

enum class ControlMethod { exact_rank, matching };

inline std::string_view to_string(ControlMethod m)
{
    return m == ControlMethod::exact_rank ? "exact_rank" : "matching";
}

struct ControlReport {
    std::size_t n_nodes = 0;
    // rank(A) for exact_rank; maximum matching size (generic rank) for matching.
    std::size_t rank = 0;
    std::size_t n_d = 0;
    double density = 0.0;
    std::vector<Label> drivers;
    ControlMethod method = ControlMethod::exact_rank;

    friend bool operator==(const ControlReport&, const ControlReport&) = default;
};

namespace detail {

inline ControlReport make_report(const Digraph& g, std::size_t rank, const std::vector<bool>& covered,
                                 ControlMethod method)
{
    ControlReport rep;
    rep.n_nodes = g.node_count();
    rep.rank = rank;
    rep.method = method;
    for (std::size_t i = 0; i < g.node_count(); ++i)
        if (!covered[i])
            rep.drivers.push_back(g.label(i));
    // Full rank still needs one input; take the smallest label.
    if (rep.drivers.empty())
        rep.drivers.push_back(g.label(0));
    rep.n_d = rep.drivers.size();
    rep.density = static_cast<double>(rep.n_d) / static_cast<double>(rep.n_nodes);
    return rep;
}

inline void require_nonempty(const Digraph& g)
{
    if (g.empty())
        throw validation_error("controllability of an empty graph is undefined");
}

} // namespace detail

// N_D = max(1, n - rank A). Drivers are the rows outside the row basis chosen by
// eliminate_rows, i.e. the inputs B with rank[-A, B] = n using the smallest
// labels. On congruence layers these are the all-zero rows r+1, ..., 2r.
inline ControlReport min_drivers_exact(const Digraph& g, Weighting weighting = Weighting::unit())
{
    detail::require_nonempty(g);
    const auto elim = eliminate_rows(coupling_matrix(g, weighting));
    return detail::make_report(g, elim.rank, elim.pivot_row, ControlMethod::exact_rank);
}

// Maximum bipartite matching between out-copies (left) and in-copies (right)
// of the nodes, one bipartite edge per directed edge. Hopcroft-Karp with
// neighbours scanned in ascending label order, so the result is canonical for
// a given graph.
class HopcroftKarp {
public:
    static constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

    explicit HopcroftKarp(const Digraph& g)
        : g_(g), match_left_(g.node_count(), none), match_right_(g.node_count(), none),
          dist_(g.node_count()), next_(g.node_count())
    {
        while (bfs()) {
            for (std::size_t u = 0; u < g_.node_count(); ++u)
                next_[u] = 0;
            for (std::size_t u = 0; u < g_.node_count(); ++u)
                if (match_left_[u] == none && dfs(u))
                    ++size_;
        }
    }

    std::size_t size() const noexcept { return size_; }
    // Left (out-copy) partner of right vertex v, or `none`.
    std::size_t partner_of_right(std::size_t v) const { return match_right_[v]; }
    std::size_t partner_of_left(std::size_t u) const { return match_left_[u]; }

private:
    bool bfs()
    {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < g_.node_count(); ++u) {
            if (match_left_[u] == none) {
                dist_[u] = 0;
                q.push(u);
            } else {
                dist_[u] = none;
            }
        }
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v : g_.successor_indices(u)) {
                const std::size_t w = match_right_[v];
                if (w == none) {
                    found = true;
                } else if (dist_[w] == none) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    // Iterative augmenting-path search along the BFS layering.
    bool dfs(std::size_t root)
    {
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            auto succ = g_.successor_indices(u);
            if (next_[u] == succ.size()) {
                dist_[u] = none;
                stack.pop_back();
                continue;
            }
            const std::size_t v = succ[next_[u]];
            const std::size_t w = match_right_[v];
            if (w == none) {
                // Flip the path: each stack entry takes the vertex it was exploring.
                for (std::size_t k = stack.size(); k-- > 0;) {
                    const std::size_t x = stack[k];
                    const std::size_t y = g_.successor_indices(x)[next_[x]];
                    match_left_[x] = y;
                    match_right_[y] = x;
                }
                return true;
            }
            if (dist_[w] == dist_[u] + 1) {
                stack.push_back(w);
            } else {
                ++next_[u];
            }
            // When w's subtree fails it pops with dist_[w] = none, and the
            // check above then advances u past v.
        }
        return false;
    }

    const Digraph& g_;
    std::vector<std::size_t> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> dist_;
    std::vector<std::size_t> next_;
    std::size_t size_ = 0;
};

// Structural controllability: N_D = max(1, n - |maximum matching|), drivers are
// the nodes whose in-copy is unmatched.
inline ControlReport min_drivers_matching(const Digraph& g)
{
    detail::require_nonempty(g);
    HopcroftKarp hk(g);
    std::vector<bool> matched(g.node_count(), false);
    for (std::size_t v = 0; v < g.node_count(); ++v)
        matched[v] = hk.partner_of_right(v) != HopcroftKarp::none;
    return detail::make_report(g, hk.size(), matched, ControlMethod::matching);
}

struct SscReport {
    bool strong = false;
    std::size_t unit_rank = 0;
    std::vector<std::size_t> trial_ranks;
};

// Strong structural controllability check: rank(A) must not depend on the
// values of the nonzero weights. Trial t uses weights seeded by
// derive_seed(seed, {t}).
inline SscReport verify_ssc(const Digraph& g, std::size_t trials, std::uint64_t seed)
{
    if (trials < 2)
        throw validation_error("verify_ssc needs at least 2 trials");
    SscReport rep;
    rep.unit_rank = rank(coupling_matrix(g));
    rep.strong = true;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t r = rank(coupling_matrix(g, Weighting::random(derive_seed(seed, {t}))));
        rep.trial_ranks.push_back(r);
        rep.strong = rep.strong && r == rep.unit_rank;
    }
    return rep;
}

} // namespace mcn
