#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "congruence.hpp"
#include "controllability.hpp"
#include "crt.hpp"
#include "digraph.hpp"
#include "errors.hpp"
#include "robustness.hpp"

namespace mcn::io {

// Shortest round-trip decimal form.
inline std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

// ---------------------------------------------------------------------------
// Edge lists: optional "# ..." header, then one "i<TAB>j" line per edge,
// ascending by (i, j).

inline std::string layer_header(const LayerSpec& spec)
{
    return "# mcn r=" + std::to_string(spec.r) + " n=" + std::to_string(spec.n);
}

inline std::string sf_header(const StaticModelSpec& spec)
{
    return "# sf gamma=" + format_double(spec.gamma) + " n=" + std::to_string(spec.n) +
           " seed=" + std::to_string(spec.seed);
}

inline void write_edge_list(std::ostream& out, const Digraph& g, std::string_view header)
{
    out << header << '\n';
    for (const auto& e : g.edges())
        out << e.from << '\t' << e.to << '\n';
}

namespace detail {

inline std::optional<std::uint64_t> header_field(std::string_view line, std::string_view key)
{
    const std::string needle = " " + std::string(key) + "=";
    const auto pos = line.find(needle);
    if (pos == std::string_view::npos)
        return std::nullopt;
    std::uint64_t v = 0;
    const char* first = line.data() + pos + needle.size();
    auto [ptr, ec] = std::from_chars(first, line.data() + line.size(), v);
    if (ec != std::errc{})
        throw validation_error("malformed header field '" + std::string(key) + "'");
    return v;
}

} // namespace detail

// Reads an edge list. The node set comes from the header when present
// ("# mcn r= n=" gives {r+1..N}, "# sf ... n=" gives {1..n}); otherwise it is
// the set of edge endpoints.
inline Digraph read_edge_list(std::istream& in)
{
    std::vector<Label> labels;
    std::vector<Edge> edges;
    bool have_node_set = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#') {
            if (have_node_set)
                continue;
            if (line.starts_with("# mcn ")) {
                auto r = detail::header_field(line, "r");
                auto n = detail::header_field(line, "n");
                if (!r || !n)
                    throw validation_error("mcn header needs r= and n=");
                LayerSpec spec{*r, *n};
                spec.validate();
                for (Label m = spec.r + 1; m <= spec.n; ++m)
                    labels.push_back(m);
                have_node_set = true;
            } else if (line.starts_with("# sf ")) {
                auto n = detail::header_field(line, "n");
                if (!n)
                    throw validation_error("sf header needs n=");
                for (Label m = 1; m <= *n; ++m)
                    labels.push_back(m);
                have_node_set = true;
            }
            continue;
        }
        std::istringstream fields(line);
        Edge e{};
        std::string extra;
        if (!(fields >> e.from >> e.to) || (fields >> extra))
            throw validation_error("line " + std::to_string(line_no) + ": expected '<i>\\t<j>'");
        edges.push_back(e);
    }
    if (!have_node_set) {
        for (const auto& e : edges) {
            labels.push_back(e.from);
            labels.push_back(e.to);
        }
    }
    try {
        return Digraph(std::move(labels), std::move(edges));
    } catch (const lookup_error& err) {
        throw validation_error(std::string("edge list: ") + err.what());
    }
}

// ---------------------------------------------------------------------------
// CSV exports

// Theoretical column uses the large-N law; for r > 0 the k = 0 mass vanishes
// in that limit and is written as 0.
inline void write_histogram_csv(std::ostream& out, const DegreeHistogram& h, std::uint64_t r)
{
    out << "k,count,empirical_p,theoretical_p\n";
    for (auto [k, count] : h.counts) {
        const double theory = (r > 0 && k == 0) ? 0.0 : theoretical_pk(r, k);
        out << k << ',' << count << ',' << format_double(h.probability(k)) << ',' << format_double(theory)
            << '\n';
    }
}

inline void write_attack_csv(std::ostream& out, const AttackCurve& curve)
{
    out << "p,nd_mean,nd_std,trials,strategy\n";
    for (const auto& pt : curve.points)
        out << format_double(pt.p) << ',' << format_double(pt.nd_mean) << ',' << format_double(pt.nd_std) << ','
            << pt.trials << ',' << to_string(curve.strategy) << '\n';
}

// ---------------------------------------------------------------------------
// JSON reports (single line, keys sorted)

inline nlohmann::json to_json(const ControlReport& rep)
{
    return {
        {"n_nodes", rep.n_nodes},
        {"rank", rep.rank},
        {"n_d", rep.n_d},
        {"density", rep.density},
        {"drivers", rep.drivers},
        {"method", std::string(to_string(rep.method))},
    };
}

inline nlohmann::json to_json(const crt::CrtSolution& sol)
{
    nlohmann::json j = {
        {"x0", sol.x0},
        {"modulus_product", sol.modulus_product},
        {"method", std::string(crt::to_string(sol.method))},
    };
    j["witness"] = sol.witness ? nlohmann::json(*sol.witness) : nlohmann::json(nullptr);
    return j;
}

} // namespace mcn::io
