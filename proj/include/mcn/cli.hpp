#pragma once

// Command-line front end. `run` takes the arguments after the program name and
// writes to caller-supplied streams so it can be driven in-process by tests.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "congruence.hpp"
#include "controllability.hpp"
#include "crt.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "robustness.hpp"

namespace mcn::cli {

enum ExitCode : int { ok = 0, internal = 1, usage = 2, infeasible = 3 };

namespace detail {

struct GraphSource {
    std::optional<std::uint64_t> r;
    std::optional<std::uint64_t> n;
    std::string input;

    void add_options(CLI::App& cmd)
    {
        cmd.add_option("--r", r, "layer remainder");
        cmd.add_option("--n", n, "layer ceiling N");
        cmd.add_option("--input", input, "edge-list file");
    }

    Digraph load() const
    {
        const bool layer = r.has_value() || n.has_value();
        if (layer == !input.empty())
            throw validation_error("give either --r and --n, or --input");
        if (layer) {
            if (!r || !n)
                throw validation_error("--r and --n must be given together");
            return build_layer({*r, *n});
        }
        std::ifstream in(input);
        if (!in)
            throw validation_error("cannot open " + input);
        return io::read_edge_list(in);
    }
};

inline std::ofstream open_output(const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw validation_error("cannot write " + path);
    return f;
}

// Accepts each congruence as one argument ("2 mod 3") or split over several.
inline crt::CongruenceSystem parse_congruences(const std::vector<std::string>& args)
{
    std::string joined;
    for (const auto& a : args)
        joined += a + ' ';
    std::istringstream in(joined);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;)
        tokens.push_back(t);
    if (tokens.size() % 3 != 0)
        throw validation_error("congruences must be written as '<r> mod <m>'");
    crt::CongruenceSystem sys;
    for (std::size_t i = 0; i < tokens.size(); i += 3)
        sys.push_back(crt::parse_congruence(tokens[i] + " " + tokens[i + 1] + " " + tokens[i + 2]));
    return sys;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multiplex congruence network toolkit"};
    app.require_subcommand(1);

    // build
    LayerSpec build_spec;
    std::string build_out;
    auto* build = app.add_subcommand("build", "write the edge list of G(r, N)");
    build->add_option("--r", build_spec.r, "remainder")->required();
    build->add_option("--n", build_spec.n, "ceiling N")->required();
    build->add_option("--out", build_out, "output file (default stdout)");

    // stats
    LayerSpec stats_spec;
    std::string stats_csv;
    auto* stats = app.add_subcommand("stats", "out-degree histogram and average degree of G(r, N)");
    stats->add_option("--r", stats_spec.r, "remainder")->required();
    stats->add_option("--n", stats_spec.n, "ceiling N")->required();
    stats->add_option("--csv", stats_csv, "histogram CSV file (default stdout)");

    // control
    detail::GraphSource control_src;
    std::string control_method = "matching";
    auto* control = app.add_subcommand("control", "minimum driver nodes");
    control_src.add_options(*control);
    control->add_option("--method", control_method, "exact|matching|both")
        ->check(CLI::IsMember({"exact", "matching", "both"}));

    // attack
    detail::GraphSource attack_src;
    std::string attack_strategy;
    double attack_pmax = 0.5;
    std::size_t attack_steps = 10;
    std::size_t attack_trials = 50;
    std::uint64_t attack_seed = 0;
    std::string attack_csv;
    auto* attack = app.add_subcommand("attack", "driver density under node removal");
    attack_src.add_options(*attack);
    attack->add_option("--strategy", attack_strategy, "random|targeted")
        ->required()
        ->check(CLI::IsMember({"random", "targeted"}));
    attack->add_option("--pmax", attack_pmax, "largest removal fraction");
    attack->add_option("--steps", attack_steps, "grid intervals between 0 and pmax");
    attack->add_option("--trials", attack_trials, "random trials per grid point");
    attack->add_option("--seed", attack_seed, "master seed");
    attack->add_option("--csv", attack_csv, "attack curve CSV file")->required();

    // sf
    StaticModelSpec sf_spec;
    std::string sf_out;
    auto* sf = app.add_subcommand("sf", "static-model scale-free digraph");
    sf->add_option("--n", sf_spec.n, "node count")->required();
    sf->add_option("--gamma", sf_spec.gamma, "degree exponent")->required();
    sf->add_option("--kbar", sf_spec.kbar, "mean out-degree")->required();
    sf->add_option("--seed", sf_spec.seed, "seed");
    sf->add_option("--out", sf_out, "output file (default stdout)");

    // crt
    std::vector<std::string> crt_terms;
    std::string crt_method = "both";
    auto* crt_cmd = app.add_subcommand("crt", "solve simultaneous congruences");
    crt_cmd->add_option("congruences", crt_terms, "\"<r> mod <m>\" ...")->required();
    crt_cmd->add_option("--method", crt_method, "graph|garner|both")
        ->check(CLI::IsMember({"graph", "garner", "both"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }

    try {
        if (build->parsed()) {
            const Digraph g = build_layer(build_spec);
            if (build_out.empty()) {
                io::write_edge_list(out, g, io::layer_header(build_spec));
            } else {
                auto f = detail::open_output(build_out);
                io::write_edge_list(f, g, io::layer_header(build_spec));
                out << nlohmann::json{{"nodes", g.node_count()}, {"edges", g.edge_count()}, {"out", build_out}}.dump()
                    << '\n';
            }
        } else if (stats->parsed()) {
            const Digraph g = build_layer(stats_spec);
            const DegreeHistogram h = empirical_distribution(g);
            if (stats_csv.empty()) {
                io::write_histogram_csv(out, h, stats_spec.r);
            } else {
                auto f = detail::open_output(stats_csv);
                io::write_histogram_csv(f, h, stats_spec.r);
            }
            out << nlohmann::json{{"r", stats_spec.r},
                                  {"n", stats_spec.n},
                                  {"nodes", g.node_count()},
                                  {"edges", g.edge_count()},
                                  {"average_degree", average_degree(g)},
                                  {"average_degree_active", average_degree_active(g)},
                                  {"theoretical_average_degree", theoretical_average_degree(stats_spec)}}
                       .dump()
                << '\n';
        } else if (control->parsed()) {
            const Digraph g = control_src.load();
            if (control_method != "matching")
                out << io::to_json(min_drivers_exact(g)).dump() << '\n';
            if (control_method != "exact")
                out << io::to_json(min_drivers_matching(g)).dump() << '\n';
        } else if (attack->parsed()) {
            const Digraph g = attack_src.load();
            const auto strategy = parse_attack_strategy(attack_strategy);
            const auto curve =
                attack_curve(g, strategy, linear_grid(attack_pmax, attack_steps), attack_trials, attack_seed);
            auto f = detail::open_output(attack_csv);
            io::write_attack_csv(f, curve);
            out << nlohmann::json{{"csv", attack_csv},
                                  {"points", curve.points.size()},
                                  {"seed", attack_seed},
                                  {"strategy", attack_strategy},
                                  {"trials", curve.points.empty() ? 0 : curve.points.front().trials}}
                       .dump()
                << '\n';
        } else if (sf->parsed()) {
            const Digraph g = generate_static_sf(sf_spec);
            if (sf_out.empty()) {
                io::write_edge_list(out, g, io::sf_header(sf_spec));
            } else {
                auto f = detail::open_output(sf_out);
                io::write_edge_list(f, g, io::sf_header(sf_spec));
                out << nlohmann::json{{"nodes", g.node_count()},
                                      {"edges", g.edge_count()},
                                      {"seed", sf_spec.seed},
                                      {"out", sf_out}}
                           .dump()
                    << '\n';
            }
        } else if (crt_cmd->parsed()) {
            const auto sys = detail::parse_congruences(crt_terms);
            std::optional<crt::CrtSolution> graphical, garner;
            if (crt_method != "garner")
                graphical = crt::solve_graphical(sys);
            if (crt_method != "graph")
                garner = crt::solve_garner(sys);
            if (graphical && garner && graphical->x0 != garner->x0)
                throw std::logic_error("graphical and Garner solutions disagree");
            if (graphical)
                out << io::to_json(*graphical).dump() << '\n';
            if (garner)
                out << io::to_json(*garner).dump() << '\n';
        }
    } catch (const infeasible_error& e) {
        err << "error: infeasible: " << e.what() << '\n';
        return infeasible;
    } catch (const validation_error& e) {
        err << "error: invalid: " << e.what() << '\n';
        return usage;
    } catch (const domain_error& e) {
        err << "error: domain: " << e.what() << '\n';
        return usage;
    } catch (const lookup_error& e) {
        err << "error: lookup: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return internal;
    }
    return ok;
}

} // namespace mcn::cli
