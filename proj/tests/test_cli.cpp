#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mcn/cli.hpp"
#include "mcn/io.hpp"

using namespace mcn;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        v.push_back(l);
    return v;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("mcn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST(EdgeList, WriteFormat)
{
    std::ostringstream out;
    io::write_edge_list(out, build_layer({1, 5}), io::layer_header({1, 5}));
    EXPECT_EQ(out.str(), "# mcn r=1 n=5\n2\t3\n2\t5\n3\t4\n4\t5\n");
}

TEST(EdgeList, ReadKeepsIsolatedLayerNodes)
{
    std::istringstream in("# mcn r=5 n=7\n");
    const Digraph g = io::read_edge_list(in);
    EXPECT_EQ(g, build_layer({5, 7}));
}

TEST(EdgeList, ReadWithoutHeaderUsesEndpoints)
{
    std::istringstream in("# something\n3\t9\n\n1\t3\r\n");
    const Digraph g = io::read_edge_list(in);
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_TRUE(g.has_edge(1, 3));
    EXPECT_TRUE(g.has_edge(3, 9));
}

TEST(EdgeList, RoundTripProperty)
{
    for (std::uint64_t r : {0u, 1u, 4u})
        for (std::uint64_t n : {r + 2, r + 17, std::uint64_t{250}}) {
            const LayerSpec spec{r, n};
            std::stringstream s;
            io::write_edge_list(s, build_layer(spec), io::layer_header(spec));
            EXPECT_EQ(io::read_edge_list(s), build_layer(spec));
        }
    const StaticModelSpec sf{150, 2.2, 2.0, 4};
    std::stringstream s;
    io::write_edge_list(s, generate_static_sf(sf), io::sf_header(sf));
    EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "# sf gamma=2.2 n=150 seed=4");
    EXPECT_EQ(io::read_edge_list(s), generate_static_sf(sf));
}

TEST(EdgeList, Malformed)
{
    std::istringstream bad("1 2 3\n");
    EXPECT_THROW(io::read_edge_list(bad), validation_error);
    std::istringstream out_of_layer("# mcn r=1 n=5\n2\t9\n");
    EXPECT_THROW(io::read_edge_list(out_of_layer), validation_error);
    std::istringstream dup("1\t2\n1\t2\n");
    EXPECT_THROW(io::read_edge_list(dup), validation_error);
    std::istringstream loop("4\t4\n");
    EXPECT_THROW(io::read_edge_list(loop), validation_error);
}

TEST(Json, ControlReportKeysSortedSingleLine)
{
    const auto s = io::to_json(min_drivers_exact(build_layer({1, 9}))).dump();
    EXPECT_EQ(s, R"({"density":0.125,"drivers":[2],"method":"exact_rank","n_d":1,"n_nodes":8,"rank":7})");
}

TEST(Json, CrtSolution)
{
    EXPECT_EQ(io::to_json(crt::solve_garner({{2, 3}, {3, 5}, {2, 7}})).dump(),
              R"({"method":"garner","modulus_product":105,"witness":null,"x0":23})");
    EXPECT_EQ(io::to_json(crt::solve_graphical({{2, 3}, {3, 5}, {2, 7}})).dump(),
              R"({"method":"graphical","modulus_product":105,"witness":23,"x0":23})");
}

TEST(Csv, Histogram)
{
    std::ostringstream out;
    io::write_histogram_csv(out, empirical_distribution(build_layer({1, 9})), 1);
    EXPECT_EQ(out.str(), "k,count,empirical_p,theoretical_p\n"
                         "0,1,0.125,0\n"
                         "1,4,0.5,0.5\n"
                         "2,2,0.25,0.16666666666666666\n"
                         "4,1,0.125,0.05\n");
}

TEST_F(CliTest, CrtBoth)
{
    const auto r = run({"crt", "2 mod 3", "3 mod 5", "2 mod 7", "--method", "both"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u);
    for (const auto& l : ls)
        EXPECT_EQ(nlohmann::json::parse(l)["x0"], 23);
    EXPECT_EQ(nlohmann::json::parse(ls[0])["witness"], 23);
}

TEST_F(CliTest, CrtUnquotedTokens)
{
    const auto r = run({"crt", "2", "mod", "3", "3", "mod", "5", "--method", "garner"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["x0"], 8);
}

TEST_F(CliTest, CrtExitCodes)
{
    auto r = run({"crt", "1 mod 4", "3 mod 6"});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(r.err.rfind("error:", 0), 0u);
    EXPECT_EQ(lines(r.err).size(), 1u);

    r = run({"crt", "5 mod 3"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("error:", 0), 0u);

    r = run({"crt", "5 mod"});
    EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, ControlBoth)
{
    const auto r = run({"control", "--r", "1", "--n", "9", "--method", "both"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u);
    const auto exact = nlohmann::json::parse(ls[0]);
    const auto matching = nlohmann::json::parse(ls[1]);
    EXPECT_EQ(exact["method"], "exact_rank");
    EXPECT_EQ(matching["method"], "matching");
    for (const auto& j : {exact, matching}) {
        EXPECT_EQ(j["n_d"], 1);
        EXPECT_EQ(j["drivers"], nlohmann::json::array({2}));
    }
}

TEST_F(CliTest, BuildThenControlRoundTrip)
{
    const std::string edges = path("g.tsv");
    ASSERT_EQ(run({"build", "--r", "3", "--n", "60", "--out", edges}).code, 0);
    EXPECT_EQ(slurp(edges).substr(0, 14), "# mcn r=3 n=60");
    for (std::string method : {"exact", "matching", "both"}) {
        const auto a = run({"control", "--input", edges, "--method", method});
        const auto b = run({"control", "--r", "3", "--n", "60", "--method", method});
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
}

TEST_F(CliTest, ControlArgumentErrors)
{
    EXPECT_EQ(run({"control"}).code, 2);
    EXPECT_EQ(run({"control", "--r", "1"}).code, 2);
    EXPECT_EQ(run({"control", "--r", "1", "--n", "9", "--input", "x"}).code, 2);
    EXPECT_EQ(run({"control", "--input", path("missing.tsv")}).code, 2);
    EXPECT_EQ(run({"control", "--r", "4", "--n", "5"}).code, 2);
    EXPECT_EQ(run({"control", "--r", "1", "--n", "9", "--method", "gramian"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST_F(CliTest, StatsCsvAndSummary)
{
    const std::string csv = path("hist.csv");
    const auto r = run({"stats", "--r", "1", "--n", "100", "--csv", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = nlohmann::json::parse(r.out);
    EXPECT_DOUBLE_EQ(summary["average_degree"].get<double>(), 374.0 / 99.0);
    EXPECT_DOUBLE_EQ(summary["average_degree_active"].get<double>(), 374.0 / 98.0);
    EXPECT_EQ(lines(slurp(csv)).front(), "k,count,empirical_p,theoretical_p");

    const auto inline_run = run({"stats", "--r", "1", "--n", "9"});
    ASSERT_EQ(inline_run.code, 0);
    const auto ls = lines(inline_run.out);
    EXPECT_EQ(ls.front(), "k,count,empirical_p,theoretical_p");
    EXPECT_EQ(ls.size(), 6u);
}

TEST_F(CliTest, AttackTargetedKeepsOneDriver)
{
    const std::string csv = path("attack.csv");
    const auto r = run({"attack", "--r", "1", "--n", "100", "--strategy", "targeted", "--pmax", "0.5", "--steps",
                        "10", "--csv", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["seed"], 0);
    const auto ls = lines(slurp(csv));
    ASSERT_EQ(ls.size(), 12u);
    EXPECT_EQ(ls[0], "p,nd_mean,nd_std,trials,strategy");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        std::istringstream row(ls[i]);
        std::string p, mean, sd, trials, strategy;
        std::getline(row, p, ',');
        std::getline(row, mean, ',');
        std::getline(row, sd, ',');
        std::getline(row, trials, ',');
        std::getline(row, strategy, ',');
        const std::size_t survivors = 99 - removal_count(std::stod(p), 99);
        // N_D = nd_mean * survivors = 1 at every row.
        EXPECT_NEAR(std::stod(mean) * static_cast<double>(survivors), 1.0, 1e-12) << ls[i];
        EXPECT_EQ(trials, "1");
        EXPECT_EQ(strategy, "targeted");
    }
}

TEST_F(CliTest, AttackNeedsCsvAndValidGrid)
{
    EXPECT_EQ(run({"attack", "--r", "1", "--n", "100", "--strategy", "random"}).code, 2);
    EXPECT_EQ(run({"attack", "--r", "1", "--n", "100", "--strategy", "random", "--pmax", "1.5", "--csv",
                   path("x.csv")})
                  .code,
              2);
    EXPECT_EQ(run({"attack", "--r", "1", "--n", "100", "--strategy", "sideways", "--csv", path("x.csv")}).code, 2);
}

TEST_F(CliTest, SeededCommandsAreReproducible)
{
    const std::vector<std::string> sf_a{"sf", "--n", "100", "--gamma", "2.001", "--kbar", "3.82", "--seed", "7",
                                        "--out", path("a.tsv")};
    const std::vector<std::string> sf_b{"sf", "--n", "100", "--gamma", "2.001", "--kbar", "3.82", "--seed", "7",
                                        "--out", path("b.tsv")};
    ASSERT_EQ(run(sf_a).code, 0);
    ASSERT_EQ(run(sf_b).code, 0);
    EXPECT_EQ(slurp(path("a.tsv")), slurp(path("b.tsv")));
    EXPECT_EQ(lines(slurp(path("a.tsv"))).front(), "# sf gamma=2.001 n=100 seed=7");
    EXPECT_EQ(lines(slurp(path("a.tsv"))).size(), 383u);

    for (const char* name : {"r1.csv", "r2.csv"})
        ASSERT_EQ(run({"attack", "--input", path("a.tsv"), "--strategy", "random", "--trials", "10", "--seed", "3",
                       "--csv", path(name)})
                      .code,
                  0);
    EXPECT_EQ(slurp(path("r1.csv")), slurp(path("r2.csv")));
}

TEST_F(CliTest, SfValidation)
{
    EXPECT_EQ(run({"sf", "--n", "5", "--gamma", "2.5", "--kbar", "5"}).code, 2);
    EXPECT_EQ(run({"sf", "--n", "50", "--gamma", "1.5", "--kbar", "2"}).code, 2);
}

TEST_F(CliTest, Help)
{
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("crt"), std::string::npos);
}
