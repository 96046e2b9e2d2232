#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mcbench/gml.hpp"
#include "mcbench/graph.hpp"
#include "mcbench/instance_name.hpp"
#include "mcbench/text.hpp"
#include "support.hpp"

using namespace mcbench;
using namespace testing_support;

TEST_CASE("cut_value examples") {
    const auto k3 = complete_graph(3);
    CHECK(cut_value(k3, Cut({1, 1, -1})) == 2.0);
    CHECK(cut_value(k3, Cut({1, 1, 1})) == 0.0);

    const WeightedGraph path(3, {{0, 1, 2.0}, {1, 2, 3.0}});
    CHECK(cut_value(path, Cut({1, -1, 1})) == 5.0);

    CHECK_THROWS_AS(cut_value(k3, Cut({1, -1})), ContractError);
}

TEST_CASE("total_weight examples") {
    CHECK(total_weight(complete_graph(3)) == 3.0);
    CHECK(total_weight(single_edge(7.0)) == 7.0);
    CHECK(total_weight(WeightedGraph(4, {})) == 0.0);
}

TEST_CASE("graph construction enforces the invariants") {
    CHECK_THROWS_AS(WeightedGraph(1, {}), ContractError);
    CHECK_THROWS_AS(WeightedGraph(3, {{1, 1, 1.0}}), ContractError);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 3, 1.0}}), ContractError);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 0.0}}), ContractError);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, -1.0}}), ContractError);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), ContractError);

    const WeightedGraph g(3, {{2, 0, 1.5}, {1, 0, 1.0}});
    REQUIRE(g.edges().size() == 2);
    CHECK(g.edges()[0] == Edge{0, 1, 1.0});
    CHECK(g.edges()[1] == Edge{0, 2, 1.5});
    CHECK(g.degree(0) == 2);
    CHECK(g.is_connected());
    CHECK_FALSE(WeightedGraph(3, {{0, 1, 1.0}}).is_connected());
}

TEST_CASE("cut canonical form and bit encoding") {
    const Cut c({-1, 1, -1, 1});
    CHECK_FALSE(c.is_canonical());
    CHECK(c.canonical() == Cut({1, -1, 1, -1}));
    CHECK(c.complement() == c.canonical());
    CHECK(Cut::from_bits(0b1010, 4) == Cut({1, -1, 1, -1}));
    CHECK(Cut({1, -1, 1, -1}).to_bits() == 0b1010);
    CHECK_THROWS_AS(Cut({1, 0, -1}), ContractError);
}

TEST_CASE("cut value properties on random graphs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_graph(rng, 2, 14, trial % 2 == 0);
        const std::uint64_t bits = rng() & ((std::uint64_t{1} << g.n()) - 1);
        const Cut x = Cut::from_bits(bits, g.n());
        const double v = cut_value(g, x);
        CHECK(v == doctest::Approx(cut_value(g, x.complement())).epsilon(1e-12));
        CHECK(v == doctest::Approx(direct_cut(g, bits)).epsilon(1e-12));
        CHECK(v == doctest::Approx(cut_value_bits(g, bits)).epsilon(1e-12));
        CHECK(v >= 0.0);
        CHECK(v <= total_weight(g) * (1 + 1e-12));
    }
}

TEST_CASE("proper 2-colouring of a bipartite graph cuts every edge") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 9);
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if ((i + j) % 2 == 1 && rng() % 2 == 0) edges.push_back({i, j, 1.0 + static_cast<double>(rng() % 5)});
            }
        }
        if (edges.empty()) continue;
        const WeightedGraph g(n, edges);
        std::vector<int8_t> signs(n);
        for (int v = 0; v < n; ++v) signs[v] = v % 2 == 0 ? 1 : -1;
        CHECK(cut_value(g, Cut(signs)) == total_weight(g));
    }
}

TEST_CASE("GML round trip of K3") {
    const auto k3 = complete_graph(3);
    const std::string text = write_gml(k3);
    std::size_t nodes = 0, edges = 0;
    for (auto line : split(text, '\n')) {
        nodes += line.find("node [") != std::string_view::npos;
        edges += line.find("edge [") != std::string_view::npos;
    }
    CHECK(nodes == 3);
    CHECK(edges == 3);
    CHECK(parse_gml(text) == k3);
}

TEST_CASE("GML parse errors name the offending line") {
    const std::string missing_weight = "graph [\n  node [ id 0 ]\n  node [ id 1 ]\n  edge [ source 0 target 1 ]\n]\n";
    try {
        parse_gml(missing_weight);
        FAIL("missing weight accepted");
    } catch (const GmlParseError& e) {
        CHECK(e.line() == 4);
    }

    const std::string negative =
        "graph [\n  node [ id 0 ]\n  node [ id 1 ]\n  edge [ source 0 target 1 weight -1 ]\n]\n";
    CHECK_THROWS_AS(parse_gml(negative), GmlParseError);

    const std::string duplicate =
        "graph [\n node [ id 0 ]\n node [ id 1 ]\n edge [ source 0 target 1 weight 1 ]\n"
        " edge [ source 1 target 0 weight 2 ]\n]\n";
    try {
        parse_gml(duplicate);
        FAIL("duplicate edge accepted");
    } catch (const GmlParseError& e) {
        CHECK(e.line() == 5);
    }

    CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 ] node [ id 2 ] ]"), GmlParseError);
    CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 ] node [ id 1 ] edge [ source 0 target 0 weight 1 ] ]"),
                    GmlParseError);
    CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 ] node [ id 1 ] ] trailing"), GmlParseError);
    CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 ] node [ id 1 ] colour red ]"), GmlParseError);
    CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 ] node [ id 1 ]"), GmlParseError);
}

TEST_CASE("GML parsing is whitespace-insensitive") {
    const auto g = parse_gml("graph[node[id 0]node[id 1]\n\n node [ id 2 ] edge[source 2 target 0 weight 0.25]]");
    CHECK(g == WeightedGraph(3, {{0, 2, 0.25}}));
}

TEST_CASE("GML round trip preserves random weights exactly") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_graph(rng, 2, 20, true);
        CHECK(parse_gml(write_gml(g)) == g);
    }
}

TEST_CASE("instance names of the n=29 benchmark suite") {
    CHECK(format_name(InstanceName::ba(29, 9, 132)) == "ba_n-29_m-9_132");
    CHECK(format_name(InstanceName::er(29, 0.227, 123)) == "er_n-29_p-0.227_123");
    CHECK(format_name(InstanceName::cws(29, 6, 0.412, 148)) == "cws_n-29_k-6_p-0.412_148");
    for (const char* name : {"ba_n-29_m-9_132", "er_n-29_p-0.227_123", "cws_n-29_k-6_p-0.412_148", "ba_n-29_m-6_239",
                             "er_n-29_p-0.493_195", "cws_n-29_k-6_p-0.229_199"}) {
        CHECK(format_name(parse_name(name)) == name);
    }
    CHECK(parse_name("cws_n-29_k-6_p-0.229_199.gml") == InstanceName::cws(29, 6, 0.229, 199));
    CHECK(format_name(InstanceName::er(12, 0.5, 1)) == "er_n-12_p-0.500_1");
}

TEST_CASE("instance name parse errors") {
    for (const char* bad : {"xx_n-29_m-9_132", "ba_n-x_m-9_132", "ba_n-29_m-9", "er_n-29_q-0.2_1",
                            "cws_n-29_k-6_132", "ba_n-29_m-9_132_7", ""}) {
        CHECK_THROWS_AS(parse_name(bad), NameParseError);
    }
}

TEST_CASE("instance name round trip on random names") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 40);
        const double p = static_cast<double>(rng() % 1001) / 1000.0;
        const long long id = static_cast<long long>(rng() % 100000);
        InstanceName name;
        switch (trial % 3) {
            case 0: name = InstanceName::er(n, p, id); break;
            case 1: name = InstanceName::ba(n, 1 + static_cast<int>(rng() % 10), id); break;
            default: name = InstanceName::cws(n, 2 * (1 + static_cast<int>(rng() % 5)), p, id); break;
        }
        CHECK(parse_name(format_name(name)) == name);
        CHECK(parse_name(file_name(name)) == name);
    }
}

TEST_CASE("number formatting round-trips") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(format_fixed(0.5, 3) == "0.500");
    CHECK_FALSE(parse_double("1.0x").has_value());
    CHECK(parse_int("-12") == -12);
    CHECK_FALSE(parse_int("12.5").has_value());
}
