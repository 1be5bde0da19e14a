#include "doctest.h"
#include "test_util.hpp"

#include "netmh/graphlets.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace netmh;

namespace {

std::size_t col(const GdvMatrix& m, const std::string& name) {
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (m.columns[c] == name) return c;
    FAIL("missing column " << name);
    return 0;
}

std::uint64_t row_sum(const GdvMatrix& m, std::size_t r) {
    std::uint64_t s = 0;
    for (auto c : m.row(r)) s += c;
    return s;
}

}  // namespace

TEST_CASE("static GDV of a triangle") {
    Graph g(3, {{0, 1}, {1, 2}, {0, 2}});
    auto gdv = static_gdv(g);
    REQUIRE(gdv.cols() == 15);
    for (std::size_t v = 0; v < 3; ++v) {
        CHECK(gdv.at(v, 0) == 2);
        CHECK(gdv.at(v, 3) == 1);
        CHECK(row_sum(gdv, v) == 3);
    }
    CHECK(oracle::static_gdv(g) == gdv);
}

TEST_CASE("static GDV of a path") {
    Graph g(3, {{0, 1}, {1, 2}});
    auto gdv = static_gdv(g);
    CHECK(gdv.at(0, 0) == 1);
    CHECK(gdv.at(1, 0) == 2);
    CHECK(gdv.at(2, 0) == 1);
    CHECK(gdv.at(0, 1) == 1);
    CHECK(gdv.at(2, 1) == 1);
    CHECK(gdv.at(1, 2) == 1);
    CHECK(row_sum(gdv, 0) == 2);
    CHECK(row_sum(gdv, 1) == 3);
}

TEST_CASE("4-node graphlets land in the expected orbits") {
    struct Case {
        std::vector<Graph::Edge> edges;
        std::vector<std::size_t> orbit;  // 4-node orbit of each node
    };
    std::vector<Case> cases{
        {{{0, 1}, {1, 2}, {2, 3}}, {4, 5, 5, 4}},
        {{{0, 1}, {0, 2}, {0, 3}}, {7, 6, 6, 6}},
        {{{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {8, 8, 8, 8}},
        {{{0, 1}, {0, 2}, {1, 2}, {2, 3}}, {10, 10, 11, 9}},
        {{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, {12, 13, 13, 12}},
        {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {14, 14, 14, 14}},
    };
    for (const auto& c : cases) {
        auto gdv = static_gdv(Graph(4, c.edges));
        for (std::size_t v = 0; v < 4; ++v) {
            CHECK(gdv.at(v, c.orbit[v]) == 1);
            std::uint64_t four = 0;
            for (std::size_t o = 4; o < 15; ++o) four += gdv.at(v, o);
            CHECK(four == 1);
        }
    }
}

TEST_CASE("5-node family has 73 orbits and one G29 clique orbit") {
    std::vector<Graph::Edge> k5;
    for (NodeIndex i = 0; i < 5; ++i)
        for (NodeIndex j = i + 1; j < 5; ++j) k5.emplace_back(i, j);
    auto gdv = static_gdv(Graph(5, k5), 5);
    REQUIRE(gdv.cols() == 73);
    for (std::size_t v = 0; v < 5; ++v) {
        CHECK(gdv.at(v, 72) == 1);
        CHECK(gdv.at(v, 14) == 4);
        CHECK(gdv.at(v, 3) == 6);
    }
}

TEST_CASE("static fast path equals oracle on random graphs, with orbit-count consistency") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng() % 9;
        const double p = 0.1 + 0.5 * static_cast<double>(rng() % 1000) / 1000.0;
        Graph g = testutil::random_graph(n, p, rng);
        auto fast = static_gdv(g, 4);
        auto slow = oracle::static_gdv(g, 4);
        REQUIRE(fast == slow);
        for (std::size_t v = 0; v < n; ++v) CHECK(fast.at(v, 0) == g.degree(static_cast<NodeIndex>(v)));
        // Sum over nodes of a triangle orbit = 3 x number of triangles; each edge counted twice in orbit 0.
        std::uint64_t o0 = 0, o3 = 0, o14 = 0;
        for (std::size_t v = 0; v < n; ++v) {
            o0 += fast.at(v, 0);
            o3 += fast.at(v, 3);
            o14 += fast.at(v, 14);
        }
        CHECK(o0 == 2 * g.num_edges());
        CHECK(o3 % 3 == 0);
        CHECK(o14 % 4 == 0);
    }
}

TEST_CASE("static 5-node fast path equals oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 5 + rng() % 4;
        Graph g = testutil::random_graph(n, 0.2 + 0.05 * static_cast<double>(trial % 8), rng);
        REQUIRE(static_gdv(g, 5) == oracle::static_gdv(g, 5));
    }
}

TEST_CASE("gdc") {
    std::vector<std::uint64_t> zero(15, 0);
    CHECK(gdc(zero) == 0.0);
    std::vector<std::uint64_t> one(15, 0);
    one[0] = 1;
    CHECK(gdc(one) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    std::vector<std::uint64_t> bigger = one;
    bigger[4] = 3;
    CHECK(gdc(one) <= gdc(bigger));
}

TEST_CASE("dynamic GDV: single event") {
    auto d = testutil::network(2, 1, {{0, 1, 0}});
    auto m = dynamic_gdv(d);
    CHECK(m.at(0, col(m, "dg_ab")) == 1);
    CHECK(m.at(1, col(m, "dg_ab")) == 1);
    CHECK(row_sum(m, 0) == 1);
    CHECK(row_sum(m, 1) == 1);
}

TEST_CASE("dynamic GDV: two-event path is ordered") {
    // u=0, v=1, w=2: (u,v) in week 0 then (v,w) in week 1.
    auto d = testutil::network(3, 2, {{0, 1, 0}, {1, 2, 1}});
    auto m = dynamic_gdv(d);
    CHECK(m.at(1, col(m, "dg_ab-ac")) == 1);  // center
    CHECK(m.at(0, col(m, "dg_ab-bc")) == 1);  // end touched first
    CHECK(m.at(2, col(m, "dg_bc-ab")) == 1);  // end touched second
    CHECK(m.at(0, col(m, "dg_bc-ab")) == 0);  // reversed order never happens for u
    CHECK(row_sum(m, 0) == 2);                 // plus its single-event graphlet
    CHECK(row_sum(m, 1) == 3);
}

TEST_CASE("dynamic GDV: events further apart than the gap are not chained") {
    auto d = testutil::network(3, 4, {{0, 1, 0}, {1, 2, 3}});
    auto m = dynamic_gdv(d);
    CHECK(row_sum(m, 1) == 2);
    DynamicGraphletConfig wide{3, 3, 3};
    auto w = dynamic_gdv(d, wide);
    CHECK(row_sum(w, 1) == 3);
}

TEST_CASE("dynamic graphlet config validation") {
    CHECK_THROWS(DynamicGraphletConfig{1, 3, 1}.validate());
    CHECK_THROWS(DynamicGraphletConfig{4, 2, 1}.validate());
    CHECK_THROWS(DynamicGraphletConfig{3, 3, -1}.validate());
    CHECK_NOTHROW(DynamicGraphletConfig{4, 4, 2}.validate());
}

TEST_CASE("dynamic fast path equals oracle on random networks") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        auto d = testutil::random_network(2 + rng() % 7, 1 + rng() % 5, 0.1 + 0.5 * static_cast<double>(rng() % 100) / 100.0, rng);
        REQUIRE(dynamic_gdv(d) == oracle::dynamic_gdv(d));
    }
}

TEST_CASE("dynamic fast path equals oracle for 4-node graphlets") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 15; ++trial) {
        auto d = testutil::random_network(4 + rng() % 4, 2 + rng() % 3, 0.15 + 0.05 * static_cast<double>(trial % 5), rng);
        DynamicGraphletConfig cfg{4, 4, 1};
        REQUIRE(dynamic_gdv(d, cfg) == oracle::dynamic_gdv(d, cfg));
    }
}

TEST_CASE("GoT column layout") {
    CHECK(got_columns(3).size() == 24);
    CHECK(got_columns(4).size() == 255);
    CHECK(got_columns(3).back() == "got_d_3");
    CHECK_THROWS(got_columns(5));
}

TEST_CASE("GoT: an edge alone never forms a connected triple") {
    auto d = testutil::network(3, 2, {{0, 1, 0}, {0, 1, 1}});
    auto m = got(d, 3);
    for (auto c : m.counts) CHECK(c == 0);
}

TEST_CASE("GoT: path closing into a triangle") {
    // a=0, b=1, c=2: path a-b-c at week 0, triangle at week 1.
    auto d = testutil::network(3, 2, {{0, 1, 0}, {1, 2, 0}, {0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    auto m = got(d, 3);
    CHECK(m.at(1, col(m, "got_2_3")) == 1);
    CHECK(m.at(0, col(m, "got_1_3")) == 1);
    CHECK(m.at(2, col(m, "got_1_3")) == 1);
    CHECK(row_sum(m, 0) == 1);
    CHECK(row_sum(m, 1) == 1);
}

TEST_CASE("GoT needs two snapshots") {
    auto d = testutil::network(3, 1, {{0, 1, 0}});
    CHECK_THROWS(got(d, 3));
}

TEST_CASE("GoT fast path equals oracle; time reversal transposes transitions") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        auto d = testutil::random_network(3 + rng() % 6, 2 + rng() % 4, 0.1 + 0.5 * static_cast<double>(rng() % 100) / 100.0, rng);
        const int k = trial % 2 ? 4 : 3;
        auto fast = got(d, k);
        REQUIRE(fast == oracle::got(d, k));

        auto rev = got(testutil::reversed(d), k);
        std::map<std::string, std::size_t> index;
        for (std::size_t c = 0; c < rev.cols(); ++c) index[rev.columns[c]] = c;
        for (std::size_t c = 0; c < fast.cols(); ++c) {
            const auto& name = fast.columns[c];  // got_<a>_<b>
            auto first = name.find('_', 4);
            auto swapped = "got_" + name.substr(first + 1) + "_" + name.substr(4, first - 4);
            for (std::size_t v = 0; v < fast.rows; ++v) CHECK(fast.at(v, c) == rev.at(v, index.at(swapped)));
        }
    }
}

TEST_CASE("dynamic GDV and GoT are permutation-equivariant") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        auto d = testutil::random_network(7, 4, 0.35, rng);
        std::vector<NodeIndex> perm(7);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto p = testutil::permuted(d, perm);
        auto a = dynamic_gdv(d), b = dynamic_gdv(p);
        auto ga = got(d, 3), gb = got(p, 3);
        for (std::size_t v = 0; v < 7; ++v) {
            for (std::size_t c = 0; c < a.cols(); ++c) CHECK(a.at(v, c) == b.at(perm[v], c));
            for (std::size_t c = 0; c < ga.cols(); ++c) CHECK(ga.at(v, c) == gb.at(perm[v], c));
        }
    }
}

TEST_CASE("oracles reject oversized input") {
    Graph big(11, {{0, 1}});
    CHECK_THROWS(oracle::static_gdv(big));
    std::mt19937_64 rng(1);
    auto d = testutil::random_network(9, 2, 0.3, rng);
    CHECK_THROWS(oracle::dynamic_gdv(d));
    CHECK_THROWS(oracle::got(d, 3));
    auto long_net = testutil::random_network(4, 6, 0.3, rng);
    CHECK_THROWS(oracle::dynamic_gdv(long_net));
}
