#include "doctest.h"
#include "test_util.hpp"

#include "netmh/error.hpp"
#include "netmh/netmodel.hpp"

#include <random>
#include <set>

using namespace netmh;

TEST_CASE("parse_events keeps rows and multiplicity") {
    auto ev = parse_events("node_a,node_b,week\na,b,0\nb,c,1\nc,a,2\n");
    CHECK(ev.size() == 3);
    CHECK(ev[1].a == "b");
    CHECK(ev[2].week == 2);
    CHECK(parse_events("u,v,4\nu,v,4\n").size() == 2);
}

TEST_CASE("parse_events rejects malformed rows with their line number") {
    auto line_of = [](const char* text) {
        try {
            parse_events(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("node_a,node_b,week\na,b,0\nu,u,4\n") == 3);
    CHECK(line_of("a,b,x\n") == 1);
    CHECK(line_of("a,b\n") == 1);
    CHECK(line_of("a,b,-1\n") == 1);
    CHECK(line_of("a,b,1.5\n") == 1);
    CHECK(line_of("a b,c,1\n") == 1);
}

TEST_CASE("build_dynamic fills empty weeks and collapses duplicate events") {
    auto ev = parse_events("a,b,0\nb,c,2\na,b,0\nb,a,0\n");
    auto d = build_dynamic(ev, 31);
    REQUIRE(d.num_weeks() == 31);
    CHECK(d.num_nodes() == 3);
    CHECK(d.snapshot(0).graph.num_edges() == 1);
    CHECK(d.snapshot(1).graph.num_edges() == 0);
    CHECK(d.snapshot(2).graph.num_edges() == 1);
    for (std::size_t w = 3; w < 31; ++w) CHECK(d.snapshot(w).graph.num_edges() == 0);
    CHECK(d.nodes().id(0) == "a");
    CHECK_THROWS_AS(build_dynamic(ev, 2), DataError);
}

TEST_CASE("explicit node universe keeps isolated nodes") {
    auto ev = parse_events("a,b,0\n");
    auto d = build_dynamic(ev, 2, std::vector<std::string>{"z", "a", "b"});
    CHECK(d.num_nodes() == 3);
    CHECK(d.snapshot(0).graph.degree(0) == 0);
    CHECK(d.snapshot(0).graph.adjacent(1, 2));
    CHECK_THROWS_AS(build_dynamic(ev, 2, std::vector<std::string>{"a"}), DataError);
}

TEST_CASE("flatten is the union of snapshot edge sets") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto d = testutil::random_network(9, 5, 0.2, rng);
        auto s = flatten(d);
        std::set<Graph::Edge> expected;
        std::size_t total = 0, biggest = 0;
        for (const auto& snap : d.snapshots()) {
            expected.insert(snap.graph.edges().begin(), snap.graph.edges().end());
            total += snap.graph.num_edges();
            biggest = std::max(biggest, snap.graph.num_edges());
        }
        CHECK(std::set<Graph::Edge>(s.graph.edges().begin(), s.graph.edges().end()) == expected);
        CHECK(s.graph.num_edges() <= total);
        CHECK(s.graph.num_edges() >= biggest);
        // Flattening a one-snapshot copy changes nothing.
        DynamicNetwork once(d.nodes(), {Snapshot{0, s.graph}});
        CHECK(flatten(once).graph.edges() == s.graph.edges());
    }
    auto empty = build_dynamic({}, 3, std::vector<std::string>{"a", "b"});
    CHECK(flatten(empty).graph.num_edges() == 0);
}

TEST_CASE("labels: NA per trait, unknown ids, bad values, empty file") {
    NodeUniverse u({"a", "b", "c"});
    auto t = parse_labels("node_id,depressed,anxious\na,1,0\nb,NA,1\nc,0,NA\n", u);
    CHECK(t.num_labeled(Trait::depressed) == 2);
    CHECK(t.num_positive(Trait::depressed) == 1);
    CHECK(t.num_labeled(Trait::anxious) == 2);
    CHECK(t.num_positive(Trait::anxious) == 1);
    auto cohort = t.cohort(Trait::anxious);
    REQUIRE(cohort.size() == 2);
    CHECK(cohort[0] == std::pair<NodeIndex, bool>{0, false});
    CHECK(cohort[1] == std::pair<NodeIndex, bool>{1, true});

    try {
        parse_labels("x,1,0\ny,0,0\n", u);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("x") != std::string::npos);
        CHECK(std::string(e.what()).find("y") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_labels("a,2,0\n", u), ParseError);
    CHECK(parse_labels("", u).num_labeled(Trait::depressed) == 0);
}

TEST_CASE("weekly event counts count both endpoints and every message") {
    auto ev = parse_events("a,b,0\na,b,0\nb,c,3\n");
    auto d = build_dynamic(ev, 31);
    auto counts = weekly_event_counts(ev, d);
    CHECK(counts[0][0] == 2);
    CHECK(counts[1][0] == 2);
    CHECK(counts[1][3] == 1);
    double total = 0;
    for (double v : counts[0]) total += v;
    CHECK(total == 2);
}
