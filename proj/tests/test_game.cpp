#include <doctest.h>

#include <set>

#include "hatgame/error.hpp"
#include "hatgame/game.hpp"
#include "oracles.hpp"

using namespace hatgame;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::SyntaxError;
}

GameSpec spec(std::vector<std::string> vs, std::vector<IdPair> es, std::map<std::string, std::int64_t, std::less<>> h) {
    return GameSpec{std::move(vs), std::move(es), std::move(h)};
}

} // namespace

TEST_CASE("validate accepts a well-formed triangle") {
    Game g = validate(spec({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}}, {{"a", 2}, {"b", 4}, {"c", 4}}));
    CHECK(g.size() == 3);
    CHECK(g.graph().edge_count() == 3);
    CHECK(g.hatness() == std::vector<Hat>{2, 4, 4});
}

TEST_CASE("validate reports each kind of bad input") {
    CHECK(code_of([] { validate(spec({"a"}, {{"a", "a"}}, {{"a", 2}})); }) == ErrorCode::SelfLoop);
    CHECK(code_of([] { validate(spec({"a"}, {{"a", "b"}}, {{"a", 2}})); }) == ErrorCode::UnknownEndpoint);
    CHECK(code_of([] { validate(spec({"a"}, {}, {{"a", 0}})); }) == ErrorCode::NonPositiveHatness);
    CHECK(code_of([] { validate(spec({"a"}, {}, {{"a", -3}})); }) == ErrorCode::NonPositiveHatness);
    CHECK(code_of([] { validate(spec({"a", "b"}, {}, {{"a", 2}})); }) == ErrorCode::DomainMismatch);
    CHECK(code_of([] { validate(spec({"a"}, {}, {{"a", 2}, {"z", 2}})); }) == ErrorCode::DomainMismatch);
    CHECK(code_of([] { validate(spec({"a", "a"}, {}, {{"a", 2}})); }) == ErrorCode::DuplicateVertex);
    CHECK(code_of([] { validate(spec({"a", "b"}, {{"a", "b"}, {"b", "a"}}, {{"a", 2}, {"b", 2}})); }) ==
          ErrorCode::DuplicateEdge);
    CHECK(code_of([] { validate(spec({"a-b"}, {}, {{"a-b", 2}})); }) == ErrorCode::InvalidIdentifier);
}

TEST_CASE("error messages name the offender") {
    try {
        validate(spec({"a"}, {{"a", "a"}}, {{"a", 2}}));
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
}

TEST_CASE("neighbors are in canonical order regardless of edge order") {
    Game g = oracle::from_edges(4, {{3, 0}, {2, 0}, {0, 1}}, {2, 2, 2, 2});
    auto nb = g.graph().neighbors(0);
    CHECK(std::vector<Vertex>(nb.begin(), nb.end()) == std::vector<Vertex>{1, 2, 3});
}

TEST_CASE("views are indexed with the first neighbor most significant") {
    Game g = oracle::from_edges(3, {{0, 1}, {0, 2}}, {2, 3, 4});
    // vertex 0 sees (c1, c2) with c1 < 3, c2 < 4
    CHECK(*g.view_count(0) == 12);
    Coloring c{1, 2, 3};
    CHECK(g.view_index(0, c) == 2 * 4 + 3);
    CHECK(g.decode_view(0, 11) == View{2, 3});
    CHECK(g.encode_view(0, View{1, 0}) == 4);
    for (std::uint64_t i = 0; i < 12; ++i) {
        CHECK(g.encode_view(0, g.decode_view(0, i)) == i);
    }
    CHECK(*g.view_count(1) == 2);
}

TEST_CASE("coloring enumeration yields the product of hatnesses, distinct and in order") {
    oracle::Gen gen(11);
    for (int round = 0; round < 40; ++round) {
        Game g = oracle::random_game(gen, 5, 4);
        std::set<Coloring> seen;
        Coloring phi(g.size(), 0);
        Coloring prev;
        do {
            CHECK(g.is_coloring(phi));
            if (!prev.empty()) {
                CHECK(prev < phi);
            }
            prev = phi;
            seen.insert(phi);
        } while (next_coloring(g, phi));
        CHECK(seen.size() == *g.coloring_count());
        CHECK(phi == Coloring(g.size(), 0));
    }
}

TEST_CASE("coloring count reports overflow") {
    std::vector<Hat> h(70, 2);
    Game g = oracle::from_edges(70, {}, h);
    CHECK_FALSE(g.coloring_count().has_value());
}

TEST_CASE("subgame on two adjacent vertices of a 4-cycle") {
    Game c4 = oracle::cycle({3, 3, 3, 3});
    std::vector<std::string> keep{"v0", "v1"};
    Subgame s = subgame(c4, keep);
    CHECK(s.proper);
    CHECK(s.game == oracle::path({3, 3}));
}

TEST_CASE("subgame on all vertices is the same game and not proper") {
    Game c4 = oracle::cycle({3, 3, 3, 3});
    std::vector<std::string> keep{"v3", "v1", "v2", "v0"};
    Subgame s = subgame(c4, keep);
    CHECK_FALSE(s.proper);
    CHECK(s.game == c4);
}

TEST_CASE("subgame on opposite vertices has no edge") {
    Game c4 = oracle::cycle({3, 3, 3, 3});
    std::vector<std::string> keep{"v0", "v2"};
    Subgame s = subgame(c4, keep);
    CHECK(s.proper);
    CHECK(s.game.graph().edge_count() == 0);
    CHECK(s.game.hatness() == std::vector<Hat>{3, 3});
}

TEST_CASE("subgame errors") {
    Game c4 = oracle::cycle({3, 3, 3, 3});
    std::vector<std::string> none;
    CHECK(code_of([&] { subgame(c4, none); }) == ErrorCode::EmptySubset);
    std::vector<std::string> bad{"zz"};
    CHECK(code_of([&] { subgame(c4, bad); }) == ErrorCode::UnknownVertex);
}

TEST_CASE("restriction composes") {
    oracle::Gen gen(5);
    for (int round = 0; round < 60; ++round) {
        Game g = oracle::random_game(gen, 7, 5);
        std::vector<Vertex> a, b;
        for (Vertex v = 0; v < g.size(); ++v) {
            if (gen.coin(0.7)) {
                a.push_back(v);
            }
        }
        if (a.empty()) {
            a.push_back(0);
        }
        std::vector<std::string> b_ids;
        for (Vertex v : a) {
            if (gen.coin(0.6)) {
                b_ids.push_back(g.id(v));
            }
        }
        if (b_ids.empty()) {
            b_ids.push_back(g.id(a.front()));
        }
        Game inner = subgame(g, a).game;
        CHECK(subgame(inner, b_ids).game == subgame(g, b_ids).game);
    }
}

TEST_CASE("glue two K2(2,2) at their hatness-2 ends gives path (2,4,2)") {
    Game k2 = oracle::path({2, 2});
    Glued gl = glue_graphs(k2, "v1", k2, "v0");
    CHECK(gl.game.hatness() == std::vector<Hat>{2, 4, 2});
    CHECK(gl.game.graph().edge_count() == 2);
    CHECK(gl.game.id(2) == "v1__g2");
    CHECK(gl.merged == 1);
    CHECK(gl.game.graph().adjacent(1, 2));
    CHECK(gl.game.graph().adjacent(0, 1));
}

TEST_CASE("glue two (2,4,4) triangles into the bowtie") {
    Game t = oracle::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}, {2, 4, 4});
    Glued gl = glue_graphs(t, "v0", t, "v0");
    CHECK(gl.game.size() == 5);
    CHECK(gl.game.hatness() == std::vector<Hat>{4, 4, 4, 4, 4});
    CHECK(gl.game.graph().degree(0) == 4);
}

TEST_CASE("glue at a hatness-1 vertex keeps the other side's hatness") {
    Game a = oracle::path({1, 3});
    Game b = oracle::path({5, 2}, "w");
    Glued gl = glue_graphs(a, "v0", b, "w0");
    CHECK(gl.game.hatness(0) == 5);
    Glued back = glue_graphs(b, "w0", a, "v0");
    CHECK(back.game.hatness(0) == 5);
}

TEST_CASE("glue vertex and edge counts") {
    oracle::Gen gen(17);
    for (int round = 0; round < 50; ++round) {
        Game a = oracle::random_game(gen, 5, 3);
        Game b = oracle::random_game(gen, 5, 3);
        const Vertex va = gen.below(a.size());
        const Vertex vb = gen.below(b.size());
        Glued gl = glue_graphs(a, a.id(va), b, b.id(vb));
        CHECK(gl.game.size() == a.size() + b.size() - 1);
        CHECK(gl.game.graph().edge_count() == a.graph().edge_count() + b.graph().edge_count());
        CHECK(gl.game.hatness(gl.merged) == a.hatness(va) * b.hatness(vb));
        // the merged vertex sees both neighborhoods
        CHECK(gl.game.graph().degree(gl.merged) == a.graph().degree(va) + b.graph().degree(vb));
    }
}

TEST_CASE("glue with an unknown vertex") {
    Game k2 = oracle::path({2, 2});
    CHECK(code_of([&] { glue_graphs(k2, "nope", k2, "v0"); }) == ErrorCode::UnknownVertex);
}

TEST_CASE("losing-side glue keeps the first side's hatness") {
    Game a = oracle::path({3, 3});
    Game b = oracle::path({2, 5});
    Glued gl = glue_graphs(a, "v1", b, "v0", MergedHatness::first_side);
    CHECK(gl.game.hatness() == std::vector<Hat>{3, 3, 5});
}
