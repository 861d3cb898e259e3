#include <doctest.h>

#include "hatgame/error.hpp"
#include "hatgame/solver.hpp"
#include "oracles.hpp"

using namespace hatgame;

namespace {

SolveLimits with_engine(SearchEngine e) {
    SolveLimits l;
    l.engine = e;
    return l;
}

bool wins(const Game& g, SearchEngine e = SearchEngine::learning) {
    const Verdict v = exact_solve(g, with_engine(e));
    REQUIRE_FALSE(is_inconclusive(v));
    if (is_winning(v)) {
        CHECK_FALSE(verify_strategy(g, std::get<Winning>(v).strategy).has_value());
    }
    return is_winning(v);
}

} // namespace

TEST_CASE("solver on the standard small games") {
    for (auto e : {SearchEngine::learning, SearchEngine::cover}) {
        CAPTURE(static_cast<int>(e));
        CHECK(wins(oracle::path({2, 2}), e));
        CHECK_FALSE(wins(oracle::path({2}), e));
        CHECK(wins(oracle::path({1}), e));
        CHECK_FALSE(wins(oracle::path({2, 5, 2}), e));
        CHECK(wins(oracle::cycle({3, 3, 3, 3}), e));
    }
    CHECK_FALSE(wins(oracle::cycle({3, 3, 3, 3, 3})));
}

TEST_CASE("solver agrees with the profile brute force on tiny games") {
    oracle::Gen gen(2024);
    int checked = 0;
    while (checked < 150) {
        Game g = oracle::random_game(gen, 4, 3, 0.6);
        auto p = oracle::plain(g);
        if (oracle::profile_count(p, 1u << 18) > (1u << 18)) {
            continue;
        }
        ++checked;
        const bool truth = oracle::brute_force_winning(p);
        CAPTURE(g.hatness());
        CHECK(wins(g, SearchEngine::learning) == truth);
        CHECK(wins(g, SearchEngine::cover) == truth);
    }
}

TEST_CASE("the two engines agree on cycles and small graphs") {
    oracle::Gen gen(77);
    for (int round = 0; round < 60; ++round) {
        Game g = oracle::random_game(gen, 5, 3, 0.5);
        CAPTURE(g.hatness());
        CHECK(wins(g, SearchEngine::learning) == wins(g, SearchEngine::cover));
    }
    for (auto h : std::vector<std::vector<Hat>>{{2, 3, 3, 3}, {2, 3, 3, 5}, {2, 2, 3, 3}, {3, 3, 4}, {2, 4, 4}}) {
        Game g = h.size() == 3 ? oracle::cycle(h) : oracle::cycle(h);
        CHECK(wins(g, SearchEngine::learning) == wins(g, SearchEngine::cover));
    }
}

TEST_CASE("both branch rules of the cover engine agree") {
    oracle::Gen gen(8);
    for (int round = 0; round < 40; ++round) {
        Game g = oracle::random_game(gen, 5, 3, 0.5);
        SolveLimits a = with_engine(SearchEngine::cover);
        SolveLimits b = a;
        b.branch_rule = BranchRule::fewest_candidates;
        CHECK(is_winning(exact_solve(g, a)) == is_winning(exact_solve(g, b)));
    }
}

TEST_CASE("disconnected games win iff some component wins") {
    oracle::Gen gen(31);
    for (int round = 0; round < 80; ++round) {
        Game g = oracle::random_game(gen, 6, 3, 0.3);
        if (g.graph().connected()) {
            continue;
        }
        bool some = false;
        for (const auto& comp : g.graph().components()) {
            some = some || wins(subgame(g, comp).game);
        }
        CHECK(wins(g) == some);
    }
}

TEST_CASE("a winning subgame makes the whole game winning") {
    oracle::Gen gen(99);
    for (int round = 0; round < 60; ++round) {
        Game g = oracle::random_game(gen, 5, 3, 0.6);
        std::vector<Vertex> keep;
        for (Vertex v = 0; v < g.size(); ++v) {
            if (gen.coin()) {
                keep.push_back(v);
            }
        }
        if (keep.empty()) {
            continue;
        }
        if (wins(subgame(g, keep).game)) {
            CHECK(wins(g));
        }
    }
}

TEST_CASE("results are deterministic, strategy included") {
    Game g = oracle::cycle({3, 3, 3, 3});
    for (auto e : {SearchEngine::learning, SearchEngine::cover}) {
        const Verdict a = exact_solve(g, with_engine(e));
        const Verdict b = exact_solve(g, with_engine(e));
        REQUIRE(is_winning(a));
        CHECK(std::get<Winning>(a).strategy == std::get<Winning>(b).strategy);
        CHECK(std::get<Winning>(a).stats.nodes_explored == std::get<Winning>(b).stats.nodes_explored);
    }
}

TEST_CASE("losing statistics are consistent") {
    for (auto e : {SearchEngine::learning, SearchEngine::cover}) {
        const Verdict v = exact_solve(oracle::cycle({2, 3, 3, 5}), with_engine(e));
        REQUIRE(is_losing(v));
        const auto& s = std::get<Losing>(v).stats;
        CHECK(s.colorings_total == 90);
        CHECK(s.colorings_covered < s.colorings_total);
        CHECK(s.nodes_explored > 0);
    }
    // the capacity bound settles reciprocal sums below 1 before any search
    const Verdict k = exact_solve(oracle::cycle({3, 3, 4}));
    REQUIRE(is_losing(k));
    CHECK(std::get<Losing>(k).stats.capacity_prunes == 1);
    CHECK(std::get<Losing>(k).stats.nodes_explored == 0);
}

TEST_CASE("limits") {
    SolveLimits tiny;
    tiny.max_colorings = 10;
    CHECK_THROWS_AS(exact_solve(oracle::cycle({3, 3, 3, 3}), tiny), Error);
    SolveLimits bad;
    bad.max_nodes = 0;
    try {
        exact_solve(oracle::path({2, 2}), bad);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidLimits);
    }
    SolveLimits few;
    few.max_nodes = 5;
    for (auto e : {SearchEngine::learning, SearchEngine::cover}) {
        few.engine = e;
        const Verdict v = exact_solve(oracle::cycle({3, 3, 3, 3, 3}), few);
        REQUIRE(is_inconclusive(v));
        CHECK(std::get<Inconclusive>(v).limit_hit == Limit::nodes);
    }
    Game big = oracle::path({65, 2});
    try {
        exact_solve(big);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLarge);
    }
}

TEST_CASE("verify_strategy examples") {
    Game k2 = oracle::path({2, 2});
    Strategy zero = Strategy::constant(k2, 0);
    auto bad = verify_strategy(k2, zero);
    REQUIRE(bad.has_value());
    CHECK(*bad == Coloring{1, 1});

    // the classic K2 strategy: one guesses what it sees, the other the opposite
    Strategy s = Strategy::constant(k2, 0);
    s.set(0, 0, 0);
    s.set(0, 1, 1);
    s.set(1, 0, 1);
    s.set(1, 1, 0);
    CHECK_FALSE(verify_strategy(k2, s).has_value());

    Game with_one = oracle::path({1, 7, 7});
    CHECK_FALSE(verify_strategy(with_one, Strategy::constant(with_one, 0)).has_value());
}

TEST_CASE("verify_strategy rejects malformed strategies") {
    Game k2 = oracle::path({2, 2});
    Strategy blank = Strategy::blank(k2);
    try {
        verify_strategy(k2, blank);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IncompleteStrategy);
    }
    Strategy wide = Strategy::constant(k2, 2);
    try {
        verify_strategy(k2, wide);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GuessOutOfRange);
    }
    Strategy other = Strategy::constant(oracle::path({2, 2, 2}), 0);
    CHECK_THROWS_AS(verify_strategy(k2, other), Error);
}

TEST_CASE("verify_strategy finds the canonically first losing coloring") {
    oracle::Gen gen(4);
    for (int round = 0; round < 40; ++round) {
        Game g = oracle::random_game(gen, 4, 3);
        Strategy s = Strategy::constant(g, 0);
        for (Vertex v = 0; v < g.size(); ++v) {
            for (std::uint64_t i = 0; i < s.table(v).size(); ++i) {
                s.set(v, i, static_cast<Hat>(gen.below(g.hatness(v))));
            }
        }
        std::optional<Coloring> first;
        Coloring phi(g.size(), 0);
        do {
            bool hit = false;
            for (Vertex v = 0; v < g.size(); ++v) {
                hit = hit || s.guess(v, g.view_index(v, phi)) == phi[v];
            }
            if (!hit) {
                first = phi;
                break;
            }
        } while (next_coloring(g, phi));
        CHECK(verify_strategy(g, s) == first);
    }
}
