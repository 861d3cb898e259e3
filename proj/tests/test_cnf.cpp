#include <doctest.h>

#include <sstream>

#include "hatgame/cnf.hpp"
#include "hatgame/error.hpp"
#include "hatgame/solver.hpp"
#include "oracles.hpp"

using namespace hatgame;

TEST_CASE("single vertex with one color") {
    const CnfDocument d = export_cnf(oracle::path({1}));
    CHECK(d.variable_count == 1);
    CHECK(d.clauses == std::vector<std::vector<std::int64_t>>{{1}, {1}});
    CHECK(oracle::brute_force_sat(d).has_value());
}

TEST_CASE("single vertex with two colors is unsatisfiable") {
    const CnfDocument d = export_cnf(oracle::path({2}));
    CHECK(d.variable_count == 2);
    CHECK(d.clauses == std::vector<std::vector<std::int64_t>>{{1, 2}, {-1, -2}, {1}, {2}});
    CHECK_FALSE(oracle::brute_force_sat(d).has_value());
}

TEST_CASE("K2 with two colors") {
    const CnfDocument d = export_cnf(oracle::path({2, 2}));
    CHECK(d.variable_count == 8);
    // 4 exactly-one groups of 2 clauses each, then 4 coverage clauses
    CHECK(d.clauses.size() == 4 * 2 + 4);
    for (std::size_t i = 8; i < d.clauses.size(); ++i) {
        CHECK(d.clauses[i].size() == 2);
    }
    auto model = oracle::brute_force_sat(d);
    REQUIRE(model.has_value());
    CHECK_FALSE(verify_strategy(oracle::path({2, 2}), decode_model(oracle::path({2, 2}), *model)).has_value());
}

TEST_CASE("every literal is in range and no clause is empty") {
    oracle::Gen gen(3);
    for (int round = 0; round < 30; ++round) {
        Game g = oracle::random_game(gen, 4, 3);
        const CnfDocument d = export_cnf(g);
        CHECK(d.legend.size() == d.variable_count);
        for (const auto& c : d.clauses) {
            CHECK_FALSE(c.empty());
            for (auto lit : c) {
                CHECK(lit != 0);
                CHECK(static_cast<std::uint64_t>(std::abs(lit)) <= d.variable_count);
            }
        }
    }
}

TEST_CASE("legend matches the variable numbering") {
    Game g = oracle::path({2, 3, 2});
    const CnfDocument d = export_cnf(g);
    // vertex v0 sees v1 (3 views) x 2 colors = vars 1..6
    CHECK(d.legend[0].vertex == 0);
    CHECK(d.legend[0].view == View{0});
    CHECK(d.legend[5].view == View{2});
    CHECK(d.legend[5].color == 1);
    // v1 sees (v0, v2): 4 views x 3 colors = vars 7..18
    CHECK(d.legend[6].vertex == 1);
    CHECK(d.legend[6 + 3 * 3 + 2].view == View{1, 1});
    CHECK(d.legend[6 + 3 * 3 + 2].color == 2);
}

TEST_CASE("DIMACS text") {
    Game g = oracle::path({2, 2});
    const std::string text = write_dimacs(g, export_cnf(g));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "c map 1 v0 0 0");
    int maps = 1;
    while (std::getline(in, line) && line.rfind("c map", 0) == 0) {
        ++maps;
    }
    CHECK(maps == 8);
    CHECK(line == "p cnf 8 12");
    int clauses = 0;
    while (std::getline(in, line)) {
        CHECK(line.size() >= 2);
        CHECK(line.substr(line.size() - 2) == " 0");
        ++clauses;
    }
    CHECK(clauses == 12);
    const Game lone = oracle::path({2});
    CHECK(write_dimacs(lone, export_cnf(lone)).rfind("c map 1 v0 - 0\n", 0) == 0);
}

TEST_CASE("satisfiability matches the solver on small games") {
    oracle::Gen gen(41);
    int checked = 0;
    while (checked < 80) {
        Game g = oracle::random_game(gen, 4, 3, 0.5);
        const CnfDocument d = export_cnf(g);
        if (d.variable_count > 20) {
            continue;
        }
        ++checked;
        auto model = oracle::brute_force_sat(d);
        CHECK(model.has_value() == is_winning(exact_solve(g)));
        if (model) {
            CHECK_FALSE(verify_strategy(g, decode_model(g, *model)).has_value());
        }
    }
}

TEST_CASE("test DPLL over the CNF agrees with the solver on mid-size games") {
    const std::vector<std::pair<bool, std::vector<Hat>>> cases{
        {false, {2, 2, 2}}, {false, {2, 3, 2}}, {false, {2, 5, 2}}, {false, {3, 3}},       {false, {2, 4, 2}},
        {false, {2, 3, 3}}, {false, {3, 3, 3}}, {true, {3, 3, 3}},  {true, {2, 2, 2, 2}}, {true, {2, 3, 3, 3}}};
    for (const auto& [is_cycle, h] : cases) {
        Game g = is_cycle ? oracle::cycle(h) : oracle::path(h);
        const CnfDocument d = export_cnf(g);
        oracle::Dpll dpll(d, 1'000'000);
        auto model = dpll.solve();
        CAPTURE(is_cycle);
        CHECK(model.has_value() == is_winning(exact_solve(g)));
        if (model) {
            CHECK_FALSE(verify_strategy(g, decode_model(g, *model)).has_value());
        }
    }
}

TEST_CASE("variable cap") {
    std::vector<Hat> h{64, 64, 64, 64, 64};
    try {
        export_cnf(oracle::cycle(h));
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLarge);
    }
}
