#ifndef HATGAME_SOLVER_HPP
#define HATGAME_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <variant>

#include "hatgame/game.hpp"
#include "hatgame/strategy.hpp"

namespace hatgame {

// Which uncovered coloring the search branches on.
enum class BranchRule {
    first_uncovered,   // canonically-first uncovered coloring
    fewest_candidates, // uncovered coloring with the fewest open vertices; ties by canonical order
};

enum class SearchEngine {
    cover,    // plain backtracking cover search, branching per BranchRule
    learning, // conflict-driven search with learned nogoods over the same entries
};

struct SolveLimits {
    std::uint64_t max_colorings = 100'000;
    // Search-node budget: branch nodes for the cover engine, decisions for the learning engine.
    std::uint64_t max_nodes = 50'000'000;
    double timeout_seconds = 300.0;
    SearchEngine engine = SearchEngine::learning;
    BranchRule branch_rule = BranchRule::first_uncovered;
};

enum class Limit { nodes, timeout };

struct SearchStats {
    std::uint64_t nodes_explored = 0;
    std::uint64_t conflicts = 0;
    // Most colorings covered simultaneously at any observed point of the search
    // (the learning engine samples every 64th conflict).
    std::uint64_t colorings_covered = 0;
    std::uint64_t colorings_total = 0;
    // Subtrees cut by the coverage-capacity bound.
    std::uint64_t capacity_prunes = 0;
};

struct Winning {
    Strategy strategy;
    SearchStats stats;
};

struct Losing {
    SearchStats stats;
};

struct Inconclusive {
    Limit limit_hit = Limit::nodes;
    SearchStats stats;
};

using Verdict = std::variant<Winning, Losing, Inconclusive>;

inline bool is_winning(const Verdict& v) { return std::holds_alternative<Winning>(v); }
inline bool is_losing(const Verdict& v) { return std::holds_alternative<Losing>(v); }
inline bool is_inconclusive(const Verdict& v) { return std::holds_alternative<Inconclusive>(v); }

// Decides <G,h> by exhaustive search over strategy entries, one entry per
// (vertex, view) pair.
//
// The cover engine walks the colorings that no fixed entry covers yet. For an
// uncovered coloring it branches over the vertices whose entry on that
// coloring's view is still open: branch i sets vertex i's entry to its color in
// the coloring and, for every earlier branch j, forbids vertex j's entry from
// taking vertex j's color (that case was already explored). Forced entries are
// propagated, and a subtree is abandoned when the open entries cannot cover the
// remaining colorings even in the best case.
//
// The learning engine decides the same entry/coverage constraints with
// conflict analysis, so each refuted partial strategy is recorded as a nogood.
//
// Both engines first apply the same two sound reductions: a game whose
// open entries cannot cover every coloring even without overlap is losing,
// and (by relabeling each player's colors in turn) every player's guess on the
// all-zero view may be taken to be 0 or 1.
//
// Winning strategies fill entries the search left open with guess 0 and are
// checked with verify_strategy before being returned. Results are
// deterministic for fixed limits, timeouts aside.
//
// Throws Error(TooLarge) when the coloring count exceeds limits.max_colorings
// or a hatness exceeds 64, Error(InvalidLimits) for non-positive limits.
Verdict exact_solve(const Game& game, const SolveLimits& limits = {});

// nullopt if the strategy wins on every coloring, else the canonically-first
// losing coloring. Throws Error(IncompleteStrategy) on a missing entry or a
// table shaped for another game, Error(GuessOutOfRange) on a guess >= h(v).
std::optional<Coloring> verify_strategy(const Game& game, const Strategy& strategy);

} // namespace hatgame

#endif
