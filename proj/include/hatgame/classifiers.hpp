#ifndef HATGAME_CLASSIFIERS_HPP
#define HATGAME_CLASSIFIERS_HPP

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <string>
#include <vector>

#include "hatgame/game.hpp"
#include "hatgame/error.hpp"
#include "hatgame/solver.hpp"

namespace hatgame {

enum class Outcome { winning, losing };

std::string_view to_string(Outcome o);

// Leaf-deletion fold over a path's hatness sequence:
// w1 = h1, w_i = ceil(h_i * (w_{i-1} - 1) / w_{i-1}), stopping at the first w_i = 1.
// The returned prefix ends at that 1 when one occurs.
std::vector<Hat> path_fold(std::span<const Hat> hatness);

struct PathDecision {
    Outcome verdict = Outcome::losing;
    std::vector<Hat> left_fold;
    std::vector<Hat> right_fold;
    // The two folds disagreed and the verdict came from exact_solve.
    bool fold_disagreement = false;
};

// Decides the path game with hatnesses `hatness` in path order. When the left
// and right folds disagree the exact solver decides; if it cannot (too large,
// or out of budget) throws Error(FoldDisagreement). Throws Error(EmptySubset)
// on an empty sequence.
//
// The fold is a heuristic here. It is checked against the solver on short
// paths only, and both directions can agree on a wrong answer for longer
// ones: (3,3,2,3,3) folds to 1 either way but is losing.
PathDecision decide_path(std::span<const Hat> hatness, const SolveLimits& fallback = {});

// 1/h1 + 1/h2 + 1/h3 >= 1, compared exactly. Zero hatness counts as losing.
bool triangle_winning(Hat h1, Hat h2, Hat h3);

// Vertices of a cycle graph in traversal order, starting at vertex 0 and
// moving to its lower-indexed neighbor; nullopt unless the graph is a single
// cycle on >= 3 vertices.
std::optional<std::vector<Vertex>> cycle_order(const Graph& g);

// Vertices of a path graph from its lower-indexed end; nullopt unless the
// graph is a path (a single vertex counts).
std::optional<std::vector<Vertex>> path_order(const Graph& g);

enum class CycleCondition {
    none,
    length,        // length 4 or divisible by 3, all hatness <= 3
    triangle,      // length 3 and reciprocal sum >= 1
    proper_arc,    // some proper arc is a winning path
    sequence,      // (2,3,3) or (3,2,3) run and all hatness <= 4
};

int condition_number(CycleCondition c);

struct CycleClassification {
    Outcome verdict = Outcome::losing;
    CycleCondition witness = CycleCondition::none;
    // For proper_arc: the arc in cycle order. For sequence: the three vertices
    // of the first matching run.
    std::vector<Vertex> witness_vertices;
    // Every condition that holds, in numeric order.
    std::vector<CycleCondition> satisfied;
};

// Classifies a game on a cycle. When several conditions hold the witness is
// picked in the order: proper arc, length, triangle, sequence. A vertex of
// hatness 1 is itself a winning proper arc. Throws Error(NotACycle).
CycleClassification classify_cycle(const Game& game, const SolveLimits& fallback = {});

struct HatnessUpdate {
    std::string vertex;
    Hat before = 0;
    Hat after = 0;
};

struct ReductionResult {
    Game reduced;
    std::vector<std::string> removed;
    std::vector<HatnessUpdate> updates;
};

// Deletes u and v from a cycle through consecutive t,u,v,w with h(v) > h(u):
// h'(t) = h(t) - floor(h(t)/h(u)), h'(w) = ceil(h(w) * (k-1)/k) with
// k = ceil(h(v)/h(u)). If the result is losing so is the cycle.
// Throws NotACycle, UnknownVertex, or PreconditionViolated (length < 4, not
// consecutive, h(v) <= h(u), or h(u) = 1 which would zero out t).
ReductionResult reduce_delete2(const Game& game, std::string_view t, std::string_view u, std::string_view v,
                               std::string_view w);

// For a path with h(v) = 5: the maximal connected proper subpaths (the path
// minus its first vertex, minus its last). The path wins iff one of them does.
// Empty for a single vertex. Throws NotAPath, UnknownVertex, NoHatness5Vertex.
std::vector<Game> reduce_h5_path(const Game& game, std::string_view v);

enum class BlockKind { edge, cycle };

struct Block {
    BlockKind kind = BlockKind::edge;
    // Edge blocks: both ends, low first. Cycle blocks: traversal order from the
    // lowest vertex toward its lower neighbor. Anything else (non-cactus
    // blocks): sorted.
    std::vector<Vertex> vertices;
    std::size_t edge_count = 0;
};

struct CactusReport {
    bool is_cactus = false;
    std::vector<Block> blocks;
    std::size_t triangle_count = 0;
    std::size_t cycle_count = 0;
    bool good_cycle = false;
    std::vector<std::size_t> leaf_cycles; // indices into blocks
    int hg = 0;
    // 1, 2 or 3 for the statement that fixed hg; 0 for the single vertex.
    int statement = 0;
};

class NotCactusError : public Error {
public:
    NotCactusError(CactusReport report, const std::string& message)
        : Error(ErrorCode::NotCactus, message), report_(std::move(report)) {}
    const CactusReport& report() const noexcept { return report_; }

private:
    CactusReport report_;
};

// Blocks in the order a depth-first search from vertex 0 closes them.
// Throws Error(Disconnected) or NotCactusError.
CactusReport analyze_cactus(const Graph& graph);

} // namespace hatgame

#endif
