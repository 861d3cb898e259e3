#ifndef HATGAME_CONSTRUCTORS_HPP
#define HATGAME_CONSTRUCTORS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hatgame/game.hpp"
#include "hatgame/solver.hpp"
#include "hatgame/strategy.hpp"

namespace hatgame {

// Residue arcs for the clique strategy: L = lcm of the hatnesses, player i owns
// [start[i], start[i] + width[i]) cut off at L, width[i] = L / h_i and
// start[i] = min(sum of earlier widths, L).
struct ArcTable {
    std::uint64_t modulus = 1;
    std::vector<std::uint64_t> start;
    std::vector<std::uint64_t> width;
};

// Throws Error(Overflow) when the lcm exceeds 2^62, NonPositiveHatness on 0.
ArcTable arc_table(std::span<const Hat> hatness);

// Complete graph on ids "k0".."k<n-1>" (or the given ids) with these hatnesses.
Game clique_game(std::span<const Hat> hatness);
Game clique_game(std::span<const Hat> hatness, std::vector<std::string> ids);

// Player i adds up the others' scaled colors t = sum c_j * L/h_j mod L and
// guesses the one color putting the total inside its own arc; players with an
// empty arc guess 0. Laid out for clique_game(hatness). Throws
// Error(SumBelowOne) when the reciprocal sum is below 1.
Strategy clique_strategy(std::span<const Hat> hatness);

struct GluedStrategy {
    Glued glued;
    Strategy strategy;
};

// Strategy for glue_graphs(g1, v1, g2, v2): the merged color c stands for
// c mod h1(v1) on the g1 side and c div h1(v1) on the g2 side; the merged
// player answers s1's guess + h1(v1) * s2's guess. Throws
// Error(CertificateInvalid) when either input does not verify.
GluedStrategy glue_strategies(const Game& g1, const Strategy& s1, std::string_view v1, const Game& g2,
                              const Strategy& s2, std::string_view v2);

struct RestrictedStrategy {
    Game game;
    Strategy strategy;
};

// Same graph with hatness `lower` (canonical order). Each entry keeps its
// guess, except guesses out of range become 0. Throws Error(HatnessIncrease),
// NonPositiveHatness, DomainMismatch or CertificateInvalid.
RestrictedStrategy restrict_hatness(const Game& game, const Strategy& strategy, std::span<const Hat> lower);

enum class StepKind { clique, solve, glue, restrict };

std::string_view to_string(StepKind k);

// One node of a construction tree. Steps are stored children first; `left`
// and `right` index earlier steps.
struct ProvenanceStep {
    StepKind kind = StepKind::clique;
    // clique and solve: the game's vertices and hatness; solve also its edges.
    std::vector<std::string> ids;
    std::vector<Hat> hatness;
    std::vector<IdPair> edges;
    // glue: left glued at left_vertex to right at right_vertex. restrict: left only.
    std::size_t left = 0;
    std::size_t right = 0;
    std::string left_vertex;
    std::string right_vertex;
    // restrict: new hatness per vertex id; unlisted vertices keep theirs.
    std::map<std::string, Hat, std::less<>> lowered;

    friend bool operator==(const ProvenanceStep&, const ProvenanceStep&) = default;
};

struct Certificate {
    Game game;
    Strategy strategy;
    std::vector<ProvenanceStep> provenance; // last step is the root; may be empty
};

// Limits used when a solve step synthesizes a strategy.
SolveLimits synthesis_limits();

// Rebuilds game and strategy from the steps. Throws Error(CertificateInvalid)
// on a malformed tree, SynthesisCapExceeded when a solve step cannot be
// decided within synthesis_limits() or is losing.
RestrictedStrategy replay(std::span<const ProvenanceStep> provenance);

// A certificate for a winning <G', *q> with G' a subgraph of `graph` and
// q = analyze_cactus(graph).hg, so HG(graph) >= q. Vertex ids are the
// graph's own. Throws NotCactusError, Error(Disconnected) or
// Error(SynthesisCapExceeded).
Certificate cactus_lower_bound_certificate(const Graph& graph);

} // namespace hatgame

#endif
