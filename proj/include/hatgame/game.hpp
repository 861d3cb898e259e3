#ifndef HATGAME_GAME_HPP
#define HATGAME_GAME_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hatgame {

// Vertices are addressed by their position in the canonical (declaration) order.
using Vertex = std::size_t;

// Hatness values and color indices. Colors are 0-based: 0 <= c(v) < h(v).
using Hat = std::uint32_t;

// One color per vertex, in canonical vertex order.
using Coloring = std::vector<Hat>;

// The colors a vertex sees: its neighbors' colors in canonical vertex order.
using View = std::vector<Hat>;

using IdPair = std::pair<std::string, std::string>;

// Unchecked input for validate(); hatness values are signed so that bad input
// can be reported rather than wrapped.
struct GameSpec {
    std::vector<std::string> vertices;
    std::vector<IdPair> edges;
    std::map<std::string, std::int64_t, std::less<>> hatness;
};

bool is_valid_identifier(std::string_view id);

// Simple undirected graph over string identifiers.
class Graph {
public:
    Graph() = default;

    // Throws Error on an invalid identifier, duplicate vertex, self-loop,
    // unknown endpoint or duplicate edge.
    static Graph build(std::vector<std::string> ids, std::span<const IdPair> edges);
    static Graph build(std::vector<std::string> ids, std::span<const std::pair<Vertex, Vertex>> edges);

    std::size_t size() const noexcept { return ids_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::string& id(Vertex v) const { return ids_.at(v); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }

    std::optional<Vertex> find(std::string_view id) const;
    // Throws Error(UnknownVertex).
    Vertex at(std::string_view id) const;

    // Sorted in canonical order.
    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
    std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
    bool adjacent(Vertex a, Vertex b) const;

    // Each edge once as (low, high), sorted lexicographically.
    const std::vector<std::pair<Vertex, Vertex>>& edges() const noexcept { return edges_; }

    bool connected() const;
    // Connected components, each sorted, ordered by smallest member.
    std::vector<std::vector<Vertex>> components() const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.ids_ == b.ids_ && a.edges_ == b.edges_;
    }

private:
    std::vector<std::string> ids_;
    std::map<std::string, Vertex, std::less<>> index_;
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<std::pair<Vertex, Vertex>> edges_;
};

// The game <G,h>. Immutable once constructed.
class Game {
public:
    Game() = default;
    // Throws Error(DomainMismatch) or Error(NonPositiveHatness).
    Game(Graph graph, std::vector<Hat> hatness);

    const Graph& graph() const noexcept { return graph_; }
    std::size_t size() const noexcept { return graph_.size(); }
    const std::string& id(Vertex v) const { return graph_.id(v); }

    Hat hatness(Vertex v) const { return hatness_.at(v); }
    const std::vector<Hat>& hatness() const noexcept { return hatness_; }

    // Product of all hatnesses; nullopt when it does not fit in 64 bits.
    std::optional<std::uint64_t> coloring_count() const;

    // Number of distinct views of v; nullopt on overflow.
    std::optional<std::uint64_t> view_count(Vertex v) const;

    // Views are indexed lexicographically, first neighbor most significant.
    std::uint64_t view_index(Vertex v, std::span<const Hat> coloring) const;
    std::uint64_t encode_view(Vertex v, std::span<const Hat> view) const;
    View decode_view(Vertex v, std::uint64_t index) const;
    View view_of(Vertex v, std::span<const Hat> coloring) const;

    bool is_coloring(std::span<const Hat> coloring) const;

    friend bool operator==(const Game& a, const Game& b) {
        return a.graph_ == b.graph_ && a.hatness_ == b.hatness_;
    }

private:
    Graph graph_;
    std::vector<Hat> hatness_;
};

// Returns the game iff every graph, hatness and domain invariant holds.
Game validate(const GameSpec& spec);

// Convenience constructor from ids, id-pairs and per-vertex hatness in id order.
Game make_game(std::vector<std::string> ids, std::span<const IdPair> edges, std::vector<Hat> hatness);

// Steps to the next coloring in canonical (lexicographic, last vertex fastest)
// order; returns false after the last one, leaving the all-zero coloring.
bool next_coloring(const Game& game, Coloring& coloring);

struct Subgame {
    Game game;
    bool proper = false;
};

// Induced subgame on `keep` (order of `keep` is irrelevant). Throws
// Error(EmptySubset) or Error(UnknownVertex).
Subgame subgame(const Game& game, std::span<const std::string> keep);
Subgame subgame(const Game& game, std::span<const Vertex> keep);

enum class MergedHatness {
    product,    // h1(v1) * h2(v2), the winning-side gluing
    first_side, // h1(v1), the losing-side gluing
};

struct Glued {
    Game game;
    Vertex merged = 0;
    // For every vertex of g2, its identifier in the glued game.
    std::map<std::string, std::string, std::less<>> g2_names;
};

// G1 +_{v1,v2} G2. g2's identifiers that collide with g1's are renamed by
// appending "__g<k>" for the smallest k >= 2 that makes them unique; the
// merged vertex keeps v1's identifier and position. Vertex order: g1's
// vertices, then g2's remaining vertices in their order.
Glued glue_graphs(const Game& g1, std::string_view v1, const Game& g2, std::string_view v2,
                  MergedHatness mode = MergedHatness::product);

} // namespace hatgame

#endif
