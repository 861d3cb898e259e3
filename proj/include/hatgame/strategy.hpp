#ifndef HATGAME_STRATEGY_HPP
#define HATGAME_STRATEGY_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "hatgame/game.hpp"

namespace hatgame {

// Marks a (vertex, view) entry with no guess yet; only partial strategies hold it.
inline constexpr Hat kUnassigned = std::numeric_limits<Hat>::max();

// Largest strategy table (entries per vertex) we are willing to materialize.
inline constexpr std::uint64_t kMaxViewsPerVertex = std::uint64_t{1} << 26;

// Per-vertex guess tables indexed by Game::view_index. A strategy is tied to
// the view layout of the game it was built for.
class Strategy {
public:
    Strategy() = default;

    // Every entry kUnassigned. Throws Error(TooLarge) when a table would
    // exceed kMaxViewsPerVertex entries.
    static Strategy blank(const Game& game);
    // Every entry set to `guess`.
    static Strategy constant(const Game& game, Hat guess);

    std::size_t vertex_count() const noexcept { return tables_.size(); }
    const std::vector<Hat>& table(Vertex v) const { return tables_.at(v); }

    Hat guess(Vertex v, std::uint64_t view) const { return tables_[v][view]; }
    Hat guess_on(const Game& game, Vertex v, std::span<const Hat> coloring) const {
        return tables_[v][game.view_index(v, coloring)];
    }
    void set(Vertex v, std::uint64_t view, Hat guess) { tables_.at(v).at(view) = guess; }

    bool complete() const;

    friend bool operator==(const Strategy&, const Strategy&) = default;

private:
    std::vector<std::vector<Hat>> tables_;
};

} // namespace hatgame

#endif
