#include "hatgame/strategy.hpp"

#include <algorithm>

#include "hatgame/error.hpp"

namespace hatgame {

Strategy Strategy::blank(const Game& game) {
    return constant(game, kUnassigned);
}

Strategy Strategy::constant(const Game& game, Hat guess) {
    Strategy s;
    s.tables_.reserve(game.size());
    for (Vertex v = 0; v < game.size(); ++v) {
        auto views = game.view_count(v);
        if (!views || *views > kMaxViewsPerVertex) {
            throw Error(ErrorCode::TooLarge, "vertex '" + game.id(v) + "' has too many views for a strategy table");
        }
        s.tables_.emplace_back(static_cast<std::size_t>(*views), guess);
    }
    return s;
}

bool Strategy::complete() const {
    return std::none_of(tables_.begin(), tables_.end(), [](const std::vector<Hat>& t) {
        return std::find(t.begin(), t.end(), kUnassigned) != t.end();
    });
}

} // namespace hatgame
