#include "hatgame/solver.hpp"

#include <bit>
#include <chrono>
#include <stdexcept>

#include "hatgame/error.hpp"
#include "sat.hpp"

namespace hatgame {

namespace {

constexpr Hat kMaxSolverHatness = 64;

struct LimitReached {
    Limit limit;
};

std::uint64_t full_mask(Hat h) {
    return h == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << h) - 1;
}

// Index of strategy entries and the colorings each (entry, guess) pair covers.
// An entry is one (vertex, view) pair; a slot is one (entry, guess) pair.
struct CoverTables {
    explicit CoverTables(const Game& game) : n(game.size()) {
        total = *game.coloring_count();
        if (total * n > (std::uint64_t{1} << 31)) {
            throw Error(ErrorCode::TooLarge, "coloring table too large for the solver");
        }
        std::vector<std::uint64_t> entry_base(n, 0);
        std::uint64_t entries = 0;
        for (Vertex v = 0; v < n; ++v) {
            entry_base[v] = entries;
            entries += *game.view_count(v);
        }
        entry_vertex.resize(entries);
        entry_view.resize(entries);
        entry_hatness.resize(entries);
        slot_base.resize(entries + 1);
        std::uint64_t slots = 0;
        for (Vertex v = 0; v < n; ++v) {
            for (std::uint64_t view = 0; view < *game.view_count(v); ++view) {
                const auto e = entry_base[v] + view;
                entry_vertex[e] = static_cast<std::uint32_t>(v);
                entry_view[e] = static_cast<std::uint32_t>(view);
                entry_hatness[e] = game.hatness(v);
                slot_base[e] = static_cast<std::uint32_t>(slots);
                slots += game.hatness(v);
            }
        }
        if (slots > (std::uint64_t{1} << 31)) {
            throw Error(ErrorCode::TooLarge, "strategy space too large for the solver");
        }
        slot_base[entries] = static_cast<std::uint32_t>(slots);

        colors.resize(total * n);
        entry_of.resize(total * n);
        std::vector<std::uint32_t> slot_size(slots, 0);
        Coloring phi(n, 0);
        for (std::uint64_t k = 0; k < total; ++k) {
            for (Vertex v = 0; v < n; ++v) {
                const auto e = static_cast<std::uint32_t>(entry_base[v] + game.view_index(v, phi));
                colors[k * n + v] = static_cast<std::uint8_t>(phi[v]);
                entry_of[k * n + v] = e;
                ++slot_size[slot_base[e] + phi[v]];
            }
            next_coloring(game, phi);
        }
        slot_offset.assign(slots + 1, 0);
        for (std::uint64_t s = 0; s < slots; ++s) {
            slot_offset[s + 1] = slot_offset[s] + slot_size[s];
        }
        slot_members.resize(slot_offset[slots]);
        std::vector<std::uint32_t> fill(slot_offset.begin(), slot_offset.end() - 1);
        for (std::uint32_t k = 0; k < total; ++k) {
            for (Vertex v = 0; v < n; ++v) {
                slot_members[fill[slot(entry(k, v), color(k, v))]++] = k;
            }
        }
    }

    std::uint32_t entry(std::uint32_t k, std::size_t v) const { return entry_of[k * n + v]; }
    std::uint32_t color(std::uint32_t k, std::size_t v) const { return colors[k * n + v]; }
    std::uint32_t slot(std::uint32_t e, std::uint32_t d) const { return slot_base[e] + d; }
    std::uint32_t entry_count() const { return static_cast<std::uint32_t>(entry_vertex.size()); }
    std::uint32_t slot_count() const { return slot_base.back(); }

    // Guesses an entry may take before search: everything, except that the
    // all-zero view is limited to {0, 1}. Relabeling the colors of one player
    // with a permutation fixing 0 leaves every other player's all-zero view in
    // place, so applying such relabelings player by player moves any strategy
    // into this form without changing whether it wins.
    std::uint64_t initial_domain(std::uint32_t e) const {
        std::uint64_t dom = full_mask(entry_hatness[e]);
        if (entry_view[e] == 0 && entry_hatness[e] > 2) {
            dom = 3;
        }
        return dom;
    }

    // Best-case number of colorings the entries can cover: each entry covers
    // at most its largest (entry, guess) class. Below `total` the game is losing.
    std::uint64_t root_capacity() const {
        std::uint64_t cap = 0;
        for (std::uint32_t e = 0; e < entry_count(); ++e) {
            std::uint32_t best = 0;
            for (std::uint64_t dom = initial_domain(e); dom != 0; dom &= dom - 1) {
                const auto s = slot(e, static_cast<std::uint32_t>(std::countr_zero(dom)));
                best = std::max(best, slot_offset[s + 1] - slot_offset[s]);
            }
            cap += best;
        }
        return cap;
    }

    std::size_t n;
    std::uint64_t total = 0;
    std::vector<std::uint8_t> colors;      // [k * n + v]
    std::vector<std::uint32_t> entry_of;   // [k * n + v]
    std::vector<std::uint32_t> entry_vertex;
    std::vector<std::uint32_t> entry_view;
    std::vector<Hat> entry_hatness;
    std::vector<std::uint32_t> slot_base;  // entry -> first slot; one past the end at [entries]
    std::vector<std::uint32_t> slot_offset; // slot -> range in slot_members
    std::vector<std::uint32_t> slot_members;
};

class Budget {
public:
    explicit Budget(const SolveLimits& limits) : limits_(limits), start_(std::chrono::steady_clock::now()) {}

    void check(std::uint64_t nodes) const {
        if (nodes > limits_.max_nodes) {
            throw LimitReached{Limit::nodes};
        }
        std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
        if (elapsed.count() > limits_.timeout_seconds) {
            throw LimitReached{Limit::timeout};
        }
    }

private:
    const SolveLimits& limits_;
    std::chrono::steady_clock::time_point start_;
};

// Backtracking cover search with domain propagation over the entries.
class CoverSearch {
public:
    CoverSearch(const CoverTables& tables, const SolveLimits& limits, const Budget& budget)
        : t_(tables), limits_(limits), budget_(budget), n_(tables.n) {
        init_state();
    }

    bool run() {
        if (!propagate()) {
            return false;
        }
        Node root = open_node();
        if (root == Node::solved) {
            return true;
        }
        if (root == Node::dead) {
            return false;
        }
        while (!frames_.empty()) {
            Frame& f = frames_.back();
            if (f.branched) {
                f.branched = false;
                undo_to(f.branch_mark);
                const std::uint32_t v = pool_[f.offset + f.tried];
                const std::uint32_t e = t_.entry(f.coloring, v);
                const std::uint64_t bit = std::uint64_t{1} << t_.color(f.coloring, v);
                if (!(set_domain(e, domain_[e] & ~bit) && propagate())) {
                    pop_frame();
                    continue;
                }
            }
            while (f.next < f.count && !candidate(f.coloring, pool_[f.offset + f.next])) {
                ++f.next;
            }
            if (f.next == f.count) {
                pop_frame();
                continue;
            }
            f.tried = f.next++;
            f.branched = true;
            f.branch_mark = trail_.size();
            const std::uint32_t v = pool_[f.offset + f.tried];
            const std::uint32_t e = t_.entry(f.coloring, v);
            if (!(set_domain(e, std::uint64_t{1} << t_.color(f.coloring, v)) && propagate())) {
                continue;
            }
            if (open_node() == Node::solved) {
                return true;
            }
        }
        return false;
    }

    // Guess per entry; entries left open get 0.
    std::vector<Hat> entry_guesses() const {
        std::vector<Hat> guesses(domain_.size(), 0);
        for (std::uint32_t e = 0; e < domain_.size(); ++e) {
            if (std::popcount(domain_[e]) == 1) {
                guesses[e] = static_cast<Hat>(std::countr_zero(domain_[e]));
            }
        }
        return guesses;
    }

    SearchStats stats() const {
        SearchStats s;
        s.nodes_explored = nodes_;
        s.colorings_covered = max_covered_;
        s.colorings_total = t_.total;
        s.capacity_prunes = prunes_;
        return s;
    }

private:
    enum class Node { solved, dead, pushed };

    struct Frame {
        std::uint32_t coloring;
        std::size_t offset; // candidate vertices in pool_
        std::uint32_t count;
        std::uint32_t next;
        std::uint32_t tried;
        std::size_t base_mark;
        std::size_t branch_mark;
        bool branched;
    };

    void init_state() {
        domain_.resize(t_.entry_count());
        for (std::uint32_t e = 0; e < domain_.size(); ++e) {
            domain_[e] = t_.initial_domain(e);
        }
        sat_.assign(t_.total, 0);
        cand_.assign(t_.total, 0);
        open_count_.assign(t_.slot_count(), 0);
        uncovered_ = 0;
        for (std::uint32_t k = 0; k < t_.total; ++k) {
            for (Vertex v = 0; v < n_; ++v) {
                const std::uint64_t dom = domain_[t_.entry(k, v)];
                if ((dom >> t_.color(k, v)) & 1U) {
                    ++cand_[k];
                    if (std::popcount(dom) == 1) {
                        ++sat_[k];
                    }
                }
            }
            if (sat_[k] == 0) {
                ++uncovered_;
                for (Vertex v = 0; v < n_; ++v) {
                    ++open_count_[t_.slot(t_.entry(k, v), t_.color(k, v))];
                }
                if (cand_[k] <= 1) {
                    queue_.push_back(k);
                }
            }
        }
        max_covered_ = t_.total - uncovered_;
    }

    bool candidate(std::uint32_t k, std::uint32_t v) const {
        return (domain_[t_.entry(k, v)] >> t_.color(k, v)) & 1U;
    }

    void cover(std::uint32_t k) {
        if (sat_[k]++ == 0) {
            --uncovered_;
            for (Vertex v = 0; v < n_; ++v) {
                --open_count_[t_.slot(t_.entry(k, v), t_.color(k, v))];
            }
        }
    }

    void uncover(std::uint32_t k) {
        if (--sat_[k] == 0) {
            ++uncovered_;
            for (Vertex v = 0; v < n_; ++v) {
                ++open_count_[t_.slot(t_.entry(k, v), t_.color(k, v))];
            }
        }
    }

    template <typename Fn>
    void for_slot(std::uint32_t e, std::uint32_t d, Fn&& fn) {
        const auto s = t_.slot(e, d);
        for (auto i = t_.slot_offset[s]; i < t_.slot_offset[s + 1]; ++i) {
            fn(t_.slot_members[i]);
        }
    }

    // Moves entry e from domain `from` to `to`, updating coverage and candidate
    // counts. Returns false if some coloring lost its last candidate.
    bool transition(std::uint32_t e, std::uint64_t from, std::uint64_t to, bool forward) {
        bool ok = to != 0;
        if (std::popcount(from) == 1 && from != to) {
            for_slot(e, static_cast<std::uint32_t>(std::countr_zero(from)), [&](std::uint32_t k) { uncover(k); });
        }
        for (std::uint64_t removed = from & ~to; removed != 0; removed &= removed - 1) {
            for_slot(e, static_cast<std::uint32_t>(std::countr_zero(removed)), [&](std::uint32_t k) {
                --cand_[k];
                if (forward && sat_[k] == 0) {
                    if (cand_[k] == 0) {
                        ok = false;
                    } else if (cand_[k] == 1) {
                        queue_.push_back(k);
                    }
                }
            });
        }
        for (std::uint64_t added = to & ~from; added != 0; added &= added - 1) {
            for_slot(e, static_cast<std::uint32_t>(std::countr_zero(added)), [&](std::uint32_t k) { ++cand_[k]; });
        }
        if (std::popcount(to) == 1 && from != to) {
            for_slot(e, static_cast<std::uint32_t>(std::countr_zero(to)), [&](std::uint32_t k) { cover(k); });
        }
        return ok;
    }

    bool set_domain(std::uint32_t e, std::uint64_t to) {
        const std::uint64_t from = domain_[e];
        if (from == to) {
            return to != 0;
        }
        trail_.emplace_back(e, from);
        domain_[e] = to;
        if (!transition(e, from, to, true)) {
            queue_.clear();
            return false;
        }
        return true;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [e, from] = trail_.back();
            trail_.pop_back();
            const std::uint64_t now = domain_[e];
            domain_[e] = from;
            transition(e, now, from, false);
        }
    }

    bool propagate() {
        while (!queue_.empty()) {
            const std::uint32_t k = queue_.back();
            queue_.pop_back();
            if (sat_[k] > 0 || cand_[k] > 1) {
                continue;
            }
            if (cand_[k] == 0) {
                queue_.clear();
                return false;
            }
            for (Vertex v = 0; v < n_; ++v) {
                if (candidate(k, static_cast<std::uint32_t>(v))) {
                    if (!set_domain(t_.entry(k, v), std::uint64_t{1} << t_.color(k, v))) {
                        return false;
                    }
                    break;
                }
            }
        }
        return true;
    }

    // Upper bound on how many uncovered colorings the open entries can still cover.
    std::uint64_t capacity() const {
        std::uint64_t cap = 0;
        for (std::uint32_t e = 0; e < domain_.size(); ++e) {
            std::uint64_t dom = domain_[e];
            if (std::popcount(dom) <= 1) {
                continue;
            }
            std::uint32_t best = 0;
            for (; dom != 0; dom &= dom - 1) {
                best = std::max(best, open_count_[t_.slot(e, static_cast<std::uint32_t>(std::countr_zero(dom)))]);
            }
            cap += best;
        }
        return cap;
    }

    std::uint32_t choose() const {
        std::uint32_t best = 0;
        std::uint32_t best_cand = std::numeric_limits<std::uint32_t>::max();
        for (std::uint32_t k = 0; k < t_.total; ++k) {
            if (sat_[k] != 0) {
                continue;
            }
            if (limits_.branch_rule == BranchRule::first_uncovered) {
                return k;
            }
            if (cand_[k] < best_cand) {
                best = k;
                best_cand = cand_[k];
                if (best_cand <= 2) {
                    break;
                }
            }
        }
        return best;
    }

    Node open_node() {
        ++nodes_;
        if ((nodes_ & 1023U) == 0 || nodes_ > limits_.max_nodes) {
            budget_.check(nodes_);
        }
        max_covered_ = std::max(max_covered_, t_.total - uncovered_);
        if (uncovered_ == 0) {
            return Node::solved;
        }
        if (capacity() < uncovered_) {
            ++prunes_;
            return Node::dead;
        }
        const std::uint32_t k = choose();
        Frame f{k, pool_.size(), 0, 0, 0, trail_.size(), 0, false};
        for (Vertex v = 0; v < n_; ++v) {
            if (candidate(k, static_cast<std::uint32_t>(v))) {
                pool_.push_back(static_cast<std::uint32_t>(v));
                ++f.count;
            }
        }
        frames_.push_back(f);
        return Node::pushed;
    }

    void pop_frame() {
        undo_to(frames_.back().base_mark);
        pool_.resize(frames_.back().offset);
        frames_.pop_back();
    }

    const CoverTables& t_;
    const SolveLimits& limits_;
    const Budget& budget_;
    std::size_t n_;

    std::vector<std::uint64_t> domain_;
    std::vector<std::uint32_t> sat_;
    std::vector<std::uint32_t> cand_;
    std::vector<std::uint32_t> open_count_; // uncovered colorings per slot
    std::uint64_t uncovered_ = 0;

    std::vector<std::pair<std::uint32_t, std::uint64_t>> trail_;
    std::vector<std::uint32_t> queue_;
    std::vector<Frame> frames_;
    std::vector<std::uint32_t> pool_;

    std::uint64_t nodes_ = 0;
    std::uint64_t max_covered_ = 0;
    std::uint64_t prunes_ = 0;
};

// The same constraints as CoverSearch handed to the clause-learning core: one
// Boolean per slot, exactly one guess per entry, and one coverage clause per
// coloring.
class LearningSearch {
public:
    LearningSearch(const CoverTables& tables, const Budget& budget)
        : t_(tables), budget_(budget), sat_(tables.slot_count()) {
        using detail::neg;
        using detail::pos;
        for (std::uint32_t e = 0; e < t_.entry_count() && consistent_; ++e) {
            const std::uint64_t dom = t_.initial_domain(e);
            std::vector<detail::Lit> at_least;
            for (std::uint32_t d = 0; d < t_.entry_hatness[e]; ++d) {
                const std::uint32_t var = t_.slot(e, d);
                if ((dom >> d) & 1U) {
                    at_least.push_back(pos(var));
                } else {
                    consistent_ = consistent_ && sat_.add_clause({neg(var)});
                }
            }
            for (std::size_t i = 0; i < at_least.size(); ++i) {
                for (std::size_t j = i + 1; j < at_least.size(); ++j) {
                    consistent_ = consistent_ && sat_.add_clause({at_least[i] ^ 1U, at_least[j] ^ 1U});
                }
            }
            consistent_ = consistent_ && sat_.add_clause(std::move(at_least));
        }
        for (std::uint32_t k = 0; k < t_.total && consistent_; ++k) {
            std::vector<detail::Lit> cover;
            cover.reserve(t_.n);
            for (Vertex v = 0; v < t_.n; ++v) {
                cover.push_back(pos(t_.slot(t_.entry(k, v), t_.color(k, v))));
            }
            consistent_ = sat_.add_clause(std::move(cover));
        }
    }

    bool run() {
        if (!consistent_) {
            return false;
        }
        auto stop = [this] {
            budget_.check(sat_.decisions());
            return false;
        };
        auto sample = [this] { max_covered_ = std::max(max_covered_, covered_now()); };
        return sat_.solve(stop, sample) == detail::SatSolver::Result::sat;
    }

    std::vector<Hat> entry_guesses() const {
        std::vector<Hat> guesses(t_.entry_count(), 0);
        for (std::uint32_t e = 0; e < t_.entry_count(); ++e) {
            for (std::uint32_t d = 0; d < t_.entry_hatness[e]; ++d) {
                if (sat_.model_value(t_.slot(e, d))) {
                    guesses[e] = d;
                    break;
                }
            }
        }
        return guesses;
    }

    SearchStats stats(bool solved) const {
        SearchStats s;
        s.nodes_explored = sat_.decisions();
        s.conflicts = sat_.conflicts();
        s.colorings_total = t_.total;
        s.colorings_covered = solved ? t_.total : max_covered_;
        return s;
    }

private:
    // Sampled at a conflict, so an entry may hold two true guesses; those
    // entries are left out so the count stays achievable.
    std::uint64_t covered_now() const {
        std::vector<std::uint8_t> clean(t_.entry_count(), 1);
        for (std::uint32_t e = 0; e < t_.entry_count(); ++e) {
            std::uint32_t on = 0;
            for (std::uint32_t d = 0; d < t_.entry_hatness[e]; ++d) {
                on += sat_.value(t_.slot(e, d)) == 1 ? 1U : 0U;
            }
            clean[e] = on <= 1 ? 1 : 0;
        }
        std::uint64_t covered = 0;
        for (std::uint32_t k = 0; k < t_.total; ++k) {
            for (Vertex v = 0; v < t_.n; ++v) {
                const auto e = t_.entry(k, v);
                if (clean[e] != 0 && sat_.value(t_.slot(e, t_.color(k, v))) == 1) {
                    ++covered;
                    break;
                }
            }
        }
        return covered;
    }

    const CoverTables& t_;
    const Budget& budget_;
    detail::SatSolver sat_;
    bool consistent_ = true;
    std::uint64_t max_covered_ = 0;
};

Strategy to_strategy(const Game& game, const CoverTables& t, const std::vector<Hat>& guesses) {
    Strategy s = Strategy::constant(game, 0);
    for (std::uint32_t e = 0; e < t.entry_count(); ++e) {
        s.set(t.entry_vertex[e], t.entry_view[e], guesses[e]);
    }
    return s;
}

void check_limits(const SolveLimits& limits) {
    if (limits.max_colorings == 0 || limits.max_nodes == 0 || !(limits.timeout_seconds > 0)) {
        throw Error(ErrorCode::InvalidLimits, "solver limits must be positive");
    }
}

} // namespace

Verdict exact_solve(const Game& game, const SolveLimits& limits) {
    check_limits(limits);
    auto count = game.coloring_count();
    if (!count || *count > limits.max_colorings) {
        throw Error(ErrorCode::TooLarge, "game has more than " + std::to_string(limits.max_colorings) + " colorings");
    }
    for (Vertex v = 0; v < game.size(); ++v) {
        if (game.hatness(v) > kMaxSolverHatness) {
            throw Error(ErrorCode::TooLarge, "solver supports hatness up to 64 (vertex '" + game.id(v) + "')");
        }
    }
    const CoverTables tables(game);
    const Budget budget(limits);

    if (tables.root_capacity() < tables.total) {
        SearchStats stats;
        stats.colorings_total = tables.total;
        stats.capacity_prunes = 1;
        return Losing{stats};
    }

    auto finish = [&](bool solved, const std::vector<Hat>& guesses, SearchStats stats) -> Verdict {
        if (!solved) {
            return Losing{stats};
        }
        Winning w{to_strategy(game, tables, guesses), stats};
        if (verify_strategy(game, w.strategy)) {
            throw std::logic_error("exact_solve produced a strategy that fails verification");
        }
        return w;
    };

    if (limits.engine == SearchEngine::cover) {
        CoverSearch search(tables, limits, budget);
        try {
            const bool solved = search.run();
            return finish(solved, search.entry_guesses(), search.stats());
        } catch (const LimitReached& hit) {
            return Inconclusive{hit.limit, search.stats()};
        }
    }
    LearningSearch search(tables, budget);
    try {
        const bool solved = search.run();
        return finish(solved, search.entry_guesses(), search.stats(solved));
    } catch (const LimitReached& hit) {
        return Inconclusive{hit.limit, search.stats(false)};
    }
}

std::optional<Coloring> verify_strategy(const Game& game, const Strategy& strategy) {
    if (strategy.vertex_count() != game.size()) {
        throw Error(ErrorCode::IncompleteStrategy, "strategy does not cover every vertex");
    }
    for (Vertex v = 0; v < game.size(); ++v) {
        const auto& table = strategy.table(v);
        auto views = game.view_count(v);
        if (!views || table.size() != *views) {
            throw Error(ErrorCode::IncompleteStrategy, "strategy table of '" + game.id(v) + "' has the wrong size");
        }
        for (std::size_t view = 0; view < table.size(); ++view) {
            if (table[view] == kUnassigned) {
                throw Error(ErrorCode::IncompleteStrategy,
                            "no guess for vertex '" + game.id(v) + "' on view #" + std::to_string(view));
            }
            if (table[view] >= game.hatness(v)) {
                throw Error(ErrorCode::GuessOutOfRange, "guess " + std::to_string(table[view]) + " of vertex '" +
                                                            game.id(v) + "' exceeds its hatness");
            }
        }
    }
    if (!game.coloring_count()) {
        throw Error(ErrorCode::TooLarge, "too many colorings to verify");
    }
    Coloring phi(game.size(), 0);
    do {
        bool someone_right = false;
        for (Vertex v = 0; v < game.size() && !someone_right; ++v) {
            someone_right = strategy.guess_on(game, v, phi) == phi[v];
        }
        if (!someone_right) {
            return phi;
        }
    } while (next_coloring(game, phi));
    return std::nullopt;
}

} // namespace hatgame
