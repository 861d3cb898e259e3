#ifndef HATGAME_SRC_SAT_HPP
#define HATGAME_SRC_SAT_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace hatgame::detail {

// Literal encoding: 2 * var for the positive literal, 2 * var + 1 for its negation.
using Lit = std::uint32_t;

inline Lit pos(std::uint32_t var) { return var << 1; }
inline Lit neg(std::uint32_t var) { return (var << 1) | 1U; }

// Small conflict-driven clause-learning solver: two watched literals, first-UIP
// learning with local minimization, VSIDS, phase saving, Luby restarts and
// LBD-based learnt clause reduction. Fully deterministic.
class SatSolver {
public:
    enum class Result { sat, unsat, interrupted };

    explicit SatSolver(std::uint32_t num_vars);

    // Returns false once the formula is known to be unsatisfiable.
    bool add_clause(std::vector<Lit> lits);

    // `should_stop` is polled every few conflicts and decisions; `sample`, when
    // set, runs on the 1st, 65th, 129th, ... conflict with the conflicting assignment in place.
    Result solve(const std::function<bool()>& should_stop, const std::function<void()>& sample = {});

    // Current (partial) assignment: -1 unassigned, 0 false, 1 true.
    int value(std::uint32_t var) const { return assigns_[var]; }

    bool model_value(std::uint32_t var) const { return model_[var]; }

    std::uint64_t decisions() const noexcept { return decisions_; }
    std::uint64_t conflicts() const noexcept { return conflicts_; }

private:
    static constexpr std::uint32_t kNoReason = UINT32_MAX;

    struct Clause {
        std::vector<Lit> lits;
        bool learnt = false;
        bool deleted = false;
        std::uint32_t lbd = 0;
        double activity = 0;
    };

    struct Watcher {
        std::uint32_t clause;
        Lit blocker;
    };

    // -1 unassigned, 0 false, 1 true
    int lit_value(Lit l) const {
        const int v = assigns_[l >> 1];
        return v < 0 ? -1 : (v ^ static_cast<int>(l & 1U));
    }
    std::uint32_t level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

    void attach(std::uint32_t cref);
    void enqueue(Lit l, std::uint32_t reason);
    std::uint32_t propagate();
    void analyze(std::uint32_t confl, std::vector<Lit>& learnt, std::uint32_t& backtrack_level, std::uint32_t& lbd);
    bool redundant(Lit l) const;
    void cancel_until(std::uint32_t lvl);
    std::int64_t pick_branch();
    void bump_var(std::uint32_t var);
    void bump_clause(Clause& c);
    void reduce_learnts();

    // binary max-heap of unassigned variables keyed by activity
    void heap_insert(std::uint32_t var);
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    std::uint32_t heap_pop();
    bool heap_less(std::uint32_t a, std::uint32_t b) const { return activity_[a] > activity_[b]; }

    std::uint32_t num_vars_;
    bool ok_ = true;
    std::vector<Clause> clauses_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<std::int8_t> assigns_;
    std::vector<std::uint32_t> level_;
    std::vector<std::uint32_t> reason_;
    std::vector<bool> phase_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    double clause_inc_ = 1.0;
    std::vector<std::uint32_t> heap_;
    std::vector<std::int64_t> heap_index_;

    std::vector<char> seen_;
    std::vector<std::uint32_t> level_stamp_;
    std::uint32_t stamp_ = 0;

    std::vector<std::uint32_t> learnt_refs_;
    std::size_t max_learnts_ = 0;

    std::vector<bool> model_;
    std::uint64_t decisions_ = 0;
    std::uint64_t conflicts_ = 0;
};

} // namespace hatgame::detail

#endif
