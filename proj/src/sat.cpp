#include "sat.hpp"

#include <algorithm>

namespace hatgame::detail {

namespace {

double luby(double y, std::uint64_t x) {
    std::uint64_t size = 1;
    int seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    double r = 1;
    for (int i = 0; i < seq; ++i) {
        r *= y;
    }
    return r;
}

} // namespace

SatSolver::SatSolver(std::uint32_t num_vars)
    : num_vars_(num_vars),
      watches_(2 * static_cast<std::size_t>(num_vars)),
      assigns_(num_vars, -1),
      level_(num_vars, 0),
      reason_(num_vars, kNoReason),
      phase_(num_vars, false),
      activity_(num_vars, 0.0),
      heap_index_(num_vars, -1),
      seen_(num_vars, 0),
      model_(num_vars, false) {
    for (std::uint32_t v = 0; v < num_vars; ++v) {
        heap_insert(v);
    }
}

bool SatSolver::add_clause(std::vector<Lit> lits) {
    if (!ok_) {
        return false;
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::size_t keep = 0;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && (lits[i] ^ 1U) == lits[i + 1]) {
            return true; // tautology
        }
        const int val = lit_value(lits[i]);
        if (val == 1) {
            return true;
        }
        if (val == -1) {
            lits[keep++] = lits[i];
        }
    }
    lits.resize(keep);
    if (lits.empty()) {
        ok_ = false;
        return false;
    }
    if (lits.size() == 1) {
        enqueue(lits[0], kNoReason);
        ok_ = propagate() == kNoReason;
        return ok_;
    }
    clauses_.push_back(Clause{std::move(lits)});
    attach(static_cast<std::uint32_t>(clauses_.size() - 1));
    return true;
}

void SatSolver::attach(std::uint32_t cref) {
    const Clause& c = clauses_[cref];
    watches_[c.lits[0]].push_back({cref, c.lits[1]});
    watches_[c.lits[1]].push_back({cref, c.lits[0]});
}

void SatSolver::enqueue(Lit l, std::uint32_t reason) {
    const std::uint32_t v = l >> 1;
    assigns_[v] = static_cast<std::int8_t>((l & 1U) ? 0 : 1);
    level_[v] = level();
    reason_[v] = reason;
    trail_.push_back(l);
}

std::uint32_t SatSolver::propagate() {
    while (qhead_ < trail_.size()) {
        const Lit false_lit = trail_[qhead_++] ^ 1U;
        auto& ws = watches_[false_lit];
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < ws.size()) {
            const Watcher w = ws[i];
            if (lit_value(w.blocker) == 1) {
                ws[j++] = ws[i++];
                continue;
            }
            Clause& c = clauses_[w.clause];
            if (c.lits[0] == false_lit) {
                std::swap(c.lits[0], c.lits[1]);
            }
            ++i;
            const Lit first = c.lits[0];
            const Watcher moved{w.clause, first};
            if (first != w.blocker && lit_value(first) == 1) {
                ws[j++] = moved;
                continue;
            }
            bool found = false;
            for (std::size_t k = 2; k < c.lits.size(); ++k) {
                if (lit_value(c.lits[k]) != 0) {
                    c.lits[1] = c.lits[k];
                    c.lits[k] = false_lit;
                    watches_[c.lits[1]].push_back(moved);
                    found = true;
                    break;
                }
            }
            if (found) {
                continue;
            }
            ws[j++] = moved;
            if (lit_value(first) == 0) {
                while (i < ws.size()) {
                    ws[j++] = ws[i++];
                }
                ws.resize(j);
                qhead_ = trail_.size();
                return w.clause;
            }
            enqueue(first, w.clause);
        }
        ws.resize(j);
    }
    return kNoReason;
}

bool SatSolver::redundant(Lit l) const {
    const std::uint32_t r = reason_[l >> 1];
    if (r == kNoReason) {
        return false;
    }
    const Clause& c = clauses_[r];
    for (std::size_t k = 1; k < c.lits.size(); ++k) {
        const std::uint32_t v = c.lits[k] >> 1;
        if (!seen_[v] && level_[v] > 0) {
            return false;
        }
    }
    return true;
}

void SatSolver::analyze(std::uint32_t confl, std::vector<Lit>& learnt, std::uint32_t& backtrack_level,
                        std::uint32_t& lbd) {
    learnt.assign(1, 0);
    int path = 0;
    bool have_p = false;
    Lit p = 0;
    std::size_t index = trail_.size();
    do {
        Clause& c = clauses_[confl];
        if (c.learnt) {
            bump_clause(c);
        }
        for (std::size_t j = have_p ? 1 : 0; j < c.lits.size(); ++j) {
            const Lit q = c.lits[j];
            const std::uint32_t v = q >> 1;
            if (!seen_[v] && level_[v] > 0) {
                bump_var(v);
                seen_[v] = 1;
                if (level_[v] >= level()) {
                    ++path;
                } else {
                    learnt.push_back(q);
                }
            }
        }
        while (!seen_[trail_[index - 1] >> 1]) {
            --index;
        }
        p = trail_[--index];
        have_p = true;
        confl = reason_[p >> 1];
        seen_[p >> 1] = 0;
        --path;
    } while (path > 0);
    learnt[0] = p ^ 1U;

    const std::vector<Lit> original = learnt;
    std::size_t keep = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
        if (!redundant(learnt[i])) {
            learnt[keep++] = learnt[i];
        }
    }
    learnt.resize(keep);
    for (Lit l : original) {
        seen_[l >> 1] = 0;
    }

    backtrack_level = 0;
    if (learnt.size() > 1) {
        std::size_t max_i = 1;
        for (std::size_t i = 2; i < learnt.size(); ++i) {
            if (level_[learnt[i] >> 1] > level_[learnt[max_i] >> 1]) {
                max_i = i;
            }
        }
        std::swap(learnt[1], learnt[max_i]);
        backtrack_level = level_[learnt[1] >> 1];
    }

    if (level_stamp_.size() < level() + 1) {
        level_stamp_.resize(level() + 1, 0);
    }
    ++stamp_;
    lbd = 0;
    for (Lit l : learnt) {
        const std::uint32_t lv = level_[l >> 1];
        if (level_stamp_[lv] != stamp_) {
            level_stamp_[lv] = stamp_;
            ++lbd;
        }
    }
}

void SatSolver::cancel_until(std::uint32_t lvl) {
    if (level() <= lvl) {
        return;
    }
    for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
        const std::uint32_t v = trail_[i] >> 1;
        phase_[v] = assigns_[v] == 1;
        assigns_[v] = -1;
        reason_[v] = kNoReason;
        if (heap_index_[v] < 0) {
            heap_insert(v);
        }
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
}

std::int64_t SatSolver::pick_branch() {
    while (!heap_.empty()) {
        const std::uint32_t v = heap_pop();
        if (assigns_[v] < 0) {
            return v;
        }
    }
    return -1;
}

void SatSolver::bump_var(std::uint32_t var) {
    activity_[var] += var_inc_;
    if (activity_[var] > 1e100) {
        for (double& a : activity_) {
            a *= 1e-100;
        }
        var_inc_ *= 1e-100;
    }
    if (heap_index_[var] >= 0) {
        heap_up(static_cast<std::size_t>(heap_index_[var]));
    }
}

void SatSolver::bump_clause(Clause& c) {
    c.activity += clause_inc_;
    if (c.activity > 1e20) {
        for (std::uint32_t r : learnt_refs_) {
            clauses_[r].activity *= 1e-20;
        }
        clause_inc_ *= 1e-20;
    }
}

void SatSolver::reduce_learnts() {
    auto locked = [&](std::uint32_t cref) {
        const Lit first = clauses_[cref].lits[0];
        return lit_value(first) == 1 && reason_[first >> 1] == cref;
    };
    std::sort(learnt_refs_.begin(), learnt_refs_.end(), [&](std::uint32_t a, std::uint32_t b) {
        const Clause& ca = clauses_[a];
        const Clause& cb = clauses_[b];
        if (ca.lbd != cb.lbd) {
            return ca.lbd < cb.lbd;
        }
        if (ca.activity != cb.activity) {
            return ca.activity > cb.activity;
        }
        return a < b;
    });
    std::vector<std::uint32_t> kept;
    const std::size_t half = learnt_refs_.size() / 2;
    for (std::size_t i = 0; i < learnt_refs_.size(); ++i) {
        const std::uint32_t r = learnt_refs_[i];
        if (i < half || clauses_[r].lbd <= 2 || locked(r)) {
            kept.push_back(r);
        } else {
            clauses_[r].deleted = true;
            clauses_[r].lits.clear();
            clauses_[r].lits.shrink_to_fit();
        }
    }
    learnt_refs_ = std::move(kept);
    for (auto& ws : watches_) {
        ws.clear();
    }
    for (std::uint32_t r = 0; r < clauses_.size(); ++r) {
        if (!clauses_[r].deleted) {
            attach(r);
        }
    }
}

void SatSolver::heap_insert(std::uint32_t var) {
    heap_index_[var] = static_cast<std::int64_t>(heap_.size());
    heap_.push_back(var);
    heap_up(heap_.size() - 1);
}

void SatSolver::heap_up(std::size_t i) {
    const std::uint32_t var = heap_[i];
    while (i > 0) {
        const std::size_t parent = (i - 1) / 2;
        if (!heap_less(var, heap_[parent])) {
            break;
        }
        heap_[i] = heap_[parent];
        heap_index_[heap_[i]] = static_cast<std::int64_t>(i);
        i = parent;
    }
    heap_[i] = var;
    heap_index_[var] = static_cast<std::int64_t>(i);
}

void SatSolver::heap_down(std::size_t i) {
    const std::uint32_t var = heap_[i];
    for (;;) {
        std::size_t child = 2 * i + 1;
        if (child >= heap_.size()) {
            break;
        }
        if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) {
            ++child;
        }
        if (!heap_less(heap_[child], var)) {
            break;
        }
        heap_[i] = heap_[child];
        heap_index_[heap_[i]] = static_cast<std::int64_t>(i);
        i = child;
    }
    heap_[i] = var;
    heap_index_[var] = static_cast<std::int64_t>(i);
}

std::uint32_t SatSolver::heap_pop() {
    const std::uint32_t top = heap_.front();
    heap_index_[top] = -1;
    heap_.front() = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_index_[heap_.front()] = 0;
        heap_down(0);
    }
    return top;
}

SatSolver::Result SatSolver::solve(const std::function<bool()>& should_stop, const std::function<void()>& sample) {
    if (!ok_ || propagate() != kNoReason) {
        ok_ = false;
        return Result::unsat;
    }
    max_learnts_ = clauses_.size() / 3 + 2000;
    std::uint64_t restarts = 0;
    std::uint64_t restart_budget = static_cast<std::uint64_t>(luby(2, restarts) * 100);
    std::uint64_t since_restart = 0;
    std::vector<Lit> learnt;

    for (;;) {
        const std::uint32_t confl = propagate();
        if (confl != kNoReason) {
            ++conflicts_;
            ++since_restart;
            if (level() == 0) {
                ok_ = false;
                return Result::unsat;
            }
            if (sample && (conflicts_ & 63U) == 1) {
                sample();
            }
            std::uint32_t backtrack_level = 0;
            std::uint32_t lbd = 0;
            analyze(confl, learnt, backtrack_level, lbd);
            cancel_until(backtrack_level);
            if (learnt.size() == 1) {
                enqueue(learnt[0], kNoReason);
            } else {
                Clause c{learnt};
                c.learnt = true;
                c.lbd = lbd;
                clauses_.push_back(std::move(c));
                const auto cref = static_cast<std::uint32_t>(clauses_.size() - 1);
                attach(cref);
                learnt_refs_.push_back(cref);
                bump_clause(clauses_[cref]);
                enqueue(learnt[0], cref);
            }
            var_inc_ /= 0.95;
            clause_inc_ /= 0.999;
            if ((conflicts_ & 255U) == 0 && should_stop()) {
                return Result::interrupted;
            }
            continue;
        }

        if (since_restart >= restart_budget) {
            cancel_until(0);
            since_restart = 0;
            restart_budget = static_cast<std::uint64_t>(luby(2, ++restarts) * 100);
        }
        if (learnt_refs_.size() >= max_learnts_ + trail_.size()) {
            reduce_learnts();
            max_learnts_ += max_learnts_ / 10;
        }
        const std::int64_t next = pick_branch();
        if (next < 0) {
            for (std::uint32_t v = 0; v < num_vars_; ++v) {
                model_[v] = assigns_[v] == 1;
            }
            return Result::sat;
        }
        ++decisions_;
        if ((decisions_ & 1023U) == 0 && should_stop()) {
            return Result::interrupted;
        }
        trail_lim_.push_back(trail_.size());
        const auto var = static_cast<std::uint32_t>(next);
        enqueue(phase_[var] ? pos(var) : neg(var), kNoReason);
    }
}

} // namespace hatgame::detail
