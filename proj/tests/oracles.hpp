// Test-only reference implementations. Nothing here calls into the solver; they
// re-derive answers from the definitions so the library can be checked
// against them.
#ifndef HATGAME_TESTS_ORACLES_HPP
#define HATGAME_TESTS_ORACLES_HPP

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hatgame/cnf.hpp"
#include "hatgame/game.hpp"

namespace oracle {

using hatgame::Hat;

// A bare graph: adjacency lists (any order) and hatness.
struct Plain {
    std::vector<std::vector<std::size_t>> adj;
    std::vector<Hat> h;
};

inline Plain plain(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::vector<Hat> h) {
    Plain p{std::vector<std::vector<std::size_t>>(n), std::move(h)};
    for (auto [a, b] : edges) {
        p.adj[a].push_back(b);
        p.adj[b].push_back(a);
    }
    return p;
}

inline Plain plain(const hatgame::Game& g) {
    return plain(g.size(), g.graph().edges(), g.hatness());
}

// Number of strategy profiles, saturating at `cap + 1`.
inline std::uint64_t profile_count(const Plain& p, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (std::size_t v = 0; v < p.h.size(); ++v) {
        std::uint64_t views = 1;
        for (auto u : p.adj[v]) {
            views *= p.h[u];
            if (views > 64) {
                return cap + 1;
            }
        }
        for (std::uint64_t i = 0; i < views; ++i) {
            total *= p.h[v];
            if (total > cap) {
                return cap + 1;
            }
        }
    }
    return total;
}

// Winnability by trying every strategy profile on every coloring. Views are
// indexed here with the adjacency list order as given, which need not match
// the library's canonical order. Only for tiny games.
inline bool brute_force_winning(const Plain& p) {
    const std::size_t n = p.h.size();
    std::vector<std::size_t> views(n, 1);
    for (std::size_t v = 0; v < n; ++v) {
        for (auto u : p.adj[v]) {
            views[v] *= p.h[u];
        }
    }
    std::vector<std::vector<Hat>> colorings;
    std::vector<Hat> c(n, 0);
    while (true) {
        colorings.push_back(c);
        std::size_t i = 0;
        while (i < n && ++c[i] == p.h[i]) {
            c[i++] = 0;
        }
        if (i == n) {
            break;
        }
    }
    auto view_of = [&](std::size_t v, const std::vector<Hat>& col) {
        std::size_t idx = 0;
        for (auto u : p.adj[v]) {
            idx = idx * p.h[u] + col[u];
        }
        return idx;
    };
    std::vector<std::vector<Hat>> table(n);
    for (std::size_t v = 0; v < n; ++v) {
        table[v].assign(views[v], 0);
    }
    while (true) {
        bool all = true;
        for (const auto& col : colorings) {
            bool hit = false;
            for (std::size_t v = 0; v < n && !hit; ++v) {
                hit = table[v][view_of(v, col)] == col[v];
            }
            if (!hit) {
                all = false;
                break;
            }
        }
        if (all) {
            return true;
        }
        // next profile
        std::size_t v = 0;
        std::size_t e = 0;
        while (v < n) {
            if (e == table[v].size()) {
                ++v;
                e = 0;
                continue;
            }
            if (++table[v][e] < p.h[v]) {
                break;
            }
            table[v][e++] = 0;
        }
        if (v == n) {
            return false;
        }
    }
}

// Every clause satisfied by some assignment; variables <= 24.
inline std::optional<std::vector<bool>> brute_force_sat(const hatgame::CnfDocument& doc) {
    const auto nv = doc.variable_count;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nv); ++mask) {
        bool ok = true;
        for (const auto& cl : doc.clauses) {
            bool sat = false;
            for (auto lit : cl) {
                const bool val = (mask >> (std::abs(lit) - 1)) & 1U;
                if ((lit > 0) == val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::vector<bool> model(nv);
            for (std::uint64_t v = 0; v < nv; ++v) {
                model[v] = (mask >> v) & 1U;
            }
            return model;
        }
    }
    return std::nullopt;
}

// Plain recursive DPLL with unit propagation and no learning; returns a model
// or nullopt, or throws std::runtime_error past `budget` decisions.
class Dpll {
public:
    Dpll(const hatgame::CnfDocument& doc, std::uint64_t budget) : doc_(doc), budget_(budget) {
        occurs_.resize(doc.variable_count + 1);
        for (std::size_t i = 0; i < doc.clauses.size(); ++i) {
            for (auto lit : doc.clauses[i]) {
                occurs_[std::abs(lit)].push_back(i);
            }
        }
        value_.assign(doc.variable_count + 1, 0);
    }

    std::optional<std::vector<bool>> solve() {
        if (!search()) {
            return std::nullopt;
        }
        std::vector<bool> model(doc_.variable_count);
        for (std::uint64_t v = 1; v <= doc_.variable_count; ++v) {
            model[v - 1] = value_[v] > 0;
        }
        return model;
    }

private:
    int lit_value(std::int64_t lit) const {
        const int v = value_[std::abs(lit)];
        return lit > 0 ? v : -v;
    }

    // 1 satisfied, 0 open, -1 falsified; `unit` gets the only open literal.
    int clause_state(std::size_t i, std::int64_t& unit) const {
        int open = 0;
        for (auto lit : doc_.clauses[i]) {
            const int v = lit_value(lit);
            if (v > 0) {
                return 1;
            }
            if (v == 0) {
                ++open;
                unit = lit;
            }
        }
        return open == 0 ? -1 : (open == 1 ? 2 : 0);
    }

    bool assign(std::int64_t lit, std::vector<std::int64_t>& trail) {
        std::vector<std::int64_t> queue{lit};
        while (!queue.empty()) {
            const auto l = queue.back();
            queue.pop_back();
            const int cur = lit_value(l);
            if (cur > 0) {
                continue;
            }
            if (cur < 0) {
                return false;
            }
            value_[std::abs(l)] = l > 0 ? 1 : -1;
            trail.push_back(l);
            for (auto ci : occurs_[std::abs(l)]) {
                std::int64_t unit = 0;
                const int st = clause_state(ci, unit);
                if (st == -1) {
                    return false;
                }
                if (st == 2) {
                    queue.push_back(unit);
                }
            }
        }
        return true;
    }

    void undo(std::vector<std::int64_t>& trail) {
        for (auto l : trail) {
            value_[std::abs(l)] = 0;
        }
        trail.clear();
    }

    bool search() {
        // units and the first open clause
        std::optional<std::size_t> open_clause;
        for (std::size_t i = 0; i < doc_.clauses.size(); ++i) {
            std::int64_t unit = 0;
            const int st = clause_state(i, unit);
            if (st == -1) {
                return false;
            }
            if (st != 1 && (!open_clause || st == 2)) {
                open_clause = i;
                if (st == 2) {
                    break;
                }
            }
        }
        if (!open_clause) {
            return true;
        }
        if (++decisions_ > budget_) {
            throw std::runtime_error("dpll budget exceeded");
        }
        std::vector<std::int64_t> refuted; // literals already tried, now false
        for (auto lit : doc_.clauses[*open_clause]) {
            if (lit_value(lit) < 0) {
                continue;
            }
            if (lit_value(lit) > 0) {
                // propagation of the refutations satisfied the clause
                if (search()) {
                    return true;
                }
                break;
            }
            std::vector<std::int64_t> trail;
            if (assign(lit, trail) && search()) {
                return true;
            }
            undo(trail);
            if (!assign(-lit, refuted)) {
                break;
            }
        }
        undo(refuted);
        return false;
    }

    const hatgame::CnfDocument& doc_;
    std::uint64_t budget_;
    std::uint64_t decisions_ = 0;
    std::vector<std::vector<std::size_t>> occurs_;
    std::vector<int> value_;
};

// Reciprocal sum >= 1 over exact fractions.
inline bool reciprocal_sum_at_least_one(const std::vector<Hat>& h) {
    std::uint64_t num = 0, den = 1;
    for (Hat x : h) {
        // num/den + 1/x
        num = num * x + den;
        den = den * x;
        const auto g = std::gcd(num, den);
        num /= g;
        den /= g;
    }
    return num >= den;
}

// Deterministic generators.
struct Gen {
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
    Hat hat(Hat lo, Hat hi) { return std::uniform_int_distribution<Hat>(lo, hi)(rng); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
    std::mt19937_64 rng;
};

inline std::vector<std::string> ids(std::size_t n, const std::string& prefix = "v") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

inline hatgame::Game from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                std::vector<Hat> h, const std::string& prefix = "v") {
    return hatgame::Game(hatgame::Graph::build(ids(n, prefix), edges), std::move(h));
}

inline hatgame::Game path(std::vector<Hat> h, const std::string& prefix = "v") {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 1; i < h.size(); ++i) {
        e.emplace_back(i - 1, i);
    }
    const auto n = h.size();
    return from_edges(n, e, std::move(h), prefix);
}

inline hatgame::Game cycle(std::vector<Hat> h, const std::string& prefix = "v") {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < h.size(); ++i) {
        e.emplace_back(i, (i + 1) % h.size());
    }
    const auto n = h.size();
    return from_edges(n, e, std::move(h), prefix);
}

// Random connected or disconnected simple graph game.
inline hatgame::Game random_game(Gen& g, std::size_t max_n, Hat max_h, double edge_p = 0.5) {
    const std::size_t n = 1 + g.below(max_n);
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (g.coin(edge_p)) {
                e.emplace_back(a, b);
            }
        }
    }
    std::vector<Hat> h(n);
    for (auto& x : h) {
        x = g.hat(1, max_h);
    }
    return from_edges(n, e, h);
}

} // namespace oracle

#endif
