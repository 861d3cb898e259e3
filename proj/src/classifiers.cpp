#include "hatgame/classifiers.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "hatgame/error.hpp"

namespace hatgame {

namespace {

__extension__ typedef unsigned __int128 u128;

Game path_game(std::span<const Hat> hatness) {
    std::vector<std::string> ids;
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (std::size_t i = 0; i < hatness.size(); ++i) {
        ids.push_back("p" + std::to_string(i));
        if (i > 0) {
            edges.emplace_back(i - 1, i);
        }
    }
    return Game(Graph::build(std::move(ids), edges), std::vector<Hat>(hatness.begin(), hatness.end()));
}

// Up to this length (hatness 2..5) agreeing folds always match exact search.
constexpr std::size_t kFoldCheckedLength = 4;

bool fold_wins(const std::vector<Hat>& fold) {
    return !fold.empty() && fold.back() == 1;
}

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    }
    void join(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::vector<std::size_t> parent;
};

using EdgeList = std::vector<std::pair<Vertex, Vertex>>;

// Biconnected components as edge lists, iterative Tarjan with an edge stack.
std::vector<EdgeList> biconnected_blocks(const Graph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> disc(n, 0), low(n, 0);
    std::size_t timer = 0;
    std::vector<EdgeList> blocks;
    EdgeList stack;

    struct Frame {
        Vertex v;
        Vertex parent;
        std::size_t next;
    };
    for (Vertex root = 0; root < n; ++root) {
        if (disc[root] != 0) {
            continue;
        }
        std::vector<Frame> dfs{{root, root, 0}};
        disc[root] = low[root] = ++timer;
        while (!dfs.empty()) {
            Frame& f = dfs.back();
            auto nb = g.neighbors(f.v);
            if (f.next < nb.size()) {
                const Vertex w = nb[f.next++];
                if (disc[w] == 0) {
                    stack.emplace_back(f.v, w);
                    disc[w] = low[w] = ++timer;
                    dfs.push_back({w, f.v, 0});
                } else if (w != f.parent && disc[w] < disc[f.v]) {
                    stack.emplace_back(f.v, w);
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
                continue;
            }
            const Vertex v = f.v;
            const Vertex p = f.parent;
            dfs.pop_back();
            if (dfs.empty()) {
                break;
            }
            low[p] = std::min(low[p], low[v]);
            if (low[v] >= disc[p]) {
                EdgeList block;
                while (true) {
                    auto e = stack.back();
                    stack.pop_back();
                    block.emplace_back(std::min(e.first, e.second), std::max(e.first, e.second));
                    if (e.first == p && e.second == v) {
                        break;
                    }
                }
                std::sort(block.begin(), block.end());
                blocks.push_back(std::move(block));
            }
        }
    }
    return blocks;
}

std::vector<Vertex> block_vertices(const EdgeList& edges) {
    std::vector<Vertex> vs;
    for (auto [a, b] : edges) {
        vs.push_back(a);
        vs.push_back(b);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

// Walks a block whose every vertex has degree 2 inside it.
std::optional<std::vector<Vertex>> walk_cycle(const std::vector<Vertex>& vs, const EdgeList& edges) {
    std::map<Vertex, std::vector<Vertex>> adj;
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& [v, nb] : adj) {
        if (nb.size() != 2) {
            return std::nullopt;
        }
        std::sort(nb.begin(), nb.end());
    }
    std::vector<Vertex> order{vs.front()};
    Vertex prev = vs.front();
    Vertex cur = adj[prev][0];
    while (cur != vs.front()) {
        order.push_back(cur);
        const auto& nb = adj[cur];
        const Vertex next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    if (order.size() != vs.size()) {
        return std::nullopt;
    }
    return order;
}

} // namespace

std::string_view to_string(Outcome o) {
    return o == Outcome::winning ? "WINNING" : "LOSING";
}

std::vector<Hat> path_fold(std::span<const Hat> hatness) {
    std::vector<Hat> fold;
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < hatness.size(); ++i) {
        const std::uint64_t h = hatness[i];
        w = i == 0 ? h : (h * (w - 1) + w - 1) / w;
        fold.push_back(static_cast<Hat>(w));
        if (w <= 1) {
            break;
        }
    }
    return fold;
}

PathDecision decide_path(std::span<const Hat> hatness, const SolveLimits& fallback) {
    if (hatness.empty()) {
        throw Error(ErrorCode::EmptySubset, "path must have at least one vertex");
    }
    for (Hat h : hatness) {
        if (h == 0) {
            throw Error(ErrorCode::NonPositiveHatness, "path hatness must be positive");
        }
    }
    PathDecision d;
    d.left_fold = path_fold(hatness);
    std::vector<Hat> reversed(hatness.rbegin(), hatness.rend());
    d.right_fold = path_fold(reversed);
    const bool left = fold_wins(d.left_fold);
    const bool right = fold_wins(d.right_fold);
    d.fold_disagreement = left != right;
    if (!d.fold_disagreement) {
        d.verdict = left ? Outcome::winning : Outcome::losing;
        if (hatness.size() <= kFoldCheckedLength) {
            return d;
        }
        // longer paths can fool both folds, e.g. (3,3,2,3,3); search when it fits
        try {
            const Verdict v = exact_solve(path_game(hatness), fallback);
            if (!is_inconclusive(v)) {
                d.verdict = is_winning(v) ? Outcome::winning : Outcome::losing;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::TooLarge) {
                throw;
            }
        }
        return d;
    }
    Verdict v;
    try {
        v = exact_solve(path_game(hatness), fallback);
    } catch (const Error& e) {
        throw Error(ErrorCode::FoldDisagreement,
                    std::string("left and right folds disagree and the solver cannot decide: ") + e.what());
    }
    if (is_inconclusive(v)) {
        throw Error(ErrorCode::FoldDisagreement, "left and right folds disagree and the solver ran out of budget");
    }
    d.verdict = is_winning(v) ? Outcome::winning : Outcome::losing;
    return d;
}

bool triangle_winning(Hat h1, Hat h2, Hat h3) {
    if (h1 == 0 || h2 == 0 || h3 == 0) {
        return false;
    }
    const u128 a = h1, b = h2, c = h3;
    return b * c + a * c + a * b >= a * b * c;
}

std::optional<std::vector<Vertex>> cycle_order(const Graph& g) {
    const std::size_t n = g.size();
    if (n < 3 || g.edge_count() != n) {
        return std::nullopt;
    }
    for (Vertex v = 0; v < n; ++v) {
        if (g.degree(v) != 2) {
            return std::nullopt;
        }
    }
    std::vector<Vertex> order{0};
    Vertex prev = 0;
    Vertex cur = g.neighbors(0)[0];
    while (cur != 0) {
        order.push_back(cur);
        auto nb = g.neighbors(cur);
        const Vertex next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    if (order.size() != n) {
        return std::nullopt;
    }
    return order;
}

std::optional<std::vector<Vertex>> path_order(const Graph& g) {
    const std::size_t n = g.size();
    if (n == 0 || g.edge_count() != n - 1) {
        return std::nullopt;
    }
    if (n == 1) {
        return std::vector<Vertex>{0};
    }
    std::optional<Vertex> start;
    for (Vertex v = 0; v < n; ++v) {
        if (g.degree(v) > 2) {
            return std::nullopt;
        }
        if (g.degree(v) == 1 && !start) {
            start = v;
        }
    }
    if (!start) {
        return std::nullopt;
    }
    std::vector<Vertex> order{*start};
    Vertex prev = *start;
    Vertex cur = g.neighbors(*start)[0];
    while (true) {
        order.push_back(cur);
        auto nb = g.neighbors(cur);
        if (nb.size() == 1) {
            break;
        }
        const Vertex next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    if (order.size() != n) {
        return std::nullopt;
    }
    return order;
}

int condition_number(CycleCondition c) {
    switch (c) {
    case CycleCondition::length: return 1;
    case CycleCondition::triangle: return 2;
    case CycleCondition::proper_arc: return 3;
    case CycleCondition::sequence: return 4;
    case CycleCondition::none: break;
    }
    return 0;
}

CycleClassification classify_cycle(const Game& game, const SolveLimits& fallback) {
    const auto order = cycle_order(game.graph());
    if (!order) {
        throw Error(ErrorCode::NotACycle, "graph is not a single cycle on at least 3 vertices");
    }
    const std::size_t n = order->size();
    std::vector<Hat> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = game.hatness((*order)[i]);
    }
    const Hat max_h = *std::max_element(h.begin(), h.end());

    CycleClassification out;

    std::optional<std::vector<Vertex>> arc;
    std::map<std::vector<Hat>, bool> decided;
    for (std::size_t len = 1; len < n && !arc; ++len) {
        for (std::size_t start = 0; start < n && !arc; ++start) {
            std::vector<Hat> seq(len);
            for (std::size_t k = 0; k < len; ++k) {
                seq[k] = h[(start + k) % n];
            }
            auto it = decided.find(seq);
            if (it == decided.end()) {
                it = decided.emplace(seq, decide_path(seq, fallback).verdict == Outcome::winning).first;
            }
            if (it->second) {
                arc.emplace();
                for (std::size_t k = 0; k < len; ++k) {
                    arc->push_back((*order)[(start + k) % n]);
                }
            }
        }
    }

    const bool cond1 = (n == 4 || n % 3 == 0) && max_h <= 3;
    const bool cond2 = n == 3 && triangle_winning(h[0], h[1], h[2]);

    std::optional<std::vector<Vertex>> run;
    if (max_h <= 4) {
        for (std::size_t i = 0; i < n && !run; ++i) {
            const Hat a = h[i], b = h[(i + 1) % n], c = h[(i + 2) % n];
            if ((a == 2 && b == 3 && c == 3) || (a == 3 && b == 3 && c == 2) || (a == 3 && b == 2 && c == 3)) {
                run = std::vector<Vertex>{(*order)[i], (*order)[(i + 1) % n], (*order)[(i + 2) % n]};
            }
        }
    }

    if (cond1) out.satisfied.push_back(CycleCondition::length);
    if (cond2) out.satisfied.push_back(CycleCondition::triangle);
    if (arc) out.satisfied.push_back(CycleCondition::proper_arc);
    if (run) out.satisfied.push_back(CycleCondition::sequence);

    if (arc) {
        out.witness = CycleCondition::proper_arc;
        out.witness_vertices = *arc;
    } else if (cond1) {
        out.witness = CycleCondition::length;
    } else if (cond2) {
        out.witness = CycleCondition::triangle;
    } else if (run) {
        out.witness = CycleCondition::sequence;
        out.witness_vertices = *run;
    }
    out.verdict = out.witness == CycleCondition::none ? Outcome::losing : Outcome::winning;
    return out;
}

ReductionResult reduce_delete2(const Game& game, std::string_view t_id, std::string_view u_id,
                               std::string_view v_id, std::string_view w_id) {
    const Graph& g = game.graph();
    if (!cycle_order(g)) {
        throw Error(ErrorCode::NotACycle, "graph is not a single cycle on at least 3 vertices");
    }
    if (g.size() < 4) {
        throw Error(ErrorCode::PreconditionViolated, "cycle must have length at least 4");
    }
    const Vertex t = g.at(t_id), u = g.at(u_id), v = g.at(v_id), w = g.at(w_id);
    std::vector<Vertex> four{t, u, v, w};
    std::sort(four.begin(), four.end());
    if (std::adjacent_find(four.begin(), four.end()) != four.end() || !g.adjacent(t, u) || !g.adjacent(u, v) ||
        !g.adjacent(v, w)) {
        throw Error(ErrorCode::PreconditionViolated, "t,u,v,w must be four consecutive cycle vertices");
    }
    const std::uint64_t ht = game.hatness(t), hu = game.hatness(u), hv = game.hatness(v), hw = game.hatness(w);
    if (hv <= hu) {
        throw Error(ErrorCode::PreconditionViolated, "need h(v) > h(u)");
    }
    if (hu == 1) {
        throw Error(ErrorCode::PreconditionViolated, "h(u) = 1 would leave t with no colors");
    }
    const std::uint64_t k = (hv + hu - 1) / hu;
    const auto new_t = static_cast<Hat>(ht - ht / hu);
    const auto new_w = static_cast<Hat>((hw * (k - 1) + k - 1) / k);

    std::vector<Vertex> keep;
    for (Vertex x = 0; x < g.size(); ++x) {
        if (x != u && x != v) {
            keep.push_back(x);
        }
    }
    Game sub = subgame(game, keep).game;
    std::vector<Hat> hat = sub.hatness();
    const Vertex st = sub.graph().at(game.id(t));
    const Vertex sw = sub.graph().at(game.id(w));
    hat[st] = new_t;
    hat[sw] = new_w;

    ReductionResult r{Game(sub.graph(), std::move(hat)), {game.id(u), game.id(v)}, {}};
    r.updates.push_back({game.id(t), static_cast<Hat>(ht), new_t});
    r.updates.push_back({game.id(w), static_cast<Hat>(hw), new_w});
    return r;
}

std::vector<Game> reduce_h5_path(const Game& game, std::string_view v_id) {
    const auto order = path_order(game.graph());
    if (!order) {
        throw Error(ErrorCode::NotAPath, "graph is not a path");
    }
    const Vertex v = game.graph().at(v_id);
    if (game.hatness(v) != 5) {
        throw Error(ErrorCode::NoHatness5Vertex, "vertex '" + game.id(v) + "' does not have hatness 5");
    }
    std::vector<Game> out;
    if (order->size() < 2) {
        return out;
    }
    std::vector<Vertex> drop_first(order->begin() + 1, order->end());
    std::vector<Vertex> drop_last(order->begin(), order->end() - 1);
    out.push_back(subgame(game, drop_first).game);
    out.push_back(subgame(game, drop_last).game);
    return out;
}

CactusReport analyze_cactus(const Graph& graph) {
    if (graph.size() == 0 || !graph.connected()) {
        throw Error(ErrorCode::Disconnected, "graph must be connected");
    }
    CactusReport r;
    r.is_cactus = true;
    const auto raw = biconnected_blocks(graph);
    for (const auto& edges : raw) {
        Block b;
        b.edge_count = edges.size();
        b.vertices = block_vertices(edges);
        if (edges.size() == 1) {
            b.kind = BlockKind::edge;
        } else if (edges.size() == b.vertices.size()) {
            b.kind = BlockKind::cycle;
            b.vertices = *walk_cycle(b.vertices, edges);
        } else {
            b.kind = BlockKind::cycle;
            r.is_cactus = false;
        }
        r.blocks.push_back(std::move(b));
    }
    if (!r.is_cactus) {
        throw NotCactusError(r, "graph has a block that is neither an edge nor a cycle");
    }

    for (std::size_t i = 0; i < r.blocks.size(); ++i) {
        const Block& b = r.blocks[i];
        if (b.kind != BlockKind::cycle) {
            continue;
        }
        const std::size_t len = b.vertices.size();
        ++r.cycle_count;
        if (len == 3) {
            ++r.triangle_count;
        }
        if (len == 4 || len % 3 == 0) {
            r.good_cycle = true;
        }

        // Leaf cycle: without this cycle's edges, at most one component still has a cycle.
        DisjointSets ds(graph.size());
        std::vector<std::pair<Vertex, Vertex>> rest;
        for (std::size_t j = 0; j < raw.size(); ++j) {
            if (j != i) {
                rest.insert(rest.end(), raw[j].begin(), raw[j].end());
            }
        }
        for (auto [a, c] : rest) {
            ds.join(a, c);
        }
        std::map<std::size_t, std::pair<std::size_t, std::size_t>> comp; // root -> (vertices, edges)
        for (Vertex x = 0; x < graph.size(); ++x) {
            ++comp[ds.find(x)].first;
        }
        for (auto [a, c] : rest) {
            ++comp[ds.find(a)].second;
        }
        std::size_t cyclic = 0;
        for (const auto& [root, ve] : comp) {
            if (ve.second >= ve.first) {
                ++cyclic;
            }
        }
        if (cyclic <= 1) {
            r.leaf_cycles.push_back(i);
        }
    }

    if (r.triangle_count >= 2) {
        r.hg = 4;
        r.statement = 1;
    } else if (r.cycle_count >= 2 || r.good_cycle) {
        r.hg = 3;
        r.statement = 2;
    } else if (graph.edge_count() >= 1) {
        r.hg = 2;
        r.statement = 3;
    } else {
        r.hg = 1;
        r.statement = 0;
    }
    return r;
}

} // namespace hatgame
