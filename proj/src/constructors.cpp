#include "hatgame/constructors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

#include "hatgame/classifiers.hpp"
#include "hatgame/error.hpp"

namespace hatgame {

namespace {

// Games above this many colorings are not re-verified after construction;
// exhaustive verification would take longer than the construction is worth.
constexpr std::uint64_t kVerifyCap = std::uint64_t{1} << 24;

constexpr std::uint64_t kSynthesisCap = 100'000;

bool verifiable(const Game& game) {
    auto count = game.coloring_count();
    return count && *count <= kVerifyCap;
}

// Fills every entry of v's table from its decoded view.
template <typename Fn>
void fill_table(const Game& game, Strategy& s, Vertex v, Fn&& guess_for) {
    const std::uint64_t views = *game.view_count(v);
    for (std::uint64_t idx = 0; idx < views; ++idx) {
        s.set(v, idx, guess_for(game.decode_view(v, idx)));
    }
}

std::vector<std::size_t> bfs_parents(const Graph& g, Vertex source, std::vector<std::size_t>& dist) {
    constexpr auto unseen = std::numeric_limits<std::size_t>::max();
    dist.assign(g.size(), unseen);
    std::vector<std::size_t> parent(g.size(), unseen);
    std::deque<Vertex> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const Vertex x = queue.front();
        queue.pop_front();
        for (Vertex y : g.neighbors(x)) {
            if (dist[y] == unseen) {
                dist[y] = dist[x] + 1;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    return parent;
}

struct Connection {
    std::size_t first_block = 0;
    std::size_t second_block = 0;
    std::vector<Vertex> path; // from a vertex of the first block to one of the second
};

// Shortest path between the closest pair of vertices of two different blocks
// among `candidates`; ties go to earlier blocks, then lower vertices.
std::optional<Connection> closest_blocks(const Graph& g, const CactusReport& report,
                                         const std::vector<std::size_t>& candidates) {
    std::optional<Connection> best;
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist;
    for (std::size_t a = 0; a < candidates.size(); ++a) {
        for (std::size_t b = a + 1; b < candidates.size(); ++b) {
            auto xs = report.blocks[candidates[a]].vertices;
            auto ys = report.blocks[candidates[b]].vertices;
            std::sort(xs.begin(), xs.end());
            std::sort(ys.begin(), ys.end());
            for (Vertex x : xs) {
                auto parent = bfs_parents(g, x, dist);
                for (Vertex y : ys) {
                    if (dist[y] < best_dist) {
                        best_dist = dist[y];
                        Connection c{candidates[a], candidates[b], {}};
                        for (Vertex z = y; z != x; z = parent[z]) {
                            c.path.push_back(z);
                        }
                        c.path.push_back(x);
                        std::reverse(c.path.begin(), c.path.end());
                        best = std::move(c);
                    }
                }
            }
        }
    }
    return best;
}

std::uint64_t product_bounded(std::size_t len, std::uint64_t first, std::uint64_t rest) {
    std::uint64_t p = first;
    for (std::size_t i = 1; i < len && p <= kSynthesisCap; ++i) {
        p *= rest;
    }
    return p;
}

class StepBuilder {
public:
    explicit StepBuilder(const Graph& g) : g_(g) {}

    // Clique or solve step on one cycle block (or a single edge), hatness
    // `special` at vertex x and `other` elsewhere.
    std::size_t cycle(const std::vector<Vertex>& order, Vertex x, Hat special, Hat other) {
        std::vector<Vertex> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        ProvenanceStep s;
        s.kind = order.size() <= 3 ? StepKind::clique : StepKind::solve;
        for (Vertex v : sorted) {
            s.ids.push_back(g_.id(v));
            s.hatness.push_back(v == x ? special : other);
        }
        if (s.kind == StepKind::solve) {
            for (std::size_t i = 0; i < order.size(); ++i) {
                const Vertex a = order[i], b = order[(i + 1) % order.size()];
                s.edges.emplace_back(g_.id(std::min(a, b)), g_.id(std::max(a, b)));
            }
            std::sort(s.edges.begin(), s.edges.end());
        }
        return push(std::move(s));
    }

    std::size_t edge(Vertex a, Vertex b) {
        return cycle({std::min(a, b), std::max(a, b)}, a, 2, 2);
    }

    std::size_t glue(std::size_t left, std::size_t right, Vertex at) {
        ProvenanceStep s;
        s.kind = StepKind::glue;
        s.left = left;
        s.right = right;
        s.left_vertex = s.right_vertex = g_.id(at);
        return push(std::move(s));
    }

    std::size_t restrict(std::size_t of, std::map<std::string, Hat, std::less<>> lowered) {
        ProvenanceStep s;
        s.kind = StepKind::restrict;
        s.left = of;
        s.lowered = std::move(lowered);
        return push(std::move(s));
    }

    // Glues `first`, a chain of edges along `path`, and `second`, joining at
    // the path's vertices. Both end pieces must hold hatness 2 at the ends.
    std::size_t chain(std::size_t first, const std::vector<Vertex>& path, std::size_t second) {
        std::size_t cur = first;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            cur = glue(cur, edge(path[i], path[i + 1]), path[i]);
        }
        return glue(cur, second, path.back());
    }

    std::vector<ProvenanceStep> steps;

private:
    std::size_t push(ProvenanceStep s) {
        steps.push_back(std::move(s));
        return steps.size() - 1;
    }

    const Graph& g_;
};

} // namespace

ArcTable arc_table(std::span<const Hat> hatness) {
    constexpr std::uint64_t limit = std::uint64_t{1} << 62;
    ArcTable t;
    for (Hat h : hatness) {
        if (h == 0) {
            throw Error(ErrorCode::NonPositiveHatness, "clique hatness must be positive");
        }
        const std::uint64_t g = std::gcd(t.modulus, std::uint64_t{h});
        if (t.modulus / g > limit / h) {
            throw Error(ErrorCode::Overflow, "lcm of the hatnesses is too large");
        }
        t.modulus = t.modulus / g * h;
    }
    std::uint64_t acc = 0;
    for (Hat h : hatness) {
        t.width.push_back(t.modulus / h);
        t.start.push_back(std::min(acc, t.modulus));
        acc = std::min(acc + t.modulus / h, t.modulus);
    }
    return t;
}

Game clique_game(std::span<const Hat> hatness) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < hatness.size(); ++i) {
        ids.push_back("k" + std::to_string(i));
    }
    return clique_game(hatness, std::move(ids));
}

Game clique_game(std::span<const Hat> hatness, std::vector<std::string> ids) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex a = 0; a < hatness.size(); ++a) {
        for (Vertex b = a + 1; b < hatness.size(); ++b) {
            edges.emplace_back(a, b);
        }
    }
    return Game(Graph::build(std::move(ids), edges), std::vector<Hat>(hatness.begin(), hatness.end()));
}

Strategy clique_strategy(std::span<const Hat> hatness) {
    const ArcTable arcs = arc_table(hatness);
    std::uint64_t covered = 0;
    for (std::size_t i = 0; i < hatness.size(); ++i) {
        covered += arcs.width[i];
        if (covered >= arcs.modulus) {
            break;
        }
    }
    if (covered < arcs.modulus) {
        throw Error(ErrorCode::SumBelowOne, "reciprocal hatness sum is below 1");
    }
    const Game game = clique_game(hatness);
    const std::uint64_t L = arcs.modulus;
    Strategy s = Strategy::constant(game, 0);
    for (Vertex i = 0; i < game.size(); ++i) {
        const std::uint64_t w = arcs.width[i];
        const std::uint64_t start = arcs.start[i];
        if (start >= L) {
            continue;
        }
        auto nb = game.graph().neighbors(i);
        fill_table(game, s, i, [&](const View& view) -> Hat {
            std::uint64_t t = 0;
            for (std::size_t k = 0; k < nb.size(); ++k) {
                t = (t + view[k] * arcs.width[nb[k]]) % L;
            }
            const std::uint64_t delta = (start + L - t) % L;
            const std::uint64_t steps = (delta + w - 1) / w;
            // the grid point t + steps*w lands at start + (steps*w - delta)
            if (start + (steps * w - delta) >= L) {
                return 0;
            }
            return static_cast<Hat>(steps % hatness[i]);
        });
    }
    return s;
}

GluedStrategy glue_strategies(const Game& g1, const Strategy& s1, std::string_view v1, const Game& g2,
                              const Strategy& s2, std::string_view v2) {
    if (verifiable(g1) && verify_strategy(g1, s1)) {
        throw Error(ErrorCode::CertificateInvalid, "first strategy does not win its game");
    }
    if (verifiable(g2) && verify_strategy(g2, s2)) {
        throw Error(ErrorCode::CertificateInvalid, "second strategy does not win its game");
    }
    GluedStrategy out{glue_graphs(g1, v1, g2, v2), {}};
    const Game& game = out.glued.game;
    const Vertex m = out.glued.merged;
    const Vertex a = g1.graph().at(v1);
    const Vertex b = g2.graph().at(v2);
    const Hat h1 = g1.hatness(a);

    // glued vertex -> (side, original vertex); the merged vertex belongs to both
    constexpr Vertex none = std::numeric_limits<Vertex>::max();
    std::vector<Vertex> to1(game.size(), none), to2(game.size(), none);
    for (Vertex x = 0; x < g1.size(); ++x) {
        to1[x] = x;
    }
    for (Vertex y = 0; y < g2.size(); ++y) {
        to2[game.graph().at(out.glued.g2_names.at(g2.id(y)))] = y;
    }

    Strategy s = Strategy::constant(game, 0);
    Coloring c1(g1.size(), 0), c2(g2.size(), 0);
    for (Vertex x = 0; x < game.size(); ++x) {
        auto nb = game.graph().neighbors(x);
        fill_table(game, s, x, [&](const View& view) -> Hat {
            // the merged vertex's color splits into one coordinate per side
            for (std::size_t i = 0; i < nb.size(); ++i) {
                const Vertex y = nb[i];
                if (y == m) {
                    c1[a] = view[i] % h1;
                    c2[b] = view[i] / h1;
                } else if (to1[y] != none) {
                    c1[to1[y]] = view[i];
                } else {
                    c2[to2[y]] = view[i];
                }
            }
            if (x == m) {
                return s1.guess_on(g1, a, c1) + h1 * s2.guess_on(g2, b, c2);
            }
            if (to1[x] != none) {
                return s1.guess_on(g1, to1[x], c1);
            }
            return s2.guess_on(g2, to2[x], c2);
        });
    }
    if (verifiable(game) && verify_strategy(game, s)) {
        throw std::logic_error("glued strategy fails verification");
    }
    out.strategy = std::move(s);
    return out;
}

RestrictedStrategy restrict_hatness(const Game& game, const Strategy& strategy, std::span<const Hat> lower) {
    if (lower.size() != game.size()) {
        throw Error(ErrorCode::DomainMismatch, "restricted hatness must cover every vertex");
    }
    for (Vertex v = 0; v < game.size(); ++v) {
        if (lower[v] == 0) {
            throw Error(ErrorCode::NonPositiveHatness, "hatness of '" + game.id(v) + "' must be positive");
        }
        if (lower[v] > game.hatness(v)) {
            throw Error(ErrorCode::HatnessIncrease, "hatness of '" + game.id(v) + "' would increase");
        }
    }
    if (verifiable(game) && verify_strategy(game, strategy)) {
        throw Error(ErrorCode::CertificateInvalid, "strategy does not win its game");
    }
    RestrictedStrategy out{Game(game.graph(), std::vector<Hat>(lower.begin(), lower.end())), {}};
    const Game& small = out.game;
    Strategy s = Strategy::constant(small, 0);
    for (Vertex v = 0; v < small.size(); ++v) {
        fill_table(small, s, v, [&](const View& view) -> Hat {
            const Hat g = strategy.guess(v, game.encode_view(v, view));
            return g < lower[v] ? g : 0;
        });
    }
    if (verifiable(small) && verify_strategy(small, s)) {
        throw std::logic_error("restricted strategy fails verification");
    }
    out.strategy = std::move(s);
    return out;
}

std::string_view to_string(StepKind k) {
    switch (k) {
    case StepKind::clique: return "clique";
    case StepKind::solve: return "solve";
    case StepKind::glue: return "glue";
    case StepKind::restrict: return "restrict";
    }
    return "?";
}

SolveLimits synthesis_limits() {
    SolveLimits l;
    l.max_colorings = kSynthesisCap;
    return l;
}

RestrictedStrategy replay(std::span<const ProvenanceStep> provenance) {
    if (provenance.empty()) {
        throw Error(ErrorCode::CertificateInvalid, "empty provenance");
    }
    std::vector<RestrictedStrategy> built;
    built.reserve(provenance.size());
    for (std::size_t i = 0; i < provenance.size(); ++i) {
        const ProvenanceStep& s = provenance[i];
        auto child = [&](std::size_t k) -> const RestrictedStrategy& {
            if (k >= i) {
                throw Error(ErrorCode::CertificateInvalid,
                            "step " + std::to_string(i + 1) + " refers to a step that is not earlier");
            }
            return built[k];
        };
        switch (s.kind) {
        case StepKind::clique: {
            if (s.ids.size() != s.hatness.size() || s.ids.empty()) {
                throw Error(ErrorCode::CertificateInvalid, "clique step needs one hatness per vertex");
            }
            built.push_back({clique_game(s.hatness, s.ids), clique_strategy(s.hatness)});
            break;
        }
        case StepKind::solve: {
            if (s.ids.size() != s.hatness.size() || s.ids.empty()) {
                throw Error(ErrorCode::CertificateInvalid, "solve step needs one hatness per vertex");
            }
            Game g = make_game(s.ids, s.edges, s.hatness);
            Verdict v;
            try {
                v = exact_solve(g, synthesis_limits());
            } catch (const Error& e) {
                if (e.code() != ErrorCode::TooLarge) {
                    throw;
                }
                throw Error(ErrorCode::SynthesisCapExceeded, std::string("solve step: ") + e.what());
            }
            if (!is_winning(v)) {
                throw Error(ErrorCode::SynthesisCapExceeded, "solve step did not produce a winning strategy");
            }
            built.push_back({std::move(g), std::get<Winning>(v).strategy});
            break;
        }
        case StepKind::glue: {
            const auto& l = child(s.left);
            const auto& r = child(s.right);
            auto glued = glue_strategies(l.game, l.strategy, s.left_vertex, r.game, r.strategy, s.right_vertex);
            built.push_back({std::move(glued.glued.game), std::move(glued.strategy)});
            break;
        }
        case StepKind::restrict: {
            const auto& l = child(s.left);
            std::vector<Hat> lower = l.game.hatness();
            for (const auto& [id, h] : s.lowered) {
                lower[l.game.graph().at(id)] = h;
            }
            built.push_back(restrict_hatness(l.game, l.strategy, lower));
            break;
        }
        }
    }
    return std::move(built.back());
}

Certificate cactus_lower_bound_certificate(const Graph& graph) {
    const CactusReport report = analyze_cactus(graph);
    StepBuilder b(graph);

    auto cycles_where = [&](auto&& keep) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < report.blocks.size(); ++i) {
            if (report.blocks[i].kind == BlockKind::cycle && keep(report.blocks[i].vertices)) {
                out.push_back(i);
            }
        }
        return out;
    };

    if (report.hg == 4) {
        const auto triangles = cycles_where([](const auto& vs) { return vs.size() == 3; });
        const auto c = *closest_blocks(graph, report, triangles);
        const std::size_t first = b.cycle(report.blocks[c.first_block].vertices, c.path.front(), 2, 4);
        const std::size_t second = b.cycle(report.blocks[c.second_block].vertices, c.path.back(), 2, 4);
        b.chain(first, c.path, second);
    } else if (report.hg == 3) {
        // (2,3,...,3) cycles small enough to synthesize
        const auto small = cycles_where([](const auto& vs) { return product_bounded(vs.size(), 2, 3) <= kSynthesisCap; });
        const auto good = cycles_where([](const auto& vs) {
            return (vs.size() == 4 || vs.size() % 3 == 0) && product_bounded(vs.size(), 3, 3) <= kSynthesisCap;
        });
        if (report.cycle_count >= 2 && small.size() >= 2) {
            const auto c = *closest_blocks(graph, report, small);
            const std::size_t first = b.cycle(report.blocks[c.first_block].vertices, c.path.front(), 2, 3);
            const std::size_t second = b.cycle(report.blocks[c.second_block].vertices, c.path.back(), 2, 3);
            const std::size_t joined = b.chain(first, c.path, second);
            std::map<std::string, Hat, std::less<>> lowered;
            std::set<Vertex> touched(c.path.begin(), c.path.end());
            for (Vertex v : touched) {
                lowered.emplace(graph.id(v), 3);
            }
            b.restrict(joined, std::move(lowered));
        } else if (!good.empty()) {
            const auto& vs = report.blocks[good.front()].vertices;
            b.cycle(vs, vs.front(), 3, 3);
        } else {
            throw Error(ErrorCode::SynthesisCapExceeded,
                        "every cycle needed for the hatness-3 certificate is too large to synthesize");
        }
    } else if (report.hg == 2) {
        const auto [x, y] = graph.edges().front();
        b.edge(x, y);
    } else {
        ProvenanceStep s;
        s.kind = StepKind::clique;
        s.ids = {graph.id(0)};
        s.hatness = {1};
        b.steps.push_back(std::move(s));
    }

    auto built = replay(b.steps);
    return Certificate{std::move(built.game), std::move(built.strategy), std::move(b.steps)};
}

} // namespace hatgame
