#include "hatgame/game.hpp"

#include <algorithm>
#include <set>

#include "hatgame/error.hpp"

namespace hatgame {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::NonPositiveHatness: return "NonPositiveHatness";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidLimits: return "InvalidLimits";
    case ErrorCode::IncompleteStrategy: return "IncompleteStrategy";
    case ErrorCode::GuessOutOfRange: return "GuessOutOfRange";
    case ErrorCode::FoldDisagreement: return "FoldDisagreement";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::NotAPath: return "NotAPath";
    case ErrorCode::NoHatness5Vertex: return "NoHatness5Vertex";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NotCactus: return "NotCactus";
    case ErrorCode::SumBelowOne: return "SumBelowOne";
    case ErrorCode::CertificateInvalid: return "CertificateInvalid";
    case ErrorCode::HatnessIncrease: return "HatnessIncrease";
    case ErrorCode::SynthesisCapExceeded: return "SynthesisCapExceeded";
    case ErrorCode::SyntaxError: return "SyntaxError";
    }
    return "Unknown";
}

bool is_valid_identifier(std::string_view id) {
    if (id.empty()) {
        return false;
    }
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
}

Graph Graph::build(std::vector<std::string> ids, std::span<const IdPair> edges) {
    std::map<std::string, Vertex, std::less<>> index;
    for (Vertex v = 0; v < ids.size(); ++v) {
        index.emplace(ids[v], v);
    }
    std::vector<std::pair<Vertex, Vertex>> indexed;
    indexed.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        if (a == b) {
            throw Error(ErrorCode::SelfLoop, "self-loop at vertex '" + a + "'");
        }
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end() || ib == index.end()) {
            const std::string& missing = ia == index.end() ? a : b;
            throw Error(ErrorCode::UnknownEndpoint,
                        "edge (" + a + ", " + b + ") names undeclared vertex '" + missing + "'");
        }
        indexed.emplace_back(ia->second, ib->second);
    }
    return build(std::move(ids), indexed);
}

Graph Graph::build(std::vector<std::string> ids, std::span<const std::pair<Vertex, Vertex>> edges) {
    Graph g;
    for (Vertex v = 0; v < ids.size(); ++v) {
        if (!is_valid_identifier(ids[v])) {
            throw Error(ErrorCode::InvalidIdentifier, "invalid vertex identifier '" + ids[v] + "'");
        }
        if (!g.index_.emplace(ids[v], v).second) {
            throw Error(ErrorCode::DuplicateVertex, "duplicate vertex '" + ids[v] + "'");
        }
    }
    g.ids_ = std::move(ids);
    g.adjacency_.assign(g.ids_.size(), {});
    std::set<std::pair<Vertex, Vertex>> seen;
    for (auto [a, b] : edges) {
        if (a >= g.ids_.size() || b >= g.ids_.size()) {
            throw Error(ErrorCode::UnknownEndpoint, "edge endpoint index out of range");
        }
        if (a == b) {
            throw Error(ErrorCode::SelfLoop, "self-loop at vertex '" + g.ids_[a] + "'");
        }
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second) {
            throw Error(ErrorCode::DuplicateEdge,
                        "duplicate edge (" + g.ids_[key.first] + ", " + g.ids_[key.second] + ")");
        }
        g.adjacency_[a].push_back(b);
        g.adjacency_[b].push_back(a);
    }
    g.edges_.assign(seen.begin(), seen.end());
    for (auto& row : g.adjacency_) {
        std::sort(row.begin(), row.end());
    }
    return g;
}

std::optional<Vertex> Graph::find(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Vertex Graph::at(std::string_view id) const {
    if (auto v = find(id)) {
        return *v;
    }
    throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + std::string(id) + "'");
}

bool Graph::adjacent(Vertex a, Vertex b) const {
    const auto& row = adjacency_.at(a);
    return std::binary_search(row.begin(), row.end(), b);
}

std::vector<std::vector<Vertex>> Graph::components() const {
    std::vector<std::vector<Vertex>> result;
    std::vector<bool> seen(size(), false);
    for (Vertex root = 0; root < size(); ++root) {
        if (seen[root]) {
            continue;
        }
        std::vector<Vertex> component{root};
        seen[root] = true;
        for (std::size_t i = 0; i < component.size(); ++i) {
            for (Vertex w : adjacency_[component[i]]) {
                if (!seen[w]) {
                    seen[w] = true;
                    component.push_back(w);
                }
            }
        }
        std::sort(component.begin(), component.end());
        result.push_back(std::move(component));
    }
    return result;
}

bool Graph::connected() const {
    return size() > 0 && components().size() == 1;
}

namespace {

std::optional<std::uint64_t> checked_product(std::uint64_t acc, std::uint64_t factor) {
    if (factor != 0 && acc > std::numeric_limits<std::uint64_t>::max() / factor) {
        return std::nullopt;
    }
    return acc * factor;
}

} // namespace

Game::Game(Graph graph, std::vector<Hat> hatness) : graph_(std::move(graph)), hatness_(std::move(hatness)) {
    if (hatness_.size() != graph_.size()) {
        throw Error(ErrorCode::DomainMismatch, "hatness has " + std::to_string(hatness_.size()) +
                                                   " entries for " + std::to_string(graph_.size()) + " vertices");
    }
    for (Vertex v = 0; v < hatness_.size(); ++v) {
        if (hatness_[v] == 0) {
            throw Error(ErrorCode::NonPositiveHatness, "vertex '" + graph_.id(v) + "' has hatness 0");
        }
    }
}

std::optional<std::uint64_t> Game::coloring_count() const {
    std::uint64_t total = 1;
    for (Hat h : hatness_) {
        auto next = checked_product(total, h);
        if (!next) {
            return std::nullopt;
        }
        total = *next;
    }
    return total;
}

std::optional<std::uint64_t> Game::view_count(Vertex v) const {
    std::uint64_t total = 1;
    for (Vertex w : graph_.neighbors(v)) {
        auto next = checked_product(total, hatness_[w]);
        if (!next) {
            return std::nullopt;
        }
        total = *next;
    }
    return total;
}

std::uint64_t Game::view_index(Vertex v, std::span<const Hat> coloring) const {
    std::uint64_t index = 0;
    for (Vertex w : graph_.neighbors(v)) {
        index = index * hatness_[w] + coloring[w];
    }
    return index;
}

std::uint64_t Game::encode_view(Vertex v, std::span<const Hat> view) const {
    auto nbrs = graph_.neighbors(v);
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        index = index * hatness_[nbrs[i]] + view[i];
    }
    return index;
}

View Game::decode_view(Vertex v, std::uint64_t index) const {
    auto nbrs = graph_.neighbors(v);
    View view(nbrs.size());
    for (std::size_t i = nbrs.size(); i-- > 0;) {
        Hat h = hatness_[nbrs[i]];
        view[i] = static_cast<Hat>(index % h);
        index /= h;
    }
    return view;
}

View Game::view_of(Vertex v, std::span<const Hat> coloring) const {
    View view;
    view.reserve(graph_.degree(v));
    for (Vertex w : graph_.neighbors(v)) {
        view.push_back(coloring[w]);
    }
    return view;
}

bool Game::is_coloring(std::span<const Hat> coloring) const {
    if (coloring.size() != size()) {
        return false;
    }
    for (Vertex v = 0; v < size(); ++v) {
        if (coloring[v] >= hatness_[v]) {
            return false;
        }
    }
    return true;
}

Game validate(const GameSpec& spec) {
    Graph graph = Graph::build(spec.vertices, spec.edges);
    std::vector<Hat> hatness(graph.size());
    for (const auto& [id, h] : spec.hatness) {
        if (!graph.find(id)) {
            throw Error(ErrorCode::DomainMismatch, "hatness given for undeclared vertex '" + id + "'");
        }
    }
    for (Vertex v = 0; v < graph.size(); ++v) {
        auto it = spec.hatness.find(graph.id(v));
        if (it == spec.hatness.end()) {
            throw Error(ErrorCode::DomainMismatch, "no hatness for vertex '" + graph.id(v) + "'");
        }
        if (it->second < 1) {
            throw Error(ErrorCode::NonPositiveHatness,
                        "vertex '" + graph.id(v) + "' has hatness " + std::to_string(it->second));
        }
        if (it->second > std::numeric_limits<Hat>::max()) {
            throw Error(ErrorCode::Overflow, "hatness of vertex '" + graph.id(v) + "' is too large");
        }
        hatness[v] = static_cast<Hat>(it->second);
    }
    return Game(std::move(graph), std::move(hatness));
}

Game make_game(std::vector<std::string> ids, std::span<const IdPair> edges, std::vector<Hat> hatness) {
    return Game(Graph::build(std::move(ids), edges), std::move(hatness));
}

bool next_coloring(const Game& game, Coloring& coloring) {
    for (std::size_t i = coloring.size(); i-- > 0;) {
        if (++coloring[i] < game.hatness(i)) {
            return true;
        }
        coloring[i] = 0;
    }
    return false;
}

Subgame subgame(const Game& game, std::span<const Vertex> keep) {
    if (keep.empty()) {
        throw Error(ErrorCode::EmptySubset, "subgame needs at least one vertex");
    }
    std::vector<bool> kept(game.size(), false);
    for (Vertex v : keep) {
        if (v >= game.size()) {
            throw Error(ErrorCode::UnknownVertex, "subgame vertex index out of range");
        }
        kept[v] = true;
    }
    std::vector<Vertex> renumber(game.size(), 0);
    std::vector<std::string> ids;
    std::vector<Hat> hatness;
    for (Vertex v = 0; v < game.size(); ++v) {
        if (kept[v]) {
            renumber[v] = ids.size();
            ids.push_back(game.id(v));
            hatness.push_back(game.hatness(v));
        }
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (auto [a, b] : game.graph().edges()) {
        if (kept[a] && kept[b]) {
            edges.emplace_back(renumber[a], renumber[b]);
        }
    }
    bool proper = ids.size() < game.size();
    return {Game(Graph::build(std::move(ids), edges), std::move(hatness)), proper};
}

Subgame subgame(const Game& game, std::span<const std::string> keep) {
    std::vector<Vertex> indices;
    indices.reserve(keep.size());
    for (const auto& id : keep) {
        indices.push_back(game.graph().at(id));
    }
    if (indices.empty()) {
        throw Error(ErrorCode::EmptySubset, "subgame needs at least one vertex");
    }
    return subgame(game, std::span<const Vertex>(indices));
}

Glued glue_graphs(const Game& g1, std::string_view v1, const Game& g2, std::string_view v2, MergedHatness mode) {
    const Vertex a = g1.graph().at(v1);
    const Vertex b = g2.graph().at(v2);

    std::set<std::string, std::less<>> taken(g1.graph().ids().begin(), g1.graph().ids().end());
    taken.insert(g2.graph().ids().begin(), g2.graph().ids().end());

    Glued out;
    std::vector<std::string> ids = g1.graph().ids();
    std::vector<Hat> hatness = g1.hatness();
    std::vector<Vertex> g2_index(g2.size(), 0);
    for (Vertex w = 0; w < g2.size(); ++w) {
        const std::string& name = g2.id(w);
        if (w == b) {
            g2_index[w] = a;
            out.g2_names.emplace(name, g1.id(a));
            continue;
        }
        std::string fresh = name;
        if (g1.graph().find(name)) {
            for (int k = 2;; ++k) {
                fresh = name + "__g" + std::to_string(k);
                if (!taken.contains(fresh)) {
                    break;
                }
            }
            taken.insert(fresh);
        }
        g2_index[w] = ids.size();
        out.g2_names.emplace(name, fresh);
        ids.push_back(std::move(fresh));
        hatness.push_back(g2.hatness(w));
    }

    if (mode == MergedHatness::product) {
        auto merged = checked_product(g1.hatness(a), g2.hatness(b));
        if (!merged || *merged > std::numeric_limits<Hat>::max()) {
            throw Error(ErrorCode::Overflow, "merged hatness at '" + g1.id(a) + "' overflows");
        }
        hatness[a] = static_cast<Hat>(*merged);
    }

    std::vector<std::pair<Vertex, Vertex>> edges = g1.graph().edges();
    for (auto [x, y] : g2.graph().edges()) {
        edges.emplace_back(g2_index[x], g2_index[y]);
    }
    out.merged = a;
    out.game = Game(Graph::build(std::move(ids), edges), std::move(hatness));
    return out;
}

} // namespace hatgame
