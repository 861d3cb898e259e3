#include "hatgame/cnf.hpp"

#include "hatgame/error.hpp"
#include "hatgame/io.hpp"

namespace hatgame {

namespace {

// First variable of each vertex's block.
std::vector<std::uint64_t> variable_bases(const Game& game) {
    std::vector<std::uint64_t> base(game.size() + 1, 1);
    for (Vertex v = 0; v < game.size(); ++v) {
        auto views = game.view_count(v);
        if (!views || *views > kMaxCnfVariables / game.hatness(v)) {
            throw Error(ErrorCode::TooLarge, "CNF would exceed " + std::to_string(kMaxCnfVariables) + " variables");
        }
        base[v + 1] = base[v] + *views * game.hatness(v);
        if (base[v + 1] - 1 > kMaxCnfVariables) {
            throw Error(ErrorCode::TooLarge, "CNF would exceed " + std::to_string(kMaxCnfVariables) + " variables");
        }
    }
    return base;
}

} // namespace

CnfDocument export_cnf(const Game& game) {
    const auto base = variable_bases(game);
    CnfDocument doc;
    doc.variable_count = base.back() - 1;

    std::uint64_t clause_count = 0;
    for (Vertex v = 0; v < game.size(); ++v) {
        const std::uint64_t h = game.hatness(v);
        clause_count += *game.view_count(v) * (1 + h * (h - 1) / 2);
    }
    auto colorings = game.coloring_count();
    if (!colorings || clause_count + *colorings > kMaxCnfClauses) {
        throw Error(ErrorCode::TooLarge, "CNF would exceed " + std::to_string(kMaxCnfClauses) + " clauses");
    }

    doc.legend.reserve(doc.variable_count);
    doc.clauses.reserve(clause_count + *colorings);
    for (Vertex v = 0; v < game.size(); ++v) {
        const Hat h = game.hatness(v);
        for (std::uint64_t idx = 0; idx < *game.view_count(v); ++idx) {
            const auto first = static_cast<std::int64_t>(base[v] + idx * h);
            View view = game.decode_view(v, idx);
            std::vector<std::int64_t> at_least;
            for (Hat c = 0; c < h; ++c) {
                doc.legend.push_back({v, view, c});
                at_least.push_back(first + c);
            }
            doc.clauses.push_back(std::move(at_least));
            for (Hat a = 0; a < h; ++a) {
                for (Hat b = a + 1; b < h; ++b) {
                    doc.clauses.push_back({-(first + a), -(first + b)});
                }
            }
        }
    }
    Coloring phi(game.size(), 0);
    do {
        std::vector<std::int64_t> cover;
        cover.reserve(game.size());
        for (Vertex v = 0; v < game.size(); ++v) {
            cover.push_back(static_cast<std::int64_t>(base[v] + game.view_index(v, phi) * game.hatness(v) + phi[v]));
        }
        doc.clauses.push_back(std::move(cover));
    } while (next_coloring(game, phi));
    return doc;
}

std::string write_dimacs(const Game& game, const CnfDocument& doc) {
    std::string out;
    for (std::uint64_t var = 1; var <= doc.legend.size(); ++var) {
        const CnfVariable& x = doc.legend[var - 1];
        out += "c map " + std::to_string(var) + " " + game.id(x.vertex) + " " + format_colors(x.view) + " " +
               std::to_string(x.color) + "\n";
    }
    out += "p cnf " + std::to_string(doc.variable_count) + " " + std::to_string(doc.clauses.size()) + "\n";
    for (const auto& clause : doc.clauses) {
        for (auto lit : clause) {
            out += std::to_string(lit);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

Strategy decode_model(const Game& game, const std::vector<bool>& model) {
    const auto base = variable_bases(game);
    if (model.size() < base.back() - 1) {
        throw Error(ErrorCode::IncompleteStrategy, "model is shorter than the variable count");
    }
    Strategy s = Strategy::constant(game, 0);
    for (Vertex v = 0; v < game.size(); ++v) {
        const Hat h = game.hatness(v);
        for (std::uint64_t idx = 0; idx < *game.view_count(v); ++idx) {
            for (Hat c = 0; c < h; ++c) {
                if (model[base[v] - 1 + idx * h + c]) {
                    s.set(v, idx, c);
                    break;
                }
            }
        }
    }
    return s;
}

} // namespace hatgame
