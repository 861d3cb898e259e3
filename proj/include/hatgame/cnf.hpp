#ifndef HATGAME_CNF_HPP
#define HATGAME_CNF_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hatgame/game.hpp"
#include "hatgame/strategy.hpp"

namespace hatgame {

inline constexpr std::uint64_t kMaxCnfVariables = 10'000'000;
inline constexpr std::uint64_t kMaxCnfClauses = 50'000'000;

struct CnfVariable {
    Vertex vertex = 0;
    View view;
    Hat color = 0;
};

// Variables are numbered from 1. Literals are signed variable numbers.
struct CnfDocument {
    std::uint64_t variable_count = 0;
    std::vector<std::vector<std::int64_t>> clauses;
    std::vector<CnfVariable> legend; // legend[var - 1]
};

// One variable per (vertex, view, color): "this vertex guesses this color on
// this view", numbered vertex by vertex, view index by view index, color by
// color. Clauses: for every (vertex, view) one at-least-one clause then its
// pairwise at-most-one clauses; then one coverage clause per coloring in
// canonical order. Satisfiable iff the game is winning. Throws
// Error(TooLarge) beyond kMaxCnfVariables variables or kMaxCnfClauses clauses.
CnfDocument export_cnf(const Game& game);

// Legend comments ("c map <var> <vertex> <view> <color>", "-" for an empty
// view), the "p cnf" header, then one zero-terminated clause per line.
std::string write_dimacs(const Game& game, const CnfDocument& doc);

// Strategy from a model (model[var - 1]); entries with no true variable guess 0.
Strategy decode_model(const Game& game, const std::vector<bool>& model);

} // namespace hatgame

#endif
