#ifndef HATGAME_IO_HPP
#define HATGAME_IO_HPP

#include <string>
#include <string_view>

#include "hatgame/constructors.hpp"
#include "hatgame/game.hpp"
#include "hatgame/strategy.hpp"

namespace hatgame {

// Game documents, one statement per line:
//   # comment
//   vertex <id> <hatness>
//   edge <id> <id>
// Vertices keep their declaration order. Throws ParseError: SyntaxError for
// malformed lines and duplicate vertices, and the model's own codes
// (UnknownEndpoint, SelfLoop, DuplicateEdge, NonPositiveHatness) for the rest.
Game parse_game(std::string_view text);

// Vertices in canonical order, then edges in canonical order.
std::string serialize_game(const Game& game);

// "a,b,c" for a view, "-" for the empty view.
std::string format_colors(std::span<const Hat> colors);

// Certificate documents:
//   game
//   <game document lines>
//   end game
//   strategy <id>            one block per vertex, any order
//   <c1,c2,...> -> <guess>   one line per view; "-" stands for the empty view
//   provenance               optional
//   step <k> clique <id>:<h> ...
//   step <k> solve <id>:<h> ... edges <id>-<id> ...
//   step <k> glue <left step> <id> <right step> <id>
//   step <k> restrict <step> <id>:<h> ...
// Steps are numbered from 1 in order, and refer only to earlier steps; the
// last step builds the certificate's game. Throws ParseError.
Certificate parse_certificate(std::string_view text);

std::string serialize_certificate(const Certificate& cert);

} // namespace hatgame

#endif
