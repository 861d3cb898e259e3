#include "hatgame/io.hpp"

#include <charconv>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "hatgame/error.hpp"

namespace hatgame {

namespace {

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        out.push_back({++number, line});
    }
    return out;
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\v' || c == '\f';
}

std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

// Blank or comment.
bool skippable(std::string_view s) {
    const auto t = tokens(s);
    return t.empty() || t.front().front() == '#';
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
    std::uint64_t v = 0;
    if (s.empty() || s.front() == '+' || s.front() == '-') {
        return std::nullopt;
    }
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

[[noreturn]] void syntax(std::size_t line, const std::string& message) {
    throw ParseError(ErrorCode::SyntaxError, line, message);
}

std::string quoted(std::string_view s) {
    return "'" + std::string(s) + "'";
}

std::string checked_id(std::string_view s, std::size_t line) {
    if (!is_valid_identifier(s)) {
        syntax(line, "invalid identifier " + quoted(s));
    }
    return std::string(s);
}

// <id>:<h>
std::pair<std::string, Hat> id_hatness(std::string_view tok, std::size_t line) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) {
        syntax(line, "expected <id>:<hatness>, got " + quoted(tok));
    }
    auto h = parse_uint(tok.substr(colon + 1));
    if (!h || *h > std::numeric_limits<Hat>::max()) {
        syntax(line, "bad hatness in " + quoted(tok));
    }
    if (*h == 0) {
        throw ParseError(ErrorCode::NonPositiveHatness, line, "hatness must be positive in " + quoted(tok));
    }
    return {checked_id(tok.substr(0, colon), line), static_cast<Hat>(*h)};
}

Game read_game(std::span<const Line> lines, std::size_t end_line) {
    std::vector<std::string> ids;
    std::vector<Hat> hatness;
    std::set<std::string, std::less<>> declared;
    std::vector<IdPair> edges;
    std::set<std::pair<std::string, std::string>> seen_edges;

    for (const Line& l : lines) {
        if (skippable(l.text)) {
            continue;
        }
        const auto t = tokens(l.text);
        if (t[0] == "vertex") {
            if (t.size() != 3) {
                syntax(l.number, "expected: vertex <id> <hatness>");
            }
            std::string id = checked_id(t[1], l.number);
            if (declared.contains(id)) {
                syntax(l.number, "duplicate vertex " + quoted(id));
            }
            if (!t[2].empty() && t[2].front() == '-' && parse_uint(t[2].substr(1))) {
                throw ParseError(ErrorCode::NonPositiveHatness, l.number, "hatness of " + quoted(id) + " must be positive");
            }
            auto h = parse_uint(t[2]);
            if (!h) {
                syntax(l.number, "hatness must be a decimal integer, got " + quoted(t[2]));
            }
            if (*h == 0) {
                throw ParseError(ErrorCode::NonPositiveHatness, l.number, "hatness of " + quoted(id) + " must be positive");
            }
            if (*h > std::numeric_limits<Hat>::max()) {
                syntax(l.number, "hatness of " + quoted(id) + " is too large");
            }
            declared.insert(id);
            ids.push_back(std::move(id));
            hatness.push_back(static_cast<Hat>(*h));
        } else if (t[0] == "edge") {
            if (t.size() != 3) {
                syntax(l.number, "expected: edge <id> <id>");
            }
            std::string a = checked_id(t[1], l.number);
            std::string b = checked_id(t[2], l.number);
            for (const auto& end : {a, b}) {
                if (!declared.contains(end)) {
                    throw ParseError(ErrorCode::UnknownEndpoint, l.number, "edge endpoint " + quoted(end) + " is not a declared vertex");
                }
            }
            if (a == b) {
                throw ParseError(ErrorCode::SelfLoop, l.number, "self-loop at " + quoted(a));
            }
            if (!seen_edges.insert(std::minmax(a, b)).second) {
                throw ParseError(ErrorCode::DuplicateEdge, l.number, "duplicate edge " + a + " " + b);
            }
            edges.emplace_back(std::move(a), std::move(b));
        } else {
            syntax(l.number, "unknown statement " + quoted(t[0]));
        }
    }
    if (ids.empty()) {
        syntax(std::max<std::size_t>(end_line, 1), "game declares no vertices");
    }
    return Game(Graph::build(std::move(ids), edges), std::move(hatness));
}

std::optional<View> parse_view(std::string_view s) {
    View v;
    if (s == "-") {
        return v;
    }
    while (true) {
        const auto comma = s.find(',');
        auto c = parse_uint(s.substr(0, comma));
        if (!c || *c > std::numeric_limits<Hat>::max()) {
            return std::nullopt;
        }
        v.push_back(static_cast<Hat>(*c));
        if (comma == std::string_view::npos) {
            return v;
        }
        s = s.substr(comma + 1);
    }
}

ProvenanceStep parse_step(const std::vector<std::string_view>& t, std::size_t expected, std::size_t line) {
    // step <k> <kind> ...
    if (t.size() < 3 || parse_uint(t[1]) != expected) {
        syntax(line, "expected step " + std::to_string(expected));
    }
    auto step_ref = [&](std::string_view s) {
        auto k = parse_uint(s);
        if (!k || *k == 0 || *k >= expected) {
            syntax(line, "step reference " + quoted(s) + " must name an earlier step");
        }
        return static_cast<std::size_t>(*k - 1);
    };
    ProvenanceStep s;
    const std::string_view kind = t[2];
    if (kind == "clique" || kind == "solve") {
        s.kind = kind == "clique" ? StepKind::clique : StepKind::solve;
        std::size_t i = 3;
        for (; i < t.size() && t[i] != "edges"; ++i) {
            auto [id, h] = id_hatness(t[i], line);
            s.ids.push_back(std::move(id));
            s.hatness.push_back(h);
        }
        if (i < t.size()) {
            if (s.kind == StepKind::clique) {
                syntax(line, "clique steps take no edge list");
            }
            for (++i; i < t.size(); ++i) {
                const auto dash = t[i].find('-');
                if (dash == std::string_view::npos) {
                    syntax(line, "expected <id>-<id>, got " + quoted(t[i]));
                }
                s.edges.emplace_back(checked_id(t[i].substr(0, dash), line), checked_id(t[i].substr(dash + 1), line));
            }
        }
        if (s.ids.empty()) {
            syntax(line, "step lists no vertices");
        }
    } else if (kind == "glue") {
        if (t.size() != 7) {
            syntax(line, "expected: step <k> glue <step> <id> <step> <id>");
        }
        s.kind = StepKind::glue;
        s.left = step_ref(t[3]);
        s.left_vertex = checked_id(t[4], line);
        s.right = step_ref(t[5]);
        s.right_vertex = checked_id(t[6], line);
    } else if (kind == "restrict") {
        if (t.size() < 4) {
            syntax(line, "expected: step <k> restrict <step> <id>:<hatness> ...");
        }
        s.kind = StepKind::restrict;
        s.left = step_ref(t[3]);
        for (std::size_t i = 4; i < t.size(); ++i) {
            auto [id, h] = id_hatness(t[i], line);
            if (!s.lowered.emplace(std::move(id), h).second) {
                syntax(line, "vertex listed twice in " + quoted(t[i]));
            }
        }
    } else {
        syntax(line, "unknown step kind " + quoted(kind));
    }
    return s;
}

} // namespace

std::string format_colors(std::span<const Hat> colors) {
    if (colors.empty()) {
        return "-";
    }
    std::string out;
    for (std::size_t i = 0; i < colors.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(colors[i]);
    }
    return out;
}

Game parse_game(std::string_view text) {
    const auto lines = split_lines(text);
    return read_game(lines, lines.size());
}

std::string serialize_game(const Game& game) {
    std::string out;
    for (Vertex v = 0; v < game.size(); ++v) {
        out += "vertex " + game.id(v) + " " + std::to_string(game.hatness(v)) + "\n";
    }
    for (auto [a, b] : game.graph().edges()) {
        out += "edge " + game.id(a) + " " + game.id(b) + "\n";
    }
    return out;
}

Certificate parse_certificate(std::string_view text) {
    const auto lines = split_lines(text);
    std::size_t i = 0;
    auto skip = [&] {
        while (i < lines.size() && skippable(lines[i].text)) {
            ++i;
        }
    };
    auto last_line = [&] { return lines.empty() ? std::size_t{1} : lines.back().number; };

    skip();
    if (i == lines.size() || tokens(lines[i].text) != std::vector<std::string_view>{"game"}) {
        syntax(i < lines.size() ? lines[i].number : last_line(), "certificate must start with 'game'");
    }
    const std::size_t game_begin = ++i;
    while (i < lines.size() && tokens(lines[i].text) != std::vector<std::string_view>{"end", "game"}) {
        ++i;
    }
    if (i == lines.size()) {
        syntax(last_line(), "missing 'end game'");
    }
    Certificate cert;
    cert.game = read_game(std::span(lines).subspan(game_begin, i - game_begin), lines[i].number);
    const Game& game = cert.game;
    ++i;

    cert.strategy = Strategy::blank(game);
    std::vector<std::size_t> header_line(game.size(), 0);
    std::optional<Vertex> current;
    bool in_provenance = false;
    for (; i < lines.size(); ++i) {
        const Line& l = lines[i];
        if (skippable(l.text)) {
            continue;
        }
        const auto t = tokens(l.text);
        if (t[0] == "strategy") {
            if (in_provenance || t.size() != 2) {
                syntax(l.number, in_provenance ? "strategy after provenance" : "expected: strategy <id>");
            }
            auto v = game.graph().find(t[1]);
            if (!v) {
                throw ParseError(ErrorCode::UnknownVertex, l.number, "strategy for unknown vertex " + quoted(t[1]));
            }
            if (header_line[*v] != 0) {
                syntax(l.number, "second strategy block for " + quoted(t[1]));
            }
            header_line[*v] = l.number;
            current = *v;
        } else if (t[0] == "provenance") {
            if (in_provenance || t.size() != 1) {
                syntax(l.number, "unexpected 'provenance'");
            }
            in_provenance = true;
        } else if (t[0] == "step") {
            if (!in_provenance) {
                syntax(l.number, "step outside the provenance section");
            }
            cert.provenance.push_back(parse_step(t, cert.provenance.size() + 1, l.number));
        } else {
            if (!current || in_provenance) {
                syntax(l.number, "unexpected line");
            }
            if (t.size() != 3 || t[1] != "->") {
                syntax(l.number, "expected: <view> -> <guess>");
            }
            const Vertex v = *current;
            auto view = parse_view(t[0]);
            auto nb = game.graph().neighbors(v);
            bool fits = view && view->size() == nb.size();
            for (std::size_t k = 0; fits && k < nb.size(); ++k) {
                fits = (*view)[k] < game.hatness(nb[k]);
            }
            if (!fits) {
                syntax(l.number, quoted(t[0]) + " is not a view of " + quoted(game.id(v)));
            }
            auto guess = parse_uint(t[2]);
            if (!guess) {
                syntax(l.number, "guess must be a decimal integer");
            }
            if (*guess >= game.hatness(v)) {
                throw ParseError(ErrorCode::GuessOutOfRange, l.number,
                                 "guess " + std::string(t[2]) + " is out of range for " + quoted(game.id(v)));
            }
            const auto idx = game.encode_view(v, *view);
            if (cert.strategy.guess(v, idx) != kUnassigned) {
                syntax(l.number, "view " + quoted(t[0]) + " listed twice");
            }
            cert.strategy.set(v, idx, static_cast<Hat>(*guess));
        }
    }
    for (Vertex v = 0; v < game.size(); ++v) {
        const auto& table = cert.strategy.table(v);
        for (std::size_t idx = 0; idx < table.size(); ++idx) {
            if (table[idx] == kUnassigned) {
                throw ParseError(ErrorCode::IncompleteStrategy, header_line[v] != 0 ? header_line[v] : last_line(),
                                 "no guess for " + quoted(game.id(v)) + " on view " +
                                     quoted(format_colors(game.decode_view(v, idx))));
            }
        }
    }
    return cert;
}

std::string serialize_certificate(const Certificate& cert) {
    const Game& game = cert.game;
    std::ostringstream out;
    out << "game\n" << serialize_game(game) << "end game\n";
    for (Vertex v = 0; v < game.size(); ++v) {
        out << "strategy " << game.id(v) << "\n";
        const auto& table = cert.strategy.table(v);
        for (std::size_t idx = 0; idx < table.size(); ++idx) {
            out << format_colors(game.decode_view(v, idx)) << " -> " << table[idx] << "\n";
        }
    }
    if (!cert.provenance.empty()) {
        out << "provenance\n";
        for (std::size_t k = 0; k < cert.provenance.size(); ++k) {
            const ProvenanceStep& s = cert.provenance[k];
            out << "step " << k + 1 << " " << to_string(s.kind);
            switch (s.kind) {
            case StepKind::clique:
            case StepKind::solve:
                for (std::size_t j = 0; j < s.ids.size(); ++j) {
                    out << " " << s.ids[j] << ":" << s.hatness[j];
                }
                if (s.kind == StepKind::solve) {
                    out << " edges";
                    for (const auto& [a, b] : s.edges) {
                        out << " " << a << "-" << b;
                    }
                }
                break;
            case StepKind::glue:
                out << " " << s.left + 1 << " " << s.left_vertex << " " << s.right + 1 << " " << s.right_vertex;
                break;
            case StepKind::restrict:
                out << " " << s.left + 1;
                for (const auto& [id, h] : s.lowered) {
                    out << " " << id << ":" << h;
                }
                break;
            }
            out << "\n";
        }
    }
    return out.str();
}

} // namespace hatgame
