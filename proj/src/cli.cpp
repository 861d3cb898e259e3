#include "hatgame/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "hatgame/classifiers.hpp"
#include "hatgame/cnf.hpp"
#include "hatgame/constructors.hpp"
#include "hatgame/error.hpp"
#include "hatgame/io.hpp"
#include "hatgame/solver.hpp"

namespace hatgame {

namespace {

// Input problems (unreadable files, bad documents, unsupported topologies).
struct InputError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError{"cannot read " + path};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
        throw InputError{"cannot write " + path};
    }
}

Game load_game(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return parse_game(text);
    } catch (const ParseError& e) {
        throw InputError{path + ": " + e.what()};
    }
}

std::string describe_coloring(const Game& game, const Coloring& phi) {
    std::string out;
    for (Vertex v = 0; v < game.size(); ++v) {
        out += (v ? " " : "") + game.id(v) + "=" + std::to_string(phi[v]);
    }
    return out;
}

std::string join_ids(const Game& game, const std::vector<Vertex>& vs) {
    std::string out;
    for (Vertex v : vs) {
        out += (out.empty() ? "" : ",") + game.id(v);
    }
    return out;
}

int classify(const std::string& file, std::ostream& out) {
    const Game game = load_game(file);
    const Graph& g = game.graph();
    if (!g.connected()) {
        throw InputError{"classify needs a connected graph; use solve for anything else"};
    }
    if (auto order = path_order(g)) {
        std::vector<Hat> h;
        for (Vertex v : *order) {
            h.push_back(game.hatness(v));
        }
        const PathDecision d = decide_path(h);
        out << to_string(d.verdict) << " (path fold)\n";
        out << "path: " << join_ids(game, *order) << "\n";
        out << "left fold: " << format_colors(d.left_fold) << "\n";
        out << "right fold: " << format_colors(d.right_fold) << "\n";
        if (d.fold_disagreement) {
            out << "folds disagree; decided by exact search\n";
        }
        return d.verdict == Outcome::winning ? kExitWinning : kExitLosing;
    }
    if (cycle_order(g)) {
        const CycleClassification c = classify_cycle(game);
        if (c.verdict == Outcome::losing) {
            out << "LOSING (Theorem 1, no condition holds)\n";
            return kExitLosing;
        }
        out << "WINNING (Theorem 1, Condition " << condition_number(c.witness) << ")\n";
        if (c.witness == CycleCondition::proper_arc) {
            out << "winning arc: " << join_ids(game, c.witness_vertices) << "\n";
        } else if (c.witness == CycleCondition::sequence) {
            out << "run: " << join_ids(game, c.witness_vertices) << "\n";
        }
        out << "conditions holding:";
        for (auto cond : c.satisfied) {
            out << " " << condition_number(cond);
        }
        out << "\n";
        return kExitWinning;
    }
    CactusReport report;
    try {
        report = analyze_cactus(g);
    } catch (const NotCactusError&) {
        throw InputError{"classify handles paths, cycles, trees and cactus graphs only; use solve"};
    }
    const Hat lo = *std::min_element(game.hatness().begin(), game.hatness().end());
    const Hat hi = *std::max_element(game.hatness().begin(), game.hatness().end());
    const auto hg = static_cast<Hat>(report.hg);
    const std::string why = "Theorem 2, Statement " + std::to_string(report.statement) + ", HG = " + std::to_string(hg);
    if (hi <= hg) {
        out << "WINNING (" << why << ")\n";
        return kExitWinning;
    }
    if (lo > hg) {
        out << "LOSING (" << why << ")\n";
        return kExitLosing;
    }
    out << "UNDETERMINED (" << why << "; hatness ranges from " << lo << " to " << hi << ")\n";
    return kExitInconclusive;
}

struct SolveOptions {
    std::uint64_t max_colorings = SolveLimits{}.max_colorings;
    std::uint64_t max_nodes = SolveLimits{}.max_nodes;
    double timeout = SolveLimits{}.timeout_seconds;
    std::string engine = "learning";
    std::string cert;
};

int solve(const std::string& file, const SolveOptions& opt, std::ostream& out) {
    const Game game = load_game(file);
    SolveLimits limits;
    limits.max_colorings = opt.max_colorings;
    limits.max_nodes = opt.max_nodes;
    limits.timeout_seconds = opt.timeout;
    limits.engine = opt.engine == "cover" ? SearchEngine::cover : SearchEngine::learning;
    const Verdict v = exact_solve(game, limits);
    const SearchStats stats = std::visit([](const auto& x) { return x.stats; }, v);
    int code = kExitLosing;
    if (is_winning(v)) {
        out << "WINNING\n";
        code = kExitWinning;
    } else if (is_losing(v)) {
        out << "LOSING\n";
    } else {
        out << "INCONCLUSIVE ("
            << (std::get<Inconclusive>(v).limit_hit == Limit::nodes ? "node limit" : "timeout") << ")\n";
        code = kExitInconclusive;
    }
    out << "nodes " << stats.nodes_explored << ", conflicts " << stats.conflicts << ", most colorings covered "
        << stats.colorings_covered << " of " << stats.colorings_total << "\n";
    if (is_winning(v) && !opt.cert.empty()) {
        Certificate cert{game, std::get<Winning>(v).strategy, {}};
        write_file(opt.cert, serialize_certificate(cert));
        out << "certificate written to " << opt.cert << "\n";
    }
    return code;
}

int verify(const std::string& file, const std::string& cert_path, std::ostream& out) {
    const Game game = load_game(file);
    Certificate cert;
    try {
        cert = parse_certificate(read_file(cert_path));
    } catch (const ParseError& e) {
        throw InputError{cert_path + ": " + e.what()};
    }
    // The certificate may cover a subgame of FILE with hatness at least FILE's.
    for (Vertex v = 0; v < cert.game.size(); ++v) {
        auto w = game.graph().find(cert.game.id(v));
        if (!w) {
            out << "INVALID: certificate vertex '" << cert.game.id(v) << "' is not in " << file << "\n";
            return kExitLosing;
        }
        if (cert.game.hatness(v) < game.hatness(*w)) {
            out << "INVALID: certificate hatness of '" << cert.game.id(v) << "' is below the game's\n";
            return kExitLosing;
        }
    }
    for (auto [a, b] : cert.game.graph().edges()) {
        if (!game.graph().adjacent(game.graph().at(cert.game.id(a)), game.graph().at(cert.game.id(b)))) {
            out << "INVALID: certificate edge " << cert.game.id(a) << " " << cert.game.id(b) << " is not in " << file
                << "\n";
            return kExitLosing;
        }
    }
    if (auto bad = verify_strategy(cert.game, cert.strategy)) {
        out << "INVALID: counterexample " << describe_coloring(cert.game, *bad) << "\n";
        return kExitLosing;
    }
    if (!cert.provenance.empty()) {
        RestrictedStrategy rebuilt;
        try {
            rebuilt = replay(cert.provenance);
        } catch (const Error& e) {
            out << "INVALID: provenance cannot be replayed: " << e.what() << "\n";
            return kExitLosing;
        }
        if (!(rebuilt.game == cert.game) || !(rebuilt.strategy == cert.strategy)) {
            out << "INVALID: provenance does not reproduce the certificate\n";
            return kExitLosing;
        }
    }
    out << "VALID\n";
    return kExitWinning;
}

int hg(const std::string& file, const std::string& cert_path, std::ostream& out, std::ostream& err) {
    const Game game = load_game(file);
    CactusReport report;
    try {
        report = analyze_cactus(game.graph());
    } catch (const NotCactusError& e) {
        throw InputError{e.what()};
    }
    out << "HG = " << report.hg;
    if (report.statement == 0) {
        out << " (single vertex)\n";
    } else {
        out << " (Theorem 2, Statement " << report.statement << ")\n";
    }
    out << "blocks " << report.blocks.size() << ", cycles " << report.cycle_count << ", triangles "
        << report.triangle_count << ", leaf cycles " << report.leaf_cycles.size() << "\n";
    if (!cert_path.empty()) {
        try {
            const Certificate cert = cactus_lower_bound_certificate(game.graph());
            write_file(cert_path, serialize_certificate(cert));
            out << "certificate for *" << report.hg << " on " << cert.game.size() << " vertices written to "
                << cert_path << "\n";
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SynthesisCapExceeded) {
                throw;
            }
            err << "certificate unavailable: " << e.what() << "\n";
            return kExitInconclusive;
        }
    }
    return kExitWinning;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(item);
    }
    return out;
}

int reduce(const std::string& file, const std::string& lemma, const std::string& at, std::ostream& out) {
    const Game game = load_game(file);
    const auto ids = split_commas(at);
    if (lemma == "delete2") {
        if (ids.size() != 4) {
            throw InputError{"--at needs four vertices t,u,v,w"};
        }
        const ReductionResult r = reduce_delete2(game, ids[0], ids[1], ids[2], ids[3]);
        out << "# removed " << r.removed[0] << " " << r.removed[1] << "\n";
        for (const auto& u : r.updates) {
            out << "# " << u.vertex << ": " << u.before << " -> " << u.after << "\n";
        }
        out << serialize_game(r.reduced);
        return kExitWinning;
    }
    if (ids.size() != 1) {
        throw InputError{"--at needs one vertex"};
    }
    const auto parts = reduce_h5_path(game, ids[0]);
    out << "# " << parts.size() << " maximal proper subpaths\n";
    for (std::size_t k = 0; k < parts.size(); ++k) {
        out << "# subpath " << k + 1 << "\n" << serialize_game(parts[k]);
    }
    return kExitWinning;
}

int export_cnf_cmd(const std::string& file, const std::string& out_path, std::ostream& out) {
    const Game game = load_game(file);
    const CnfDocument doc = export_cnf(game);
    write_file(out_path, write_dimacs(game, doc));
    out << "variables " << doc.variable_count << ", clauses " << doc.clauses.size() << "\n";
    return kExitWinning;
}

bool input_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidLimits:
    case ErrorCode::FoldDisagreement:
        return false;
    default:
        return true;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hat guessing game workbench", "hatgame"};
    app.require_subcommand(1);

    std::string file;
    auto add_file = [&](CLI::App* sub) { sub->add_option("FILE", file, "game document")->required(); };

    auto* classify_cmd = app.add_subcommand("classify", "decide a path, cycle, tree or cactus game by theorem");
    add_file(classify_cmd);

    SolveOptions sopt;
    auto* solve_cmd = app.add_subcommand("solve", "decide any game by exhaustive search");
    add_file(solve_cmd);
    solve_cmd->add_option("--max-colorings", sopt.max_colorings)->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-nodes", sopt.max_nodes)->check(CLI::PositiveNumber);
    solve_cmd->add_option("--timeout", sopt.timeout, "seconds")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--engine", sopt.engine)->check(CLI::IsMember({"learning", "cover"}));
    solve_cmd->add_option("--cert", sopt.cert, "write a certificate here when winning");

    std::string cert_path;
    auto* verify_cmd = app.add_subcommand("verify", "check a strategy certificate against a game");
    add_file(verify_cmd);
    verify_cmd->add_option("--cert", cert_path)->required();

    auto* hg_cmd = app.add_subcommand("hg", "hat guessing number of a cactus graph");
    add_file(hg_cmd);
    hg_cmd->add_option("--cert", cert_path, "write a lower-bound certificate here");

    std::string lemma, at;
    auto* reduce_cmd = app.add_subcommand("reduce", "apply a reduction to a cycle or path game");
    add_file(reduce_cmd);
    reduce_cmd->add_option("--lemma", lemma)->required()->check(CLI::IsMember({"delete2", "h5"}));
    reduce_cmd->add_option("--at", at, "t,u,v,w for delete2, v for h5")->required();

    std::string cnf_out;
    auto* cnf_cmd = app.add_subcommand("export-cnf", "write the game as DIMACS CNF");
    add_file(cnf_cmd);
    cnf_cmd->add_option("-o", cnf_out, "output file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (classify_cmd->parsed()) return classify(file, out);
        if (solve_cmd->parsed()) return solve(file, sopt, out);
        if (verify_cmd->parsed()) return verify(file, cert_path, out);
        if (hg_cmd->parsed()) return hg(file, cert_path, out, err);
        if (reduce_cmd->parsed()) return reduce(file, lemma, at, out);
        if (cnf_cmd->parsed()) return export_cnf_cmd(file, cnf_out, out);
    } catch (const InputError& e) {
        err << "error: " << e.message << "\n";
        return kExitInput;
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return input_code(e.code()) ? kExitInput : kExitInconclusive;
    }
    return kExitUsage;
}

} // namespace hatgame
