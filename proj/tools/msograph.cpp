// Command-line front end: check / decompose / build-expr / eval-expr /
// translate / emptiness / fuzz over the typed-graph pipeline.
//
// Exit codes: 0 = satisfied / success / witness found; 1 = not satisfied /
// empty; 2 = usage or input error; 3 = bound exceeded or nothing within the
// width bound.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "msograph/automaton.hpp"
#include "msograph/builder.hpp"
#include "msograph/graph_io.hpp"

using nlohmann::json;
using namespace mso;

namespace {

constexpr const char* kVersion = "0.1.0";

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::BoundExceeded:
    case ErrorCode::ClosureBudgetExceeded:
    case ErrorCode::NoneWithinBound:
    case ErrorCode::SizeLimitExceeded:
        return 3;
    default:
        return 2;
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::BadInput, "cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string digest(const std::string& data) {
    // FNV-1a, stable across platforms; identification only.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

struct StageClock {
    using clock = std::chrono::steady_clock;
    clock::time_point last = clock::now();
    json timings = json::object();

    void lap(const std::string& stage) {
        auto now = clock::now();
        timings[stage] =
            std::chrono::duration<double, std::milli>(now - last).count();
        last = now;
    }
};

json base_report(const std::string& command) {
    return json{{"tool", "msograph"}, {"version", kVersion}, {"command", command}};
}

CFormulaPtr load_sentence(const std::string& path, const std::string& language,
                          json* report) {
    std::string text = slurp(path);
    if (report) (*report)["inputs"]["formula"] = digest(text);
    if (language == "direct") return translate(parse_direct(text));
    return parse_circuit(text);
}

TypedGraph load_graph(const std::string& path, json* report) {
    std::string text = slurp(path);
    if (report) (*report)["inputs"]["graph"] = digest(text);
    return parse_graph(text);
}

void add_engine_flags(CLI::App* cmd, EngineConfig& cfg) {
    cmd->add_option("--max-width", cfg.max_width, "quantifier nesting bound")
        ->envname("MSOGRAPH_MAX_WIDTH");
    cmd->add_option("--max-vars", cfg.max_vars, "distinct variable bound")
        ->envname("MSOGRAPH_MAX_VARS");
    cmd->add_option("--max-conn", cfg.max_conn, "connector arity bound")
        ->envname("MSOGRAPH_MAX_CONN");
    cmd->add_option("--max-modulus", cfg.max_modulus, "counting modulus bound")
        ->envname("MSOGRAPH_MAX_MODULUS");
    cmd->add_option("--dnf-budget", cfg.dnf_budget, "quantifier clause budget")
        ->envname("MSOGRAPH_DNF_BUDGET");
    cmd->add_option("--oracle-size-limit", cfg.oracle_size_limit,
                    "|V|+|E| cap for brute-force evaluation")
        ->envname("MSOGRAPH_ORACLE_SIZE_LIMIT");
    cmd->add_option("--closure-formula-budget", cfg.closure_formula_budget,
                    "closure formula budget")
        ->envname("MSOGRAPH_CLOSURE_FORMULA_BUDGET");
    cmd->add_option("--closure-state-budget", cfg.closure_state_budget,
                    "closure state budget")
        ->envname("MSOGRAPH_CLOSURE_STATE_BUDGET");
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path);
    out << text;
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& graph_file, const std::string& formula_file,
              int width, const std::string& family, const std::string& language,
              const std::string& decomposition_file, const std::string& engine,
              const EngineConfig& cfg) {
    json report = base_report("check");
    StageClock clock;
    TypedGraph g = load_graph(graph_file, &report);
    CFormulaPtr phi = load_sentence(formula_file, language, &report);
    clock.lap("parse");

    std::optional<Decomposition> supplied;
    if (!decomposition_file.empty())
        supplied = parse_decomposition(slurp(decomposition_file));

    EngineMode mode = engine == "automaton" ? EngineMode::Automaton
                      : engine == "oracle"  ? EngineMode::Oracle
                                            : EngineMode::Inductive;
    Decomposition::Kind kind =
        family == "path" ? Decomposition::Path : Decomposition::Tree;

    CheckReport rep = check(g, phi, width, kind, mode, supplied, cfg);
    clock.lap("check");

    report["verdict"] = rep.verdict ? "satisfied" : "unsatisfied";
    report["engine"] = engine;
    report["decomposition_width"] = rep.width;
    report["expression_nodes"] = rep.expression_size;
    report["memo_entries"] = rep.stats.memo_entries;
    report["distinct_formulas"] = rep.stats.distinct_formulas;
    report["timings_ms"] = clock.timings;
    emit(report);
    return rep.verdict ? 0 : 1;
}

int cmd_decompose(const std::string& graph_file, int width,
                  const std::string& family, bool nice, bool verdant,
                  const std::string& out_file) {
    TypedGraph g = load_graph(graph_file, nullptr);
    Decomposition::Kind kind =
        family == "path" ? Decomposition::Path : Decomposition::Tree;
    std::optional<Decomposition> d =
        verdant ? decompose_for_build(g, width, kind) : decompose(g, width, kind);
    if (!d)
        throw Error(ErrorCode::NoneWithinBound,
                    "no decomposition found within the width bound");
    Decomposition out = nice ? make_nice(*d, g) : *d;
    std::string text = print_decomposition(out);
    if (out_file.empty())
        std::cout << text << "\n";
    else
        write_text(out_file, text);
    return 0;
}

int cmd_build_expr(const std::string& graph_file, int width,
                   const std::string& family, const std::string& out_file) {
    json report = base_report("build-expr");
    TypedGraph g = load_graph(graph_file, &report);
    Expression e;
    if (family == "generic") {
        e = build_generic(g);
    } else {
        Decomposition::Kind kind =
            family == "path" ? Decomposition::Path : Decomposition::Tree;
        auto d = decompose_for_build(g, width, kind);
        if (!d)
            throw Error(ErrorCode::NoneWithinBound,
                        "no decomposition found within the width bound");
        Decomposition nice = make_nice(*d, g);
        e = kind == Decomposition::Tree ? build_treewidth(g, nice, width)
                                        : build_pathwidth(g, nice, width);
    }
    report["expression_nodes"] = e.size();
    std::string text = print_expression(e);
    if (out_file.empty()) {
        std::cout << text << "\n";
    } else {
        write_text(out_file, text);
        emit(report);
    }
    return 0;
}

int cmd_eval_expr(const std::string& expr_file, const std::string& out_file) {
    Expression e = parse_expression(slurp(expr_file));
    TypedGraph g = canonicalize_ids(evaluate(e));
    std::string text = print_graph(g);
    if (out_file.empty())
        std::cout << text << "\n";
    else
        write_text(out_file, text);
    return 0;
}

int cmd_translate(const std::string& formula_file, const std::string& out_file) {
    std::string text = slurp(formula_file);
    CFormulaPtr c;
    try {
        c = translate(parse_direct(text));
    } catch (const Error&) {
        // already circuitous input passes through unchanged
        c = parse_circuit(text);
    }
    std::string printed = print_circuit(c);
    if (out_file.empty())
        std::cout << printed << "\n";
    else
        write_text(out_file, printed);
    return 0;
}

int cmd_emptiness(const std::string& formula_file, int width,
                  const std::string& family, int type,
                  const std::string& witness_prefix, const EngineConfig& cfg) {
    json report = base_report("emptiness");
    StageClock clock;
    CFormulaPtr phi = load_sentence(formula_file, "circuit", &report);
    SignatureProfile prof;
    prof.family = family == "path" ? SignatureProfile::PathWidth
                                   : SignatureProfile::TreeWidth;
    prof.k = width;
    EmptinessResult res = emptiness(phi, prof, type, cfg);
    clock.lap("emptiness");
    report["verdict"] = res.empty ? "empty" : "witness";
    report["oracle_checked"] = res.oracle_checked;
    report["oracle_agrees"] = res.oracle_agrees;
    report["timings_ms"] = clock.timings;
    if (!res.empty && !witness_prefix.empty()) {
        write_text(witness_prefix + ".expr", print_expression(*res.witness));
        write_text(witness_prefix + ".graph.json",
                   print_graph(canonicalize_ids(*res.witness_graph)));
        report["witness_expression"] = witness_prefix + ".expr";
        report["witness_graph"] = witness_prefix + ".graph.json";
    }
    emit(report);
    return res.empty ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Fuzzing: random loop-free 2-uniform graphs and random sentences,
// cross-checking brute force against the inductive engine (and, on the
// smallest inputs, the closure automaton).

TypedGraph random_graph(std::mt19937& rng, int max_vertices) {
    std::uniform_int_distribution<int> nv(1, max_vertices);
    int n = nv(rng);
    TypedGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::uniform_int_distribution<int> coin(0, 2);
    int e = 0;
    for (auto [i, j] : pairs) {
        if (coin(rng) != 0) continue;
        std::string id = "e" + std::to_string(e++);
        g.edges.push_back(id);
        g.endpoints[id] = {g.vertices[i], g.vertices[j]};
    }
    std::uniform_int_distribution<int> nt(0, 2);
    int t = std::min(nt(rng), n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::set<int> used;
    while (static_cast<int>(g.terminals.size()) < t) {
        int v = pick(rng);
        if (used.insert(v).second) g.terminals.push_back(g.vertices[v]);
    }
    g.check_invariants();
    return g;
}

CFormulaPtr random_sentence(std::mt19937& rng) {
    std::vector<std::pair<std::string, Sort>> bound;
    std::uniform_int_distribution<int> c6(0, 5);
    std::function<CFormulaPtr(int)> gen = [&](int depth) -> CFormulaPtr {
        int roll = c6(rng);
        if (depth <= 0 || roll < 3) {
            // atom over the available variables (or constants)
            auto term = [&](Sort want) -> CTermPtr {
                std::vector<CTermPtr> opts = {CTerm::empty(want)};
                if (want == Sort::VertexSet) {
                    opts.push_back(CTerm::term_of({1}, CTerm::empty(want)));
                    opts.push_back(CTerm::term_of({1, 2}, CTerm::empty(want)));
                }
                for (const auto& [v, s] : bound)
                    if (s == want) opts.push_back(CTerm::var(v, s));
                std::uniform_int_distribution<size_t> p(0, opts.size() - 1);
                return opts[p(rng)];
            };
            switch (c6(rng)) {
            case 0:
                return CFormula::sub(term(Sort::VertexSet), term(Sort::VertexSet));
            case 1:
                return CFormula::sgl(term(Sort::VertexSet));
            case 2:
                return CFormula::conn({term(Sort::EdgeSet), term(Sort::VertexSet),
                                       term(Sort::VertexSet)});
            case 3:
                return CFormula::card(term(Sort::VertexSet), c6(rng) % 3,
                                      2 + c6(rng) % 2);
            case 4:
                return CFormula::sub(term(Sort::EdgeSet), term(Sort::EdgeSet));
            default:
                return CFormula::card(term(Sort::EdgeSet), c6(rng) % 2, 2);
            }
        }
        if (roll == 3)
            return CFormula::lnot(gen(depth - 1));
        if (roll == 4)
            return CFormula::land({gen(depth - 1), gen(depth - 1)});
        Sort s = c6(rng) % 2 ? Sort::VertexSet : Sort::EdgeSet;
        std::string v = std::string(1, 'X' + static_cast<char>(bound.size() % 3));
        bound.emplace_back(v, s);
        auto body = gen(depth - 1);
        bound.pop_back();
        return c6(rng) % 2 ? CFormula::forall(v, s, body)
                           : CFormula::exists(v, s, body);
    };
    return gen(2);
}

int cmd_fuzz(int graphs, int sentences, unsigned seed, int max_vertices) {
    std::mt19937 rng(seed);
    std::vector<TypedGraph> gs;
    for (int i = 0; i < graphs; ++i) gs.push_back(random_graph(rng, max_vertices));
    std::vector<CFormulaPtr> phis;
    while (static_cast<int>(phis.size()) < sentences) {
        auto f = random_sentence(rng);
        if (metrics(f).free_vars.empty()) phis.push_back(f);
    }

    EngineConfig cfg;
    json report = base_report("fuzz");
    report["seed"] = seed;
    report["graphs"] = graphs;
    report["sentences"] = sentences;
    long cases = 0, automaton_cases = 0;

    for (size_t gi = 0; gi < gs.size(); ++gi) {
        const TypedGraph& g = gs[gi];
        for (size_t fi = 0; fi < phis.size(); ++fi) {
            const CFormulaPtr& phi = phis[fi];
            bool oracle = eval_circuit(phi, g, Assignment{}, cfg.oracle_size_limit);
            int k = std::max(1, static_cast<int>(g.vertices.size()) - 1);
            CheckReport ind =
                check(g, phi, k, Decomposition::Tree, EngineMode::Inductive,
                      std::nullopt, cfg);
            bool mismatch = ind.verdict != oracle;
            bool aut_ok = true;
            if (!mismatch && g.vertices.size() <= 3 && automaton_cases < 40) {
                ++automaton_cases;
                CheckReport aut =
                    check(g, phi, k, Decomposition::Tree, EngineMode::Automaton,
                          std::nullopt, cfg);
                aut_ok = aut.verdict == oracle;
            }
            ++cases;
            if (mismatch || !aut_ok) {
                report["verdict"] = "disagreement";
                report["graph"] = json::parse(print_graph(g));
                report["sentence"] = print_circuit(phi);
                report["oracle"] = oracle;
                report["inductive"] = ind.verdict;
                report["automaton_agrees"] = aut_ok;
                emit(report);
                return 1;
            }
        }
    }
    report["verdict"] = "agreement";
    report["cases"] = cases;
    report["automaton_cases"] = automaton_cases;
    emit(report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"typed-hypergraph model checking via graph-algebra expressions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    EngineConfig cfg;

    // check
    std::string graph_file, formula_file, decomposition_file;
    std::string family = "tree", language = "circuit", engine = "inductive";
    int width = 2, type = 0;
    auto* c_check = app.add_subcommand("check", "decide graph |= sentence");
    c_check->add_option("graph", graph_file)->required();
    c_check->add_option("formula", formula_file)->required();
    c_check->add_option("--width", width, "decomposition width bound");
    c_check->add_option("--family", family)->check(CLI::IsMember({"tree", "path"}));
    c_check->add_option("--language", language)
        ->check(CLI::IsMember({"direct", "circuit"}));
    c_check->add_option("--decomposition", decomposition_file);
    c_check->add_option("--engine", engine)
        ->check(CLI::IsMember({"inductive", "automaton", "oracle"}));
    add_engine_flags(c_check, cfg);

    // decompose
    bool nice = false, verdant = false;
    std::string out_file;
    auto* c_dec = app.add_subcommand("decompose", "find a width-bounded decomposition");
    c_dec->add_option("graph", graph_file)->required();
    c_dec->add_option("--width", width);
    c_dec->add_option("--family", family)->check(CLI::IsMember({"tree", "path"}));
    c_dec->add_flag("--nice", nice);
    c_dec->add_flag("--verdant", verdant, "root at a terminal-covering bag");
    c_dec->add_option("-o,--out", out_file);

    // build-expr
    std::string bfamily = "tree";
    auto* c_build = app.add_subcommand("build-expr", "compile a graph to an expression");
    c_build->add_option("graph", graph_file)->required();
    c_build->add_option("--width", width);
    c_build->add_option("--family", bfamily)
        ->check(CLI::IsMember({"tree", "path", "generic"}));
    c_build->add_option("-o,--out", out_file);

    // eval-expr
    std::string expr_file;
    auto* c_eval = app.add_subcommand("eval-expr", "evaluate an expression to a graph");
    c_eval->add_option("expression", expr_file)->required();
    c_eval->add_option("-o,--out", out_file);

    // translate
    auto* c_tr = app.add_subcommand("translate", "element language -> set language");
    c_tr->add_option("formula", formula_file)->required();
    c_tr->add_option("-o,--out", out_file);

    // emptiness
    std::string witness_prefix;
    auto* c_emp = app.add_subcommand("emptiness",
                                     "is any width-bounded graph a model?");
    c_emp->add_option("formula", formula_file)->required();
    c_emp->add_option("--width", width);
    c_emp->add_option("--family", family)->check(CLI::IsMember({"tree", "path"}));
    c_emp->add_option("--type", type, "terminal count of the searched graphs");
    c_emp->add_option("--witness", witness_prefix, "output file prefix");
    add_engine_flags(c_emp, cfg);

    // fuzz
    int fz_graphs = 200, fz_sentences = 20, fz_max_vertices = 4;
    unsigned fz_seed = 1;
    auto* c_fz = app.add_subcommand("fuzz", "randomized cross-engine agreement");
    c_fz->add_option("--graphs", fz_graphs);
    c_fz->add_option("--sentences", fz_sentences);
    c_fz->add_option("--seed", fz_seed);
    c_fz->add_option("--max-vertices", fz_max_vertices);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*c_check)
            return cmd_check(graph_file, formula_file, width, family, language,
                             decomposition_file, engine, cfg);
        if (*c_dec)
            return cmd_decompose(graph_file, width, family, nice, verdant, out_file);
        if (*c_build)
            return cmd_build_expr(graph_file, width, bfamily, out_file);
        if (*c_eval)
            return cmd_eval_expr(expr_file, out_file);
        if (*c_tr)
            return cmd_translate(formula_file, out_file);
        if (*c_emp)
            return cmd_emptiness(formula_file, width, family, type,
                                 witness_prefix, cfg);
        if (*c_fz)
            return cmd_fuzz(fz_graphs, fz_sentences, fz_seed, fz_max_vertices);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
