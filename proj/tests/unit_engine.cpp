#include <doctest.h>

#include <functional>

#include "helpers.hpp"

using namespace mso;
using namespace testutil;

namespace {

// All subsets of a universe, as id sets.
std::vector<std::set<std::string>> subsets(const std::vector<std::string>& u) {
    std::vector<std::set<std::string>> out = {{}};
    for (const auto& id : u) {
        size_t n = out.size();
        for (size_t i = 0; i < n; ++i) {
            auto s = out[i];
            s.insert(id);
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<Assignment> all_assignments(const FormulaMetrics& m,
                                        const TypedGraph& g) {
    std::vector<Assignment> out = {{}};
    for (const auto& [name, sort] : m.free_vars) {
        const auto& u = sort == Sort::VertexSet ? g.vertices : g.edges;
        auto subs = subsets(u);
        std::vector<Assignment> next;
        for (const auto& a : out)
            for (const auto& s : subs) {
                Assignment b = a;
                b.sets[name] = s;
                next.push_back(std::move(b));
            }
        out = std::move(next);
    }
    return out;
}

TypedGraph prefix_ids(const TypedGraph& g, const std::string& p) {
    TypedGraph h;
    h.allow_loops = g.allow_loops;
    h.directed = g.directed;
    auto ren = [&](const std::string& id) { return p + id; };
    for (const auto& v : g.vertices) h.vertices.push_back(ren(v));
    for (const auto& e : g.edges) {
        h.edges.push_back(ren(e));
        for (const auto& v : g.endpoints.at(e)) h.endpoints[ren(e)].push_back(ren(v));
        auto it = g.orientation.find(e);
        if (it != g.orientation.end()) h.orientation[ren(e)] = it->second;
    }
    for (const auto& t : g.terminals) h.terminals.push_back(ren(t));
    return h;
}

Assignment restrict_to(const Assignment& a, const TypedGraph& g) {
    Assignment r;
    for (const auto& [name, s] : a.sets) {
        std::set<std::string> keep;
        for (const auto& id : s)
            if (g.has_vertex(id) || g.has_edge(id)) keep.insert(id);
        r.sets[name] = keep;
    }
    return r;
}

bool decomp_truth(const Decomp& d,
                  const std::function<bool(int, const CFormulaPtr&)>& child) {
    return eval_decomp(d, [&](int pos, int idx) {
        return child(pos, d.children[pos][idx]);
    });
}

struct RuleCorpus {
    std::vector<std::string> atoms = {
        "sub(X:V, Y:V)",
        "sgl(X:V)",
        "sub(term{1}(X:V), Y:V)",
        "conn2(S:E, X:V, X:V)",
        "card(X:V, 0, 2)",
        "card(X:V, 1, 3)",
        "card(S:E, 1, 2)",
    };
    std::vector<std::string> sentences = {
        "exists Z:V sgl(Z)",
        "forall Z:V (sgl(Z) -> exists F:E conn2(F, Z, Z))",
        "exists Z:V (card(Z, 2, 3) & sub(term{1}(empty:V), Z))",
        "exists F:E card(F, 1, 2)",
    };
    std::vector<std::string> quantified_free = {
        "exists Z:V (sub(X:V, Z) & card(Z, 1, 2))",
        "forall Z:V (sub(Z, X:V) -> sgl(Z))",
    };
};

} // namespace

TEST_CASE("sum rule is pointwise sound") {
    RuleCorpus corpus;
    auto small = small_graph_corpus(2, 1, 2);
    auto tiny = small;

    auto check_pair = [&](const CFormulaPtr& phi, const TypedGraph& g0,
                          const TypedGraph& h0) {
        TypedGraph h = prefix_ids(h0, "h_");
        TypedGraph sum = disjoint_sum(g0, h);
        Decomp d = decompose_sum(phi, g0.type(), h.type());
        for (const auto& a : all_assignments(metrics(phi), sum)) {
            bool whole = eval_circuit(phi, sum, a, 64);
            bool split = decomp_truth(d, [&](int pos, const CFormulaPtr& f) {
                const TypedGraph& side = pos == 0 ? g0 : h;
                return eval_circuit(f, side, restrict_to(a, side), 64);
            });
            CHECK_MESSAGE(whole == split,
                          print_circuit(phi)
                              << " on " << print_graph(g0) << " + " << print_graph(h0));
            if (whole != split) return false;
        }
        return true;
    };

    for (const auto& s : corpus.atoms) {
        CFormulaPtr phi = parse_circuit(s);
        for (const auto& g : small)
            for (const auto& h : small)
                if (!check_pair(phi, g, h)) return;
    }
    for (const auto& s : corpus.sentences) {
        CFormulaPtr phi = parse_circuit(s);
        for (const auto& g : small)
            for (const auto& h : small)
                if (!check_pair(phi, g, h)) return;
    }
    for (const auto& s : corpus.quantified_free) {
        CFormulaPtr phi = parse_circuit(s);
        for (const auto& g : tiny)
            for (const auto& h : tiny)
                if (!check_pair(phi, g, h)) return;
    }
}

TEST_CASE("redefinition rule is pointwise sound") {
    RuleCorpus corpus;
    auto small = small_graph_corpus(3, 2, 2);
    std::vector<std::vector<int>> sigmas = {{}, {1}, {2}, {1, 1}, {2, 1}, {1, 2, 2}};
    std::vector<std::string> all = corpus.atoms;
    all.insert(all.end(), corpus.sentences.begin(), corpus.sentences.end());
    for (const auto& s : all) {
        CFormulaPtr phi = parse_circuit(s);
        for (const auto& g : small)
            for (const auto& sigma : sigmas) {
                bool ok = true;
                for (int i : sigma) ok = ok && i <= g.type();
                if (!ok) continue;
                TypedGraph r = redefine(g, sigma);
                Decomp d = decompose_redef(phi, sigma, g.type());
                REQUIRE(d.children.size() == 1);
                for (const auto& a : all_assignments(metrics(phi), r)) {
                    bool whole = eval_circuit(phi, r, a, 64);
                    bool split = decomp_truth(d, [&](int, const CFormulaPtr& f) {
                        return eval_circuit(f, g, a, 64);
                    });
                    CHECK_MESSAGE(whole == split, print_circuit(phi)
                                                      << " via redef on "
                                                      << print_graph(g));
                }
            }
    }
}

TEST_CASE("fusion rule is pointwise sound, degenerate case included") {
    RuleCorpus corpus;
    // corpus with repeated terminals so that t(a) = t(b) occurs
    std::vector<TypedGraph> graphs;
    for (auto g : small_graph_corpus(3, 2, 2)) {
        if (g.type() == 2) graphs.push_back(g);
        if (g.type() == 1) {
            g.terminals.push_back(g.terminals[0]); // degenerate: t(1) = t(2)
            graphs.push_back(g);
        }
    }
    std::vector<std::string> all = corpus.atoms;
    all.insert(all.end(), corpus.sentences.begin(), corpus.sentences.end());
    all.insert(all.end(), corpus.quantified_free.begin(),
               corpus.quantified_free.end());
    bool saw_degenerate = false;
    for (const auto& s : all) {
        CFormulaPtr phi = parse_circuit(s);
        for (const auto& g : graphs) {
            if (adjacent(g, g.terminals[0], g.terminals[1])) continue; // loop
            bool degenerate = g.terminals[0] == g.terminals[1];
            saw_degenerate = saw_degenerate || degenerate;
            TypedGraph fused = fuse(g, 1, 2);
            Decomp d = decompose_fuse(phi, 1, 2, g.type());
            std::string removed = g.terminals[1]; // fused away unless degenerate
            for (const auto& a : all_assignments(metrics(phi), fused)) {
                // pull the assignment back along the fusion
                Assignment back = a;
                if (!degenerate)
                    for (auto& [name, set] : back.sets)
                        if (set.count(g.terminals[0])) set.insert(removed);
                bool whole = eval_circuit(phi, fused, a, 64);
                bool split = decomp_truth(d, [&](int, const CFormulaPtr& f) {
                    return eval_circuit(f, g, back, 64);
                });
                CHECK_MESSAGE(whole == split, print_circuit(phi) << " via fuse on "
                                                                 << print_graph(g));
            }
        }
    }
    CHECK(saw_degenerate);
}

TEST_CASE("composite symbols decompose through their expansions") {
    // twine / sprout / bloom versus direct evaluation on concrete arguments
    std::vector<std::pair<FnSymbol, std::vector<std::string>>> cases = {
        {FnSymbol::twine(2, 2, {1, 2}, 2), {"(e 2)", "(e 2)"}},
        {FnSymbol::twine(1, 1, {1}, 1), {"(v)", "(v)"}},
        {FnSymbol::sprout(1), {"(v)"}},
        {FnSymbol::bloom(2, 2), {"(sprout (v))"}},
    };
    std::vector<std::string> sentences = {
        "exists X:V sgl(X)",
        "card(term{1}(empty:V), 1, 2)",
        "exists F:E exists Z:V (sgl(Z) & conn2(F, Z, Z))",
        "exists X:V (forall Y:V (sgl(Y) -> sub(Y, X)) & card(X, 0, 2))",
        "exists F:E conn2(F, term{1}(empty:V), term{1}(empty:V))",
    };
    for (const auto& [sym, args] : cases) {
        Expression e;
        std::vector<int> roots;
        for (const auto& a : args) {
            Expression sub = parse_expression(a);
            int base = e.size();
            for (const auto& nd : sub.nodes) {
                std::vector<int> kk;
                for (int k : nd.kids) kk.push_back(k + base);
                e.add(nd.sym, kk);
            }
            roots.push_back(sub.root + base);
        }
        e.root = e.add(sym, roots);
        TypedGraph g = evaluate(e);
        for (const auto& s : sentences) {
            CFormulaPtr phi = parse_circuit(s);
            CHECK_MESSAGE(evaluate_on_expression(phi, e) ==
                              eval_circuit(phi, g, {}, 64),
                          sym.name() << " with " << s);
        }
    }
}

TEST_CASE("expression evaluation agrees with brute force") {
    std::vector<TypedGraph> graphs = {path_graph(4), path_graph(5, 2),
                                      cycle_graph(4), cycle_graph(5),
                                      complete_graph(4), caterpillar_graph(3, 1)};
    for (const auto& g : graphs) {
        int k = std::max(1, static_cast<int>(g.vertices.size()) - 1);
        auto d = decompose_for_build(g, k, Decomposition::Tree);
        REQUIRE(d.has_value());
        Expression e = build_treewidth(g, make_nice(*d, g), k);
        for (const auto& s : circuit_sentence_corpus()) {
            CFormulaPtr phi = parse_circuit(s);
            if (metrics(phi).free_vars.size()) continue;
            CHECK_MESSAGE(evaluate_on_expression(phi, e) ==
                              eval_circuit(phi, g, {}, 64),
                          s << " on " << print_graph(g));
        }
    }
}

TEST_CASE("memoization statistics are reported") {
    TypedGraph g = path_graph(8);
    auto d = decompose_for_build(g, 1, Decomposition::Tree);
    REQUIRE(d.has_value());
    Expression e = build_treewidth(g, make_nice(*d, g), 1);
    EvalStats stats;
    evaluate_on_expression(parse_circuit("exists X:V sgl(X)"), e, {}, &stats);
    CHECK(stats.memo_entries > 0);
    CHECK(stats.distinct_formulas > 0);
    CHECK(stats.distinct_formulas <= stats.memo_entries);
}

TEST_CASE("bounds are enforced") {
    EngineConfig tight;
    tight.max_width = 1;
    CFormulaPtr wide = parse_circuit("exists X:V exists Y:V sub(X, Y)");
    Expression e = parse_expression("(v)");
    CHECK_THROWS_AS(evaluate_on_expression(wide, e, tight), Error);

    EngineConfig nodnf;
    nodnf.dnf_budget = 1;
    CFormulaPtr branchy = parse_circuit(
        "exists X:V ((sgl(X) & card(X, 0, 2)) | (sub(X, empty:V) & card(X, 1, 2))"
        " | (card(X, 1, 3) & card(X, 2, 3)))");
    CHECK_THROWS_AS(decompose_sum(branchy, 1, 1, nodnf), Error);

    // free variables are rejected at the top level
    CHECK_THROWS_AS(evaluate_on_expression(parse_circuit("sgl(X:V)"), e, {}),
                    Error);
}
