// Micro-benchmarks: path-graph compilation, expression evaluation, and
// bottom-up automaton runs at increasing sizes.

#include <benchmark/benchmark.h>

#include "msograph/automaton.hpp"
#include "msograph/builder.hpp"

using namespace mso;

namespace {

TypedGraph path_graph(int n) {
    TypedGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) {
        std::string e = "e" + std::to_string(i);
        g.edges.push_back(e);
        g.endpoints[e] = {g.vertices[i], g.vertices[i + 1]};
    }
    return g;
}

Decomposition path_decomposition(const TypedGraph& g) {
    Decomposition d;
    d.kind = Decomposition::Path;
    int n = static_cast<int>(g.vertices.size());
    for (int i = 0; i < n; ++i) {
        Decomposition::Node nd;
        nd.id = i;
        nd.parent = i + 1 < n ? i + 1 : -1;
        nd.bag = {g.vertices[i]};
        if (i + 1 < n) nd.bag.insert(g.vertices[i + 1]);
        d.nodes.push_back(nd);
    }
    d.root = n - 1;
    return d;
}

void BM_BuildPath(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    TypedGraph g = path_graph(n);
    Decomposition nice = make_nice(path_decomposition(g), g);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_treewidth(g, nice, 1));
    state.SetComplexityN(n);
}
BENCHMARK(BM_BuildPath)->Range(64, 8192)->Complexity(benchmark::oN);

void BM_EvaluatePath(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    TypedGraph g = path_graph(n);
    Decomposition nice = make_nice(path_decomposition(g), g);
    Expression e = build_treewidth(g, nice, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate(e));
    state.SetComplexityN(n);
}
BENCHMARK(BM_EvaluatePath)->Range(64, 4096)->Complexity();

void BM_InductiveCheck(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    TypedGraph g = path_graph(n);
    Decomposition nice = make_nice(path_decomposition(g), g);
    Expression e = build_treewidth(g, nice, 1);
    CFormulaPtr phi = parse_circuit("exists X:V sgl(X)");
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_on_expression(phi, e));
    state.SetComplexityN(n);
}
BENCHMARK(BM_InductiveCheck)->Range(64, 4096)->Complexity();

void BM_AutomatonRun(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    TypedGraph g = path_graph(n);
    Decomposition nice = make_nice(path_decomposition(g), g);
    Expression e = build_treewidth(g, nice, 1);
    SignatureProfile prof;
    prof.family = SignatureProfile::TreeWidth;
    prof.k = 1;
    CFormulaPtr phi = parse_circuit("exists X:V sgl(X)");
    std::set<FnSymbol> extra;
    for (const auto& nd : e.nodes) extra.insert(nd.sym);
    ClosureAutomaton ca = build_closure(
        phi, prof, 0, {}, std::vector<FnSymbol>(extra.begin(), extra.end()));
    for (auto _ : state)
        benchmark::DoNotOptimize(ca.accepts(e));
    state.SetComplexityN(n);
}
BENCHMARK(BM_AutomatonRun)->Range(64, 4096)->Complexity();

} // namespace

BENCHMARK_MAIN();
