#include "msograph/automaton.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "msograph/builder.hpp"
#include "msograph/errors.hpp"

namespace mso {

int LabeledTree::add(std::string symbol, std::vector<int> kids) {
    nodes.push_back({std::move(symbol), std::move(kids)});
    return static_cast<int>(nodes.size()) - 1;
}

LabeledTree to_tree(const Expression& e) {
    LabeledTree t;
    t.nodes.reserve(e.nodes.size());
    for (const auto& n : e.nodes) t.nodes.push_back({n.sym.name(), n.kids});
    t.root = e.root;
    return t;
}

std::vector<int> TreeAutomaton::run(const LabeledTree& t) const {
    if (t.root < 0 || t.root >= static_cast<int>(t.nodes.size()))
        throw Error(ErrorCode::BadInput, "tree has no root");
    int n = static_cast<int>(t.nodes.size());
    std::vector<int> state(n, -1), waiting(n, 0);
    std::vector<int> parent(n, -1);
    for (int i = 0; i < n; ++i) {
        waiting[i] = static_cast<int>(t.nodes[i].kids.size());
        for (int k : t.nodes[i].kids) parent[k] = i;
    }
    std::deque<int> queue;
    for (int i = 0; i < n; ++i)
        if (waiting[i] == 0) queue.push_back(i);
    int done = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        std::vector<int> tuple;
        bool hit_sink = false;
        for (int k : t.nodes[v].kids) {
            tuple.push_back(state[k]);
            if (sink && state[k] == *sink) hit_sink = true;
        }
        if (hit_sink) {
            state[v] = *sink;
        } else {
            auto it = delta.find({t.nodes[v].symbol, tuple});
            if (it != delta.end()) {
                state[v] = it->second;
            } else if (sink) {
                state[v] = *sink;
            } else {
                throw Error(ErrorCode::MissingTransition,
                            "no transition for " + t.nodes[v].symbol);
            }
        }
        ++done;
        if (parent[v] >= 0 && --waiting[parent[v]] == 0)
            queue.push_back(parent[v]);
    }
    if (done != n)
        throw Error(ErrorCode::BadInput, "tree nodes are not a rooted tree");
    return state;
}

bool TreeAutomaton::accepts(const LabeledTree& t) const {
    return accepting.count(run(t)[t.root]) != 0;
}

// ---------------------------------------------------------------------------

namespace {

struct ClosureBuilder {
    SignatureProfile profile;
    int n;
    const EngineConfig& cfg;

    std::vector<FnSymbol> symbols;
    std::map<int, std::vector<CFormulaPtr>> closure;
    std::map<int, std::map<std::string, int>> index; // type -> print -> idx
    long total_formulas = 0;

    // decomp cache keyed by symbol name + formula print
    std::map<std::string, Decomp> decomps;

    ClosureBuilder(const CFormulaPtr& phi, const SignatureProfile& p, int type,
                   const EngineConfig& c, const std::vector<FnSymbol>& extra)
        : profile(p), n(type), cfg(c) {
        profile.target_type = std::max(profile.target_type, n);
        symbols = profile.alphabet();
        for (const auto& f : extra) symbols.push_back(f);
        std::sort(symbols.begin(), symbols.end());
        symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    }

    int intern(int type, const CFormulaPtr& f) {
        std::string key = print_circuit(f);
        auto& idx = index[type];
        auto it = idx.find(key);
        if (it != idx.end()) return it->second;
        if (++total_formulas > cfg.closure_formula_budget)
            throw Error(ErrorCode::ClosureBudgetExceeded,
                        "closure formula budget exhausted");
        int i = static_cast<int>(closure[type].size());
        closure[type].push_back(f);
        idx.emplace(std::move(key), i);
        return i;
    }

    const Decomp& decomp_of(const FnSymbol& sym, const CFormulaPtr& f) {
        std::string key = sym.name() + "#" + print_circuit(f);
        auto it = decomps.find(key);
        if (it == decomps.end())
            it = decomps.emplace(key, decompose_symbol(f, sym, cfg)).first;
        return it->second;
    }

    // Saturate: every formula of every type, pushed through every symbol of
    // matching out-type, contributes its child formulas to the child types.
    void saturate(const CFormulaPtr& goal) {
        std::deque<std::pair<int, int>> work;
        work.emplace_back(n, intern(n, goal));
        while (!work.empty()) {
            auto [type, idx] = work.front();
            work.pop_front();
            CFormulaPtr f = closure[type][idx];
            for (const auto& sym : symbols) {
                if (sym.out_type() != type) continue;
                const Decomp& d = decomp_of(sym, f);
                auto ins = sym.in_types();
                for (size_t pos = 0; pos < d.children.size(); ++pos) {
                    for (const auto& g : d.children[pos]) {
                        int before = static_cast<int>(closure[ins[pos]].size());
                        int j = intern(ins[pos], g);
                        if (j == before) work.emplace_back(ins[pos], j);
                    }
                }
            }
        }
    }
};

} // namespace

ClosureAutomaton build_closure(const CFormulaPtr& phi,
                               const SignatureProfile& profile, int n,
                               const EngineConfig& cfg,
                               const std::vector<FnSymbol>& extra_symbols) {
    check_metrics(phi, cfg);

    ClosureAutomaton ca;
    ca.target_type = n;
    ca.goal = normalize(phi, n);

    ClosureBuilder cb(phi, profile, n, cfg, extra_symbols);
    ca.profile = cb.profile;
    cb.saturate(ca.goal);
    ca.closure = cb.closure;

    // Forward reachability over subset states, FIFO by discovery.
    std::map<std::pair<int, std::vector<int>>, int> state_id;
    std::vector<ClosureAutomaton::State> states;
    std::vector<std::pair<FnSymbol, std::vector<int>>> pred;
    auto& delta = ca.automaton.delta;

    auto target_of = [&](const FnSymbol& sym,
                         const std::vector<int>& tuple) -> std::pair<int, std::vector<int>> {
        int out = sym.out_type();
        auto ins = sym.in_types();
        std::vector<int> subset;
        const auto& formulas = ca.closure[out];
        for (int fi = 0; fi < static_cast<int>(formulas.size()); ++fi) {
            const Decomp& d = cb.decomp_of(sym, formulas[fi]);
            bool ok = eval_decomp(d, [&](int pos, int idx) {
                int ci = cb.index.at(ins[pos]).at(print_circuit(d.children[pos][idx]));
                const auto& sub = states[tuple[pos]].subset;
                return std::binary_search(sub.begin(), sub.end(), ci);
            });
            if (ok) subset.push_back(fi);
        }
        return {out, subset};
    };

    auto discover = [&](const FnSymbol& sym, const std::vector<int>& tuple,
                        std::deque<int>& work) {
        auto key = target_of(sym, tuple);
        auto it = state_id.find(key);
        int id;
        if (it == state_id.end()) {
            id = static_cast<int>(states.size());
            if (id >= cfg.closure_state_budget)
                throw Error(ErrorCode::ClosureBudgetExceeded,
                            "closure state budget exhausted");
            state_id.emplace(key, id);
            states.push_back({key.first, key.second});
            pred.emplace_back(sym, tuple);
            work.push_back(id);
        } else {
            id = it->second;
        }
        delta[{sym.name(), tuple}] = id;
    };

    std::deque<int> work;
    for (const auto& sym : cb.symbols)
        if (sym.arity() == 0) discover(sym, {}, work);

    while (!work.empty()) {
        int s = work.front();
        work.pop_front();
        for (const auto& sym : cb.symbols) {
            auto ins = sym.in_types();
            if (ins.empty()) continue;
            // enumerate tuples of known states containing s at least once
            std::vector<std::vector<int>> options(ins.size());
            bool feasible = true;
            for (size_t pos = 0; pos < ins.size(); ++pos) {
                for (int id = 0; id < static_cast<int>(states.size()); ++id)
                    if (states[id].type == ins[pos]) options[pos].push_back(id);
                if (options[pos].empty()) feasible = false;
            }
            if (!feasible) continue;
            std::vector<size_t> cursor(ins.size(), 0);
            while (true) {
                std::vector<int> tuple;
                bool has_s = false;
                for (size_t pos = 0; pos < ins.size(); ++pos) {
                    int id = options[pos][cursor[pos]];
                    tuple.push_back(id);
                    if (id == s) has_s = true;
                }
                if (has_s && !delta.count({sym.name(), tuple}))
                    discover(sym, tuple, work);
                size_t pos = 0;
                while (pos < cursor.size() && ++cursor[pos] == options[pos].size())
                    cursor[pos++] = 0;
                if (pos == cursor.size()) break;
            }
        }
    }

    ca.states = states;
    int goal_idx = cb.index.count(n) && cb.index.at(n).count(print_circuit(ca.goal))
                       ? cb.index.at(n).at(print_circuit(ca.goal))
                       : -1;
    for (int id = 0; id < static_cast<int>(states.size()); ++id) {
        std::ostringstream name;
        name << "q" << id << "[type " << states[id].type << "; {";
        for (size_t i = 0; i < states[id].subset.size(); ++i)
            name << (i ? "," : "") << states[id].subset[i];
        name << "}]";
        ca.automaton.state_names.push_back(name.str());
        if (states[id].type == n && goal_idx >= 0 &&
            std::binary_search(states[id].subset.begin(), states[id].subset.end(),
                               goal_idx))
            ca.automaton.accepting.insert(id);
    }
    ca.automaton.sink = static_cast<int>(states.size());
    ca.automaton.state_names.push_back("q?");

    // Stash predecessors for witness extraction through the dump-stable
    // member (kept out of the public struct).
    ca.predecessors = std::move(pred);
    return ca;
}

bool ClosureAutomaton::accepts(const Expression& e) const {
    return automaton.accepts(to_tree(e));
}

std::string ClosureAutomaton::dump() const {
    std::ostringstream out;
    const char* fam = profile.family == SignatureProfile::TreeWidth ? "treewidth"
                      : profile.family == SignatureProfile::PathWidth ? "pathwidth"
                                                                      : "generic";
    out << "closure-automaton family=" << fam << " k=" << profile.k
        << " loops=" << (profile.loops ? 1 : 0) << " target-type=" << target_type
        << "\n";
    out << "goal " << print_circuit(goal) << "\n";
    for (const auto& [type, fs] : closure) {
        out << "formulas type=" << type << "\n";
        for (size_t i = 0; i < fs.size(); ++i)
            out << "  " << i << ": " << print_circuit(fs[i]) << "\n";
    }
    out << "states " << states.size() << "\n";
    for (size_t i = 0; i < states.size(); ++i)
        out << "  " << automaton.state_names[i]
            << (automaton.accepting.count(static_cast<int>(i)) ? " accepting" : "")
            << "\n";
    out << "transitions " << automaton.delta.size() << "\n";
    for (const auto& [key, to] : automaton.delta) {
        out << "  " << key.first << "(";
        for (size_t i = 0; i < key.second.size(); ++i)
            out << (i ? "," : "") << "q" << key.second[i];
        out << ") -> q" << to << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------

EmptinessResult emptiness(const CFormulaPtr& phi, const SignatureProfile& profile,
                          int n, const EngineConfig& cfg) {
    ClosureAutomaton ca = build_closure(phi, profile, n, cfg);
    EmptinessResult res;

    int accept = -1;
    for (int id : ca.automaton.accepting) {
        accept = id;
        break;
    }
    if (accept < 0) return res;

    res.empty = false;

    // Rebuild a witness expression along first-discovery predecessors; the
    // children of a state's discovering transition were discovered earlier,
    // so this terminates.
    Expression expr;
    struct Frame {
        int state;
        std::vector<int> built;
        size_t next = 0;
    };
    std::vector<Frame> stack = {{accept, {}, 0}};
    int root = -1;
    while (!stack.empty()) {
        Frame& fr = stack.back();
        const auto& [sym, tuple] = ca.predecessors[fr.state];
        if (fr.next < tuple.size()) {
            stack.push_back({tuple[fr.next], {}, 0});
            continue;
        }
        int node = expr.add(sym, fr.built);
        stack.pop_back();
        if (stack.empty()) {
            root = node;
        } else {
            stack.back().built.push_back(node);
            ++stack.back().next;
        }
    }
    expr.root = root;
    res.witness = expr;
    TypedGraph g = evaluate(expr);
    res.witness_graph = g;

    int size = static_cast<int>(g.vertices.size() + g.edges.size());
    if (size <= cfg.oracle_size_limit) {
        res.oracle_checked = true;
        res.oracle_agrees = eval_circuit(phi, g, Assignment{}, cfg.oracle_size_limit);
    }
    return res;
}

// ---------------------------------------------------------------------------

CheckReport check(const TypedGraph& g, const CFormulaPtr& phi, int k,
                  Decomposition::Kind family, EngineMode mode,
                  const std::optional<Decomposition>& supplied,
                  const EngineConfig& cfg) {
    check_metrics(phi, cfg);
    CheckReport rep;
    rep.engine = mode;

    if (mode == EngineMode::Oracle) {
        rep.verdict = eval_circuit(phi, g, Assignment{}, cfg.oracle_size_limit);
        return rep;
    }

    Decomposition rooted;
    if (supplied) {
        auto diags = validate(*supplied, g);
        if (!diags.empty())
            throw Error(ErrorCode::DecompositionInvalid, diags.front());
        rooted = family == Decomposition::Tree ? verdant_root(*supplied, g)
                                               : verdurous_root(*supplied, g);
    } else {
        auto found = decompose_for_build(g, k, family);
        if (!found)
            throw Error(ErrorCode::NoneWithinBound,
                        "no decomposition found within the width bound");
        rooted = *found;
    }
    int width = 0;
    for (const auto& nd : rooted.nodes)
        width = std::max(width, static_cast<int>(nd.bag.size()) - 1);
    rep.width = width;

    Decomposition nice = make_nice(rooted, g);
    Expression expr = family == Decomposition::Tree ? build_treewidth(g, nice, k)
                                                    : build_pathwidth(g, nice, k);
    rep.expression_size = expr.size();

    if (mode == EngineMode::Inductive) {
        rep.verdict = evaluate_on_expression(phi, expr, cfg, &rep.stats);
        return rep;
    }

    // Automaton mode: close over the bounded alphabet plus this expression's
    // own letters (covers oriented or long-word constants).
    SignatureProfile prof;
    prof.family = family == Decomposition::Tree ? SignatureProfile::TreeWidth
                                                : SignatureProfile::PathWidth;
    prof.k = k;
    prof.loops = g.allow_loops;
    int c = 2;
    std::set<FnSymbol> extra;
    for (const auto& nd : expr.nodes) {
        extra.insert(nd.sym);
        if (nd.sym.kind == FnSymbol::Loop)
            c = std::max(c, static_cast<int>(nd.sym.word.size()));
    }
    prof.c = c;
    int n = static_cast<int>(g.terminals.size());
    ClosureAutomaton ca =
        build_closure(phi, prof, n, cfg,
                      std::vector<FnSymbol>(extra.begin(), extra.end()));
    rep.stats.distinct_formulas = 0;
    for (const auto& [type, fs] : ca.closure)
        rep.stats.distinct_formulas += static_cast<long>(fs.size());
    rep.stats.memo_entries = static_cast<long>(ca.states.size());
    rep.verdict = ca.accepts(expr);
    return rep;
}

} // namespace mso
