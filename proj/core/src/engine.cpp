#include "msograph/engine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "msograph/builder.hpp"
#include "msograph/errors.hpp"

namespace mso {

// ---------------------------------------------------------------------------
// Skeleton construction with on-the-fly constant folding.

SkelPtr Skeleton::constant(bool v) {
    auto s = std::make_shared<Skeleton>();
    s->kind = Const;
    s->value = v;
    return s;
}

SkelPtr Skeleton::lit(int pos, int index) {
    auto s = std::make_shared<Skeleton>();
    s->kind = Lit;
    s->child_pos = pos;
    s->index = index;
    return s;
}

SkelPtr Skeleton::lnot(SkelPtr a) {
    if (a->kind == Const) return constant(!a->value);
    if (a->kind == Not) return a->kids[0];
    auto s = std::make_shared<Skeleton>();
    s->kind = Not;
    s->kids = {std::move(a)};
    return s;
}

SkelPtr Skeleton::land(std::vector<SkelPtr> ks) {
    std::vector<SkelPtr> flat;
    for (auto& k : ks) {
        if (k->kind == Const) {
            if (!k->value) return constant(false);
            continue;
        }
        flat.push_back(std::move(k));
    }
    if (flat.empty()) return constant(true);
    if (flat.size() == 1) return flat[0];
    auto s = std::make_shared<Skeleton>();
    s->kind = And;
    s->kids = std::move(flat);
    return s;
}

SkelPtr Skeleton::lor(std::vector<SkelPtr> ks) {
    std::vector<SkelPtr> flat;
    for (auto& k : ks) {
        if (k->kind == Const) {
            if (k->value) return constant(true);
            continue;
        }
        flat.push_back(std::move(k));
    }
    if (flat.empty()) return constant(false);
    if (flat.size() == 1) return flat[0];
    auto s = std::make_shared<Skeleton>();
    s->kind = Or;
    s->kids = std::move(flat);
    return s;
}

namespace {

// Deduplicating store for the per-child formula lists of a Decomp.
struct ChildStore {
    std::vector<std::vector<CFormulaPtr>> lists;
    std::vector<std::map<std::string, int>> seen;

    explicit ChildStore(int arity) : lists(arity), seen(arity) {}

    int intern(int pos, const CFormulaPtr& f) {
        std::string key = print_circuit(f);
        auto it = seen[pos].find(key);
        if (it != seen[pos].end()) return it->second;
        int idx = static_cast<int>(lists[pos].size());
        lists[pos].push_back(f);
        seen[pos].emplace(std::move(key), idx);
        return idx;
    }
};

// ---------------------------------------------------------------------------
// Disjunctive normal form over skeleton literals. A clause maps
// (child position, formula index) to its required sign; clauses demanding a
// literal both ways are dropped.

using Clause = std::map<std::pair<int, int>, bool>;

std::vector<Clause> to_dnf(const SkelPtr& s, bool neg, long budget) {
    switch (s->kind) {
    case Skeleton::Const:
        if (s->value != neg) return {Clause{}};
        return {};
    case Skeleton::Lit:
        return {Clause{{{s->child_pos, s->index}, !neg}}};
    case Skeleton::Not:
        return to_dnf(s->kids[0], !neg, budget);
    case Skeleton::And:
    case Skeleton::Or: {
        bool conjunctive = (s->kind == Skeleton::And) != neg;
        if (!conjunctive) {
            std::vector<Clause> out;
            for (const auto& k : s->kids) {
                auto part = to_dnf(k, neg, budget);
                for (auto& c : part) out.push_back(std::move(c));
                if (static_cast<long>(out.size()) > budget)
                    throw Error(ErrorCode::BoundExceeded,
                                "clause budget exhausted while splitting a quantifier");
            }
            return out;
        }
        std::vector<Clause> out = {Clause{}};
        for (const auto& k : s->kids) {
            auto part = to_dnf(k, neg, budget);
            std::vector<Clause> next;
            for (const auto& c : out) {
                for (const auto& p : part) {
                    Clause merged = c;
                    bool contradictory = false;
                    for (const auto& [key, sign] : p) {
                        auto [it, inserted] = merged.emplace(key, sign);
                        if (!inserted && it->second != sign) {
                            contradictory = true;
                            break;
                        }
                    }
                    if (!contradictory) next.push_back(std::move(merged));
                    if (static_cast<long>(next.size()) > budget)
                        throw Error(ErrorCode::BoundExceeded,
                                    "clause budget exhausted while splitting a quantifier");
                }
            }
            out = std::move(next);
        }
        return out;
    }
    }
    throw Error(ErrorCode::BadInput, "unreachable skeleton kind");
}

// ---------------------------------------------------------------------------
// Term splitting for disjoint sums: the first a terminals stay on the left
// operand, the rest shift down onto the right one.

CTermPtr sum_side_term(const CTermPtr& t, int a, bool left) {
    if (t->kind != CTerm::TermOf) return t;
    std::set<int> K;
    for (int i : t->K) {
        if (left && i <= a) K.insert(i);
        if (!left && i > a) K.insert(i - a);
    }
    if (K.empty()) return t->base;
    return CTerm::term_of(std::move(K), t->base);
}

CFormulaPtr empty_of(const CTermPtr& t) {
    return CFormula::sub(t, CTerm::empty(t->sort));
}

struct SumDecomposer {
    int a, b;
    const EngineConfig& cfg;

    Decomp run(const CFormulaPtr& phi) {
        ChildStore store(2);
        SkelPtr skel = go(phi, store);
        return Decomp{skel, std::move(store.lists)};
    }

    SkelPtr lit(ChildStore& store, int side, const CFormulaPtr& f) {
        CFormulaPtr n = normalize(f, side == 0 ? a : b);
        return Skeleton::lit(side, store.intern(side, n));
    }

    CTermPtr side_term(const CTermPtr& t, int side) {
        return sum_side_term(t, a, side == 0);
    }

    SkelPtr go(const CFormulaPtr& phi, ChildStore& store) {
        switch (phi->kind) {
        case CFormula::Sub: {
            auto l = CFormula::sub(side_term(phi->terms[0], 0), side_term(phi->terms[1], 0));
            auto r = CFormula::sub(side_term(phi->terms[0], 1), side_term(phi->terms[1], 1));
            return Skeleton::land({lit(store, 0, l), lit(store, 1, r)});
        }
        case CFormula::Sgl: {
            auto ta = side_term(phi->terms[0], 0);
            auto tb = side_term(phi->terms[0], 1);
            auto here = Skeleton::land({lit(store, 0, CFormula::sgl(ta)),
                                        lit(store, 1, empty_of(tb))});
            auto there = Skeleton::land({lit(store, 1, CFormula::sgl(tb)),
                                         lit(store, 0, empty_of(ta))});
            return Skeleton::lor({here, there});
        }
        case CFormula::Conn: {
            std::vector<CTermPtr> ls, rs;
            for (const auto& t : phi->terms) {
                ls.push_back(side_term(t, 0));
                rs.push_back(side_term(t, 1));
            }
            return Skeleton::lor({lit(store, 0, CFormula::conn(ls)),
                                  lit(store, 1, CFormula::conn(rs))});
        }
        case CFormula::Card: {
            auto ta = side_term(phi->terms[0], 0);
            auto tb = side_term(phi->terms[0], 1);
            int m = phi->card_m;
            std::vector<SkelPtr> cases;
            for (int j = 0; j < m; ++j) {
                int rest = ((phi->card_r - j) % m + m) % m;
                cases.push_back(Skeleton::land(
                    {lit(store, 0, CFormula::card(ta, j, m)),
                     lit(store, 1, CFormula::card(tb, rest, m))}));
            }
            return Skeleton::lor(std::move(cases));
        }
        case CFormula::Not:
            if (phi->kids[0]->kind == CFormula::Forall) {
                const auto& q = phi->kids[0];
                return exists_case(q->var, q->var_sort,
                                   CFormula::lnot(q->kids[0]), store);
            }
            return Skeleton::lnot(go(phi->kids[0], store));
        case CFormula::And: {
            std::vector<SkelPtr> ks;
            for (const auto& k : phi->kids) ks.push_back(go(k, store));
            return Skeleton::land(std::move(ks));
        }
        case CFormula::Forall:
            return Skeleton::lnot(exists_case(
                phi->var, phi->var_sort, CFormula::lnot(phi->kids[0]), store));
        }
        throw Error(ErrorCode::BadInput, "unreachable formula kind");
    }

    // An existential witness over the sum splits into independent witnesses
    // per operand, one pair of quantified conjunctions per clause of the
    // decomposed body in disjunctive normal form.
    SkelPtr exists_case(const std::string& var, Sort sort,
                        const CFormulaPtr& body, ChildStore& store) {
        Decomp inner = run(body);
        auto clauses = to_dnf(inner.skel, false, cfg.dnf_budget);
        std::vector<SkelPtr> alts;
        for (const auto& clause : clauses) {
            std::vector<SkelPtr> parts;
            for (int side = 0; side < 2; ++side) {
                std::vector<CFormulaPtr> conj;
                for (const auto& [key, sign] : clause) {
                    if (key.first != side) continue;
                    CFormulaPtr f = inner.children[side][key.second];
                    conj.push_back(sign ? f : CFormula::lnot(f));
                }
                if (conj.empty()) continue;
                parts.push_back(lit(store, side,
                                    CFormula::exists(var, sort,
                                                     CFormula::land(std::move(conj)))));
            }
            alts.push_back(Skeleton::land(std::move(parts)));
        }
        return Skeleton::lor(std::move(alts));
    }
};

// ---------------------------------------------------------------------------
// Single-child transformations: terminal redefinition and fusion are pure
// formula rewrites, so their Decomp is one literal over one child formula.

CFormulaPtr map_formula(const CFormulaPtr& phi,
                        const std::function<CTermPtr(const CTermPtr&)>& tm) {
    switch (phi->kind) {
    case CFormula::Sub:
        return CFormula::sub(tm(phi->terms[0]), tm(phi->terms[1]));
    case CFormula::Sgl:
        return CFormula::sgl(tm(phi->terms[0]));
    case CFormula::Conn: {
        std::vector<CTermPtr> ts;
        for (const auto& t : phi->terms) ts.push_back(tm(t));
        return CFormula::conn(std::move(ts));
    }
    case CFormula::Card:
        return CFormula::card(tm(phi->terms[0]), phi->card_r, phi->card_m);
    case CFormula::Not:
        return CFormula::lnot(map_formula(phi->kids[0], tm));
    case CFormula::And: {
        std::vector<CFormulaPtr> ks;
        for (const auto& k : phi->kids) ks.push_back(map_formula(k, tm));
        return CFormula::land(std::move(ks));
    }
    case CFormula::Forall:
        return CFormula::forall(phi->var, phi->var_sort,
                                map_formula(phi->kids[0], tm));
    }
    throw Error(ErrorCode::BadInput, "unreachable formula kind");
}

Decomp single_child(CFormulaPtr f, int child_type) {
    Decomp d;
    d.skel = Skeleton::lit(0, 0);
    d.children = {{normalize(std::move(f), child_type)}};
    return d;
}

CFormulaPtr redef_rewrite(const CFormulaPtr& phi, const std::vector<int>& sigma) {
    return map_formula(phi, [&](const CTermPtr& t) -> CTermPtr {
        if (t->kind != CTerm::TermOf) return t;
        std::set<int> K;
        for (int i : t->K) {
            if (i < 1 || i > static_cast<int>(sigma.size()))
                throw Error(ErrorCode::IndexOutOfRange,
                            "terminal index beyond the redefinition domain");
            K.insert(sigma[i - 1]);
        }
        return CTerm::term_of(std::move(K), t->base);
    });
}

struct FuseRewriter {
    int a, b;

    CTermPtr term(const CTermPtr& t) const {
        if (t->kind != CTerm::TermOf) return t;
        if (!t->K.count(a) && !t->K.count(b)) return t;
        std::set<int> K = t->K;
        K.insert(a);
        K.insert(b);
        return CTerm::term_of(std::move(K), t->base);
    }

    CTermPtr pair_term() const {
        return CTerm::term_of({a, b}, CTerm::empty(Sort::VertexSet));
    }

    CFormulaPtr degenerate() const {
        // The two fused terminals already coincide in the argument.
        return CFormula::sgl(pair_term());
    }

    CFormulaPtr guard(const std::string& var) const {
        auto x = CTerm::var(var, Sort::VertexSet);
        auto in_a = CFormula::sub(CTerm::term_of({a}, CTerm::empty(Sort::VertexSet)), x);
        auto in_b = CFormula::sub(CTerm::term_of({b}, CTerm::empty(Sort::VertexSet)), x);
        return CFormula::land({CFormula::implies(in_a, in_b),
                               CFormula::implies(in_b, in_a)});
    }

    CFormulaPtr go(const CFormulaPtr& phi) const {
        switch (phi->kind) {
        case CFormula::Sub:
            return CFormula::sub(term(phi->terms[0]), term(phi->terms[1]));
        case CFormula::Sgl: {
            if (phi->terms[0]->sort == Sort::EdgeSet) return phi;
            auto s = term(phi->terms[0]);
            auto both = CFormula::land({CFormula::sub(s, pair_term()),
                                        CFormula::sub(pair_term(), s)});
            return CFormula::lor(CFormula::sgl(s), both);
        }
        case CFormula::Conn: {
            std::vector<CTermPtr> ts;
            for (const auto& t : phi->terms) ts.push_back(term(t));
            return CFormula::conn(std::move(ts));
        }
        case CFormula::Card: {
            if (phi->terms[0]->sort == Sort::EdgeSet) return phi;
            auto s = term(phi->terms[0]);
            int r = phi->card_r, m = phi->card_m;
            auto merged = CFormula::sub(pair_term(), s);
            auto same = CFormula::card(s, r, m);
            auto shifted = CFormula::card(s, (r + 1) % m, m);
            auto distinct_case = CFormula::lor(
                CFormula::land({CFormula::lnot(merged), same}),
                CFormula::land({merged, shifted}));
            return CFormula::lor(CFormula::land({degenerate(), same}),
                                 CFormula::land({CFormula::lnot(degenerate()),
                                                 distinct_case}));
        }
        case CFormula::Not:
            return CFormula::lnot(go(phi->kids[0]));
        case CFormula::And: {
            std::vector<CFormulaPtr> ks;
            for (const auto& k : phi->kids) ks.push_back(go(k));
            return CFormula::land(std::move(ks));
        }
        case CFormula::Forall: {
            CFormulaPtr body = go(phi->kids[0]);
            // Only vertex sets holding both fused terminals together (or
            // neither) are pull-backs of sets of the result graph.
            if (phi->var_sort == Sort::VertexSet)
                body = CFormula::implies(guard(phi->var), body);
            return CFormula::forall(phi->var, phi->var_sort, body);
        }
        }
        throw Error(ErrorCode::BadInput, "unreachable formula kind");
    }
};

SkelPtr substitute(const SkelPtr& s,
                   const std::function<SkelPtr(int, int)>& repl) {
    switch (s->kind) {
    case Skeleton::Const:
        return s;
    case Skeleton::Lit:
        return repl(s->child_pos, s->index);
    case Skeleton::Not:
        return Skeleton::lnot(substitute(s->kids[0], repl));
    case Skeleton::And:
    case Skeleton::Or: {
        std::vector<SkelPtr> ks;
        for (const auto& k : s->kids) ks.push_back(substitute(k, repl));
        return s->kind == Skeleton::And ? Skeleton::land(std::move(ks))
                                        : Skeleton::lor(std::move(ks));
    }
    }
    throw Error(ErrorCode::BadInput, "unreachable skeleton kind");
}

bool eval_sentence_on(const CFormulaPtr& phi, const TypedGraph& g,
                      const EngineConfig& cfg) {
    return eval_circuit(phi, g, Assignment{}, cfg.oracle_size_limit);
}

// Routes a formula through one node of a composite symbol's expansion,
// rebasing every literal onto the expansion's holes and folding constant
// leaves by direct evaluation.
struct ExpansionRouter {
    const Expansion& ex;
    const EngineConfig& cfg;
    ChildStore store;
    std::map<int, int> hole_of_node;

    ExpansionRouter(const Expansion& e, int arity, const EngineConfig& c)
        : ex(e), cfg(c), store(arity) {
        for (int i = 0; i < static_cast<int>(e.hole_nodes.size()); ++i)
            hole_of_node[e.hole_nodes[i]] = i;
    }

    SkelPtr route(int node, const CFormulaPtr& phi) {
        const FnSymbol& sym = ex.expr.nodes[node].sym;
        const auto& kids = ex.expr.nodes[node].kids;
        switch (sym.kind) {
        case FnSymbol::Hole:
            return Skeleton::lit(hole_of_node.at(node),
                                 store.intern(hole_of_node.at(node), phi));
        case FnSymbol::Vertex:
        case FnSymbol::Edge:
        case FnSymbol::Loop: {
            Expression leaf;
            leaf.root = leaf.add(sym);
            return Skeleton::constant(eval_sentence_on(phi, evaluate(leaf), cfg));
        }
        case FnSymbol::Redef: {
            auto f = normalize(redef_rewrite(phi, sym.sigma), sym.n);
            return route(kids[0], f);
        }
        case FnSymbol::Fuse: {
            auto f = normalize(FuseRewriter{sym.a, sym.b}.go(phi), sym.n);
            return route(kids[0], f);
        }
        case FnSymbol::Sum: {
            Decomp d = SumDecomposer{sym.n, sym.m, cfg}.run(phi);
            std::vector<std::vector<SkelPtr>> routed(2);
            for (int side = 0; side < 2; ++side)
                for (const auto& f : d.children[side])
                    routed[side].push_back(route(kids[side], f));
            return substitute(d.skel, [&](int pos, int idx) {
                return routed[pos][idx];
            });
        }
        default:
            throw Error(ErrorCode::BadInput,
                        "composite symbol inside an expansion");
        }
    }
};

} // namespace

// ---------------------------------------------------------------------------

Decomp decompose_sum(const CFormulaPtr& phi, int a, int b,
                     const EngineConfig& cfg) {
    return SumDecomposer{a, b, cfg}.run(normalize(phi, a + b));
}

Decomp decompose_redef(const CFormulaPtr& phi, const std::vector<int>& sigma,
                       int from, const EngineConfig&) {
    auto p = normalize(phi, static_cast<int>(sigma.size()));
    return single_child(redef_rewrite(p, sigma), from);
}

Decomp decompose_fuse(const CFormulaPtr& phi, int a, int b, int n,
                      const EngineConfig&) {
    auto p = normalize(phi, n);
    return single_child(FuseRewriter{a, b}.go(p), n);
}

Decomp decompose_symbol(const CFormulaPtr& phi, const FnSymbol& f,
                        const EngineConfig& cfg) {
    switch (f.kind) {
    case FnSymbol::Vertex:
    case FnSymbol::Edge:
    case FnSymbol::Loop: {
        Expression leaf;
        leaf.root = leaf.add(f);
        Decomp d;
        d.skel = Skeleton::constant(
            eval_sentence_on(normalize(phi, f.out_type()), evaluate(leaf), cfg));
        return d;
    }
    case FnSymbol::Sum:
        return decompose_sum(phi, f.n, f.m, cfg);
    case FnSymbol::Redef:
        return decompose_redef(phi, f.sigma, f.n, cfg);
    case FnSymbol::Fuse:
        return decompose_fuse(phi, f.a, f.b, f.n, cfg);
    case FnSymbol::Twine:
    case FnSymbol::Sprout:
    case FnSymbol::Bloom: {
        Expansion ex = expand_symbol(f);
        ExpansionRouter router(ex, f.arity(), cfg);
        SkelPtr skel = router.route(ex.expr.root, normalize(phi, f.out_type()));
        return Decomp{skel, std::move(router.store.lists)};
    }
    case FnSymbol::Hole:
        throw Error(ErrorCode::BadInput, "holes carry no semantics");
    }
    throw Error(ErrorCode::BadInput, "unreachable symbol kind");
}

// ---------------------------------------------------------------------------

void check_metrics(const CFormulaPtr& phi, const EngineConfig& cfg) {
    FormulaMetrics m = metrics(phi);
    if (!m.free_vars.empty())
        throw Error(ErrorCode::BadInput, "a sentence is required");
    if (m.width > cfg.max_width)
        throw Error(ErrorCode::BoundExceeded, "quantifier nesting exceeds max-width");
    if (m.var_count > cfg.max_vars)
        throw Error(ErrorCode::BoundExceeded, "variable count exceeds max-vars");
    if (m.max_conn_arity > cfg.max_conn)
        throw Error(ErrorCode::BoundExceeded, "connector arity exceeds max-conn");
    if (m.max_card_modulus > cfg.max_modulus)
        throw Error(ErrorCode::BoundExceeded, "counting modulus exceeds max-modulus");
}

namespace {

struct MemoKeyHash {
    size_t operator()(const std::pair<int, std::string>& k) const {
        return std::hash<int>()(k.first) * 1000003u + std::hash<std::string>()(k.second);
    }
};

bool eval_skeleton(const SkelPtr& s,
                   const std::function<bool(int, int)>& lookup) {
    switch (s->kind) {
    case Skeleton::Const:
        return s->value;
    case Skeleton::Lit:
        return lookup(s->child_pos, s->index);
    case Skeleton::Not:
        return !eval_skeleton(s->kids[0], lookup);
    case Skeleton::And:
        for (const auto& k : s->kids)
            if (!eval_skeleton(k, lookup)) return false;
        return true;
    case Skeleton::Or:
        for (const auto& k : s->kids)
            if (eval_skeleton(k, lookup)) return true;
        return false;
    }
    throw Error(ErrorCode::BadInput, "unreachable skeleton kind");
}

} // namespace

bool eval_decomp(const Decomp& d, const std::function<bool(int, int)>& lit) {
    return eval_skeleton(d.skel, lit);
}

bool evaluate_on_expression(const CFormulaPtr& phi, const Expression& e,
                            const EngineConfig& cfg, EvalStats* stats) {
    check_metrics(phi, cfg);
    if (e.root < 0) throw Error(ErrorCode::BadInput, "empty expression");

    using Key = std::pair<int, std::string>;
    std::unordered_map<Key, bool, MemoKeyHash> memo;
    std::unordered_map<std::string, Decomp> decomp_cache;
    std::set<std::string> formula_names;

    struct Task {
        int node;
        CFormulaPtr f;
        Key key;
        const Decomp* d = nullptr;
    };

    auto decomp_for = [&](const FnSymbol& sym, const CFormulaPtr& f,
                          const std::string& fkey) -> const Decomp* {
        std::string ck = sym.name() + "#" + fkey;
        auto it = decomp_cache.find(ck);
        if (it == decomp_cache.end())
            it = decomp_cache.emplace(ck, decompose_symbol(f, sym, cfg)).first;
        return &it->second;
    };

    int n0 = e.nodes[e.root].sym.out_type();
    CFormulaPtr root_f = normalize(phi, n0);
    std::vector<Task> stack;
    stack.push_back({e.root, root_f, {e.root, print_circuit(root_f)}});

    while (!stack.empty()) {
        Task& t = stack.back();
        if (memo.count(t.key)) {
            stack.pop_back();
            continue;
        }
        const auto& node = e.nodes[t.node];
        if (t.d == nullptr) {
            formula_names.insert(t.key.second);
            t.d = decomp_for(node.sym, t.f, t.key.second);
            const Decomp* d = t.d;
            bool pushed = false;
            for (size_t pos = 0; pos < d->children.size(); ++pos) {
                for (const auto& f : d->children[pos]) {
                    Key k{node.kids[pos], print_circuit(f)};
                    if (!memo.count(k)) {
                        // t may dangle after push_back; copy what we need.
                        int kid = node.kids[pos];
                        stack.push_back({kid, f, std::move(k)});
                        pushed = true;
                    }
                }
                if (pushed) break;
            }
            if (pushed) continue;
        }
        const Decomp* d = t.d;
        bool value = eval_skeleton(d->skel, [&](int pos, int idx) {
            Key k{node.kids[pos], print_circuit(d->children[pos][idx])};
            auto it = memo.find(k);
            if (it == memo.end())
                throw Error(ErrorCode::BadInput, "evaluation order violated");
            return it->second;
        });
        memo.emplace(t.key, value);
        stack.pop_back();
    }

    if (stats) {
        stats->memo_entries = static_cast<long>(memo.size());
        stats->distinct_formulas = static_cast<long>(formula_names.size());
    }
    return memo.at({e.root, print_circuit(root_f)});
}

// check() lives with the automaton code so the Automaton engine mode can be
// dispatched without a dependency cycle.

} // namespace mso
