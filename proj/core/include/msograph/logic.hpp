#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "msograph/graph.hpp"

namespace mso {

enum class Sort { VertexSet, EdgeSet, VertexElem, EdgeElem };

bool is_set_sort(Sort s);
Sort element_sort_of(Sort s);  // :V -> :v, :E -> :e
Sort set_sort_of(Sort s);      // :v -> :V, :e -> :E
const char* sort_name(Sort s);

// ---------------------------------------------------------------------------
// Terms of the set-sorted language: a variable, the empty set, or
// term{K}(base), which adds the terminals indexed by K to a vertex set and
// leaves edge sets unchanged.
struct CTerm;
using CTermPtr = std::shared_ptr<const CTerm>;

struct CTerm {
    enum Kind { Var, Empty, TermOf };
    Kind kind;
    std::string name;   // Var
    Sort sort;          // sort of the whole term
    std::set<int> K;    // TermOf
    CTermPtr base;      // TermOf

    static CTermPtr var(std::string n, Sort s);
    static CTermPtr empty(Sort s);
    static CTermPtr term_of(std::set<int> K, CTermPtr base);
};

// Formulas of the set-sorted language. Core connectives are Not / And /
// Forall; or, implication, iff and exists are parser sugar. And is n-ary.
struct CFormula;
using CFormulaPtr = std::shared_ptr<const CFormula>;

struct CFormula {
    enum Kind { Sub, Sgl, Conn, Card, Not, And, Forall };
    Kind kind;
    std::vector<CTermPtr> terms;      // atoms; Conn: edge term then n vertex terms
    int card_r = 0, card_m = 0;       // Card
    std::vector<CFormulaPtr> kids;    // Not: 1; And: >=1; Forall: 1
    std::string var;                  // Forall
    Sort var_sort = Sort::VertexSet;  // Forall

    static CFormulaPtr sub(CTermPtr a, CTermPtr b);
    static CFormulaPtr sgl(CTermPtr a);
    static CFormulaPtr conn(std::vector<CTermPtr> ts);  // edge, v1..vn
    static CFormulaPtr card(CTermPtr a, int r, int m);
    static CFormulaPtr lnot(CFormulaPtr a);
    static CFormulaPtr land(std::vector<CFormulaPtr> kids);
    static CFormulaPtr forall(std::string v, Sort s, CFormulaPtr body);
    // Sugar, expanded immediately:
    static CFormulaPtr lor(CFormulaPtr a, CFormulaPtr b);
    static CFormulaPtr implies(CFormulaPtr a, CFormulaPtr b);
    static CFormulaPtr exists(std::string v, Sort s, CFormulaPtr body);
    static CFormulaPtr truth();   // sub(empty:V, empty:V)
    static CFormulaPtr falsity();
};

// ---------------------------------------------------------------------------
// Formulas of the element-sorted language. Terms here are just variables
// (element- or set-sorted); Or/Implies/Iff/Exists are desugared by the parser.
struct DFormula;
using DFormulaPtr = std::shared_ptr<const DFormula>;

struct DFormula {
    enum Kind { Eq, Member, Conn, Card, Not, And, Forall };
    Kind kind;
    std::vector<std::string> vars;    // atom arguments
    std::vector<Sort> var_sorts;
    int card_r = 0, card_m = 0;
    std::vector<DFormulaPtr> kids;
    std::string qvar;                 // Forall
    Sort qvar_sort = Sort::VertexElem;

    static DFormulaPtr eq(std::string a, Sort sa, std::string b, Sort sb);
    static DFormulaPtr member(std::string x, Sort sx, std::string S, Sort sS);
    static DFormulaPtr conn(std::vector<std::string> vs, std::vector<Sort> ss);
    static DFormulaPtr card(std::string S, Sort sS, int r, int m);
    static DFormulaPtr lnot(DFormulaPtr a);
    static DFormulaPtr land(std::vector<DFormulaPtr> kids);
    static DFormulaPtr forall(std::string v, Sort s, DFormulaPtr body);
    static DFormulaPtr lor(DFormulaPtr a, DFormulaPtr b);
    static DFormulaPtr implies(DFormulaPtr a, DFormulaPtr b);
    static DFormulaPtr exists(std::string v, Sort s, DFormulaPtr body);
};

// ---------------------------------------------------------------------------
struct Assignment {
    // element variables -> one id; set variables -> a set of ids
    std::map<std::string, std::string> elems;
    std::map<std::string, std::set<std::string>> sets;
};

struct FormulaMetrics {
    int width = 0;             // maximum quantifier nesting depth
    int height = 0;            // height of the logical tree
    int var_count = 0;         // distinct variable names, free and bound
    int max_conn_arity = 0;
    int max_card_modulus = 0;
    std::map<std::string, Sort> free_vars;
};

// Parsing / printing. Printed forms re-parse to structurally equal ASTs.
CFormulaPtr parse_circuit(const std::string& text);
DFormulaPtr parse_direct(const std::string& text);
std::string print_circuit(const CFormulaPtr& f);
std::string print_direct(const DFormulaPtr& f);

FormulaMetrics metrics(const CFormulaPtr& f);
FormulaMetrics metrics_direct(const DFormulaPtr& f);

// Element-language formula -> set-language formula agreeing on every graph
// under the induced assignment (element values become singleton sets).
CFormulaPtr translate(const DFormulaPtr& f);

// Brute-force semantics. size_budget caps |V|+|E| for set quantification.
bool eval_direct(const DFormulaPtr& f, const TypedGraph& g, const Assignment& a,
                 int size_budget = 18);
bool eval_circuit(const CFormulaPtr& f, const TypedGraph& g, const Assignment& a,
                  int size_budget = 18);

// Canonical form, truth-equivalent on every graph of type n under every full
// assignment: nested term{..} collapsed, K pruned to 1..n, double negation
// removed, conjunctions flattened / deduplicated / sorted.
CFormulaPtr normalize(const CFormulaPtr& f, int n);

// Total structural order used by normalize (exposed for deterministic output).
bool formula_less(const CFormulaPtr& a, const CFormulaPtr& b);
bool formula_equal(const CFormulaPtr& a, const CFormulaPtr& b);

} // namespace mso
