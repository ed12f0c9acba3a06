#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "msograph/algebra.hpp"
#include "msograph/decomposition.hpp"
#include "msograph/logic.hpp"

namespace mso {

struct EngineConfig {
    int max_width = 4;        // quantifier nesting of accepted sentences
    int max_vars = 8;         // distinct variables
    int max_conn = 4;         // connector arity
    int max_modulus = 6;      // counting modulus
    long dnf_budget = 100000; // clauses per quantifier-case conversion
    int oracle_size_limit = 18;       // |V|+|E| cap for brute-force evaluation
    long closure_formula_budget = 20000;
    long closure_state_budget = 200000;
};

// Boolean skeleton over placeholder literals; a literal names the
// (expression-child position, formula index) pair it stands for.
struct Skeleton;
using SkelPtr = std::shared_ptr<const Skeleton>;

struct Skeleton {
    enum Kind { Const, Lit, Not, And, Or };
    Kind kind = Const;
    bool value = false;           // Const
    int child_pos = 0, index = 0; // Lit
    std::vector<SkelPtr> kids;

    static SkelPtr constant(bool v);
    static SkelPtr lit(int pos, int index);
    static SkelPtr lnot(SkelPtr a);
    static SkelPtr land(std::vector<SkelPtr> ks);
    static SkelPtr lor(std::vector<SkelPtr> ks);
};

struct Decomp {
    SkelPtr skel;
    // children[i] = formulas the literals with child_pos == i reference,
    // normalized for the i-th child's out-type.
    std::vector<std::vector<CFormulaPtr>> children;
};

// phi decomposed across a disjoint sum of types a and b: the skeleton over
// the child formulas, evaluated under assignments restricted to either
// operand, recovers phi's truth value on the sum.
Decomp decompose_sum(const CFormulaPtr& phi, int a, int b,
                     const EngineConfig& cfg = {});

// phi across a terminal redefinition sigma: {1..to} -> {1..from}.
Decomp decompose_redef(const CFormulaPtr& phi, const std::vector<int>& sigma,
                       int from, const EngineConfig& cfg = {});

// phi across a fusion of terminals a and b at type n.
Decomp decompose_fuse(const CFormulaPtr& phi, int a, int b, int n,
                      const EngineConfig& cfg = {});

// Dispatch across any signature symbol; composite symbols route through
// their expansion, nullary symbols fold to a constant by direct evaluation.
Decomp decompose_symbol(const CFormulaPtr& phi, const FnSymbol& f,
                        const EngineConfig& cfg = {});

// Evaluates a Decomp's skeleton; `lit` supplies the truth value of the
// (child position, formula index) literals.
bool eval_decomp(const Decomp& d, const std::function<bool(int, int)>& lit);

struct EvalStats {
    long memo_entries = 0;
    long distinct_formulas = 0;
};

bool evaluate_on_expression(const CFormulaPtr& phi, const Expression& e,
                            const EngineConfig& cfg = {},
                            EvalStats* stats = nullptr);

enum class EngineMode { Inductive, Automaton, Oracle };

struct CheckReport {
    bool verdict = false;
    int width = -1;
    int expression_size = 0;
    EvalStats stats;
    EngineMode engine = EngineMode::Inductive;
};

// End-to-end pipeline: decompose (or take a supplied decomposition), root,
// nice-ify, build, evaluate by the selected engine.
CheckReport check(const TypedGraph& g, const CFormulaPtr& phi, int k,
                  Decomposition::Kind family,
                  EngineMode mode = EngineMode::Inductive,
                  const std::optional<Decomposition>& supplied = std::nullopt,
                  const EngineConfig& cfg = {});

// Shared guard: throws BoundExceeded when phi's metrics break the config.
void check_metrics(const CFormulaPtr& phi, const EngineConfig& cfg);

} // namespace mso
