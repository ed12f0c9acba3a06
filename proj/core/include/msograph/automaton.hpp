#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msograph/engine.hpp"

namespace mso {

// A rooted ordered tree with string-labeled nodes; the generic automaton
// below runs over these, so it also covers symbol trees that are not graph
// expressions (e.g. propositional circuits).
struct LabeledTree {
    struct Node {
        std::string symbol;
        std::vector<int> kids;
    };
    std::vector<Node> nodes;
    int root = -1;

    int add(std::string symbol, std::vector<int> kids = {});
};

LabeledTree to_tree(const Expression& e);

// Deterministic bottom-up tree automaton. States are indices into
// state_names; transitions key on (symbol, child state tuple).
struct TreeAutomaton {
    std::vector<std::string> state_names;
    std::map<std::pair<std::string, std::vector<int>>, int> delta;
    std::set<int> accepting;
    std::optional<int> sink; // absorbing reject state, when total-ized

    // State per node, leaves processed first (FIFO over nodes whose children
    // are done). Throws MissingTransition unless a sink absorbs the miss.
    std::vector<int> run(const LabeledTree& t) const;
    bool accepts(const LabeledTree& t) const;
};

// The automaton obtained by closing a sentence under inductive decomposition
// over a finite signature: states are the reachable sets of closure formulas
// per type, acceptance is membership of the goal sentence.
struct ClosureAutomaton {
    SignatureProfile profile;
    int target_type = 0;
    CFormulaPtr goal; // normalized for target_type

    std::map<int, std::vector<CFormulaPtr>> closure; // per type
    struct State {
        int type = 0;
        std::vector<int> subset; // sorted indices into closure[type]
    };
    std::vector<State> states;
    TreeAutomaton automaton; // plus one sink state at the end
    // First-discovery transition per state, for witness reconstruction; the
    // referenced child states always carry smaller ids.
    std::vector<std::pair<FnSymbol, std::vector<int>>> predecessors;

    bool accepts(const Expression& e) const;
    std::string dump() const; // deterministic textual form
};

// Fixpoint closure + forward reachability. extra_symbols join the profile
// alphabet (used to cover letters of one concrete expression, e.g. oriented
// edge constants outside the enumerated alphabet).
ClosureAutomaton build_closure(const CFormulaPtr& phi,
                               const SignatureProfile& profile, int n,
                               const EngineConfig& cfg = {},
                               const std::vector<FnSymbol>& extra_symbols = {});

struct EmptinessResult {
    bool empty = true;
    std::optional<Expression> witness;
    std::optional<TypedGraph> witness_graph;
    bool oracle_checked = false; // witness re-evaluated by brute force
    bool oracle_agrees = false;
};

// Does any graph denoted by the profile's expressions of type n satisfy phi?
EmptinessResult emptiness(const CFormulaPtr& phi, const SignatureProfile& profile,
                          int n, const EngineConfig& cfg = {});

} // namespace mso
