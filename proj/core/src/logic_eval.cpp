#include <bit>
#include <cstdint>
#include <optional>

#include "msograph/logic.hpp"

namespace mso {

namespace {

struct Universe {
    const TypedGraph& g;
    std::map<std::string, int> vidx, eidx;

    explicit Universe(const TypedGraph& gr) : g(gr) {
        int i = 0;
        for (const auto& v : g.vertices)
            vidx[v] = i++;
        i = 0;
        for (const auto& e : g.edges)
            eidx[e] = i++;
    }

    int size(Sort s) const {
        return is_set_sort(s) ? (s == Sort::VertexSet ? static_cast<int>(vidx.size())
                                                      : static_cast<int>(eidx.size()))
                              : (s == Sort::VertexElem ? static_cast<int>(vidx.size())
                                                       : static_cast<int>(eidx.size()));
    }

    std::uint64_t to_mask(Sort s, const std::set<std::string>& ids) const {
        const auto& idx = (s == Sort::VertexSet) ? vidx : eidx;
        std::uint64_t m = 0;
        for (const auto& id : ids) {
            auto it = idx.find(id);
            if (it == idx.end())
                throw Error(ErrorCode::UnknownId,
                            "assignment id not in the graph: " + id);
            m |= std::uint64_t{1} << it->second;
        }
        return m;
    }
};

struct SetEnv {
    std::map<std::string, std::pair<Sort, std::uint64_t>> sets;
    std::map<std::string, std::pair<Sort, int>> elems; // element language only
};

void check_budget(const TypedGraph& g, int budget) {
    if (static_cast<int>(g.vertices.size() + g.edges.size()) > budget)
        throw Error(ErrorCode::SizeLimitExceeded,
                    "set quantification over a graph beyond the configured budget");
}

// ---- set-sorted language ---------------------------------------------------

std::uint64_t eval_term(const CTermPtr& t, const Universe& u, const SetEnv& env) {
    switch (t->kind) {
    case CTerm::Var: {
        auto it = env.sets.find(t->name);
        if (it == env.sets.end())
            throw Error(ErrorCode::AssignmentIncomplete,
                        "no value for variable " + t->name);
        if (it->second.first != t->sort)
            throw Error(ErrorCode::SortError,
                        "variable " + t->name + " used at the wrong sort");
        return it->second.second;
    }
    case CTerm::Empty:
        return 0;
    case CTerm::TermOf: {
        std::uint64_t m = eval_term(t->base, u, env);
        if (t->sort == Sort::EdgeSet)
            return m;
        for (int i : t->K)
            if (i >= 1 && i <= u.g.type())
                m |= std::uint64_t{1} << u.vidx.at(u.g.terminals[i - 1]);
        return m;
    }
    }
    return 0;
}

bool eval_c(const CFormulaPtr& f, const Universe& u, SetEnv& env, int budget) {
    switch (f->kind) {
    case CFormula::Sub: {
        std::uint64_t a = eval_term(f->terms[0], u, env);
        std::uint64_t b = eval_term(f->terms[1], u, env);
        return (a & ~b) == 0;
    }
    case CFormula::Sgl:
        return std::popcount(eval_term(f->terms[0], u, env)) == 1;
    case CFormula::Conn: {
        std::uint64_t es = eval_term(f->terms[0], u, env);
        size_t n = f->terms.size() - 1;
        std::vector<std::uint64_t> vs;
        for (size_t i = 1; i < f->terms.size(); ++i)
            vs.push_back(eval_term(f->terms[i], u, env));
        for (const auto& e : u.g.edges) {
            if (!((es >> u.eidx.at(e)) & 1))
                continue;
            const auto& w = u.g.endpoints.at(e);
            if (w.size() != n)
                continue;
            bool ok = true;
            for (size_t i = 0; i < n && ok; ++i)
                ok = (vs[i] >> u.vidx.at(w[i])) & 1;
            if (ok)
                return true;
        }
        return false;
    }
    case CFormula::Card: {
        int c = std::popcount(eval_term(f->terms[0], u, env));
        return c % f->card_m == f->card_r;
    }
    case CFormula::Not:
        return !eval_c(f->kids[0], u, env, budget);
    case CFormula::And:
        for (const auto& k : f->kids)
            if (!eval_c(k, u, env, budget))
                return false;
        return true;
    case CFormula::Forall: {
        check_budget(u.g, budget);
        int n = u.size(f->var_sort);
        auto saved = env.sets.find(f->var) != env.sets.end()
                         ? std::optional(env.sets[f->var])
                         : std::nullopt;
        bool all = true;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n) && all; ++m) {
            env.sets[f->var] = {f->var_sort, m};
            all = eval_c(f->kids[0], u, env, budget);
        }
        if (saved)
            env.sets[f->var] = *saved;
        else
            env.sets.erase(f->var);
        return all;
    }
    }
    return false;
}

// ---- element-sorted language ----------------------------------------------

bool eval_d(const DFormulaPtr& f, const Universe& u, SetEnv& env, int budget) {
    auto elem = [&](const std::string& name) -> std::pair<Sort, int> {
        auto it = env.elems.find(name);
        if (it == env.elems.end())
            throw Error(ErrorCode::AssignmentIncomplete,
                        "no value for variable " + name);
        return it->second;
    };
    auto setv = [&](const std::string& name) -> std::pair<Sort, std::uint64_t> {
        auto it = env.sets.find(name);
        if (it == env.sets.end())
            throw Error(ErrorCode::AssignmentIncomplete,
                        "no value for variable " + name);
        return it->second;
    };
    switch (f->kind) {
    case DFormula::Eq: {
        auto [sa, a] = elem(f->vars[0]);
        auto [sb, b] = elem(f->vars[1]);
        return sa == sb && a == b;
    }
    case DFormula::Member: {
        auto [sx, x] = elem(f->vars[0]);
        auto [sS, S] = setv(f->vars[1]);
        if (set_sort_of(sx) != sS)
            return false;
        return (S >> x) & 1;
    }
    case DFormula::Conn: {
        auto [se, e] = elem(f->vars[0]);
        if (se != Sort::EdgeElem)
            return false;
        const auto& w = u.g.endpoints.at(u.g.edges[e]);
        if (w.size() != f->vars.size() - 1)
            return false;
        for (size_t i = 1; i < f->vars.size(); ++i) {
            auto [sv, v] = elem(f->vars[i]);
            if (sv != Sort::VertexElem || u.vidx.at(w[i - 1]) != v)
                return false;
        }
        return true;
    }
    case DFormula::Card: {
        auto [sS, S] = setv(f->vars[0]);
        (void)sS;
        return std::popcount(S) % f->card_m == f->card_r;
    }
    case DFormula::Not:
        return !eval_d(f->kids[0], u, env, budget);
    case DFormula::And:
        for (const auto& k : f->kids)
            if (!eval_d(k, u, env, budget))
                return false;
        return true;
    case DFormula::Forall: {
        bool all = true;
        if (is_set_sort(f->qvar_sort)) {
            check_budget(u.g, budget);
            int n = u.size(f->qvar_sort);
            auto saved = env.sets.count(f->qvar)
                             ? std::optional(env.sets[f->qvar])
                             : std::nullopt;
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n) && all; ++m) {
                env.sets[f->qvar] = {f->qvar_sort, m};
                all = eval_d(f->kids[0], u, env, budget);
            }
            if (saved)
                env.sets[f->qvar] = *saved;
            else
                env.sets.erase(f->qvar);
        } else {
            int n = u.size(f->qvar_sort);
            auto saved = env.elems.count(f->qvar)
                             ? std::optional(env.elems[f->qvar])
                             : std::nullopt;
            for (int i = 0; i < n && all; ++i) {
                env.elems[f->qvar] = {f->qvar_sort, i};
                all = eval_d(f->kids[0], u, env, budget);
            }
            if (saved)
                env.elems[f->qvar] = *saved;
            else
                env.elems.erase(f->qvar);
        }
        return all;
    }
    }
    return false;
}

} // namespace

bool eval_circuit(const CFormulaPtr& f, const TypedGraph& g, const Assignment& a,
                  int size_budget) {
    Universe u(g);
    SetEnv env;
    FormulaMetrics m = metrics(f);
    for (const auto& [name, sort] : m.free_vars) {
        auto it = a.sets.find(name);
        if (it == a.sets.end())
            throw Error(ErrorCode::AssignmentIncomplete,
                        "free variable without a value: " + name);
        env.sets[name] = {sort, u.to_mask(sort, it->second)};
    }
    return eval_c(f, u, env, size_budget);
}

bool eval_direct(const DFormulaPtr& f, const TypedGraph& g, const Assignment& a,
                 int size_budget) {
    Universe u(g);
    SetEnv env;
    FormulaMetrics m = metrics_direct(f);
    for (const auto& [name, sort] : m.free_vars) {
        if (is_set_sort(sort)) {
            auto it = a.sets.find(name);
            if (it == a.sets.end())
                throw Error(ErrorCode::AssignmentIncomplete,
                            "free variable without a value: " + name);
            env.sets[name] = {sort, u.to_mask(sort, it->second)};
        } else {
            auto it = a.elems.find(name);
            if (it == a.elems.end())
                throw Error(ErrorCode::AssignmentIncomplete,
                            "free variable without a value: " + name);
            const auto& idx = sort == Sort::VertexElem ? u.vidx : u.eidx;
            auto j = idx.find(it->second);
            if (j == idx.end())
                throw Error(ErrorCode::UnknownId,
                            "assignment id not in the graph: " + it->second);
            env.elems[name] = {sort, j->second};
        }
    }
    return eval_d(f, u, env, size_budget);
}

} // namespace mso
