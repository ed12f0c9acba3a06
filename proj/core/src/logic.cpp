#include "msograph/logic.hpp"

#include <algorithm>
#include <sstream>

namespace mso {

bool is_set_sort(Sort s) { return s == Sort::VertexSet || s == Sort::EdgeSet; }

Sort element_sort_of(Sort s) {
    return s == Sort::VertexSet ? Sort::VertexElem
         : s == Sort::EdgeSet   ? Sort::EdgeElem
                                : s;
}

Sort set_sort_of(Sort s) {
    return s == Sort::VertexElem ? Sort::VertexSet
         : s == Sort::EdgeElem   ? Sort::EdgeSet
                                 : s;
}

const char* sort_name(Sort s) {
    switch (s) {
    case Sort::VertexSet: return "V";
    case Sort::EdgeSet: return "E";
    case Sort::VertexElem: return "v";
    case Sort::EdgeElem: return "e";
    }
    return "?";
}

// --------------------------------------------------------------------------
CTermPtr CTerm::var(std::string n, Sort s) {
    auto t = std::make_shared<CTerm>();
    t->kind = Var;
    t->name = std::move(n);
    t->sort = s;
    return t;
}

CTermPtr CTerm::empty(Sort s) {
    auto t = std::make_shared<CTerm>();
    t->kind = Empty;
    t->sort = s;
    return t;
}

CTermPtr CTerm::term_of(std::set<int> K, CTermPtr base) {
    for (int i : K)
        if (i < 1)
            throw Error(ErrorCode::SortError, "terminal indices start at 1");
    auto t = std::make_shared<CTerm>();
    t->kind = TermOf;
    t->sort = base->sort;
    t->K = std::move(K);
    t->base = std::move(base);
    return t;
}

CFormulaPtr CFormula::sub(CTermPtr a, CTermPtr b) {
    if (a->sort != b->sort)
        throw Error(ErrorCode::SortError, "sub arguments must share a sort");
    auto f = std::make_shared<CFormula>();
    f->kind = Sub;
    f->terms = {std::move(a), std::move(b)};
    return f;
}

CFormulaPtr CFormula::sgl(CTermPtr a) {
    auto f = std::make_shared<CFormula>();
    f->kind = Sgl;
    f->terms = {std::move(a)};
    return f;
}

CFormulaPtr CFormula::conn(std::vector<CTermPtr> ts) {
    if (ts.size() < 2)
        throw Error(ErrorCode::SortError, "conn needs an edge and >=1 vertex term");
    if (ts[0]->sort != Sort::EdgeSet)
        throw Error(ErrorCode::SortError, "first conn argument must be edge-sorted");
    for (size_t i = 1; i < ts.size(); ++i)
        if (ts[i]->sort != Sort::VertexSet)
            throw Error(ErrorCode::SortError, "conn vertex arguments must be vertex-sorted");
    auto f = std::make_shared<CFormula>();
    f->kind = Conn;
    f->terms = std::move(ts);
    return f;
}

CFormulaPtr CFormula::card(CTermPtr a, int r, int m) {
    if (m < 1 || r < 0 || r >= m)
        throw Error(ErrorCode::SortError, "card needs 0 <= r < m");
    auto f = std::make_shared<CFormula>();
    f->kind = Card;
    f->terms = {std::move(a)};
    f->card_r = r;
    f->card_m = m;
    return f;
}

CFormulaPtr CFormula::lnot(CFormulaPtr a) {
    auto f = std::make_shared<CFormula>();
    f->kind = Not;
    f->kids = {std::move(a)};
    return f;
}

CFormulaPtr CFormula::land(std::vector<CFormulaPtr> kids) {
    if (kids.empty())
        throw Error(ErrorCode::SortError, "empty conjunction");
    if (kids.size() == 1)
        return kids[0];
    auto f = std::make_shared<CFormula>();
    f->kind = And;
    f->kids = std::move(kids);
    return f;
}

CFormulaPtr CFormula::forall(std::string v, Sort s, CFormulaPtr body) {
    if (!is_set_sort(s))
        throw Error(ErrorCode::SortError, "set-language quantifiers bind set variables");
    auto f = std::make_shared<CFormula>();
    f->kind = Forall;
    f->var = std::move(v);
    f->var_sort = s;
    f->kids = {std::move(body)};
    return f;
}

CFormulaPtr CFormula::lor(CFormulaPtr a, CFormulaPtr b) {
    return lnot(land({lnot(std::move(a)), lnot(std::move(b))}));
}

CFormulaPtr CFormula::implies(CFormulaPtr a, CFormulaPtr b) {
    return lnot(land({std::move(a), lnot(std::move(b))}));
}

CFormulaPtr CFormula::exists(std::string v, Sort s, CFormulaPtr body) {
    return lnot(forall(std::move(v), s, lnot(std::move(body))));
}

CFormulaPtr CFormula::truth() {
    return sub(CTerm::empty(Sort::VertexSet), CTerm::empty(Sort::VertexSet));
}

CFormulaPtr CFormula::falsity() { return lnot(truth()); }

// --------------------------------------------------------------------------
DFormulaPtr DFormula::eq(std::string a, Sort sa, std::string b, Sort sb) {
    if (sa != sb)
        throw Error(ErrorCode::SortError, "= arguments must share a sort");
    auto f = std::make_shared<DFormula>();
    f->kind = Eq;
    f->vars = {std::move(a), std::move(b)};
    f->var_sorts = {sa, sb};
    return f;
}

DFormulaPtr DFormula::member(std::string x, Sort sx, std::string S, Sort sS) {
    if (!is_set_sort(sS) || is_set_sort(sx) || set_sort_of(sx) != sS)
        throw Error(ErrorCode::SortError, "in(x,S) needs an element and a matching set");
    auto f = std::make_shared<DFormula>();
    f->kind = Member;
    f->vars = {std::move(x), std::move(S)};
    f->var_sorts = {sx, sS};
    return f;
}

DFormulaPtr DFormula::conn(std::vector<std::string> vs, std::vector<Sort> ss) {
    if (vs.size() < 2 || vs.size() != ss.size())
        throw Error(ErrorCode::SortError, "conn needs an edge and >=1 vertex");
    if (ss[0] != Sort::EdgeElem)
        throw Error(ErrorCode::SortError, "first conn argument must be an edge element");
    for (size_t i = 1; i < ss.size(); ++i)
        if (ss[i] != Sort::VertexElem)
            throw Error(ErrorCode::SortError, "conn arguments must be vertex elements");
    auto f = std::make_shared<DFormula>();
    f->kind = Conn;
    f->vars = std::move(vs);
    f->var_sorts = std::move(ss);
    return f;
}

DFormulaPtr DFormula::card(std::string S, Sort sS, int r, int m) {
    if (!is_set_sort(sS))
        throw Error(ErrorCode::SortError, "card applies to set variables");
    if (m < 1 || r < 0 || r >= m)
        throw Error(ErrorCode::SortError, "card needs 0 <= r < m");
    auto f = std::make_shared<DFormula>();
    f->kind = Card;
    f->vars = {std::move(S)};
    f->var_sorts = {sS};
    f->card_r = r;
    f->card_m = m;
    return f;
}

DFormulaPtr DFormula::lnot(DFormulaPtr a) {
    auto f = std::make_shared<DFormula>();
    f->kind = Not;
    f->kids = {std::move(a)};
    return f;
}

DFormulaPtr DFormula::land(std::vector<DFormulaPtr> kids) {
    if (kids.empty())
        throw Error(ErrorCode::SortError, "empty conjunction");
    if (kids.size() == 1)
        return kids[0];
    auto f = std::make_shared<DFormula>();
    f->kind = And;
    f->kids = std::move(kids);
    return f;
}

DFormulaPtr DFormula::forall(std::string v, Sort s, DFormulaPtr body) {
    auto f = std::make_shared<DFormula>();
    f->kind = Forall;
    f->qvar = std::move(v);
    f->qvar_sort = s;
    f->kids = {std::move(body)};
    return f;
}

DFormulaPtr DFormula::lor(DFormulaPtr a, DFormulaPtr b) {
    return lnot(land({lnot(std::move(a)), lnot(std::move(b))}));
}

DFormulaPtr DFormula::implies(DFormulaPtr a, DFormulaPtr b) {
    return lnot(land({std::move(a), lnot(std::move(b))}));
}

DFormulaPtr DFormula::exists(std::string v, Sort s, DFormulaPtr body) {
    return lnot(forall(std::move(v), s, lnot(std::move(body))));
}

// --------------------------------------------------------------------------
namespace {

void print_term(std::ostream& os, const CTermPtr& t) {
    switch (t->kind) {
    case CTerm::Var:
        os << t->name;
        break;
    case CTerm::Empty:
        os << "empty:" << sort_name(t->sort);
        break;
    case CTerm::TermOf:
        os << "term{";
        for (auto it = t->K.begin(); it != t->K.end(); ++it)
            os << (it == t->K.begin() ? "" : ",") << *it;
        os << "}(";
        print_term(os, t->base);
        os << ")";
        break;
    }
}

void print_c(std::ostream& os, const CFormulaPtr& f) {
    switch (f->kind) {
    case CFormula::Sub:
        os << "sub(";
        print_term(os, f->terms[0]);
        os << ",";
        print_term(os, f->terms[1]);
        os << ")";
        break;
    case CFormula::Sgl:
        os << "sgl(";
        print_term(os, f->terms[0]);
        os << ")";
        break;
    case CFormula::Conn:
        os << "conn" << (f->terms.size() - 1) << "(";
        for (size_t i = 0; i < f->terms.size(); ++i) {
            if (i) os << ",";
            print_term(os, f->terms[i]);
        }
        os << ")";
        break;
    case CFormula::Card:
        os << "card(";
        print_term(os, f->terms[0]);
        os << "," << f->card_r << "," << f->card_m << ")";
        break;
    case CFormula::Not:
        os << "!";
        if (f->kids[0]->kind == CFormula::And) {
            os << "(";
            print_c(os, f->kids[0]);
            os << ")";
        } else {
            print_c(os, f->kids[0]);
        }
        break;
    case CFormula::And:
        for (size_t i = 0; i < f->kids.size(); ++i) {
            if (i) os << " & ";
            bool paren = f->kids[i]->kind == CFormula::And ||
                         f->kids[i]->kind == CFormula::Forall;
            if (paren) os << "(";
            print_c(os, f->kids[i]);
            if (paren) os << ")";
        }
        break;
    case CFormula::Forall:
        os << "forall " << f->var << ":" << sort_name(f->var_sort) << ". ";
        print_c(os, f->kids[0]);
        break;
    }
}

void print_d(std::ostream& os, const DFormulaPtr& f) {
    switch (f->kind) {
    case DFormula::Eq:
        os << f->vars[0] << " = " << f->vars[1];
        break;
    case DFormula::Member:
        os << "in(" << f->vars[0] << "," << f->vars[1] << ")";
        break;
    case DFormula::Conn:
        os << "conn" << (f->vars.size() - 1) << "(";
        for (size_t i = 0; i < f->vars.size(); ++i)
            os << (i ? "," : "") << f->vars[i];
        os << ")";
        break;
    case DFormula::Card:
        os << "card(" << f->vars[0] << "," << f->card_r << "," << f->card_m << ")";
        break;
    case DFormula::Not:
        os << "!";
        if (f->kids[0]->kind == DFormula::And ||
            f->kids[0]->kind == DFormula::Eq) {
            os << "(";
            print_d(os, f->kids[0]);
            os << ")";
        } else {
            print_d(os, f->kids[0]);
        }
        break;
    case DFormula::And:
        for (size_t i = 0; i < f->kids.size(); ++i) {
            if (i) os << " & ";
            bool paren = f->kids[i]->kind == DFormula::And ||
                         f->kids[i]->kind == DFormula::Forall ||
                         f->kids[i]->kind == DFormula::Eq;
            if (paren) os << "(";
            print_d(os, f->kids[i]);
            if (paren) os << ")";
        }
        break;
    case DFormula::Forall:
        os << "forall " << f->qvar << ":" << sort_name(f->qvar_sort) << ". ";
        print_d(os, f->kids[0]);
        break;
    }
}

} // namespace

std::string print_circuit(const CFormulaPtr& f) {
    std::ostringstream os;
    print_c(os, f);
    return os.str();
}

std::string print_direct(const DFormulaPtr& f) {
    std::ostringstream os;
    print_d(os, f);
    return os.str();
}

// --------------------------------------------------------------------------
namespace {

void term_vars(const CTermPtr& t, std::map<std::string, Sort>& out) {
    if (t->kind == CTerm::Var)
        out[t->name] = t->sort;
    else if (t->kind == CTerm::TermOf)
        term_vars(t->base, out);
}

void metrics_c(const CFormulaPtr& f, int depth, FormulaMetrics& m,
               std::set<std::string>& bound, std::set<std::string>& all) {
    m.width = std::max(m.width, depth);
    switch (f->kind) {
    case CFormula::Conn:
        m.max_conn_arity =
            std::max(m.max_conn_arity, static_cast<int>(f->terms.size()) - 1);
        break;
    case CFormula::Card:
        m.max_card_modulus = std::max(m.max_card_modulus, f->card_m);
        break;
    default:
        break;
    }
    std::map<std::string, Sort> tv;
    for (const auto& t : f->terms)
        term_vars(t, tv);
    for (auto& [name, s] : tv) {
        all.insert(name);
        if (!bound.count(name))
            m.free_vars[name] = s;
    }
    if (f->kind == CFormula::Forall) {
        bool fresh = bound.insert(f->var).second;
        all.insert(f->var);
        metrics_c(f->kids[0], depth + 1, m, bound, all);
        if (fresh)
            bound.erase(f->var);
    } else {
        for (const auto& k : f->kids)
            metrics_c(k, depth, m, bound, all);
    }
}

int height_c(const CFormulaPtr& f) {
    int h = 0;
    for (const auto& k : f->kids)
        h = std::max(h, height_c(k));
    return h + 1;
}

void metrics_d(const DFormulaPtr& f, int depth, FormulaMetrics& m,
               std::set<std::string>& bound, std::set<std::string>& all) {
    m.width = std::max(m.width, depth);
    if (f->kind == DFormula::Conn)
        m.max_conn_arity =
            std::max(m.max_conn_arity, static_cast<int>(f->vars.size()) - 1);
    if (f->kind == DFormula::Card)
        m.max_card_modulus = std::max(m.max_card_modulus, f->card_m);
    for (size_t i = 0; i < f->vars.size(); ++i) {
        all.insert(f->vars[i]);
        if (!bound.count(f->vars[i]))
            m.free_vars[f->vars[i]] = f->var_sorts[i];
    }
    if (f->kind == DFormula::Forall) {
        bool fresh = bound.insert(f->qvar).second;
        all.insert(f->qvar);
        metrics_d(f->kids[0], depth + 1, m, bound, all);
        if (fresh)
            bound.erase(f->qvar);
    } else {
        for (const auto& k : f->kids)
            metrics_d(k, depth, m, bound, all);
    }
}

int height_d(const DFormulaPtr& f) {
    int h = 0;
    for (const auto& k : f->kids)
        h = std::max(h, height_d(k));
    return h + 1;
}

} // namespace

FormulaMetrics metrics(const CFormulaPtr& f) {
    FormulaMetrics m;
    std::set<std::string> bound, all;
    metrics_c(f, 0, m, bound, all);
    m.height = height_c(f);
    m.var_count = static_cast<int>(all.size());
    return m;
}

FormulaMetrics metrics_direct(const DFormulaPtr& f) {
    FormulaMetrics m;
    std::set<std::string> bound, all;
    metrics_d(f, 0, m, bound, all);
    m.height = height_d(f);
    m.var_count = static_cast<int>(all.size());
    return m;
}

// --------------------------------------------------------------------------
CFormulaPtr translate(const DFormulaPtr& f) {
    switch (f->kind) {
    case DFormula::Eq: {
        auto a = CTerm::var(f->vars[0], set_sort_of(f->var_sorts[0]));
        auto b = CTerm::var(f->vars[1], set_sort_of(f->var_sorts[1]));
        return CFormula::land({CFormula::sub(a, b), CFormula::sub(b, a)});
    }
    case DFormula::Member:
        return CFormula::sub(CTerm::var(f->vars[0], set_sort_of(f->var_sorts[0])),
                             CTerm::var(f->vars[1], f->var_sorts[1]));
    case DFormula::Conn: {
        std::vector<CTermPtr> ts;
        for (size_t i = 0; i < f->vars.size(); ++i)
            ts.push_back(CTerm::var(f->vars[i], set_sort_of(f->var_sorts[i])));
        return CFormula::conn(std::move(ts));
    }
    case DFormula::Card:
        return CFormula::card(CTerm::var(f->vars[0], f->var_sorts[0]), f->card_r,
                              f->card_m);
    case DFormula::Not:
        return CFormula::lnot(translate(f->kids[0]));
    case DFormula::And: {
        std::vector<CFormulaPtr> ks;
        for (const auto& k : f->kids)
            ks.push_back(translate(k));
        return CFormula::land(std::move(ks));
    }
    case DFormula::Forall: {
        auto body = translate(f->kids[0]);
        if (is_set_sort(f->qvar_sort))
            return CFormula::forall(f->qvar, f->qvar_sort, body);
        Sort s = set_sort_of(f->qvar_sort);
        // element quantifier lifts to a set quantifier relativized to singletons
        auto guard = CFormula::sgl(CTerm::var(f->qvar, s));
        return CFormula::forall(f->qvar, s, CFormula::implies(guard, body));
    }
    }
    throw Error(ErrorCode::SortError, "unreachable formula kind");
}

// --------------------------------------------------------------------------
namespace {

int term_cmp(const CTermPtr& a, const CTermPtr& b) {
    if (a->kind != b->kind)
        return a->kind < b->kind ? -1 : 1;
    if (a->sort != b->sort)
        return static_cast<int>(a->sort) < static_cast<int>(b->sort) ? -1 : 1;
    switch (a->kind) {
    case CTerm::Var:
        return a->name.compare(b->name);
    case CTerm::Empty:
        return 0;
    case CTerm::TermOf:
        if (a->K != b->K)
            return a->K < b->K ? -1 : 1;
        return term_cmp(a->base, b->base);
    }
    return 0;
}

int formula_cmp(const CFormulaPtr& a, const CFormulaPtr& b) {
    if (a->kind != b->kind)
        return a->kind < b->kind ? -1 : 1;
    if (a->terms.size() != b->terms.size())
        return a->terms.size() < b->terms.size() ? -1 : 1;
    for (size_t i = 0; i < a->terms.size(); ++i)
        if (int c = term_cmp(a->terms[i], b->terms[i]))
            return c;
    if (a->card_r != b->card_r)
        return a->card_r < b->card_r ? -1 : 1;
    if (a->card_m != b->card_m)
        return a->card_m < b->card_m ? -1 : 1;
    if (a->var != b->var)
        return a->var < b->var ? -1 : 1;
    if (a->var_sort != b->var_sort)
        return static_cast<int>(a->var_sort) < static_cast<int>(b->var_sort) ? -1 : 1;
    if (a->kids.size() != b->kids.size())
        return a->kids.size() < b->kids.size() ? -1 : 1;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (int c = formula_cmp(a->kids[i], b->kids[i]))
            return c;
    return 0;
}

CTermPtr normalize_term(const CTermPtr& t, int n) {
    switch (t->kind) {
    case CTerm::Var:
    case CTerm::Empty:
        return t;
    case CTerm::TermOf: {
        CTermPtr base = normalize_term(t->base, n);
        if (base->sort == Sort::EdgeSet)
            return base; // term{K} is the identity on edge sets
        std::set<int> K;
        for (int i : t->K)
            if (i <= n)
                K.insert(i);
        if (base->kind == CTerm::TermOf) {
            K.insert(base->K.begin(), base->K.end());
            base = base->base;
        }
        if (K.empty())
            return base;
        return CTerm::term_of(std::move(K), base);
    }
    }
    return t;
}

} // namespace

bool formula_less(const CFormulaPtr& a, const CFormulaPtr& b) {
    return formula_cmp(a, b) < 0;
}

bool formula_equal(const CFormulaPtr& a, const CFormulaPtr& b) {
    return formula_cmp(a, b) == 0;
}

CFormulaPtr normalize(const CFormulaPtr& f, int n) {
    switch (f->kind) {
    case CFormula::Sub:
        return CFormula::sub(normalize_term(f->terms[0], n),
                             normalize_term(f->terms[1], n));
    case CFormula::Sgl:
        return CFormula::sgl(normalize_term(f->terms[0], n));
    case CFormula::Conn: {
        std::vector<CTermPtr> ts;
        for (const auto& t : f->terms)
            ts.push_back(normalize_term(t, n));
        return CFormula::conn(std::move(ts));
    }
    case CFormula::Card:
        return CFormula::card(normalize_term(f->terms[0], n), f->card_r, f->card_m);
    case CFormula::Not: {
        CFormulaPtr inner = normalize(f->kids[0], n);
        if (inner->kind == CFormula::Not)
            return inner->kids[0];
        return CFormula::lnot(inner);
    }
    case CFormula::And: {
        std::vector<CFormulaPtr> ks;
        for (const auto& k : f->kids) {
            CFormulaPtr nk = normalize(k, n);
            if (nk->kind == CFormula::And)
                ks.insert(ks.end(), nk->kids.begin(), nk->kids.end());
            else
                ks.push_back(nk);
        }
        std::sort(ks.begin(), ks.end(), formula_less);
        ks.erase(std::unique(ks.begin(), ks.end(), formula_equal), ks.end());
        return CFormula::land(std::move(ks));
    }
    case CFormula::Forall:
        return CFormula::forall(f->var, f->var_sort, normalize(f->kids[0], n));
    }
    return f;
}

} // namespace mso
