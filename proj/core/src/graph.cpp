#include "msograph/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace mso {

const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidArity: return "InvalidArity";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TypeTooLarge: return "TypeTooLarge";
    case ErrorCode::LoopCreated: return "LoopCreated";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SortError: return "SortError";
    case ErrorCode::AssignmentIncomplete: return "AssignmentIncomplete";
    case ErrorCode::NotRooted: return "NotRooted";
    case ErrorCode::TerminalsNotCoBagged: return "TerminalsNotCoBagged";
    case ErrorCode::DecompositionInvalid: return "DecompositionInvalid";
    case ErrorCode::NotVerdant: return "NotVerdant";
    case ErrorCode::NotVerdurous: return "NotVerdurous";
    case ErrorCode::JoinNodePresent: return "JoinNodePresent";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::ClosureBudgetExceeded: return "ClosureBudgetExceeded";
    case ErrorCode::MissingTransition: return "MissingTransition";
    case ErrorCode::NoneWithinBound: return "NoneWithinBound";
    case ErrorCode::BadInput: return "BadInput";
    }
    return "UnknownError";
}

bool TypedGraph::has_vertex(const std::string& v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

bool TypedGraph::has_edge(const std::string& e) const {
    return std::find(edges.begin(), edges.end(), e) != edges.end();
}

void TypedGraph::check_invariants() const {
    if (vertices.empty())
        throw Error(ErrorCode::BadInput, "graph has no vertices");
    std::set<std::string> vset(vertices.begin(), vertices.end());
    std::set<std::string> eset(edges.begin(), edges.end());
    if (vset.size() != vertices.size())
        throw Error(ErrorCode::BadInput, "duplicate vertex id");
    if (eset.size() != edges.size())
        throw Error(ErrorCode::BadInput, "duplicate edge id");
    for (const auto& e : edges) {
        if (vset.count(e))
            throw Error(ErrorCode::BadInput, "edge id collides with vertex id: " + e);
        auto it = endpoints.find(e);
        if (it == endpoints.end())
            throw Error(ErrorCode::BadInput, "edge without endpoint word: " + e);
        if (it->second.empty())
            throw Error(ErrorCode::BadInput, "edge with empty endpoint word: " + e);
        std::set<std::string> seen;
        for (const auto& v : it->second) {
            if (!vset.count(v))
                throw Error(ErrorCode::UnknownId, "endpoint not a vertex: " + v);
            if (!seen.insert(v).second && !allow_loops)
                throw Error(ErrorCode::LoopCreated,
                            "repeated endpoint in loop-free graph, edge " + e);
        }
        if (directed) {
            auto o = orientation.find(e);
            if (o == orientation.end())
                throw Error(ErrorCode::BadInput, "directed edge without split: " + e);
            int s = o->second;
            int len = static_cast<int>(it->second.size());
            if (s <= 0 || s >= len)
                throw Error(ErrorCode::BadInput, "split out of bounds on edge " + e);
        }
    }
    if (!directed && !orientation.empty())
        throw Error(ErrorCode::BadInput, "orientation present on undirected graph");
    if (endpoints.size() != edges.size())
        throw Error(ErrorCode::BadInput, "endpoint map does not match edge set");
    for (const auto& t : terminals)
        if (!vset.count(t))
            throw Error(ErrorCode::UnknownId, "terminal not a vertex: " + t);
}

TypedGraph vertex_graph() {
    TypedGraph g;
    g.vertices = {"v0"};
    g.terminals = {"v0"};
    return g;
}

TypedGraph edge_graph(int n, std::optional<int> split) {
    if (n < 1)
        throw Error(ErrorCode::InvalidArity, "edge graph needs at least one end point");
    TypedGraph g;
    std::vector<std::string> word;
    for (int i = 0; i < n; ++i) {
        g.vertices.push_back("v" + std::to_string(i));
        word.push_back(g.vertices.back());
    }
    g.edges = {"e0"};
    g.endpoints["e0"] = word;
    g.terminals = g.vertices;
    if (split) {
        if (*split <= 0 || *split >= n)
            throw Error(ErrorCode::BadInput, "split out of bounds");
        g.directed = true;
        g.orientation["e0"] = *split;
    }
    return g;
}

TypedGraph loop_graph(const std::vector<int>& word, std::optional<int> split) {
    if (word.empty())
        throw Error(ErrorCode::InvalidArity, "loop graph needs a nonempty word");
    int n = *std::max_element(word.begin(), word.end());
    std::set<int> seen(word.begin(), word.end());
    for (int i = 1; i <= n; ++i)
        if (!seen.count(i))
            throw Error(ErrorCode::NotSurjective,
                        "word misses value " + std::to_string(i));
    if (*std::min_element(word.begin(), word.end()) < 1)
        throw Error(ErrorCode::IndexOutOfRange, "word values start at 1");
    TypedGraph g;
    g.allow_loops = word.size() > static_cast<size_t>(n);
    for (int i = 0; i < n; ++i)
        g.vertices.push_back("v" + std::to_string(i));
    std::vector<std::string> w;
    for (int x : word)
        w.push_back(g.vertices[x - 1]);
    g.edges = {"e0"};
    g.endpoints["e0"] = w;
    g.terminals = g.vertices;
    if (split) {
        int len = static_cast<int>(word.size());
        if (*split <= 0 || *split >= len)
            throw Error(ErrorCode::BadInput, "split out of bounds");
        g.directed = true;
        g.orientation["e0"] = *split;
    }
    return g;
}

namespace {

// Renames ids in h away from those used in g (right operand gets suffixed).
TypedGraph rename_apart(const TypedGraph& g, const TypedGraph& h) {
    std::set<std::string> used(g.vertices.begin(), g.vertices.end());
    used.insert(g.edges.begin(), g.edges.end());
    std::map<std::string, std::string> ren;
    auto fresh = [&](const std::string& id) {
        std::string cand = id;
        while (used.count(cand))
            cand += "'";
        used.insert(cand);
        return cand;
    };
    TypedGraph r = h;
    bool any = false;
    for (auto& v : r.vertices) {
        std::string nv = fresh(v);
        if (nv != v) any = true;
        ren[v] = nv;
        v = nv;
    }
    std::map<std::string, std::string> eren;
    for (auto& e : r.edges) {
        std::string ne = fresh(e);
        if (ne != e) any = true;
        eren[e] = ne;
        e = ne;
    }
    if (!any)
        return r;
    std::map<std::string, std::vector<std::string>> nep;
    std::map<std::string, int> nor;
    for (auto& [e, w] : r.endpoints) {
        std::vector<std::string> nw;
        for (auto& v : w)
            nw.push_back(ren.at(v));
        nep[eren.at(e)] = nw;
    }
    for (auto& [e, s] : r.orientation)
        nor[eren.at(e)] = s;
    r.endpoints = std::move(nep);
    r.orientation = std::move(nor);
    for (auto& t : r.terminals)
        t = ren.at(t);
    return r;
}

} // namespace

TypedGraph disjoint_sum(const TypedGraph& g, const TypedGraph& h) {
    // An operand without edges is orientation-neutral and adopts the other
    // side's mode; two edged operands must agree.
    if (g.directed != h.directed && !g.edges.empty() && !h.edges.empty())
        throw Error(ErrorCode::ModeMismatch, "cannot sum directed with undirected");
    TypedGraph hr = rename_apart(g, h);
    TypedGraph r = g;
    r.directed = g.edges.empty() ? h.directed : g.directed;
    r.allow_loops = g.allow_loops || h.allow_loops;
    r.vertices.insert(r.vertices.end(), hr.vertices.begin(), hr.vertices.end());
    r.edges.insert(r.edges.end(), hr.edges.begin(), hr.edges.end());
    r.endpoints.insert(hr.endpoints.begin(), hr.endpoints.end());
    r.orientation.insert(hr.orientation.begin(), hr.orientation.end());
    r.terminals.insert(r.terminals.end(), hr.terminals.begin(), hr.terminals.end());
    return r;
}

TypedGraph redefine(const TypedGraph& g, const std::vector<int>& sigma) {
    TypedGraph r = g;
    r.terminals.clear();
    for (int s : sigma) {
        if (s < 1 || s > g.type())
            throw Error(ErrorCode::IndexOutOfRange,
                        "redefine index " + std::to_string(s) + " outside 1.." +
                            std::to_string(g.type()));
        r.terminals.push_back(g.terminals[s - 1]);
    }
    return r;
}

TypedGraph fuse(const TypedGraph& g, int a, int b) {
    if (a < 1 || a > g.type() || b < 1 || b > g.type())
        throw Error(ErrorCode::IndexOutOfRange, "fuse index outside 1..type");
    const std::string va = g.terminals[a - 1];
    const std::string vb = g.terminals[b - 1];
    if (va == vb)
        return g;
    TypedGraph r = g;
    r.vertices.erase(std::find(r.vertices.begin(), r.vertices.end(), vb));
    for (auto& [e, w] : r.endpoints) {
        std::set<std::string> seen;
        for (auto& v : w) {
            if (v == vb)
                v = va;
            if (!seen.insert(v).second && !r.allow_loops)
                throw Error(ErrorCode::LoopCreated,
                            "fusing adjacent terminals would create a loop on edge " + e);
        }
    }
    for (auto& t : r.terminals)
        if (t == vb)
            t = va;
    return r;
}

TypedGraph twine(const TypedGraph& g, const TypedGraph& h,
                 const std::set<int>& K, int k) {
    const int n = g.type();
    const int m = h.type();
    for (int l : K)
        if (l < 1 || l > std::min(n, m))
            throw Error(ErrorCode::IndexOutOfRange,
                        "twine index " + std::to_string(l) +
                            " outside 1..min(type,type)");
    if (k < 0 || k > n + m - static_cast<int>(K.size()))
        throw Error(ErrorCode::TypeTooLarge,
                    "twine output type exceeds n+m-|K|");
    TypedGraph s = disjoint_sum(g, h);
    for (auto it = K.rbegin(); it != K.rend(); ++it)
        s = fuse(s, *it, *it + n);
    // sigma keeps positions 1..n; above n it walks the right-copy terminal
    // positions that were not glued, in increasing order.
    std::vector<int> leftover;
    for (int i = n + 1; i <= n + m; ++i)
        if (!K.count(i - n))
            leftover.push_back(i);
    std::vector<int> sigma;
    for (int i = 1; i <= k; ++i) {
        if (i <= n)
            sigma.push_back(i);
        else
            sigma.push_back(leftover[i - n - 1]);
    }
    return redefine(s, sigma);
}

TypedGraph sprout(const TypedGraph& g) {
    TypedGraph v = vertex_graph();
    v.directed = g.directed;
    return disjoint_sum(g, v);
}

TypedGraph bloom(const TypedGraph& g, int m, const std::vector<int>& word,
                 std::optional<int> split) {
    const int n = g.type();
    if (m < 1 || m > n)
        throw Error(ErrorCode::IndexOutOfRange, "bloom arity outside 1..type");
    std::vector<int> w = word;
    if (w.empty())
        for (int i = 1; i <= m; ++i)
            w.push_back(i);
    std::set<int> support;
    for (int x : w) {
        if (x < 1 || x > m)
            throw Error(ErrorCode::IndexOutOfRange, "bloom word value outside 1..m");
        support.insert(x);
    }
    // The edge constant is numbered by the r distinct referenced terminals in
    // increasing order; fusing terminal s_j of g with constant terminal j then
    // realizes the visit word over g's terminals.
    std::vector<int> supp(support.begin(), support.end());
    std::map<int, int> pos;
    for (size_t j = 0; j < supp.size(); ++j)
        pos[supp[j]] = static_cast<int>(j) + 1;
    std::vector<int> cword;
    for (int x : w)
        cword.push_back(pos[x]);
    TypedGraph c = loop_graph(cword, split);
    c.directed = g.directed;
    if (!g.directed)
        c.orientation.clear();
    c.allow_loops = c.allow_loops || g.allow_loops;
    TypedGraph s = disjoint_sum(g, c);
    for (int j = static_cast<int>(supp.size()); j >= 1; --j)
        s = fuse(s, supp[j - 1], n + j);
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 1);
    return redefine(s, sigma);
}

TypedGraph collapse(const TypedGraph& g, int a, int b) {
    if (a < 1 || a > g.type() || b < 1 || b > g.type())
        throw Error(ErrorCode::IndexOutOfRange, "collapse index outside 1..type");
    const std::string& va = g.terminals[a - 1];
    const std::string& vb = g.terminals[b - 1];
    if (va == vb)
        return g;
    if (!adjacent(g, va, vb))
        return g;
    return fuse(g, a, b);
}

TypedGraph canonicalize_ids(const TypedGraph& g) {
    std::map<std::string, std::string> vren, eren;
    TypedGraph r = g;
    for (size_t i = 0; i < g.vertices.size(); ++i)
        vren[g.vertices[i]] = "v" + std::to_string(i);
    for (size_t i = 0; i < g.edges.size(); ++i)
        eren[g.edges[i]] = "e" + std::to_string(i);
    for (auto& v : r.vertices)
        v = vren.at(v);
    for (auto& e : r.edges)
        e = eren.at(e);
    std::map<std::string, std::vector<std::string>> nep;
    std::map<std::string, int> nor;
    for (auto& [e, w] : g.endpoints) {
        std::vector<std::string> nw;
        for (auto& v : w)
            nw.push_back(vren.at(v));
        nep[eren.at(e)] = nw;
    }
    for (auto& [e, s] : g.orientation)
        nor[eren.at(e)] = s;
    r.endpoints = std::move(nep);
    r.orientation = std::move(nor);
    for (auto& t : r.terminals)
        t = vren.at(t);
    return r;
}

int incidence(const TypedGraph& g, const std::string& v, const std::string& e) {
    if (!g.has_vertex(v))
        throw Error(ErrorCode::UnknownId, "unknown vertex " + v);
    auto it = g.endpoints.find(e);
    if (it == g.endpoints.end())
        throw Error(ErrorCode::UnknownId, "unknown edge " + e);
    return static_cast<int>(std::count(it->second.begin(), it->second.end(), v));
}

int degree(const TypedGraph& g, const std::string& v) {
    if (!g.has_vertex(v))
        throw Error(ErrorCode::UnknownId, "unknown vertex " + v);
    int d = 0;
    for (const auto& [e, w] : g.endpoints)
        d += static_cast<int>(std::count(w.begin(), w.end(), v));
    return d;
}

std::set<std::string> neighbourhood(const TypedGraph& g, const std::string& v) {
    if (!g.has_vertex(v))
        throw Error(ErrorCode::UnknownId, "unknown vertex " + v);
    std::set<std::string> nb;
    for (const auto& [e, w] : g.endpoints) {
        if (std::find(w.begin(), w.end(), v) == w.end())
            continue;
        for (const auto& u : w)
            if (u != v)
                nb.insert(u);
    }
    return nb;
}

bool adjacent(const TypedGraph& g, const std::string& u, const std::string& v) {
    for (const auto& [e, w] : g.endpoints) {
        bool hu = std::find(w.begin(), w.end(), u) != w.end();
        bool hv = std::find(w.begin(), w.end(), v) != w.end();
        if (hu && hv && u != v)
            return true;
    }
    return false;
}

namespace {

// Canonical comparison key for one edge word under a vertex mapping; the word
// is order-insensitive for undirected graphs and order-insensitive within the
// start and end parts for directed ones.
std::vector<std::string> edge_key(const std::vector<std::string>& word,
                                  std::optional<int> split,
                                  const std::map<std::string, std::string>& f) {
    auto mapped = [&](size_t from, size_t to) {
        std::vector<std::string> part;
        for (size_t i = from; i < to; ++i)
            part.push_back(f.empty() ? word[i] : f.at(word[i]));
        std::sort(part.begin(), part.end());
        return part;
    };
    std::vector<std::string> key;
    if (split) {
        auto s = mapped(0, static_cast<size_t>(*split));
        auto t = mapped(static_cast<size_t>(*split), word.size());
        key.push_back("#" + std::to_string(*split));
        key.insert(key.end(), s.begin(), s.end());
        key.push_back("|");
        key.insert(key.end(), t.begin(), t.end());
    } else {
        key = mapped(0, word.size());
    }
    return key;
}

} // namespace

bool is_isomorphic(const TypedGraph& g, const TypedGraph& h, int size_limit) {
    if (static_cast<int>(g.vertices.size()) > size_limit ||
        static_cast<int>(h.vertices.size()) > size_limit)
        throw Error(ErrorCode::SizeLimitExceeded,
                    "isomorphism search beyond configured bound");
    if (g.vertices.size() != h.vertices.size() || g.edges.size() != h.edges.size())
        return false;
    if (g.type() != h.type() || g.directed != h.directed)
        return false;

    std::map<std::string, std::string> forced;
    for (int i = 0; i < g.type(); ++i) {
        auto it = forced.find(g.terminals[i]);
        if (it != forced.end()) {
            if (it->second != h.terminals[i])
                return false;
        } else {
            forced[g.terminals[i]] = h.terminals[i];
        }
    }
    // The terminal vertices of h must be hit injectively by the forced part.
    {
        std::set<std::string> img;
        for (auto& [a, b] : forced)
            if (!img.insert(b).second)
                return false;
    }

    std::vector<std::string> gv;
    for (const auto& v : g.vertices)
        if (!forced.count(v))
            gv.push_back(v);
    std::set<std::string> himg;
    for (auto& [a, b] : forced)
        himg.insert(b);
    std::vector<std::string> hv;
    for (const auto& v : h.vertices)
        if (!himg.count(v))
            hv.push_back(v);

    auto edge_multiset = [](const TypedGraph& x,
                            const std::map<std::string, std::string>& f) {
        std::vector<std::vector<std::string>> keys;
        for (const auto& e : x.edges) {
            std::optional<int> sp;
            auto o = x.orientation.find(e);
            if (o != x.orientation.end())
                sp = o->second;
            keys.push_back(edge_key(x.endpoints.at(e), sp, f));
        }
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    auto h_keys = edge_multiset(h, {});

    std::map<std::string, std::string> f = forced;
    std::vector<bool> used(hv.size(), false);

    std::function<bool(size_t)> rec = [&](size_t i) -> bool {
        if (i == gv.size())
            return edge_multiset(g, f) == h_keys;
        for (size_t j = 0; j < hv.size(); ++j) {
            if (used[j])
                continue;
            if (degree(g, gv[i]) != degree(h, hv[j]))
                continue;
            used[j] = true;
            f[gv[i]] = hv[j];
            if (rec(i + 1))
                return true;
            f.erase(gv[i]);
            used[j] = false;
        }
        return false;
    };
    return rec(0);
}

bool canonical_equal(const TypedGraph& g, const TypedGraph& h) {
    TypedGraph a = canonicalize_ids(g);
    TypedGraph b = canonicalize_ids(h);
    return a.directed == b.directed && a.vertices == b.vertices &&
           a.edges == b.edges && a.endpoints == b.endpoints &&
           a.orientation == b.orientation && a.terminals == b.terminals;
}

} // namespace mso
