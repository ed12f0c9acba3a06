#include "msograph/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mso {

int Decomposition::width() const {
    int w = -1;
    for (const auto& n : nodes)
        w = std::max(w, static_cast<int>(n.bag.size()) - 1);
    return w;
}

std::vector<std::vector<int>> Decomposition::children() const {
    std::vector<std::vector<int>> ch(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].parent >= 0)
            ch[nodes[i].parent].push_back(static_cast<int>(i));
    return ch;
}

std::vector<int> Decomposition::path_ends() const {
    auto ch = children();
    std::vector<int> ends;
    for (size_t i = 0; i < nodes.size(); ++i) {
        int deg = static_cast<int>(ch[i].size()) + (nodes[i].parent >= 0 ? 1 : 0);
        if (deg <= 1)
            ends.push_back(static_cast<int>(i));
    }
    return ends;
}

// --------------------------------------------------------------------------
std::vector<std::string> validate(const Decomposition& d, const TypedGraph& g) {
    std::vector<std::string> diags;
    const auto n = d.nodes.size();
    if (n == 0) {
        diags.push_back("decomposition has no nodes");
        return diags;
    }
    if (d.root < 0 || d.root >= static_cast<int>(n)) {
        diags.push_back("missing or invalid root");
        return diags;
    }
    if (d.nodes[d.root].parent != -1)
        diags.push_back("root has a parent");
    for (size_t i = 0; i < n; ++i) {
        int p = d.nodes[i].parent;
        if (static_cast<int>(i) != d.root && (p < 0 || p >= static_cast<int>(n)))
            diags.push_back("node " + d.nodes[i].id + " has an invalid parent");
    }
    if (!diags.empty())
        return diags;
    // acyclicity / connectedness: every node must reach the root
    for (size_t i = 0; i < n; ++i) {
        int cur = static_cast<int>(i), steps = 0;
        while (cur != d.root && steps <= static_cast<int>(n)) {
            cur = d.nodes[cur].parent;
            ++steps;
        }
        if (cur != d.root) {
            diags.push_back("node " + d.nodes[i].id + " does not reach the root");
            return diags;
        }
    }
    if (d.kind == Decomposition::Path) {
        auto ch = d.children();
        for (size_t i = 0; i < n; ++i) {
            int deg = static_cast<int>(ch[i].size()) +
                      (d.nodes[i].parent >= 0 ? 1 : 0);
            if (deg > 2) {
                diags.push_back("node " + d.nodes[i].id +
                                " breaks the path shape (degree " +
                                std::to_string(deg) + ")");
                break;
            }
        }
    }
    for (const auto& node : d.nodes)
        for (const auto& v : node.bag)
            if (!g.has_vertex(v)) {
                diags.push_back("bag of " + node.id + " mentions unknown vertex " + v);
                return diags;
            }
    for (const auto& v : g.vertices) {
        bool found = false;
        for (const auto& node : d.nodes)
            found = found || node.bag.count(v);
        if (!found)
            diags.push_back("vertex " + v + " appears in no bag");
    }
    for (const auto& e : g.edges) {
        const auto& w = g.endpoints.at(e);
        std::set<std::string> ends(w.begin(), w.end());
        bool covered = false;
        for (const auto& node : d.nodes) {
            bool all = true;
            for (const auto& v : ends)
                all = all && node.bag.count(v);
            covered = covered || all;
        }
        if (!covered)
            diags.push_back("edge " + e + " shares no bag");
    }
    // occurrence connectivity: nodes holding v, minus parent links inside the
    // set, must leave exactly one component
    for (const auto& v : g.vertices) {
        int occurrences = 0, roots_of_occurrence = 0;
        for (size_t i = 0; i < n; ++i) {
            if (!d.nodes[i].bag.count(v))
                continue;
            ++occurrences;
            int p = d.nodes[i].parent;
            if (p < 0 || !d.nodes[p].bag.count(v))
                ++roots_of_occurrence;
        }
        if (occurrences > 0 && roots_of_occurrence != 1)
            diags.push_back("occurrences of vertex " + v + " are disconnected");
    }
    return diags;
}

// --------------------------------------------------------------------------
namespace {

// Appends a node above `below` (which becomes its child); returns its index.
int add_above(Decomposition& out, int below, std::set<std::string> bag) {
    Decomposition::Node node;
    node.id = "n" + std::to_string(out.nodes.size());
    node.bag = std::move(bag);
    out.nodes.push_back(std::move(node));
    int id = static_cast<int>(out.nodes.size()) - 1;
    if (below >= 0)
        out.nodes[below].parent = id;
    return id;
}

// Forget/introduce chain transforming the bag on top of `top` into `target`.
int chain_to(Decomposition& out, int top, const std::set<std::string>& target) {
    std::set<std::string> cur = out.nodes[top].bag;
    for (const auto& v : std::set<std::string>(cur)) {
        if (target.count(v))
            continue;
        cur.erase(v);
        top = add_above(out, top, cur);
    }
    for (const auto& v : target) {
        if (cur.count(v))
            continue;
        cur.insert(v);
        top = add_above(out, top, cur);
    }
    return top;
}

} // namespace

Decomposition make_nice(const Decomposition& d, const TypedGraph& g) {
    if (d.root < 0 || d.root >= static_cast<int>(d.nodes.size()))
        throw Error(ErrorCode::NotRooted, "nice-ification needs a rooted input");
    {
        auto diags = validate(d, g);
        if (!diags.empty())
            throw Error(ErrorCode::DecompositionInvalid, diags.front());
    }
    auto ch = d.children();
    Decomposition out;
    out.kind = d.kind;

    // iterative post-order over d
    std::vector<int> top(d.nodes.size(), -2); // -2 pending, -1 dropped
    std::vector<std::pair<int, bool>> stack = {{d.root, false}};
    while (!stack.empty()) {
        auto [id, done] = stack.back();
        stack.pop_back();
        if (!done) {
            stack.push_back({id, true});
            for (int c : ch[id])
                stack.push_back({c, false});
            continue;
        }
        std::vector<int> kid_tops;
        for (int c : ch[id])
            if (top[c] >= 0)
                kid_tops.push_back(top[c]);
        const auto& bag = d.nodes[id].bag;
        if (kid_tops.empty()) {
            if (bag.empty()) {
                top[id] = -1; // an empty leaf carries nothing
                continue;
            }
            auto it = bag.begin();
            int cur = add_above(out, -1, {*it});
            std::set<std::string> curbag = {*it};
            for (++it; it != bag.end(); ++it) {
                curbag.insert(*it);
                cur = add_above(out, cur, curbag);
            }
            top[id] = cur;
        } else if (kid_tops.size() == 1) {
            top[id] = chain_to(out, kid_tops[0], bag);
        } else {
            int cur = chain_to(out, kid_tops[0], bag);
            for (size_t i = 1; i < kid_tops.size(); ++i) {
                int rhs = chain_to(out, kid_tops[i], bag);
                int join = add_above(out, cur, bag);
                out.nodes[rhs].parent = join;
                cur = join;
            }
            top[id] = cur;
        }
    }
    if (top[d.root] < 0)
        throw Error(ErrorCode::DecompositionInvalid,
                    "decomposition covers no vertices");
    out.root = top[d.root];
    return out;
}

std::vector<NodeKind> classify(const Decomposition& d) {
    auto ch = d.children();
    std::vector<NodeKind> kinds(d.nodes.size());
    auto bad = [&](int i, const std::string& why) {
        throw Error(ErrorCode::DecompositionInvalid,
                    "node " + d.nodes[i].id + " is not nice: " + why);
    };
    for (size_t i = 0; i < d.nodes.size(); ++i) {
        const auto& bag = d.nodes[i].bag;
        switch (ch[i].size()) {
        case 0:
            if (bag.size() != 1)
                bad(static_cast<int>(i), "leaf bag is not a singleton");
            kinds[i] = NodeKind::Leaf;
            break;
        case 1: {
            const auto& kid = d.nodes[ch[i][0]].bag;
            if (bag.size() == kid.size() + 1 &&
                std::includes(bag.begin(), bag.end(), kid.begin(), kid.end()))
                kinds[i] = NodeKind::Introduce;
            else if (kid.size() == bag.size() + 1 &&
                     std::includes(kid.begin(), kid.end(), bag.begin(), bag.end()))
                kinds[i] = NodeKind::Forget;
            else
                bad(static_cast<int>(i), "bag differs from its child by more than one vertex");
            break;
        }
        case 2:
            if (d.nodes[ch[i][0]].bag != bag || d.nodes[ch[i][1]].bag != bag)
                bad(static_cast<int>(i), "join children must repeat the join bag");
            kinds[i] = NodeKind::Join;
            break;
        default:
            bad(static_cast<int>(i), "more than two children");
        }
    }
    return kinds;
}

// --------------------------------------------------------------------------
namespace {

using Adj = std::map<std::string, std::set<std::string>>;

// Primal adjacency: endpoints of each edge pairwise adjacent; optionally a
// virtual hyperedge over the terminals.
Adj primal(const TypedGraph& g, bool terminal_clique) {
    Adj adj;
    for (const auto& v : g.vertices)
        adj[v];
    auto add_clique = [&](const std::set<std::string>& s) {
        for (const auto& a : s)
            for (const auto& b : s)
                if (a != b)
                    adj[a].insert(b);
    };
    for (const auto& e : g.edges)
        add_clique({g.endpoints.at(e).begin(), g.endpoints.at(e).end()});
    if (terminal_clique)
        add_clique({g.terminals.begin(), g.terminals.end()});
    return adj;
}

// Tree decomposition induced by an elimination order, with fill-in.
Decomposition from_elimination(const std::vector<std::string>& order, Adj adj) {
    Decomposition d;
    d.kind = Decomposition::Tree;
    std::map<std::string, int> pos, node_of;
    for (size_t i = 0; i < order.size(); ++i)
        pos[order[i]] = static_cast<int>(i);
    for (const auto& v : order) {
        std::set<std::string> nb = adj.at(v);
        Decomposition::Node node;
        node.id = "n" + std::to_string(d.nodes.size());
        node.bag = nb;
        node.bag.insert(v);
        d.nodes.push_back(node);
        node_of[v] = static_cast<int>(d.nodes.size()) - 1;
        for (const auto& a : nb) {
            adj[a].erase(v);
            for (const auto& b : nb)
                if (a != b)
                    adj[a].insert(b);
        }
        adj.erase(v);
    }
    for (size_t i = 0; i < order.size(); ++i) {
        const auto& bag = d.nodes[node_of[order[i]]].bag;
        int best = -1;
        for (const auto& u : bag)
            if (u != order[i] && (best < 0 || pos[u] < best))
                best = pos[u];
        int parent;
        if (best >= 0)
            parent = node_of[order[best]];
        else if (i + 1 < order.size())
            parent = node_of[order[i + 1]];
        else
            parent = -1;
        d.nodes[node_of[order[i]]].parent = parent;
    }
    d.root = node_of[order.back()];
    return d;
}

int elimination_width(const std::vector<std::string>& order, Adj adj) {
    int w = -1;
    for (const auto& v : order) {
        std::set<std::string> nb = adj.at(v);
        w = std::max(w, static_cast<int>(nb.size()));
        for (const auto& a : nb) {
            adj[a].erase(v);
            for (const auto& b : nb)
                if (a != b)
                    adj[a].insert(b);
        }
        adj.erase(v);
    }
    return w;
}

// min-fill greedy, min-degree tie break
std::vector<std::string> greedy_order(Adj adj) {
    std::vector<std::string> order;
    while (!adj.empty()) {
        std::string best;
        long best_fill = -1;
        size_t best_deg = 0;
        for (const auto& [v, nb] : adj) {
            long fill = 0;
            for (const auto& a : nb)
                for (const auto& b : nb)
                    if (a < b && !adj.at(a).count(b))
                        ++fill;
            if (best_fill < 0 || fill < best_fill ||
                (fill == best_fill && nb.size() < best_deg)) {
                best = v;
                best_fill = fill;
                best_deg = nb.size();
            }
        }
        std::set<std::string> nb = adj.at(best);
        for (const auto& a : nb) {
            adj[a].erase(best);
            for (const auto& b : nb)
                if (a != b)
                    adj[a].insert(b);
        }
        adj.erase(best);
        order.push_back(best);
    }
    return order;
}

struct BitGraph {
    std::vector<std::string> verts;
    std::vector<std::uint32_t> nb; // adjacency masks

    explicit BitGraph(const Adj& adj) {
        for (const auto& [v, _] : adj)
            verts.push_back(v);
        std::map<std::string, int> idx;
        for (size_t i = 0; i < verts.size(); ++i)
            idx[verts[i]] = static_cast<int>(i);
        nb.assign(verts.size(), 0);
        for (const auto& [v, ns] : adj)
            for (const auto& u : ns)
                nb[idx[v]] |= std::uint32_t{1} << idx[u];
    }
    int n() const { return static_cast<int>(verts.size()); }
};

// |{u outside S+v reachable from v through S}| — the degree v would have
// when eliminated after S.
int elim_degree(const BitGraph& g, int v, std::uint32_t S) {
    std::uint32_t seen = std::uint32_t{1} << v;
    std::uint32_t frontier = seen;
    std::uint32_t reach = 0;
    while (frontier) {
        std::uint32_t next = 0;
        for (int i = 0; i < g.n(); ++i)
            if ((frontier >> i) & 1)
                next |= g.nb[i];
        next &= ~seen;
        reach |= next & ~S;
        seen |= next;
        frontier = next & S;
    }
    return std::popcount(reach & ~(std::uint32_t{1} << v));
}

// minimal elimination width over all orders of S eliminated first
std::vector<int> exact_tree_table(const BitGraph& g) {
    int n = g.n();
    std::vector<int> f(std::size_t{1} << n, 0);
    for (std::uint32_t S = 1; S < (std::uint32_t{1} << n); ++S) {
        int best = n + 1;
        for (int v = 0; v < n; ++v) {
            if (!((S >> v) & 1))
                continue;
            std::uint32_t rest = S & ~(std::uint32_t{1} << v);
            best = std::min(best, std::max(f[rest], elim_degree(g, v, rest)));
        }
        f[S] = best;
    }
    return f;
}

std::vector<std::string> exact_tree_order(const BitGraph& g,
                                          const std::vector<int>& f) {
    int n = g.n();
    std::vector<std::string> order(n);
    std::uint32_t S = (n == 32 ? ~std::uint32_t{0}
                               : (std::uint32_t{1} << n) - 1);
    for (int i = n - 1; i >= 0; --i) {
        for (int v = 0; v < n; ++v) {
            if (!((S >> v) & 1))
                continue;
            std::uint32_t rest = S & ~(std::uint32_t{1} << v);
            if (std::max(f[rest], elim_degree(g, v, rest)) == f[S]) {
                order[i] = g.verts[v];
                S = rest;
                break;
            }
        }
    }
    return order;
}

int boundary(const BitGraph& g, std::uint32_t S) {
    std::uint32_t all = (g.n() == 32 ? ~std::uint32_t{0}
                                     : (std::uint32_t{1} << g.n()) - 1);
    int b = 0;
    for (int i = 0; i < g.n(); ++i)
        if (((S >> i) & 1) && (g.nb[i] & all & ~S))
            ++b;
    return b;
}

// minimal over layouts of max boundary over placed prefixes
std::vector<int> exact_path_table(const BitGraph& g) {
    int n = g.n();
    std::vector<int> f(std::size_t{1} << n, 0);
    for (std::uint32_t S = 1; S < (std::uint32_t{1} << n); ++S) {
        int best = n + 1;
        for (int v = 0; v < n; ++v)
            if ((S >> v) & 1)
                best = std::min(best, f[S & ~(std::uint32_t{1} << v)]);
        f[S] = std::max(best, boundary(g, S));
    }
    return f;
}

// layout realizing f, optionally forced to end on a vertex from `last_of`
std::optional<std::vector<std::string>>
exact_path_layout(const BitGraph& g, const std::vector<int>& f, int bound,
                  std::uint32_t last_of) {
    int n = g.n();
    std::uint32_t full = (n == 32 ? ~std::uint32_t{0}
                                  : (std::uint32_t{1} << n) - 1);
    std::vector<std::string> order(n);
    std::uint32_t S = full;
    for (int i = n - 1; i >= 0; --i) {
        std::uint32_t candidates = (i == n - 1 && last_of) ? (S & last_of) : S;
        bool placed = false;
        for (int v = 0; v < n && !placed; ++v) {
            if (!((candidates >> v) & 1))
                continue;
            std::uint32_t rest = S & ~(std::uint32_t{1} << v);
            if (f[rest] <= bound) {
                order[i] = g.verts[v];
                S = rest;
                placed = true;
            }
        }
        if (!placed)
            return std::nullopt;
    }
    return order;
}

Decomposition path_from_layout(const std::vector<std::string>& order,
                               const Adj& adj) {
    Decomposition d;
    d.kind = Decomposition::Path;
    std::map<std::string, int> pos;
    for (size_t i = 0; i < order.size(); ++i)
        pos[order[i]] = static_cast<int>(i);
    for (size_t i = 0; i < order.size(); ++i) {
        Decomposition::Node node;
        node.id = "n" + std::to_string(i);
        node.parent = static_cast<int>(i) + 1 < static_cast<int>(order.size())
                          ? static_cast<int>(i) + 1
                          : -1;
        node.bag.insert(order[i]);
        for (size_t j = 0; j < i; ++j)
            for (const auto& u : adj.at(order[j]))
                if (pos[u] >= static_cast<int>(i))
                    node.bag.insert(order[j]);
        d.nodes.push_back(node);
    }
    d.root = static_cast<int>(order.size()) - 1;
    return d;
}

std::optional<Decomposition> decompose_impl(const TypedGraph& g, int k,
                                            Decomposition::Kind kind,
                                            int exact_limit,
                                            bool terminal_clique) {
    Adj adj = primal(g, terminal_clique);
    int n = static_cast<int>(g.vertices.size());
    std::set<std::string> tset(g.terminals.begin(), g.terminals.end());

    if (kind == Decomposition::Tree) {
        auto order = greedy_order(adj);
        if (elimination_width(order, adj) <= k)
            return from_elimination(order, adj);
        if (n > exact_limit || n > 31)
            return std::nullopt;
        BitGraph bg(adj);
        auto f = exact_tree_table(bg);
        if (f.back() > k)
            return std::nullopt;
        return from_elimination(exact_tree_order(bg, f), adj);
    }

    if (n > exact_limit || n > 31)
        throw Error(ErrorCode::SizeLimitExceeded,
                    "path layout search beyond the configured bound");
    BitGraph bg(adj);
    std::map<std::string, int> idx;
    for (int i = 0; i < bg.n(); ++i)
        idx[bg.verts[i]] = i;
    auto f = exact_path_table(bg);
    std::uint32_t full = (n == 32 ? ~std::uint32_t{0}
                                  : (std::uint32_t{1} << n) - 1);
    std::uint32_t last_of = 0;
    if (terminal_clique && tset.size() > 1)
        for (const auto& t : tset)
            last_of |= std::uint32_t{1} << idx[t];
    int best = n + 1;
    if (last_of) {
        for (int v = 0; v < n; ++v)
            if ((last_of >> v) & 1)
                best = std::min(best, f[full & ~(std::uint32_t{1} << v)]);
    } else {
        best = f[full];
    }
    if (best > k)
        return std::nullopt;
    auto layout = exact_path_layout(bg, f, k, last_of);
    if (!layout)
        return std::nullopt;
    return path_from_layout(*layout, adj);
}

} // namespace

std::optional<Decomposition> decompose(const TypedGraph& g, int k,
                                       Decomposition::Kind kind,
                                       int exact_limit) {
    return decompose_impl(g, k, kind, exact_limit, false);
}

Decomposition verdant_root(const Decomposition& d, const TypedGraph& g) {
    std::set<std::string> t(g.terminals.begin(), g.terminals.end());
    for (size_t i = 0; i < d.nodes.size(); ++i) {
        if (!std::includes(d.nodes[i].bag.begin(), d.nodes[i].bag.end(),
                           t.begin(), t.end()))
            continue;
        // re-root by reversing parent links on the path to node i
        Decomposition out = d;
        int cur = static_cast<int>(i), prev = -1;
        while (cur != -1) {
            int next = d.nodes[cur].parent;
            out.nodes[cur].parent = prev;
            prev = cur;
            cur = next;
        }
        out.root = static_cast<int>(i);
        return out;
    }
    throw Error(ErrorCode::TerminalsNotCoBagged,
                "no bag contains every terminal");
}

Decomposition verdurous_root(const Decomposition& d, const TypedGraph& g) {
    std::set<std::string> t(g.terminals.begin(), g.terminals.end());
    for (int end : d.path_ends()) {
        if (!std::includes(d.nodes[end].bag.begin(), d.nodes[end].bag.end(),
                           t.begin(), t.end()))
            continue;
        Decomposition out = d;
        int cur = end, prev = -1;
        while (cur != -1) {
            int next = d.nodes[cur].parent;
            out.nodes[cur].parent = prev;
            prev = cur;
            cur = next;
        }
        out.root = end;
        return out;
    }
    throw Error(ErrorCode::TerminalsNotCoBagged,
                "no end bag contains every terminal");
}

std::optional<Decomposition> decompose_for_build(const TypedGraph& g, int k,
                                                 Decomposition::Kind kind,
                                                 int exact_limit) {
    auto d = decompose_impl(g, k, kind, exact_limit, true);
    if (!d)
        return std::nullopt;
    return kind == Decomposition::Tree ? verdant_root(*d, g)
                                       : verdurous_root(*d, g);
}

// --------------------------------------------------------------------------
using nlohmann::json;

Decomposition parse_decomposition(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw Error(ErrorCode::SyntaxError,
                    std::string("decomposition file: ") + ex.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.contains("root") ||
        !j.contains("nodes"))
        throw Error(ErrorCode::SyntaxError,
                    "decomposition file needs kind, root and nodes");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "kind" && it.key() != "root" && it.key() != "nodes")
            throw Error(ErrorCode::SyntaxError,
                        "unknown field \"" + it.key() + "\" in decomposition file");
    Decomposition d;
    std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind == "tree")
        d.kind = Decomposition::Tree;
    else if (kind == "path")
        d.kind = Decomposition::Path;
    else
        throw Error(ErrorCode::SyntaxError, "kind must be \"tree\" or \"path\"");
    if (!j["nodes"].is_array())
        throw Error(ErrorCode::SyntaxError, "nodes must be a list");
    std::map<std::string, int> idx;
    std::vector<std::string> parents;
    for (const auto& jn : j["nodes"]) {
        if (!jn.is_object() || !jn.contains("id") || !jn["id"].is_string() ||
            !jn.contains("bag") || !jn["bag"].is_array())
            throw Error(ErrorCode::SyntaxError, "each node needs id and bag");
        for (auto it = jn.begin(); it != jn.end(); ++it)
            if (it.key() != "id" && it.key() != "parent" && it.key() != "bag")
                throw Error(ErrorCode::SyntaxError,
                            "unknown field \"" + it.key() + "\" in node");
        Decomposition::Node node;
        node.id = jn["id"].get<std::string>();
        if (idx.count(node.id))
            throw Error(ErrorCode::SyntaxError, "duplicate node id " + node.id);
        for (const auto& v : jn["bag"]) {
            if (!v.is_string())
                throw Error(ErrorCode::SyntaxError, "bag entries must be strings");
            node.bag.insert(v.get<std::string>());
        }
        parents.push_back(jn.contains("parent")
                              ? (jn["parent"].is_string()
                                     ? jn["parent"].get<std::string>()
                                     : throw Error(ErrorCode::SyntaxError,
                                                   "parent must be an id"))
                              : "");
        idx[node.id] = static_cast<int>(d.nodes.size());
        d.nodes.push_back(std::move(node));
    }
    for (size_t i = 0; i < parents.size(); ++i) {
        if (parents[i].empty()) {
            d.nodes[i].parent = -1;
            continue;
        }
        auto it = idx.find(parents[i]);
        if (it == idx.end())
            throw Error(ErrorCode::SyntaxError, "unknown parent " + parents[i]);
        d.nodes[i].parent = it->second;
    }
    if (!j["root"].is_string() || !idx.count(j["root"].get<std::string>()))
        throw Error(ErrorCode::SyntaxError, "root must name a node");
    d.root = idx[j["root"].get<std::string>()];
    return d;
}

std::string print_decomposition(const Decomposition& d) {
    json j;
    j["kind"] = d.kind == Decomposition::Tree ? "tree" : "path";
    j["root"] = d.root >= 0 ? d.nodes[d.root].id : "";
    j["nodes"] = json::array();
    for (const auto& n : d.nodes) {
        json jn;
        jn["id"] = n.id;
        if (n.parent >= 0)
            jn["parent"] = d.nodes[n.parent].id;
        jn["bag"] = std::vector<std::string>(n.bag.begin(), n.bag.end());
        j["nodes"].push_back(jn);
    }
    return j.dump(2) + "\n";
}

Decomposition read_decomposition(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::BadInput, "cannot open decomposition file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_decomposition(ss.str());
}

void write_decomposition(const Decomposition& d, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::BadInput, "cannot write decomposition file " + path);
    out << print_decomposition(d);
}

} // namespace mso
