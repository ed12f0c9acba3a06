#include "msograph/builder.hpp"

#include <algorithm>
#include <map>

namespace mso {

namespace {

// Visit word of an edge mapped to a constant: distinct endpoints numbered by
// first occurrence; cword is the word over those numbers.
struct EdgePattern {
    std::vector<std::string> distinct; // first-occurrence order
    std::vector<int> cword;            // values 1..|distinct|
    std::optional<int> split;
};

EdgePattern edge_pattern(const TypedGraph& g, const std::string& e) {
    EdgePattern p;
    std::map<std::string, int> num;
    for (const auto& v : g.endpoints.at(e)) {
        auto it = num.find(v);
        if (it == num.end()) {
            num[v] = static_cast<int>(p.distinct.size()) + 1;
            p.distinct.push_back(v);
            p.cword.push_back(num[v]);
        } else {
            p.cword.push_back(it->second);
        }
    }
    auto o = g.orientation.find(e);
    if (o != g.orientation.end())
        p.split = o->second;
    return p;
}

bool is_plain_word(const std::vector<int>& w) {
    for (size_t i = 0; i < w.size(); ++i)
        if (w[i] != static_cast<int>(i) + 1)
            return false;
    return true;
}

int edge_const(Expression& e, const EdgePattern& p) {
    if (is_plain_word(p.cword))
        return e.add(FnSymbol::edge(static_cast<int>(p.cword.size()), p.split));
    return e.add(FnSymbol::loop(p.cword, p.split));
}

std::vector<int> terminal_sigma(const TypedGraph& g,
                                const std::vector<std::string>& positions) {
    std::vector<int> sigma;
    for (const auto& t : g.terminals) {
        auto it = std::find(positions.begin(), positions.end(), t);
        if (it == positions.end())
            throw Error(ErrorCode::NotVerdant,
                        "terminal " + t + " missing from the final bag");
        sigma.push_back(static_cast<int>(it - positions.begin()) + 1);
    }
    return sigma;
}

} // namespace

Expression build_generic(const TypedGraph& g) {
    g.check_invariants();
    Expression e;
    const int n = static_cast<int>(g.vertices.size());
    std::map<std::string, int> vpos; // vertex -> terminal position 1..n
    int cur = e.add(FnSymbol::vertex());
    vpos[g.vertices[0]] = 1;
    for (int i = 1; i < n; ++i) {
        int v = e.add(FnSymbol::vertex());
        cur = e.add(FnSymbol::sum(i, 1), {cur, v});
        vpos[g.vertices[i]] = i + 1;
    }
    for (const auto& ed : g.edges) {
        EdgePattern p = edge_pattern(g, ed);
        int r = static_cast<int>(p.distinct.size());
        int c = edge_const(e, p);
        cur = e.add(FnSymbol::sum(n, r), {cur, c});
        for (int j = r; j >= 1; --j)
            cur = e.add(FnSymbol::fuse(vpos[p.distinct[j - 1]], n + j, n + r), {cur});
        std::vector<int> back;
        for (int i = 1; i <= n; ++i)
            back.push_back(i);
        cur = e.add(FnSymbol::redef(back, n + r), {cur});
    }
    std::vector<int> sigma;
    for (const auto& t : g.terminals)
        sigma.push_back(vpos[t]);
    e.add(FnSymbol::redef(sigma, n), {cur});
    return e;
}

namespace {

struct BuildState {
    int expr_node;
    std::vector<std::string> order; // bag vertices by terminal position
};

int position_of(const std::vector<std::string>& order, const std::string& v) {
    auto it = std::find(order.begin(), order.end(), v);
    if (it == order.end())
        throw Error(ErrorCode::DecompositionInvalid,
                    "endpoint " + v + " missing from its claiming bag");
    return static_cast<int>(it - order.begin()) + 1;
}

// Edges claimed by a leaf or introduce node: endpoint set inside the bag,
// the fresh vertex among the endpoints, not claimed deeper in the tree.
std::vector<std::string> claim_edges(const TypedGraph& g,
                                     const std::set<std::string>& bag,
                                     const std::string& fresh,
                                     std::set<std::string>& claimed) {
    std::vector<std::string> out;
    for (const auto& ed : g.edges) {
        if (claimed.count(ed))
            continue;
        const auto& w = g.endpoints.at(ed);
        bool inside = true, touches = false;
        for (const auto& v : w) {
            inside = inside && bag.count(v);
            touches = touches || v == fresh;
        }
        if (inside && touches) {
            claimed.insert(ed);
            out.push_back(ed);
        }
    }
    return out;
}

void require_valid(const TypedGraph& g, const Decomposition& d) {
    auto diags = validate(d, g);
    if (!diags.empty())
        throw Error(ErrorCode::DecompositionInvalid, diags.front());
}

// post-order over the rooted decomposition, iteratively
std::vector<int> decomposition_post_order(const Decomposition& d) {
    auto ch = d.children();
    std::vector<int> out;
    std::vector<std::pair<int, bool>> stack = {{d.root, false}};
    while (!stack.empty()) {
        auto [id, done] = stack.back();
        stack.pop_back();
        if (done) {
            out.push_back(id);
            continue;
        }
        stack.push_back({id, true});
        for (int c : ch[id])
            stack.push_back({c, false});
    }
    return out;
}

} // namespace

Expression build_treewidth(const TypedGraph& g, const Decomposition& d, int k) {
    require_valid(g, d);
    if (d.width() > k)
        throw Error(ErrorCode::DecompositionInvalid,
                    "decomposition width exceeds the bound");
    auto kinds = classify(d);
    {
        std::set<std::string> t(g.terminals.begin(), g.terminals.end());
        const auto& rb = d.nodes[d.root].bag;
        if (!std::includes(rb.begin(), rb.end(), t.begin(), t.end()))
            throw Error(ErrorCode::NotVerdant,
                        "root bag does not contain every terminal");
    }
    auto ch = d.children();
    Expression e;
    std::vector<BuildState> state(d.nodes.size());
    std::set<std::string> claimed;

    auto attach_edge = [&](BuildState& st, const std::string& ed) {
        EdgePattern p = edge_pattern(g, ed);
        int l = static_cast<int>(st.order.size());
        int r = static_cast<int>(p.distinct.size());
        int c = edge_const(e, p);
        // align the constant to the bag: position of endpoint j carries the
        // constant's terminal j; unglued positions point anywhere
        std::vector<int> sigma(l, 1);
        std::set<int> K;
        for (int j = 1; j <= r; ++j) {
            int pos = position_of(st.order, p.distinct[j - 1]);
            sigma[pos - 1] = j;
            K.insert(pos);
        }
        int aligned = e.add(FnSymbol::redef(sigma, r), {c});
        st.expr_node = e.add(FnSymbol::twine(l, l, K, l), {st.expr_node, aligned});
    };

    for (int id : decomposition_post_order(d)) {
        const auto& bag = d.nodes[id].bag;
        BuildState st;
        switch (kinds[id]) {
        case NodeKind::Leaf: {
            const std::string& x = *bag.begin();
            st.expr_node = e.add(FnSymbol::vertex());
            st.order = {x};
            for (const auto& ed : claim_edges(g, bag, x, claimed))
                attach_edge(st, ed);
            break;
        }
        case NodeKind::Forget: {
            const BuildState& c = state[ch[id][0]];
            std::vector<int> sigma;
            st.order.clear();
            for (size_t i = 0; i < c.order.size(); ++i)
                if (bag.count(c.order[i])) {
                    sigma.push_back(static_cast<int>(i) + 1);
                    st.order.push_back(c.order[i]);
                }
            st.expr_node =
                e.add(FnSymbol::redef(sigma, static_cast<int>(c.order.size())),
                      {c.expr_node});
            break;
        }
        case NodeKind::Introduce: {
            const BuildState& c = state[ch[id][0]];
            std::string x;
            for (const auto& v : bag)
                if (std::find(c.order.begin(), c.order.end(), v) == c.order.end())
                    x = v;
            int l = static_cast<int>(c.order.size());
            int vnode = e.add(FnSymbol::vertex());
            st.expr_node =
                e.add(FnSymbol::twine(l, 1, {}, l + 1), {c.expr_node, vnode});
            st.order = c.order;
            st.order.push_back(x);
            for (const auto& ed : claim_edges(g, bag, x, claimed))
                attach_edge(st, ed);
            break;
        }
        case NodeKind::Join: {
            const BuildState& a = state[ch[id][0]];
            const BuildState& b = state[ch[id][1]];
            int l = static_cast<int>(a.order.size());
            std::vector<int> sigma;
            for (const auto& v : a.order)
                sigma.push_back(position_of(b.order, v));
            int rhs = e.add(FnSymbol::redef(sigma, l), {b.expr_node});
            std::set<int> K;
            for (int i = 1; i <= l; ++i)
                K.insert(i);
            st.expr_node = e.add(FnSymbol::twine(l, l, K, l), {a.expr_node, rhs});
            st.order = a.order;
            break;
        }
        }
        state[id] = std::move(st);
    }
    if (claimed.size() != g.edges.size())
        throw Error(ErrorCode::DecompositionInvalid,
                    "some edge was never claimed by a bag");
    const BuildState& root = state[d.root];
    e.add(FnSymbol::redef(terminal_sigma(g, root.order),
                          static_cast<int>(root.order.size())),
          {root.expr_node});
    return e;
}

Expression build_pathwidth(const TypedGraph& g, const Decomposition& d, int k) {
    require_valid(g, d);
    if (d.width() > k)
        throw Error(ErrorCode::DecompositionInvalid,
                    "decomposition width exceeds the bound");
    auto kinds = classify(d);
    for (auto kind : kinds)
        if (kind == NodeKind::Join)
            throw Error(ErrorCode::JoinNodePresent,
                        "path build needs a join-free decomposition");
    {
        std::set<std::string> t(g.terminals.begin(), g.terminals.end());
        const auto& rb = d.nodes[d.root].bag;
        if (!std::includes(rb.begin(), rb.end(), t.begin(), t.end()))
            throw Error(ErrorCode::NotVerdurous,
                        "root bag does not contain every terminal");
    }
    auto ch = d.children();
    Expression e;
    std::vector<BuildState> state(d.nodes.size());
    std::set<std::string> claimed;

    auto attach_edge = [&](BuildState& st, const std::string& ed) {
        EdgePattern p = edge_pattern(g, ed);
        int l = static_cast<int>(st.order.size());
        std::vector<int> word;
        int m = 0;
        for (const auto& v : g.endpoints.at(ed)) {
            int pos = position_of(st.order, v);
            word.push_back(pos);
            m = std::max(m, pos);
        }
        if (static_cast<int>(word.size()) == m && is_plain_word(word))
            word.clear(); // the default visit order
        st.expr_node =
            e.add(FnSymbol::bloom(l, m, word, p.split), {st.expr_node});
    };

    for (int id : decomposition_post_order(d)) {
        const auto& bag = d.nodes[id].bag;
        BuildState st;
        switch (kinds[id]) {
        case NodeKind::Leaf: {
            const std::string& x = *bag.begin();
            st.expr_node = e.add(FnSymbol::vertex());
            st.order = {x};
            for (const auto& ed : claim_edges(g, bag, x, claimed))
                attach_edge(st, ed);
            break;
        }
        case NodeKind::Forget: {
            const BuildState& c = state[ch[id][0]];
            std::vector<int> sigma;
            for (size_t i = 0; i < c.order.size(); ++i)
                if (bag.count(c.order[i])) {
                    sigma.push_back(static_cast<int>(i) + 1);
                    st.order.push_back(c.order[i]);
                }
            st.expr_node =
                e.add(FnSymbol::redef(sigma, static_cast<int>(c.order.size())),
                      {c.expr_node});
            break;
        }
        case NodeKind::Introduce: {
            const BuildState& c = state[ch[id][0]];
            std::string x;
            for (const auto& v : bag)
                if (std::find(c.order.begin(), c.order.end(), v) == c.order.end())
                    x = v;
            st.expr_node =
                e.add(FnSymbol::sprout(static_cast<int>(c.order.size())),
                      {c.expr_node});
            st.order = c.order;
            st.order.push_back(x);
            for (const auto& ed : claim_edges(g, bag, x, claimed))
                attach_edge(st, ed);
            break;
        }
        case NodeKind::Join:
            break; // excluded above
        }
        state[id] = std::move(st);
    }
    if (claimed.size() != g.edges.size())
        throw Error(ErrorCode::DecompositionInvalid,
                    "some edge was never claimed by a bag");
    const BuildState& root = state[d.root];
    try {
        e.add(FnSymbol::redef(terminal_sigma(g, root.order),
                              static_cast<int>(root.order.size())),
              {root.expr_node});
    } catch (const Error& err) {
        if (err.code() == ErrorCode::NotVerdant)
            throw Error(ErrorCode::NotVerdurous, err.what());
        throw;
    }
    return e;
}

} // namespace mso
