#include "msograph/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <tuple>

namespace mso {

namespace {

void check_word(const std::vector<int>& word) {
    if (word.empty())
        throw Error(ErrorCode::InvalidArity, "empty visit word");
    int n = *std::max_element(word.begin(), word.end());
    if (*std::min_element(word.begin(), word.end()) < 1)
        throw Error(ErrorCode::IndexOutOfRange, "word values start at 1");
    std::set<int> seen(word.begin(), word.end());
    if (static_cast<int>(seen.size()) != n)
        throw Error(ErrorCode::NotSurjective, "word must visit every value up to its max");
}

void check_split(std::optional<int> split, int len) {
    if (split && (*split <= 0 || *split >= len))
        throw Error(ErrorCode::BadInput, "split out of bounds");
}

} // namespace

FnSymbol FnSymbol::vertex() { return FnSymbol{}; }

FnSymbol FnSymbol::edge(int n, std::optional<int> split) {
    if (n < 1)
        throw Error(ErrorCode::InvalidArity, "edge constant needs n >= 1");
    check_split(split, n);
    FnSymbol f;
    f.kind = Edge;
    f.n = n;
    f.split = split;
    return f;
}

FnSymbol FnSymbol::loop(std::vector<int> word, std::optional<int> split) {
    check_word(word);
    check_split(split, static_cast<int>(word.size()));
    FnSymbol f;
    f.kind = Loop;
    f.word = std::move(word);
    f.split = split;
    return f;
}

FnSymbol FnSymbol::sum(int n, int m) {
    if (n < 0 || m < 0)
        throw Error(ErrorCode::InvalidArity, "negative type");
    FnSymbol f;
    f.kind = Sum;
    f.n = n;
    f.m = m;
    return f;
}

FnSymbol FnSymbol::redef(std::vector<int> sigma, int from) {
    for (int s : sigma)
        if (s < 1 || s > from)
            throw Error(ErrorCode::IndexOutOfRange,
                        "redefinition index outside 1..from");
    FnSymbol f;
    f.kind = Redef;
    f.sigma = std::move(sigma);
    f.n = from;
    return f;
}

FnSymbol FnSymbol::fuse(int a, int b, int n) {
    if (a < 1 || a > n || b < 1 || b > n)
        throw Error(ErrorCode::IndexOutOfRange, "fuse position outside 1..n");
    FnSymbol f;
    f.kind = Fuse;
    f.a = a;
    f.b = b;
    f.n = n;
    return f;
}

FnSymbol FnSymbol::twine(int n, int m, std::set<int> K, int k) {
    for (int l : K)
        if (l < 1 || l > std::min(n, m))
            throw Error(ErrorCode::IndexOutOfRange, "twine index outside 1..min(n,m)");
    if (k < 0 || k > n + m - static_cast<int>(K.size()))
        throw Error(ErrorCode::TypeTooLarge, "twine output type exceeds n+m-|K|");
    FnSymbol f;
    f.kind = Twine;
    f.n = n;
    f.m = m;
    f.K = std::move(K);
    f.k = k;
    return f;
}

FnSymbol FnSymbol::sprout(int n) {
    if (n < 0)
        throw Error(ErrorCode::InvalidArity, "negative type");
    FnSymbol f;
    f.kind = Sprout;
    f.n = n;
    return f;
}

FnSymbol FnSymbol::bloom(int n, int m, std::vector<int> word,
                         std::optional<int> split) {
    if (m < 1 || m > n)
        throw Error(ErrorCode::IndexOutOfRange, "bloom arity outside 1..type");
    if (!word.empty()) {
        for (int x : word)
            if (x < 1 || x > m)
                throw Error(ErrorCode::IndexOutOfRange, "bloom word value outside 1..m");
        check_split(split, static_cast<int>(word.size()));
    } else {
        check_split(split, m);
    }
    FnSymbol f;
    f.kind = Bloom;
    f.n = n;
    f.m = m;
    f.word = std::move(word);
    f.split = split;
    return f;
}

FnSymbol FnSymbol::hole(int index, int type) {
    FnSymbol f;
    f.kind = Hole;
    f.hole_index = index;
    f.n = type;
    return f;
}

int FnSymbol::arity() const {
    switch (kind) {
    case Vertex:
    case Edge:
    case Loop:
    case Hole:
        return 0;
    case Sum:
    case Twine:
        return 2;
    case Redef:
    case Fuse:
    case Sprout:
    case Bloom:
        return 1;
    }
    return 0;
}

int FnSymbol::out_type() const {
    switch (kind) {
    case Vertex:
        return 1;
    case Edge:
        return n;
    case Loop:
        return *std::max_element(word.begin(), word.end());
    case Sum:
        return n + m;
    case Redef:
        return static_cast<int>(sigma.size());
    case Fuse:
        return n;
    case Twine:
        return k;
    case Sprout:
        return n + 1;
    case Bloom:
        return n;
    case Hole:
        return n;
    }
    return 0;
}

std::vector<int> FnSymbol::in_types() const {
    switch (kind) {
    case Sum:
    case Twine:
        return {n, m};
    case Redef:
    case Fuse:
    case Sprout:
    case Bloom:
        return {n};
    default:
        return {};
    }
}

std::string FnSymbol::name() const {
    std::ostringstream os;
    auto ints = [&](const std::vector<int>& v) {
        for (size_t i = 0; i < v.size(); ++i)
            os << (i ? " " : "") << v[i];
    };
    switch (kind) {
    case Vertex:
        os << "v";
        break;
    case Edge:
        os << "e" << n;
        if (split)
            os << "|" << *split;
        break;
    case Loop:
        os << "loop(";
        ints(word);
        os << ")";
        if (split)
            os << "|" << *split;
        break;
    case Sum:
        os << "sum(" << n << "," << m << ")";
        break;
    case Redef:
        os << "redef(" << n << ";";
        ints(sigma);
        os << ")";
        break;
    case Fuse:
        os << "fuse(" << a << "," << b << ";" << n << ")";
        break;
    case Twine: {
        os << "twine(" << n << "," << m << ";{";
        bool first = true;
        for (int l : K) {
            os << (first ? "" : " ") << l;
            first = false;
        }
        os << "};" << k << ")";
        break;
    }
    case Sprout:
        os << "sprout(" << n << ")";
        break;
    case Bloom:
        os << "bloom(" << n << "," << m;
        if (!word.empty()) {
            os << ";";
            ints(word);
        }
        if (split)
            os << "|" << *split;
        os << ")";
        break;
    case Hole:
        os << "hole(" << hole_index << ";" << n << ")";
        break;
    }
    return os.str();
}

bool FnSymbol::operator==(const FnSymbol& o) const {
    return kind == o.kind && n == o.n && m == o.m && k == o.k && a == o.a &&
           b == o.b && sigma == o.sigma && K == o.K && word == o.word &&
           split == o.split && hole_index == o.hole_index;
}

bool FnSymbol::operator<(const FnSymbol& o) const {
    return std::tie(kind, n, m, k, a, b, sigma, K, word, split, hole_index) <
           std::tie(o.kind, o.n, o.m, o.k, o.a, o.b, o.sigma, o.K, o.word,
                    o.split, o.hole_index);
}

// --------------------------------------------------------------------------
int Expression::add(FnSymbol sym, std::vector<int> kids) {
    nodes.push_back({std::move(sym), std::move(kids)});
    root = static_cast<int>(nodes.size()) - 1;
    return root;
}

std::vector<int> Expression::post_order() const {
    std::vector<int> out;
    if (root < 0)
        return out;
    // (node, expanded) pairs; children get pushed before the revisit marker.
    std::vector<std::pair<int, bool>> stack = {{root, false}};
    while (!stack.empty()) {
        auto [id, done] = stack.back();
        stack.pop_back();
        if (done) {
            out.push_back(id);
            continue;
        }
        stack.push_back({id, true});
        const auto& kids = nodes[id].kids;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it)
            stack.push_back({*it, false});
    }
    return out;
}

// --------------------------------------------------------------------------
int SignatureProfile::max_type() const {
    if (family == Generic)
        return -1; // unbounded
    return std::max(k + 1, target_type);
}

bool SignatureProfile::admits(const FnSymbol& f, std::string* why) const {
    auto no = [&](const std::string& w) {
        if (why)
            *why = w;
        return false;
    };
    if (f.kind == FnSymbol::Hole)
        return no("placeholders are not part of any signature");
    switch (family) {
    case Generic:
        switch (f.kind) {
        case FnSymbol::Vertex:
        case FnSymbol::Edge:
        case FnSymbol::Sum:
        case FnSymbol::Redef:
        case FnSymbol::Fuse:
            return true;
        case FnSymbol::Loop:
            if (!loops)
                return no("loop constants need the loop-enabled profile");
            return true;
        default:
            return no("composite symbol outside the basic signature");
        }
    case TreeWidth:
        switch (f.kind) {
        case FnSymbol::Vertex:
            return true;
        case FnSymbol::Edge:
            if (f.n > k + 1)
                return no("edge constant type exceeds k+1");
            return true;
        case FnSymbol::Redef:
            if (f.n > max_type() || f.out_type() > max_type())
                return no("redefinition typed outside the profile's type set");
            return true;
        case FnSymbol::Twine:
            if (f.n > k + 1 || f.m > k + 1)
                return no("twine input type exceeds k+1");
            if (f.out_type() > max_type())
                return no("twine output typed outside the profile's type set");
            return true;
        case FnSymbol::Loop:
            if (!loops)
                return no("loop constants need the loop-enabled profile");
            if (f.out_type() > k)
                return no("loop constant type exceeds k");
            if (static_cast<int>(f.word.size()) > c)
                return no("loop word longer than the profile bound");
            return true;
        default:
            return no("symbol outside the bounded-tree-width signature");
        }
    case PathWidth:
        switch (f.kind) {
        case FnSymbol::Vertex:
            return true;
        case FnSymbol::Edge:
            if (f.n > k + 1)
                return no("edge constant type exceeds k+1");
            return true;
        case FnSymbol::Redef:
            if (f.n > max_type() || f.out_type() > max_type())
                return no("redefinition typed outside the profile's type set");
            return true;
        case FnSymbol::Sprout:
            if (f.n > k)
                return no("sprouting above type k would exceed k+1");
            return true;
        case FnSymbol::Bloom:
            if (f.m > k + 1)
                return no("bloom arity exceeds k+1");
            if (f.n > max_type())
                return no("bloom typed outside the profile's type set");
            if (!loops && !f.word.empty()) {
                std::set<int> seen;
                for (int x : f.word)
                    if (!seen.insert(x).second)
                        return no("repeating bloom word needs the loop-enabled profile");
            }
            return true;
        default:
            return no("symbol outside the bounded-path-width signature");
        }
    }
    return no("unknown profile");
}

std::vector<FnSymbol> SignatureProfile::alphabet() const {
    if (family == Generic)
        throw Error(ErrorCode::BoundExceeded,
                    "the unbounded signature has no finite alphabet");
    std::vector<FnSymbol> out;
    int T = max_type();
    out.push_back(FnSymbol::vertex());
    for (int n = 1; n <= k + 1; ++n)
        out.push_back(FnSymbol::edge(n));
    // every redefinition typed inside {0..T}
    for (int from = 0; from <= T; ++from) {
        std::vector<std::vector<int>> sigmas = {{}};
        for (int to = 0; to <= T; ++to) {
            if (to > 0) {
                std::vector<std::vector<int>> next;
                for (const auto& s : sigmas)
                    for (int v = 1; v <= from; ++v) {
                        auto t = s;
                        t.push_back(v);
                        next.push_back(std::move(t));
                    }
                sigmas = std::move(next);
            }
            for (const auto& s : sigmas)
                out.push_back(FnSymbol::redef(s, from));
        }
    }
    if (family == TreeWidth) {
        for (int n = 0; n <= k + 1; ++n)
            for (int m = 0; m <= k + 1; ++m) {
                int lim = std::min(n, m);
                for (std::uint32_t mask = 0; mask < (1u << lim); ++mask) {
                    std::set<int> K;
                    for (int i = 0; i < lim; ++i)
                        if ((mask >> i) & 1)
                            K.insert(i + 1);
                    int hi = std::min(n + m - static_cast<int>(K.size()), T);
                    for (int kk = 0; kk <= hi; ++kk)
                        out.push_back(FnSymbol::twine(n, m, K, kk));
                }
            }
        if (loops) {
            // loop constants: surjective words over 1..i of length <= c
            for (int i = 1; i <= k; ++i) {
                std::vector<std::vector<int>> words = {{}};
                for (int len = 1; len <= c; ++len) {
                    std::vector<std::vector<int>> next;
                    for (const auto& w : words)
                        for (int v = 1; v <= i; ++v) {
                            auto t = w;
                            t.push_back(v);
                            next.push_back(std::move(t));
                        }
                    words = std::move(next);
                    for (const auto& w : words) {
                        std::set<int> seen(w.begin(), w.end());
                        if (static_cast<int>(seen.size()) == i &&
                            w.size() > static_cast<size_t>(i))
                            out.push_back(FnSymbol::loop(w));
                    }
                }
            }
        }
    } else {
        for (int n = 0; n <= k; ++n)
            out.push_back(FnSymbol::sprout(n));
        for (int n = 1; n <= T; ++n)
            for (int m = 1; m <= std::min(n, k + 1); ++m)
                out.push_back(FnSymbol::bloom(n, m));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --------------------------------------------------------------------------
std::vector<std::string> validate(const Expression& e, const SignatureProfile& p) {
    std::vector<std::string> diags;
    if (e.root < 0 || e.root >= e.size()) {
        diags.push_back("expression has no root");
        return diags;
    }
    // path strings for reachable nodes
    std::map<int, std::string> path;
    path[e.root] = "root";
    std::vector<int> stack = {e.root};
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        const auto& node = e.nodes[id];
        const FnSymbol& f = node.sym;
        std::string why;
        if (!p.admits(f, &why))
            diags.push_back(path[id] + ": symbol " + f.name() + ": " + why);
        if (static_cast<int>(node.kids.size()) != f.arity()) {
            diags.push_back(path[id] + ": symbol " + f.name() + " takes " +
                            std::to_string(f.arity()) + " arguments, has " +
                            std::to_string(node.kids.size()));
            continue;
        }
        auto ins = f.in_types();
        for (size_t i = 0; i < node.kids.size(); ++i) {
            int kid = node.kids[i];
            if (kid < 0 || kid >= e.size() || kid == id) {
                diags.push_back(path[id] + ": argument " + std::to_string(i) +
                                " is not a valid node");
                continue;
            }
            int got = e.nodes[kid].sym.out_type();
            if (got != ins[i])
                diags.push_back(path[id] + ": argument " + std::to_string(i) +
                                " has type " + std::to_string(got) + ", expected " +
                                std::to_string(ins[i]));
            path[kid] = path[id] + "/" + std::to_string(i);
            stack.push_back(kid);
        }
    }
    return diags;
}

TypedGraph evaluate(const Expression& e) {
    if (e.root < 0)
        throw Error(ErrorCode::BadInput, "expression has no root");
    std::vector<TypedGraph> vals(e.nodes.size());
    for (int id : e.post_order()) {
        const auto& node = e.nodes[id];
        const FnSymbol& f = node.sym;
        if (static_cast<int>(node.kids.size()) != f.arity())
            throw Error(ErrorCode::InvalidArity,
                        "symbol " + f.name() + " applied to " +
                            std::to_string(node.kids.size()) + " arguments");
        auto ins = f.in_types();
        for (size_t i = 0; i < node.kids.size(); ++i)
            if (vals[node.kids[i]].type() != ins[i])
                throw Error(ErrorCode::TypeTooLarge,
                            "argument " + std::to_string(i) + " of " + f.name() +
                                " has type " +
                                std::to_string(vals[node.kids[i]].type()));
        switch (f.kind) {
        case FnSymbol::Vertex:
            vals[id] = vertex_graph();
            break;
        case FnSymbol::Edge:
            vals[id] = edge_graph(f.n, f.split);
            break;
        case FnSymbol::Loop:
            vals[id] = loop_graph(f.word, f.split);
            break;
        case FnSymbol::Sum:
            vals[id] = disjoint_sum(vals[node.kids[0]], vals[node.kids[1]]);
            break;
        case FnSymbol::Redef:
            vals[id] = redefine(vals[node.kids[0]], f.sigma);
            break;
        case FnSymbol::Fuse:
            vals[id] = fuse(vals[node.kids[0]], f.a, f.b);
            break;
        case FnSymbol::Twine:
            vals[id] = twine(vals[node.kids[0]], vals[node.kids[1]], f.K, f.k);
            break;
        case FnSymbol::Sprout:
            vals[id] = sprout(vals[node.kids[0]]);
            break;
        case FnSymbol::Bloom:
            vals[id] = bloom(vals[node.kids[0]], f.m, f.word, f.split);
            break;
        case FnSymbol::Hole:
            throw Error(ErrorCode::BadInput, "cannot evaluate a placeholder");
        }
    }
    return vals[e.root];
}

std::set<int> locality(const Expression& e) {
    std::set<int> out;
    for (int id : e.post_order())
        out.insert(e.nodes[id].sym.out_type());
    return out;
}

// --------------------------------------------------------------------------
Expansion expand_symbol(const FnSymbol& f) {
    Expansion ex;
    switch (f.kind) {
    case FnSymbol::Sprout: {
        int h = ex.expr.add(FnSymbol::hole(0, f.n));
        int v = ex.expr.add(FnSymbol::vertex());
        ex.expr.add(FnSymbol::sum(f.n, 1), {h, v});
        ex.hole_nodes = {h};
        return ex;
    }
    case FnSymbol::Twine: {
        int h0 = ex.expr.add(FnSymbol::hole(0, f.n));
        int h1 = ex.expr.add(FnSymbol::hole(1, f.m));
        int cur = ex.expr.add(FnSymbol::sum(f.n, f.m), {h0, h1});
        int nm = f.n + f.m;
        for (auto it = f.K.rbegin(); it != f.K.rend(); ++it)
            cur = ex.expr.add(FnSymbol::fuse(*it, *it + f.n, nm), {cur});
        std::vector<int> leftover;
        for (int i = f.n + 1; i <= nm; ++i)
            if (!f.K.count(i - f.n))
                leftover.push_back(i);
        std::vector<int> sigma;
        for (int i = 1; i <= f.k; ++i)
            sigma.push_back(i <= f.n ? i : leftover[i - f.n - 1]);
        ex.expr.add(FnSymbol::redef(sigma, nm), {cur});
        ex.hole_nodes = {h0, h1};
        return ex;
    }
    case FnSymbol::Bloom: {
        std::vector<int> w = f.word;
        if (w.empty())
            for (int i = 1; i <= f.m; ++i)
                w.push_back(i);
        std::set<int> support(w.begin(), w.end());
        std::vector<int> supp(support.begin(), support.end());
        std::map<int, int> pos;
        for (size_t j = 0; j < supp.size(); ++j)
            pos[supp[j]] = static_cast<int>(j) + 1;
        std::vector<int> cword;
        for (int x : w)
            cword.push_back(pos[x]);
        int r = static_cast<int>(supp.size());

        int h0 = ex.expr.add(FnSymbol::hole(0, f.n));
        int c;
        if (cword.size() == static_cast<size_t>(r) &&
            std::is_sorted(cword.begin(), cword.end()))
            c = ex.expr.add(FnSymbol::edge(r, f.split));
        else
            c = ex.expr.add(FnSymbol::loop(cword, f.split));
        int cur = ex.expr.add(FnSymbol::sum(f.n, r), {h0, c});
        for (int j = r; j >= 1; --j)
            cur = ex.expr.add(FnSymbol::fuse(supp[j - 1], f.n + j, f.n + r), {cur});
        std::vector<int> sigma;
        for (int i = 1; i <= f.n; ++i)
            sigma.push_back(i);
        ex.expr.add(FnSymbol::redef(sigma, f.n + r), {cur});
        ex.hole_nodes = {h0};
        return ex;
    }
    default:
        throw Error(ErrorCode::BadInput,
                    "only twine, sprout and bloom expand: " + f.name());
    }
}

int graft(Expression& into, const Expansion& ex, const std::vector<int>& args) {
    if (args.size() != ex.hole_nodes.size())
        throw Error(ErrorCode::InvalidArity, "wrong number of grafted arguments");
    std::map<int, int> remap;
    for (size_t i = 0; i < ex.hole_nodes.size(); ++i)
        remap[ex.hole_nodes[i]] = args[i];
    for (int id : ex.expr.post_order()) {
        if (remap.count(id))
            continue;
        std::vector<int> kids;
        for (int k : ex.expr.nodes[id].kids)
            kids.push_back(remap.at(k));
        remap[id] = into.add(ex.expr.nodes[id].sym, std::move(kids));
    }
    into.root = remap.at(ex.expr.root);
    return into.root;
}

// --------------------------------------------------------------------------
namespace {

struct STok {
    enum Kind { LP, RP, Ident, Int, Str, Braces, End };
    Kind kind;
    std::string text;
    size_t pos;
};

std::vector<STok> slex(const std::string& s) {
    std::vector<STok> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '(') {
            out.push_back({STok::LP, "(", i++});
        } else if (c == ')') {
            out.push_back({STok::RP, ")", i++});
        } else if (c == '{') {
            size_t j = s.find('}', i);
            if (j == std::string::npos)
                throw Error(ErrorCode::SyntaxError,
                            "at offset " + std::to_string(i) + ": unclosed brace");
            out.push_back({STok::Braces, s.substr(i + 1, j - i - 1), i});
            i = j + 1;
        } else if (c == '"') {
            size_t j = s.find('"', i + 1);
            if (j == std::string::npos)
                throw Error(ErrorCode::SyntaxError,
                            "at offset " + std::to_string(i) + ": unclosed quote");
            out.push_back({STok::Str, s.substr(i + 1, j - i - 1), i});
            i = j + 1;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                ++j;
            out.push_back({STok::Int, s.substr(i, j - i), i});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j])))
                ++j;
            out.push_back({STok::Ident, s.substr(i, j - i), i});
            i = j;
        } else {
            throw Error(ErrorCode::SyntaxError, "at offset " + std::to_string(i) +
                                                    ": unexpected character '" +
                                                    std::string(1, c) + "'");
        }
    }
    out.push_back({STok::End, "", s.size()});
    return out;
}

std::vector<int> parse_word_string(const std::string& s, size_t pos) {
    std::istringstream in(s);
    std::vector<int> w;
    int x;
    while (in >> x)
        w.push_back(x);
    if (!in.eof() || w.empty())
        throw Error(ErrorCode::SyntaxError, "at offset " + std::to_string(pos) +
                                                ": bad visit word \"" + s + "\"");
    return w;
}

std::set<int> parse_brace_set(const std::string& s, size_t pos) {
    std::set<int> K;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            K.insert(std::stoi(part));
        } catch (...) {
            throw Error(ErrorCode::SyntaxError, "at offset " + std::to_string(pos) +
                                                    ": bad index set {" + s + "}");
        }
    }
    return K;
}

// "{1:2,2:3}" -> sigma with sigma[0]=2, sigma[1]=3; keys must be exactly 1..t
std::vector<int> parse_brace_map(const std::string& s, size_t pos) {
    std::map<int, int> entries;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        size_t colon = part.find(':');
        if (colon == std::string::npos)
            throw Error(ErrorCode::SyntaxError, "at offset " + std::to_string(pos) +
                                                    ": expected i:j entries");
        try {
            int key = std::stoi(part.substr(0, colon));
            int val = std::stoi(part.substr(colon + 1));
            if (!entries.emplace(key, val).second)
                throw Error(ErrorCode::SyntaxError,
                            "at offset " + std::to_string(pos) + ": duplicate key");
        } catch (const Error&) {
            throw;
        } catch (...) {
            throw Error(ErrorCode::SyntaxError, "at offset " + std::to_string(pos) +
                                                    ": bad map {" + s + "}");
        }
    }
    std::vector<int> sigma;
    int expect = 1;
    for (const auto& [key, val] : entries) {
        if (key != expect++)
            throw Error(ErrorCode::SyntaxError,
                        "at offset " + std::to_string(pos) +
                            ": map keys must be 1..t without gaps");
        sigma.push_back(val);
    }
    return sigma;
}

struct Frame {
    std::string head;
    size_t pos;
    std::vector<STok> params;
    std::vector<int> kids;
};

} // namespace

Expression parse_expression(const std::string& text) {
    auto toks = slex(text);
    Expression e;
    std::vector<Frame> frames;
    size_t i = 0;
    std::optional<int> finished;

    auto attach = [&](int node) {
        if (frames.empty()) {
            if (finished)
                throw Error(ErrorCode::SyntaxError,
                            "more than one expression in the input");
            finished = node;
        } else {
            frames.back().kids.push_back(node);
        }
    };

    while (toks[i].kind != STok::End) {
        const STok& t = toks[i];
        if (t.kind == STok::LP) {
            ++i;
            if (toks[i].kind != STok::Ident)
                throw Error(ErrorCode::SyntaxError,
                            "at offset " + std::to_string(toks[i].pos) +
                                ": expected an operation name");
            Frame fr;
            fr.head = toks[i].text;
            fr.pos = toks[i].pos;
            ++i;
            while (toks[i].kind == STok::Int || toks[i].kind == STok::Str ||
                   toks[i].kind == STok::Braces) {
                fr.params.push_back(toks[i]);
                ++i;
            }
            frames.push_back(std::move(fr));
        } else if (t.kind == STok::RP) {
            if (frames.empty())
                throw Error(ErrorCode::SyntaxError,
                            "at offset " + std::to_string(t.pos) + ": stray \")\"");
            Frame fr = std::move(frames.back());
            frames.pop_back();
            ++i;

            auto want = [&](size_t nparams, size_t nkids) {
                if (fr.params.size() != nparams || fr.kids.size() != nkids)
                    throw Error(ErrorCode::SyntaxError,
                                "at offset " + std::to_string(fr.pos) + ": \"" +
                                    fr.head + "\" given " +
                                    std::to_string(fr.params.size()) +
                                    " parameters and " +
                                    std::to_string(fr.kids.size()) + " arguments");
            };
            auto pint = [&](size_t j) {
                if (fr.params[j].kind != STok::Int)
                    throw Error(ErrorCode::SyntaxError,
                                "at offset " + std::to_string(fr.params[j].pos) +
                                    ": expected a number");
                return std::stoi(fr.params[j].text);
            };
            auto ktype = [&](size_t j) { return e.nodes[fr.kids[j]].sym.out_type(); };

            try {
                if (fr.head == "v") {
                    want(0, 0);
                    attach(e.add(FnSymbol::vertex()));
                } else if (fr.head == "e") {
                    if (fr.params.size() == 1) {
                        want(1, 0);
                        attach(e.add(FnSymbol::edge(pint(0))));
                    } else {
                        want(2, 0);
                        attach(e.add(FnSymbol::edge(pint(0), pint(1))));
                    }
                } else if (fr.head == "loop") {
                    if (fr.params.empty() || fr.params[0].kind != STok::Str)
                        throw Error(ErrorCode::SyntaxError,
                                    "at offset " + std::to_string(fr.pos) +
                                        ": loop needs a quoted visit word");
                    auto w = parse_word_string(fr.params[0].text, fr.params[0].pos);
                    if (fr.params.size() == 1) {
                        want(1, 0);
                        attach(e.add(FnSymbol::loop(w)));
                    } else {
                        want(2, 0);
                        attach(e.add(FnSymbol::loop(w, pint(1))));
                    }
                } else if (fr.head == "sum") {
                    want(0, 2);
                    attach(e.add(FnSymbol::sum(ktype(0), ktype(1)),
                                 {fr.kids[0], fr.kids[1]}));
                } else if (fr.head == "redef") {
                    if (fr.params.size() != 1 || fr.params[0].kind != STok::Braces)
                        throw Error(ErrorCode::SyntaxError,
                                    "at offset " + std::to_string(fr.pos) +
                                        ": redef needs a {i:j,...} map");
                    want(1, 1);
                    auto sigma = parse_brace_map(fr.params[0].text, fr.params[0].pos);
                    attach(e.add(FnSymbol::redef(sigma, ktype(0)), {fr.kids[0]}));
                } else if (fr.head == "fuse") {
                    want(2, 1);
                    attach(e.add(FnSymbol::fuse(pint(0), pint(1), ktype(0)),
                                 {fr.kids[0]}));
                } else if (fr.head == "twine") {
                    if (fr.params.size() != 2 || fr.params[1].kind != STok::Braces)
                        throw Error(ErrorCode::SyntaxError,
                                    "at offset " + std::to_string(fr.pos) +
                                        ": twine needs k and an {i,j,...} set");
                    want(2, 2);
                    auto K = parse_brace_set(fr.params[1].text, fr.params[1].pos);
                    attach(e.add(FnSymbol::twine(ktype(0), ktype(1), K, pint(0)),
                                 {fr.kids[0], fr.kids[1]}));
                } else if (fr.head == "sprout") {
                    want(0, 1);
                    attach(e.add(FnSymbol::sprout(ktype(0)), {fr.kids[0]}));
                } else if (fr.head == "bloom") {
                    if (fr.params.empty())
                        throw Error(ErrorCode::SyntaxError,
                                    "at offset " + std::to_string(fr.pos) +
                                        ": bloom needs its arity");
                    int m = pint(0);
                    std::vector<int> w;
                    std::optional<int> split;
                    if (fr.params.size() >= 2) {
                        if (fr.params[1].kind != STok::Str)
                            throw Error(ErrorCode::SyntaxError,
                                        "at offset " + std::to_string(fr.params[1].pos) +
                                            ": expected a quoted visit word");
                        w = parse_word_string(fr.params[1].text, fr.params[1].pos);
                    }
                    if (fr.params.size() == 3)
                        split = pint(2);
                    if (fr.params.size() > 3 || fr.kids.size() != 1)
                        throw Error(ErrorCode::SyntaxError,
                                    "at offset " + std::to_string(fr.pos) +
                                        ": malformed bloom");
                    attach(e.add(FnSymbol::bloom(ktype(0), m, w, split),
                                 {fr.kids[0]}));
                } else {
                    throw Error(ErrorCode::SyntaxError,
                                "at offset " + std::to_string(fr.pos) +
                                    ": unknown operation \"" + fr.head + "\"");
                }
            } catch (const Error& err) {
                if (err.code() == ErrorCode::SyntaxError)
                    throw;
                throw Error(ErrorCode::SyntaxError,
                            "at offset " + std::to_string(fr.pos) + ": " +
                                err.what());
            }
        } else {
            throw Error(ErrorCode::SyntaxError, "at offset " + std::to_string(t.pos) +
                                                    ": expected \"(\" or \")\"");
        }
    }
    if (!frames.empty())
        throw Error(ErrorCode::SyntaxError, "unclosed \"(\"");
    if (!finished)
        throw Error(ErrorCode::SyntaxError, "empty expression");
    e.root = *finished;
    return e;
}

std::string print_expression(const Expression& e) {
    if (e.root < 0)
        throw Error(ErrorCode::BadInput, "expression has no root");
    std::ostringstream os;
    // (node, next child index); -1 emits the opening form
    std::vector<std::pair<int, int>> stack = {{e.root, -1}};
    while (!stack.empty()) {
        auto& [id, ci] = stack.back();
        const auto& node = e.nodes[id];
        const FnSymbol& f = node.sym;
        if (ci == -1) {
            os << "(";
            auto word_str = [&](const std::vector<int>& w) {
                os << "\"";
                for (size_t i = 0; i < w.size(); ++i)
                    os << (i ? " " : "") << w[i];
                os << "\"";
            };
            switch (f.kind) {
            case FnSymbol::Vertex:
                os << "v";
                break;
            case FnSymbol::Edge:
                os << "e " << f.n;
                if (f.split)
                    os << " " << *f.split;
                break;
            case FnSymbol::Loop:
                os << "loop ";
                word_str(f.word);
                if (f.split)
                    os << " " << *f.split;
                break;
            case FnSymbol::Sum:
                os << "sum";
                break;
            case FnSymbol::Redef: {
                os << "redef {";
                for (size_t i = 0; i < f.sigma.size(); ++i)
                    os << (i ? "," : "") << (i + 1) << ":" << f.sigma[i];
                os << "}";
                break;
            }
            case FnSymbol::Fuse:
                os << "fuse " << f.a << " " << f.b;
                break;
            case FnSymbol::Twine: {
                os << "twine " << f.k << " {";
                bool first = true;
                for (int l : f.K) {
                    os << (first ? "" : ",") << l;
                    first = false;
                }
                os << "}";
                break;
            }
            case FnSymbol::Sprout:
                os << "sprout";
                break;
            case FnSymbol::Bloom:
                os << "bloom " << f.m;
                if (!f.word.empty()) {
                    os << " ";
                    word_str(f.word);
                    if (f.split)
                        os << " " << *f.split;
                }
                break;
            case FnSymbol::Hole:
                throw Error(ErrorCode::BadInput, "cannot print a placeholder");
            }
            ci = 0;
        }
        if (ci < static_cast<int>(node.kids.size())) {
            int kid = node.kids[ci];
            ++ci;
            os << " ";
            stack.push_back({kid, -1});
        } else {
            os << ")";
            stack.pop_back();
        }
    }
    return os.str();
}

Expression read_expression(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::BadInput, "cannot open expression file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_expression(ss.str());
}

void write_expression(const Expression& e, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::BadInput, "cannot write expression file " + path);
    out << print_expression(e) << "\n";
}

} // namespace mso
