#include "msograph/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mso {

using nlohmann::json;

namespace {

void expect_fields(const json& obj, const std::set<std::string>& allowed,
                   const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw Error(ErrorCode::SyntaxError,
                        "unknown field \"" + it.key() + "\" in " + where);
}

std::vector<std::string> id_list(const json& a, const std::string& where) {
    if (!a.is_array())
        throw Error(ErrorCode::SyntaxError, where + " must be a list");
    std::vector<std::string> out;
    for (const auto& x : a) {
        if (!x.is_string())
            throw Error(ErrorCode::SyntaxError, where + " entries must be strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

} // namespace

TypedGraph parse_graph(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw Error(ErrorCode::SyntaxError, std::string("graph file: ") + ex.what());
    }
    if (!j.is_object())
        throw Error(ErrorCode::SyntaxError, "graph file must be an object");
    expect_fields(j, {"mode", "directed", "vertices", "edges", "terminals"},
                  "graph file");
    for (const char* f : {"mode", "directed", "vertices", "edges", "terminals"})
        if (!j.contains(f))
            throw Error(ErrorCode::SyntaxError,
                        std::string("graph file missing field \"") + f + "\"");

    TypedGraph g;
    std::string mode = j["mode"].is_string() ? j["mode"].get<std::string>() : "";
    if (mode == "loopfree")
        g.allow_loops = false;
    else if (mode == "loops")
        g.allow_loops = true;
    else
        throw Error(ErrorCode::SyntaxError, "mode must be \"loopfree\" or \"loops\"");
    if (!j["directed"].is_boolean())
        throw Error(ErrorCode::SyntaxError, "directed must be a boolean");
    g.directed = j["directed"].get<bool>();
    g.vertices = id_list(j["vertices"], "vertices");
    g.terminals = id_list(j["terminals"], "terminals");

    if (!j["edges"].is_array())
        throw Error(ErrorCode::SyntaxError, "edges must be a list");
    for (const auto& e : j["edges"]) {
        if (!e.is_object())
            throw Error(ErrorCode::SyntaxError, "each edge must be an object");
        expect_fields(e, {"id", "endpoints", "start"}, "edge");
        if (!e.contains("id") || !e["id"].is_string())
            throw Error(ErrorCode::SyntaxError, "edge needs a string id");
        if (!e.contains("endpoints"))
            throw Error(ErrorCode::SyntaxError, "edge needs endpoints");
        std::string id = e["id"].get<std::string>();
        g.edges.push_back(id);
        g.endpoints[id] = id_list(e["endpoints"], "endpoints of " + id);
        if (e.contains("start")) {
            if (!g.directed)
                throw Error(ErrorCode::SyntaxError,
                            "start given on edge of undirected graph: " + id);
            if (!e["start"].is_number_integer())
                throw Error(ErrorCode::SyntaxError, "start must be an integer");
            g.orientation[id] = e["start"].get<int>();
        } else if (g.directed) {
            throw Error(ErrorCode::SyntaxError,
                        "directed graph edge without start: " + id);
        }
    }
    g.check_invariants();
    return g;
}

TypedGraph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::BadInput, "cannot open graph file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

std::string print_graph(const TypedGraph& g) {
    json j;
    j["mode"] = g.allow_loops ? "loops" : "loopfree";
    j["directed"] = g.directed;
    j["vertices"] = g.vertices;
    j["edges"] = json::array();
    for (const auto& e : g.edges) {
        json je;
        je["id"] = e;
        je["endpoints"] = g.endpoints.at(e);
        if (g.directed)
            je["start"] = g.orientation.at(e);
        j["edges"].push_back(je);
    }
    j["terminals"] = g.terminals;
    return j.dump(2) + "\n";
}

void write_graph(const TypedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::BadInput, "cannot write graph file " + path);
    out << print_graph(g);
}

} // namespace mso
