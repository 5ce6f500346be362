#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ggd/graph.hpp"

namespace ggd {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Graph graph_from_json(const nlohmann::json& j, const std::string& context) {
    try {
        if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
            throw ParseError(context + ": expected object with fields 'n' and 'edges'");
        int n = j.at("n").get<int>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3)
                throw ParseError(context + ": each edge must be [u, v, w]");
            edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
        }
        std::optional<Matrix> feats;
        if (j.contains("features") && !j.at("features").is_null()) {
            const auto& jf = j.at("features");
            if (!jf.is_array() || jf.size() != static_cast<std::size_t>(n))
                throw ParseError(context + ": 'features' must hold one row per node");
            int dim = jf.empty() ? 0 : static_cast<int>(jf[0].size());
            Matrix f(n, dim);
            for (int i = 0; i < n; ++i) {
                if (static_cast<int>(jf[i].size()) != dim)
                    throw ParseError(context + ": ragged feature rows");
                for (int d = 0; d < dim; ++d) f(i, d) = jf[i][d].get<double>();
            }
            feats = std::move(f);
        }
        std::optional<int> label;
        if (j.contains("label") && !j.at("label").is_null())
            label = j.at("label").get<int>();
        return Graph(n, std::move(edges), std::move(feats), label);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(context + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(context + ": " + e.what());
    }
}

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.node_count();
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.w});
    j["edges"] = std::move(edges);
    if (g.has_features()) {
        auto rows = nlohmann::json::array();
        for (int i = 0; i < g.node_count(); ++i) {
            auto row = nlohmann::json::array();
            for (int d = 0; d < g.feature_dim(); ++d) row.push_back(g.features()(i, d));
            rows.push_back(std::move(row));
        }
        j["features"] = std::move(rows);
    }
    if (g.label()) j["label"] = *g.label();
    return j;
}

} // namespace detail

inline Graph load_graph_json(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return detail::graph_from_json(j, path);
}

inline void save_graph_json(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << detail::graph_to_json(g).dump(2) << "\n";
}

/// A dataset file is a JSON array of graph objects.
inline std::vector<Graph> load_dataset_json(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.is_array()) throw ParseError(path + ": expected a JSON array of graphs");
    std::vector<Graph> graphs;
    for (std::size_t i = 0; i < j.size(); ++i)
        graphs.push_back(detail::graph_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return graphs;
}

inline void save_dataset_json(const std::vector<Graph>& graphs, const std::string& path) {
    auto arr = nlohmann::json::array();
    for (const auto& g : graphs) arr.push_back(detail::graph_to_json(g));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << arr.dump(2) << "\n";
}

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline long parse_int_token(const std::string& tok, const std::string& context) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(context + ": non-integer token '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError(context + ": non-integer token '" + tok + "'");
    return v;
}

inline double parse_real_token(const std::string& tok, const std::string& context) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(context + ": non-numeric token '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError(context + ": non-numeric token '" + tok + "'");
    return v;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    while (!lines.empty() && split_tokens(lines.back()).empty()) lines.pop_back();
    return lines;
}

} // namespace detail

/// Loads a TUDataset-format directory: <DS>_A.txt (1-indexed edge pairs, both
/// directions present), <DS>_graph_indicator.txt, <DS>_graph_labels.txt and
/// optionally <DS>_node_labels.txt / <DS>_node_attributes.txt. Duplicate
/// directed pairs merge into one undirected edge of weight 1. Node labels are
/// one-hot encoded; when attributes are also present the one-hot block comes
/// first, then the attribute columns.
inline std::vector<Graph> load_tudataset(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ParseError("not a directory: " + dir);

    std::string prefix;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.size() > 6 && name.substr(name.size() - 6) == "_A.txt") {
            prefix = name.substr(0, name.size() - 6);
            break;
        }
    }
    if (prefix.empty()) throw ParseError("no <DS>_A.txt found in " + dir);
    auto file = [&](const std::string& suffix) {
        return (fs::path(dir) / (prefix + suffix)).string();
    };

    auto indicator_lines = detail::read_lines(file("_graph_indicator.txt"));
    auto label_lines = detail::read_lines(file("_graph_labels.txt"));
    auto edge_lines = detail::read_lines(file("_A.txt"));

    const long total_nodes = static_cast<long>(indicator_lines.size());
    std::vector<int> node_graph(total_nodes);
    long n_graphs = 0;
    for (long i = 0; i < total_nodes; ++i) {
        long gid = detail::parse_int_token(
            detail::split_tokens(indicator_lines[i]).at(0), file("_graph_indicator.txt"));
        if (gid < 1) throw ParseError("graph indicator ids must be >= 1");
        node_graph[i] = static_cast<int>(gid - 1);
        n_graphs = std::max(n_graphs, gid);
    }
    if (static_cast<long>(label_lines.size()) != n_graphs)
        throw ParseError("graph label count does not match indicator");

    // Per-graph dense reindexing of the global 1-indexed node ids.
    std::vector<int> local_index(total_nodes);
    std::vector<int> graph_size(n_graphs, 0);
    for (long i = 0; i < total_nodes; ++i) local_index[i] = graph_size[node_graph[i]]++;

    std::vector<std::set<std::pair<int, int>>> edge_sets(n_graphs);
    for (const auto& line : edge_lines) {
        auto toks = detail::split_tokens(line);
        if (toks.empty()) continue;
        if (toks.size() != 2) throw ParseError(file("_A.txt") + ": expected 'i, j' pairs");
        long a = detail::parse_int_token(toks[0], file("_A.txt"));
        long b = detail::parse_int_token(toks[1], file("_A.txt"));
        if (a < 1 || a > total_nodes || b < 1 || b > total_nodes)
            throw ParseError(file("_A.txt") + ": node id out of range");
        int ga = node_graph[a - 1], gb = node_graph[b - 1];
        if (ga != gb) throw ParseError(file("_A.txt") + ": edge crosses graph boundary");
        int u = local_index[a - 1], v = local_index[b - 1];
        if (u == v) throw ParseError(file("_A.txt") + ": self-loop in edge list");
        if (u > v) std::swap(u, v);
        edge_sets[ga].insert({u, v});
    }

    // Optional per-node annotations.
    std::vector<int> node_labels;
    bool have_node_labels = fs::exists(file("_node_labels.txt"));
    if (have_node_labels) {
        auto lines = detail::read_lines(file("_node_labels.txt"));
        if (static_cast<long>(lines.size()) != total_nodes)
            throw ParseError("node label count does not match indicator");
        for (const auto& l : lines)
            node_labels.push_back(static_cast<int>(detail::parse_int_token(
                detail::split_tokens(l).at(0), file("_node_labels.txt"))));
    }
    std::vector<std::vector<double>> node_attrs;
    bool have_attrs = fs::exists(file("_node_attributes.txt"));
    if (have_attrs) {
        auto lines = detail::read_lines(file("_node_attributes.txt"));
        if (static_cast<long>(lines.size()) != total_nodes)
            throw ParseError("node attribute count does not match indicator");
        for (const auto& l : lines) {
            std::vector<double> row;
            for (const auto& t : detail::split_tokens(l))
                row.push_back(detail::parse_real_token(t, file("_node_attributes.txt")));
            node_attrs.push_back(std::move(row));
            if (node_attrs.back().size() != node_attrs.front().size())
                throw ParseError("ragged node attribute rows");
        }
    }

    std::map<int, int> label_slot;
    if (have_node_labels) {
        std::set<int> distinct(node_labels.begin(), node_labels.end());
        int slot = 0;
        for (int l : distinct) label_slot[l] = slot++;
    }
    const int onehot_dim = static_cast<int>(label_slot.size());
    const int attr_dim = have_attrs ? static_cast<int>(node_attrs.front().size()) : 0;

    std::vector<Graph> graphs;
    graphs.reserve(n_graphs);
    long node_cursor = 0;
    for (long gi = 0; gi < n_graphs; ++gi) {
        int n = graph_size[gi];
        if (n == 0) throw ParseError("graph " + std::to_string(gi + 1) + " has no nodes");
        std::vector<Edge> edges;
        for (const auto& [u, v] : edge_sets[gi]) edges.push_back({u, v, 1.0});

        std::optional<Matrix> feats;
        if (onehot_dim + attr_dim > 0) {
            Matrix f = Matrix::Zero(n, onehot_dim + attr_dim);
            for (long global = node_cursor; global < node_cursor + n; ++global) {
                int row = local_index[global];
                if (have_node_labels) f(row, label_slot.at(node_labels[global])) = 1.0;
                if (have_attrs)
                    for (int d = 0; d < attr_dim; ++d)
                        f(row, onehot_dim + d) = node_attrs[global][d];
            }
            feats = std::move(f);
        }

        int label = static_cast<int>(detail::parse_int_token(
            detail::split_tokens(label_lines[gi]).at(0), file("_graph_labels.txt")));
        try {
            graphs.emplace_back(n, std::move(edges), std::move(feats), label);
        } catch (const std::invalid_argument& e) {
            throw ParseError(dir + ": graph " + std::to_string(gi + 1) + ": " + e.what());
        }
        node_cursor += n;
    }
    return graphs;
}

/// Resolves a graph argument: either a JSON graph file or `dataset_dir#index`
/// referring to a 0-based entry of a TUDataset directory.
inline Graph load_graph_arg(const std::string& arg) {
    auto hash = arg.find('#');
    if (hash == std::string::npos) return load_graph_json(arg);
    std::string dir = arg.substr(0, hash);
    long idx = detail::parse_int_token(arg.substr(hash + 1), arg);
    auto graphs = load_tudataset(dir);
    if (idx < 0 || idx >= static_cast<long>(graphs.size()))
        throw ParseError(arg + ": index out of range (dataset has " +
                         std::to_string(graphs.size()) + " graphs)");
    return graphs[idx];
}

/// One row per line, comma separated, 17 significant digits.
inline void write_matrix_csv(const Matrix& m, std::ostream& out) {
    char buf[64];
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
}

inline void write_matrix_csv(const Matrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    write_matrix_csv(m, out);
}

/// Headerless CSV, one sample per row.
inline Matrix load_matrix_csv(const std::string& path) {
    auto lines = detail::read_lines(path);
    std::vector<std::vector<double>> rows;
    for (const auto& line : lines) {
        auto toks = detail::split_tokens(line);
        if (toks.empty()) continue;
        std::vector<double> row;
        for (const auto& t : toks) row.push_back(detail::parse_real_token(t, path));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(path + ": ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    return m;
}

} // namespace ggd
