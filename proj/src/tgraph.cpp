#include "lookout/tgraph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string_view>
#include <unordered_set>
#include <utility>

namespace lookout {

namespace {

// Strips a trailing '\r' so CRLF files parse like LF files.
inline std::string_view chomp(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

inline bool skippable(std::string_view line) {
    return line.empty() || line.front() == '#';
}

std::int64_t parse_timestamp(std::string_view field, long line_no) {
    std::int64_t ts = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), ts);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(line_no, "non-numeric timestamp '" + std::string(field) + "'");
    if (ts < 0) throw ParseError(line_no, "negative timestamp " + std::to_string(ts));
    return ts;
}

double parse_value(std::string_view field, long line_no) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value))
        throw ParseError(line_no, "non-numeric value '" + std::string(field) + "'");
    if (value < 0.0) throw ParseError(line_no, "negative value " + std::string(field));
    return value;
}

} // namespace

TGraph::TGraph(std::vector<Edge> edges, std::vector<std::string> node_ids, GraphMode mode)
    : edges_(std::move(edges)), node_ids_(std::move(node_ids)), mode_(mode) {
    index_.reserve(node_ids_.size());
    for (std::size_t v = 0; v < node_ids_.size(); ++v)
        index_.emplace(node_ids_[v], static_cast<int>(v));

    std::stable_sort(edges_.begin(), edges_.end(),
                     [](const Edge& a, const Edge& b) { return a.timestamp < b.timestamp; });

    in_edges_.resize(node_ids_.size());
    out_edges_.resize(node_ids_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        out_edges_[static_cast<std::size_t>(edges_[e].source)].push_back(static_cast<std::int32_t>(e));
        in_edges_[static_cast<std::size_t>(edges_[e].destination)].push_back(static_cast<std::int32_t>(e));
    }
}

int TGraph::index_of(const std::string& token) const {
    const auto it = index_.find(token);
    return it == index_.end() ? -1 : it->second;
}

TGraph parse_edges(std::istream& input, const ParseOptions& options) {
    std::vector<Edge> edges;
    std::vector<std::string> node_ids;
    std::unordered_map<std::string, int> index;
    // Token roles, tracked only in bipartite mode: 1 = source, 2 = destination.
    std::vector<unsigned char> role;

    const auto intern = [&](std::string_view token, unsigned char side, long line_no) {
        if (token.empty())
            throw ParseError(line_no, side == 1 ? "empty source token" : "empty destination token");
        auto [it, inserted] = index.emplace(std::string(token), static_cast<int>(node_ids.size()));
        if (inserted) {
            node_ids.emplace_back(it->first);
            role.push_back(side);
        } else if (options.mode == GraphMode::bipartite &&
                   role[static_cast<std::size_t>(it->second)] != side) {
            throw DataError("bipartite graph: node '" + std::string(token) +
                            "' appears as both source and destination");
        }
        return it->second;
    };

    std::string raw;
    long line_no = 0;
    bool header_pending = options.has_header;
    while (std::getline(input, raw)) {
        ++line_no;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const std::string_view line = chomp(raw);
        if (skippable(line)) continue;

        std::string_view fields[4];
        int count = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(options.delimiter, start);
            const std::string_view field =
                line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
            if (count == 4)
                throw ParseError(line_no, "expected 3 or 4 fields");
            fields[count++] = field;
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        if (count < 3 || (count == 3 && !options.value_column_optional))
            throw ParseError(line_no, "expected " +
                                          std::string(options.value_column_optional ? "3 or 4" : "4") +
                                          " fields, got " + std::to_string(count));

        Edge edge;
        edge.source = static_cast<std::int32_t>(intern(fields[0], 1, line_no));
        edge.destination = static_cast<std::int32_t>(intern(fields[1], 2, line_no));
        edge.timestamp = parse_timestamp(fields[2], line_no);
        edge.value = count == 4 ? parse_value(fields[3], line_no) : 1.0;
        edges.push_back(edge);
    }

    if (edges.empty()) throw DataError("no edges");
    return TGraph(std::move(edges), std::move(node_ids), options.mode);
}

AnomalySet load_anomalies(std::istream& input, const TGraph& graph) {
    AnomalySet set;
    set.origin = AnomalyOrigin::dictated;
    std::unordered_set<int> seen;

    std::string raw;
    long line_no = 0;
    while (std::getline(input, raw)) {
        ++line_no;
        const std::string_view line = chomp(raw);
        if (skippable(line)) continue;
        const std::string token(line);
        const int v = graph.index_of(token);
        if (v < 0) throw ParseError(line_no, "unknown node " + token);
        if (!seen.insert(v).second) throw ParseError(line_no, "duplicate anomaly " + token);
        set.members.push_back(v);
    }

    if (set.members.empty()) throw DataError("anomaly list is empty");
    return set;
}

} // namespace lookout
