#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "lookout/errors.hpp"

namespace lookout {

/// One timestamped, valued edge. Endpoints are dense node indices assigned at
/// parse time in first-appearance order of the id tokens.
struct Edge {
    std::int32_t source = 0;
    std::int32_t destination = 0;
    std::int64_t timestamp = 0;
    double value = 1.0;
};

enum class GraphMode { unipartite, bipartite };

/// Immutable time-evolving multigraph. Edges are stably sorted by timestamp;
/// per-node adjacency holds edge indices and therefore inherits that order.
/// Safe to read from many threads once constructed.
class TGraph {
public:
    TGraph(std::vector<Edge> edges, std::vector<std::string> node_ids, GraphMode mode);

    int n() const { return static_cast<int>(node_ids_.size()); }
    long m() const { return static_cast<long>(edges_.size()); }
    GraphMode mode() const { return mode_; }

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::string>& node_ids() const { return node_ids_; }
    const std::string& node_id(int v) const { return node_ids_[static_cast<std::size_t>(v)]; }

    /// Dense index for an id token, or -1 if the token is unknown.
    int index_of(const std::string& token) const;

    /// Edge indices with node v as destination, in timestamp order.
    const std::vector<std::int32_t>& in_edges(int v) const { return in_edges_[static_cast<std::size_t>(v)]; }
    /// Edge indices with node v as source, in timestamp order.
    const std::vector<std::int32_t>& out_edges(int v) const { return out_edges_[static_cast<std::size_t>(v)]; }

private:
    std::vector<Edge> edges_;
    std::vector<std::string> node_ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<std::int32_t>> in_edges_;
    std::vector<std::vector<std::int32_t>> out_edges_;
    GraphMode mode_;
};

struct ParseOptions {
    char delimiter = ',';
    bool has_header = false;
    /// When false, every row must carry an explicit value column.
    bool value_column_optional = true;
    GraphMode mode = GraphMode::unipartite;
};

/// Reads rows `source<delim>destination<delim>timestamp[<delim>value]` into a
/// TGraph. A missing value column defaults to 1.0. Lines that are blank or
/// start with '#' are skipped. Node indices are assigned in first-appearance
/// order (source before destination within a row); edges are stably sorted by
/// timestamp, so equal timestamps keep input order.
///
/// Throws ParseError (with line number) on malformed rows, DataError when the
/// input holds no edges or when bipartite mode sees a token on both sides.
TGraph parse_edges(std::istream& input, const ParseOptions& options = {});

enum class AnomalyOrigin { detected, dictated };

/// Input anomalies as dense node indices, in the order given.
struct AnomalySet {
    std::vector<int> members;
    AnomalyOrigin origin = AnomalyOrigin::dictated;

    int k() const { return static_cast<int>(members.size()); }
};

/// Reads one node-id token per line ('#' comments and blank lines ignored).
/// Order is preserved; duplicates and unknown ids are errors, as is an empty
/// list. The resulting set has dictated origin.
AnomalySet load_anomalies(std::istream& input, const TGraph& graph);

} // namespace lookout
