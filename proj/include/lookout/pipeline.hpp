#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lookout/export.hpp"
#include "lookout/metrics.hpp"
#include "lookout/selection.hpp"
#include "lookout/tgraph.hpp"

namespace lookout {

enum class AnomalyMode { detected, dictated };

std::string_view to_string(AnomalyMode mode);

/// Everything a run needs. Paths are never echoed into outputs, so two runs
/// with the same data under different paths produce identical bytes.
struct RunConfig {
    std::string graph_path;
    std::string anomalies_path; // required in dictated mode
    AnomalyMode mode = AnomalyMode::detected;
    int top_k = 10;
    int budget = 7;
    int trees = 100;
    int subsample = 256;
    std::uint64_t seed = 42;
    ScalingMode scale = ScalingMode::log1p;
    std::string out_dir; // outputs skipped when empty
    char delimiter = ',';
    bool bipartite = false;
    bool has_header = false;
    std::string features_out; // optional FeatureMatrix dump path
    std::string scores_out;   // optional ScoreMatrix dump path

    /// Checks the detect/explain invariants; throws UsageError.
    void validate() const;
};

/// Opens and parses the configured edge file.
TGraph load_graph(const RunConfig& config);

struct RankedNode {
    int row = 0;
    double score = 0.0;
};

struct DetectResult {
    std::vector<RankedNode> ranking; // every node, score descending
    std::vector<int> top_rows;       // first top_k rows of the ranking
};

/// Scores every node with one forest over all 12 (scaled) feature columns
/// and ranks by score, ties toward the lower row. Throws DataError when
/// top_k exceeds the node count.
DetectResult detect_rank(const FeatureMatrix& features, const RunConfig& config);

void write_ranking(std::ostream& out, const std::vector<RankedNode>& ranking,
                   const std::vector<std::string>& node_ids, int limit, char delimiter);

struct DetectOutcome {
    DetectResult result;
    std::vector<std::string> node_ids;
    std::vector<std::string> files;
};

/// detect subcommand: parse, extract, rank; writes ranking.csv under out_dir.
DetectOutcome run_detect(const RunConfig& config, std::ostream& diag);

struct ExplainOutcome {
    ExplanationReport report;
    PlotSelection selection;
    std::vector<IncriminationReport> sweep;
    std::vector<std::string> anomaly_ids; // in ScoreMatrix row order
    std::vector<std::string> files;       // paths written, in write order
};

/// explain subcommand: anomalies (detected in-run or dictated from file) ->
/// scoring -> selection -> report.json, sweep.csv and one SVG per selected
/// plot under out_dir. A budget beyond the plot count is clamped with a
/// warning on diag.
ExplainOutcome run_explain(const RunConfig& config, std::ostream& diag);

struct BenchRow {
    long long edges = 0;
    int nodes = 0;
    double extract_s = 0.0;
    double scoring_s = 0.0;
    double selection_s = 0.0;
    double total_s = 0.0;
};

/// bench subcommand: per synthetic size, wall time of feature extraction,
/// scoring, and selection (config.top_k planted anomalies, half burst, half
/// fanout). Writes bench.csv under out_dir; human-readable lines go to diag.
std::vector<BenchRow> run_bench(const RunConfig& config, const std::vector<long long>& sizes,
                                std::ostream& diag);

struct KSweepRow {
    int anomalies = 0;
    double scoring_s = 0.0;
};

/// Anomaly-count sweep at a fixed edge count: scoring wall time per k.
/// Writes ksweep.csv under out_dir.
std::vector<KSweepRow> run_ksweep(const RunConfig& config, long long edges,
                                  const std::vector<int>& ks, std::ostream& diag);

} // namespace lookout
