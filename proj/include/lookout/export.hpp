#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lookout/features.hpp"
#include "lookout/scoring.hpp"

namespace lookout {

struct PlotRenderOptions {
    int width = 640;
    int height = 480;
    ScalingMode scale = ScalingMode::log1p;
};

/// Scatter plot of every node over one feature pair, in the same scaled
/// space the detector scored. Normal nodes gray, non-owned anomalies blue,
/// owned anomalies red with id labels; drawn normal, then blue, then red so
/// anomalies stay visible. Byte-deterministic for fixed inputs.
std::string render_plot(const FeatureMatrix& features, const std::vector<int>& anomalies,
                        const PairPlotId& plot, const std::vector<int>& owned,
                        const std::vector<std::string>& node_ids,
                        const PlotRenderOptions& options = {});

/// File name for a rendered plot: plot_<rank>_<feature_x>_<feature_y>.svg.
std::string plot_file_name(int rank, const PairPlotId& plot);

struct OwnedAnomaly {
    std::string id;
    double score = 0.0;
};

struct ReportPlot {
    int rank = 0;
    std::string feature_x;
    std::string feature_y;
    std::vector<OwnedAnomaly> owners;
};

struct ReportConfig {
    char delimiter = ',';
    std::string mode;
    int sample = 0;
    std::string scale;
    std::uint64_t seed = 0;
    int top_k = 0;
    int trees = 0;
};

/// Machine-readable explanation: plots in selection order, each with the
/// anomalies it owns and their scores, plus run provenance. Owner ids across
/// plots partition the anomaly set, so the owner scores sum back to the
/// objective.
struct ExplanationReport {
    int budget = 0;
    double objective = 0.0;
    double incrimination = 0.0;
    double incrimination_ideal = 0.0;
    std::vector<ReportPlot> plots;
    ReportConfig config;
};

/// Serialize with sorted keys at every level and 9-significant-digit floats.
std::string report_to_json(const ExplanationReport& report);

/// FeatureMatrix as delimited text: header `node` + feature names, one row
/// per node id.
void write_feature_table(std::ostream& out, const FeatureMatrix& features,
                         const std::vector<std::string>& node_ids, char delimiter = ',');

/// ScoreMatrix as delimited text: header `anomaly` + `fx|fy` pair names, one
/// row per anomaly id.
void write_score_table(std::ostream& out, const ScoreMatrix& scores,
                       const std::vector<std::string>& anomaly_ids, char delimiter = ',');

/// Write content to path, throwing DataError naming the path on failure.
void write_text_file(const std::string& path, const std::string& content);

} // namespace lookout
