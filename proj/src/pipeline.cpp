#include "lookout/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "lookout/iforest.hpp"
#include "lookout/parallel.hpp"
#include "lookout/prng.hpp"
#include "lookout/synthetic.hpp"

namespace lookout {

namespace {

// Stream id for owner tie-break draws, kept away from the per-pair forest
// streams which use the pair index.
constexpr std::uint64_t kOwnerTieStream = 0x6f776e6572;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

int column_of(const ScoreMatrix& scores, const PairPlotId& plot) {
    auto slot = std::find(scores.plot_order.begin(), scores.plot_order.end(), plot);
    return static_cast<int>(slot - scores.plot_order.begin());
}

} // namespace

std::string_view to_string(AnomalyMode mode) {
    return mode == AnomalyMode::detected ? "detected" : "dictated";
}

void RunConfig::validate() const {
    if (graph_path.empty()) throw UsageError("a graph file is required");
    if (budget < 1) throw UsageError("budget must be at least 1");
    if (trees < 1) throw UsageError("trees must be at least 1");
    if (subsample < 2) throw UsageError("subsample must be at least 2");
    if (mode == AnomalyMode::dictated && anomalies_path.empty())
        throw UsageError("dictated mode requires an anomaly file");
    if (mode == AnomalyMode::detected && top_k < 1)
        throw UsageError("detected mode requires top_k >= 1");
}

TGraph load_graph(const RunConfig& config) {
    std::ifstream in(config.graph_path, std::ios::binary);
    if (!in) throw DataError("cannot open graph: " + config.graph_path);
    ParseOptions options;
    options.delimiter = config.delimiter;
    options.has_header = config.has_header;
    options.mode = config.bipartite ? GraphMode::bipartite : GraphMode::unipartite;
    return parse_edges(in, options);
}

DetectResult detect_rank(const FeatureMatrix& features, const RunConfig& config) {
    const int n = features.rows();
    if (config.top_k > n)
        throw DataError("top_k (" + std::to_string(config.top_k) + ") exceeds node count (" +
                        std::to_string(n) + ")");

    Eigen::MatrixXd scaled = apply_scaling(features.values, config.scale);
    ForestParams params;
    params.trees = config.trees;
    params.subsample = config.subsample;
    params.seed = config.seed;
    IsolationForest forest = fit(scaled, params);

    DetectResult result;
    result.ranking.resize(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        result.ranking[i].row = static_cast<int>(i);
        result.ranking[i].score = forest.score(scaled.row(static_cast<Eigen::Index>(i)).transpose());
    });
    std::sort(result.ranking.begin(), result.ranking.end(), [](const RankedNode& a, const RankedNode& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.row < b.row;
    });
    result.top_rows.reserve(static_cast<std::size_t>(config.top_k));
    for (int i = 0; i < config.top_k; ++i)
        result.top_rows.push_back(result.ranking[static_cast<std::size_t>(i)].row);
    return result;
}

void write_ranking(std::ostream& out, const std::vector<RankedNode>& ranking,
                   const std::vector<std::string>& node_ids, int limit, char delimiter) {
    out << "rank" << delimiter << "node" << delimiter << "score" << '\n';
    char buf[64];
    const int rows = std::min<int>(limit, static_cast<int>(ranking.size()));
    for (int i = 0; i < rows; ++i) {
        const RankedNode& r = ranking[static_cast<std::size_t>(i)];
        std::snprintf(buf, sizeof(buf), "%.9g", r.score);
        out << (i + 1) << delimiter << node_ids[static_cast<std::size_t>(r.row)] << delimiter << buf
            << '\n';
    }
}

DetectOutcome run_detect(const RunConfig& config, std::ostream& diag) {
    config.validate();
    TGraph graph = load_graph(config);
    FeatureMatrix features = extract_features(graph);

    DetectOutcome outcome;
    outcome.result = detect_rank(features, config);
    outcome.node_ids = graph.node_ids();

    if (!config.features_out.empty()) {
        std::ostringstream table;
        write_feature_table(table, features, graph.node_ids(), config.delimiter);
        write_text_file(config.features_out, table.str());
        outcome.files.push_back(config.features_out);
    }
    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::ostringstream table;
        write_ranking(table, outcome.result.ranking, outcome.node_ids, config.top_k,
                      config.delimiter);
        const std::string path = join_path(config.out_dir, "ranking.csv");
        write_text_file(path, table.str());
        outcome.files.push_back(path);
        diag << "wrote " << path << "\n";
    }
    return outcome;
}

ExplainOutcome run_explain(const RunConfig& config, std::ostream& diag) {
    config.validate();
    TGraph graph = load_graph(config);
    FeatureMatrix features = extract_features(graph);

    AnomalySet anomalies;
    DetectResult detected;
    if (config.mode == AnomalyMode::detected) {
        detected = detect_rank(features, config);
        anomalies.members = detected.top_rows;
        anomalies.origin = AnomalyOrigin::detected;
    } else {
        std::ifstream in(config.anomalies_path, std::ios::binary);
        if (!in) throw DataError("cannot open anomalies: " + config.anomalies_path);
        anomalies = load_anomalies(in, graph);
    }

    ForestParams params;
    params.trees = config.trees;
    params.subsample = config.subsample;
    params.seed = config.seed;
    ScoreMatrix scores = score_anomalies(features, anomalies, params, config.scale);

    int budget = config.budget;
    if (budget > scores.l()) {
        diag << "warning: budget " << budget << " exceeds the " << scores.l()
             << " available plots; using " << scores.l() << "\n";
        budget = scores.l();
    }

    PlotSelection selection = greedy_select(scores, budget, derive_seed(config.seed, kOwnerTieStream));
    IncriminationReport quality = incrimination_report(scores, selection);

    ExplainOutcome outcome;
    outcome.selection = selection;
    outcome.sweep = budget_sweep(scores, budget);
    outcome.anomaly_ids.reserve(static_cast<std::size_t>(scores.k()));
    for (int row : scores.anomaly_order) outcome.anomaly_ids.push_back(graph.node_id(row));

    ExplanationReport& report = outcome.report;
    report.budget = budget;
    report.objective = selection.objective;
    report.incrimination = quality.incrimination;
    report.incrimination_ideal = quality.ideal;
    report.config.delimiter = config.delimiter;
    report.config.mode = std::string(to_string(config.mode));
    report.config.sample = config.subsample;
    report.config.scale = std::string(to_string(config.scale));
    report.config.seed = config.seed;
    report.config.top_k = config.top_k;
    report.config.trees = config.trees;

    const auto& names = FeatureMatrix::feature_names();
    for (std::size_t j = 0; j < selection.selected.size(); ++j) {
        const PairPlotId& plot = selection.selected[j];
        const int col = column_of(scores, plot);
        ReportPlot entry;
        entry.rank = static_cast<int>(j) + 1;
        entry.feature_x = std::string(names[static_cast<std::size_t>(plot.feature_x)]);
        entry.feature_y = std::string(names[static_cast<std::size_t>(plot.feature_y)]);
        for (int slot : selection.owners[j]) {
            OwnedAnomaly owner;
            owner.id = outcome.anomaly_ids[static_cast<std::size_t>(slot)];
            owner.score = scores.scores(slot, col);
            entry.owners.push_back(std::move(owner));
        }
        report.plots.push_back(std::move(entry));
    }

    if (!config.features_out.empty()) {
        std::ostringstream table;
        write_feature_table(table, features, graph.node_ids(), config.delimiter);
        write_text_file(config.features_out, table.str());
        outcome.files.push_back(config.features_out);
    }
    if (!config.scores_out.empty()) {
        std::ostringstream table;
        write_score_table(table, scores, outcome.anomaly_ids, config.delimiter);
        write_text_file(config.scores_out, table.str());
        outcome.files.push_back(config.scores_out);
    }

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);

        PlotRenderOptions render;
        render.scale = config.scale;
        for (std::size_t j = 0; j < selection.selected.size(); ++j) {
            std::vector<int> owned_rows;
            owned_rows.reserve(selection.owners[j].size());
            for (int slot : selection.owners[j])
                owned_rows.push_back(scores.anomaly_order[static_cast<std::size_t>(slot)]);
            const std::string svg = render_plot(features, scores.anomaly_order,
                                                selection.selected[j], owned_rows,
                                                graph.node_ids(), render);
            const std::string path = join_path(
                config.out_dir, plot_file_name(static_cast<int>(j) + 1, selection.selected[j]));
            write_text_file(path, svg);
            outcome.files.push_back(path);
        }

        const std::string report_path = join_path(config.out_dir, "report.json");
        write_text_file(report_path, report_to_json(report));
        outcome.files.push_back(report_path);

        std::ostringstream sweep_table;
        write_budget_sweep(sweep_table, outcome.sweep, config.delimiter);
        const std::string sweep_path = join_path(config.out_dir, "sweep.csv");
        write_text_file(sweep_path, sweep_table.str());
        outcome.files.push_back(sweep_path);

        if (config.mode == AnomalyMode::detected) {
            std::ostringstream table;
            write_ranking(table, detected.ranking, graph.node_ids(), config.top_k,
                          config.delimiter);
            const std::string ranking_path = join_path(config.out_dir, "ranking.csv");
            write_text_file(ranking_path, table.str());
            outcome.files.push_back(ranking_path);
        }
        for (const std::string& path : outcome.files) diag << "wrote " << path << "\n";
    }
    return outcome;
}

namespace {

struct BenchInstance {
    TGraph graph;
    AnomalySet anomalies;
};

BenchInstance make_bench_instance(long long edges, int anomaly_count, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.nodes = static_cast<int>(std::max<long long>(100, edges / 10));
    spec.edges = edges;
    spec.burst_nodes = anomaly_count / 2;
    spec.fanout_nodes = anomaly_count - anomaly_count / 2;
    spec.seed = seed;

    std::ostringstream buf;
    SyntheticResult planted = generate_synthetic(buf, spec);
    std::istringstream in(buf.str());
    BenchInstance instance{parse_edges(in), {}};
    instance.anomalies.origin = AnomalyOrigin::dictated;
    for (const std::string& id : planted.planted())
        instance.anomalies.members.push_back(instance.graph.index_of(id));
    return instance;
}

} // namespace

std::vector<BenchRow> run_bench(const RunConfig& config, const std::vector<long long>& sizes,
                                std::ostream& diag) {
    if (sizes.empty()) throw UsageError("bench requires at least one size");
    if (config.top_k < 1) throw UsageError("bench requires top_k >= 1");

    ForestParams params;
    params.trees = config.trees;
    params.subsample = config.subsample;
    params.seed = config.seed;

    std::vector<BenchRow> rows;
    for (long long edges : sizes) {
        BenchInstance instance = make_bench_instance(edges, config.top_k, config.seed);

        BenchRow row;
        row.edges = edges;
        row.nodes = instance.graph.n();

        // The column transform is per-node preparation, so it belongs to the
        // extraction stage; scoring then runs on the already-scaled matrix
        // (same scores: scaling is idempotent through `none`).
        auto t0 = std::chrono::steady_clock::now();
        FeatureMatrix features = extract_features(instance.graph);
        features.values = apply_scaling(features.values, config.scale);
        row.extract_s = seconds_since(t0);

        auto t1 = std::chrono::steady_clock::now();
        ScoreMatrix scores =
            score_anomalies(features, instance.anomalies, params, ScalingMode::none);
        row.scoring_s = seconds_since(t1);

        auto t2 = std::chrono::steady_clock::now();
        const int budget = std::min(config.budget, scores.l());
        PlotSelection selection = greedy_select(scores, budget, derive_seed(config.seed, kOwnerTieStream));
        row.selection_s = seconds_since(t2);
        row.total_s = seconds_since(t0);
        (void)selection;

        char line[160];
        std::snprintf(line, sizeof(line),
                      "m=%lld n=%d extract=%.3fs scoring=%.3fs selection=%.3fs total=%.3fs",
                      row.edges, row.nodes, row.extract_s, row.scoring_s, row.selection_s,
                      row.total_s);
        diag << line << "\n";
        rows.push_back(row);
    }

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::ostringstream table;
        const char d = config.delimiter;
        table << "edges" << d << "nodes" << d << "extract_s" << d << "scoring_s" << d
              << "selection_s" << d << "total_s" << '\n';
        char buf[160];
        for (const BenchRow& row : rows) {
            std::snprintf(buf, sizeof(buf), "%lld%c%d%c%.6f%c%.6f%c%.6f%c%.6f", row.edges, d,
                          row.nodes, d, row.extract_s, d, row.scoring_s, d, row.selection_s, d,
                          row.total_s);
            table << buf << '\n';
        }
        const std::string path = join_path(config.out_dir, "bench.csv");
        write_text_file(path, table.str());
        diag << "wrote " << path << "\n";
    }
    return rows;
}

std::vector<KSweepRow> run_ksweep(const RunConfig& config, long long edges,
                                  const std::vector<int>& ks, std::ostream& diag) {
    if (ks.empty()) throw UsageError("anomaly sweep requires at least one k");

    ForestParams params;
    params.trees = config.trees;
    params.subsample = config.subsample;
    params.seed = config.seed;

    std::vector<KSweepRow> rows;
    for (int k : ks) {
        if (k < 1) throw UsageError("anomaly sweep requires k >= 1");
        BenchInstance instance = make_bench_instance(edges, k, config.seed);
        FeatureMatrix features = extract_features(instance.graph);
        features.values = apply_scaling(features.values, config.scale);

        auto t0 = std::chrono::steady_clock::now();
        ScoreMatrix scores =
            score_anomalies(features, instance.anomalies, params, ScalingMode::none);
        KSweepRow row;
        row.anomalies = scores.k();
        row.scoring_s = seconds_since(t0);
        rows.push_back(row);
        diag << "k=" << row.anomalies << " scoring=" << row.scoring_s << "s\n";
    }

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::ostringstream table;
        const char d = config.delimiter;
        table << "anomalies" << d << "scoring_s" << '\n';
        char buf[64];
        for (const KSweepRow& row : rows) {
            std::snprintf(buf, sizeof(buf), "%d%c%.6f", row.anomalies, d, row.scoring_s);
            table << buf << '\n';
        }
        const std::string path = join_path(config.out_dir, "ksweep.csv");
        write_text_file(path, table.str());
        diag << "wrote " << path << "\n";
    }
    return rows;
}

} // namespace lookout
