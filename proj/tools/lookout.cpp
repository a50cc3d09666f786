#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "lookout/errors.hpp"
#include "lookout/pipeline.hpp"
#include "lookout/synthetic.hpp"

namespace {

struct FlagState {
    std::string scale = "log1p";
    std::string mode = "detected";
    std::string delimiter = ",";
};

void add_forest_flags(CLI::App* cmd, lookout::RunConfig& config, FlagState& state) {
    cmd->add_option("--trees", config.trees, "isolation trees per forest")->capture_default_str();
    cmd->add_option("--sample", config.subsample, "training subsample per tree")
        ->capture_default_str();
    cmd->add_option("--seed", config.seed, "base random seed")->capture_default_str();
    cmd->add_option("--scale", state.scale, "feature scaling")
        ->check(CLI::IsMember({"log1p", "none"}))
        ->capture_default_str();
}

void add_graph_flags(CLI::App* cmd, lookout::RunConfig& config, FlagState& state) {
    cmd->add_option("--graph", config.graph_path,
                    "edge file: source,destination,timestamp[,value]")
        ->required();
    cmd->add_option("--delimiter", state.delimiter, "field delimiter (one character)")
        ->capture_default_str();
    cmd->add_flag("--bipartite", config.bipartite,
                  "source and destination ids live in disjoint spaces");
    cmd->add_flag("--header", config.has_header, "skip the first line of the edge file");
}

void finish_flags(const FlagState& state, lookout::RunConfig& config) {
    if (state.delimiter.size() != 1)
        throw lookout::UsageError("--delimiter must be a single character");
    config.delimiter = state.delimiter[0];
    config.scale =
        state.scale == "none" ? lookout::ScalingMode::none : lookout::ScalingMode::log1p;
    config.mode = state.mode == "dictated" ? lookout::AnomalyMode::dictated
                                           : lookout::AnomalyMode::detected;
}

std::string pair_name(const lookout::PairPlotId& plot) {
    const auto& names = lookout::FeatureMatrix::feature_names();
    return std::string(names[static_cast<std::size_t>(plot.feature_x)]) + "|" +
           std::string(names[static_cast<std::size_t>(plot.feature_y)]);
}

void print_explain_summary(const lookout::ExplainOutcome& outcome) {
    const auto& report = outcome.report;
    std::cout << outcome.anomaly_ids.size() << " anomalies, budget " << report.budget
              << ", objective " << report.objective << "\n";
    std::cout << "incrimination " << report.incrimination << " (ideal "
              << report.incrimination_ideal << ")\n";
    for (std::size_t j = 0; j < outcome.selection.selected.size(); ++j) {
        std::cout << " " << (j + 1) << ". " << pair_name(outcome.selection.selected[j])
                  << " owns";
        const auto& owners = outcome.report.plots[j].owners;
        if (owners.empty()) std::cout << " (nothing)";
        for (const auto& owner : owners) std::cout << " " << owner.id;
        std::cout << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pair-plot explanations for anomalies in time-evolving graphs"};
    app.require_subcommand(1);

    lookout::RunConfig config;
    FlagState state;

    auto* detect = app.add_subcommand("detect", "rank nodes by isolation-forest anomaly score");
    add_graph_flags(detect, config, state);
    add_forest_flags(detect, config, state);
    detect->add_option("--top-k", config.top_k, "ranking rows to keep")->capture_default_str();
    detect->add_option("--out", config.out_dir, "directory for ranking.csv");
    detect->add_option("--features-out", config.features_out, "write the feature table here");

    auto* explain =
        app.add_subcommand("explain", "select the pair plots that best explain the anomalies");
    add_graph_flags(explain, config, state);
    add_forest_flags(explain, config, state);
    explain->add_option("--anomalies", config.anomalies_path, "anomaly id file, one per line");
    auto* mode_opt = explain->add_option("--mode", state.mode, "anomaly source")
                         ->check(CLI::IsMember({"detected", "dictated"}))
                         ->capture_default_str();
    explain->add_option("--top-k", config.top_k, "detected anomalies to explain")
        ->capture_default_str();
    explain->add_option("--budget", config.budget, "plots to select")->capture_default_str();
    explain->add_option("--out", config.out_dir, "directory for report.json, sweep.csv and SVGs");
    explain->add_option("--features-out", config.features_out, "write the feature table here");
    explain->add_option("--scores-out", config.scores_out, "write the score matrix here");

    std::vector<long long> sizes{10000, 100000, 1000000};
    int bench_k = 50;
    bool ksweep = false;
    auto* bench = app.add_subcommand("bench", "time the pipeline stages on synthetic graphs");
    add_forest_flags(bench, config, state);
    bench->add_option("--sizes", sizes, "edge counts to benchmark")->capture_default_str();
    bench->add_option("--top-k", bench_k, "planted anomalies per graph")->capture_default_str();
    bench->add_option("--budget", config.budget, "plots to select")->capture_default_str();
    bench->add_option("--out", config.out_dir, "directory for bench.csv");
    bench->add_option("--delimiter", state.delimiter, "field delimiter for tables")
        ->capture_default_str();
    bench->add_flag("--ksweep", ksweep,
                    "also sweep anomaly counts 10..100 at the smallest size");

    lookout::SyntheticSpec synth;
    synth.burst_nodes = 5;
    synth.fanout_nodes = 5;
    std::string synth_output;
    std::string planted_out;
    auto* generate = app.add_subcommand("generate", "write a synthetic t-graph edge file");
    generate->add_option("--nodes", synth.nodes, "background node count")->capture_default_str();
    generate->add_option("--edges", synth.edges, "total edge count")->capture_default_str();
    generate->add_option("--burst", synth.burst_nodes, "planted burst anomalies")
        ->capture_default_str();
    generate->add_option("--fanout", synth.fanout_nodes, "planted fanout anomalies")
        ->capture_default_str();
    generate->add_option("--seed", synth.seed, "random seed")->capture_default_str();
    generate->add_option("--output", synth_output, "edge file path (default: standard output)");
    generate->add_option("--planted-out", planted_out, "write planted anomaly ids here");
    generate->add_option("--delimiter", state.delimiter, "field delimiter")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        finish_flags(state, config);

        if (detect->parsed()) {
            lookout::DetectOutcome outcome = lookout::run_detect(config, std::cerr);
            lookout::write_ranking(std::cout, outcome.result.ranking, outcome.node_ids,
                                   config.top_k, config.delimiter);
        } else if (explain->parsed()) {
            if (mode_opt->count() == 0 && !config.anomalies_path.empty())
                config.mode = lookout::AnomalyMode::dictated;
            if (config.out_dir.empty())
                std::cerr << "note: no --out directory; report and plots are not written\n";
            lookout::ExplainOutcome outcome = lookout::run_explain(config, std::cerr);
            print_explain_summary(outcome);
        } else if (bench->parsed()) {
            config.top_k = bench_k;
            lookout::run_bench(config, sizes, std::cerr);
            if (ksweep) {
                std::vector<int> ks(10);
                std::iota(ks.begin(), ks.end(), 1);
                for (int& k : ks) k *= 10;
                lookout::run_ksweep(config, sizes.front(), ks, std::cerr);
            }
        } else if (generate->parsed()) {
            synth.delimiter = config.delimiter;
            lookout::SyntheticResult planted;
            if (synth_output.empty()) {
                planted = lookout::generate_synthetic(std::cout, synth);
            } else {
                std::ofstream out(synth_output, std::ios::binary);
                if (!out) throw lookout::DataError("cannot open for writing: " + synth_output);
                planted = lookout::generate_synthetic(out, synth);
                if (!out.flush()) throw lookout::DataError("write failed: " + synth_output);
                std::cerr << "wrote " << synth_output << "\n";
            }
            std::vector<std::string> ids = planted.planted();
            if (!planted_out.empty()) {
                std::string listing;
                for (const std::string& id : ids) listing += id + "\n";
                lookout::write_text_file(planted_out, listing);
                std::cerr << "wrote " << planted_out << "\n";
            }
            std::cerr << "planted:";
            for (const std::string& id : ids) std::cerr << " " << id;
            std::cerr << "\n";
        }
        return 0;
    } catch (const lookout::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const lookout::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
