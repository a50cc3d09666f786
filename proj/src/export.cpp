#include "lookout/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "lookout/errors.hpp"

namespace lookout {

namespace {

std::string fmt(const char* pattern, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, value);
    return buf;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    double pix_lo = 0.0;
    double pix_hi = 0.0;

    double map(double v) const {
        if (hi <= lo) return 0.5 * (pix_lo + pix_hi);
        return pix_lo + (v - lo) / (hi - lo) * (pix_hi - pix_lo);
    }
};

void append_marker(std::string& svg, const char* cls, double cx, double cy, const char* radius,
                   const char* fill) {
    svg += "<circle class=\"";
    svg += cls;
    svg += "\" cx=\"" + fmt("%.2f", cx) + "\" cy=\"" + fmt("%.2f", cy) + "\" r=\"";
    svg += radius;
    svg += "\" fill=\"";
    svg += fill;
    svg += "\"/>\n";
}

} // namespace

std::string render_plot(const FeatureMatrix& features, const std::vector<int>& anomalies,
                        const PairPlotId& plot, const std::vector<int>& owned,
                        const std::vector<std::string>& node_ids,
                        const PlotRenderOptions& options) {
    const int n = static_cast<int>(features.values.rows());
    Eigen::VectorXd xs = features.values.col(plot.feature_x);
    Eigen::VectorXd ys = features.values.col(plot.feature_y);
    if (options.scale == ScalingMode::log1p) {
        xs = xs.unaryExpr([](double v) { return std::log1p(v); });
        ys = ys.unaryExpr([](double v) { return std::log1p(v); });
    }

    const double w = options.width;
    const double h = options.height;
    Axis ax{xs.minCoeff(), xs.maxCoeff(), 56.0, w - 16.0};
    Axis ay{ys.minCoeff(), ys.maxCoeff(), h - 44.0, 16.0};

    const auto& names = FeatureMatrix::feature_names();
    std::string suffix = options.scale == ScalingMode::log1p ? " (log1p)" : "";
    std::string label_x = std::string(names[static_cast<std::size_t>(plot.feature_x)]) + suffix;
    std::string label_y = std::string(names[static_cast<std::size_t>(plot.feature_y)]) + suffix;

    std::string svg;
    svg.reserve(1024 + static_cast<std::size_t>(n) * 72);
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", w) + "\" height=\"" +
           fmt("%.0f", h) + "\" viewBox=\"0 0 " + fmt("%.0f", w) + " " + fmt("%.0f", h) + "\">\n";
    svg += "<rect width=\"" + fmt("%.0f", w) + "\" height=\"" + fmt("%.0f", h) +
           "\" fill=\"#ffffff\"/>\n";
    svg += "<rect x=\"56\" y=\"16\" width=\"" + fmt("%.0f", w - 72.0) + "\" height=\"" +
           fmt("%.0f", h - 60.0) + "\" fill=\"none\" stroke=\"#333333\"/>\n";

    svg += "<text x=\"" + fmt("%.2f", 0.5 * (ax.pix_lo + ax.pix_hi)) + "\" y=\"" +
           fmt("%.0f", h - 8.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\"#333333\">" +
           xml_escape(label_x) + "</text>\n";
    const std::string ymid = fmt("%.2f", 0.5 * (ay.pix_lo + ay.pix_hi));
    svg += "<text x=\"14\" y=\"" + ymid + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           ymid +
           ")\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">" +
           xml_escape(label_y) + "</text>\n";

    // Range ticks at the box corners, in the plotted (possibly scaled) space.
    svg += "<text x=\"56\" y=\"" + fmt("%.0f", h - 28.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\" "
           "fill=\"#666666\">" +
           fmt("%.3g", ax.lo) + "</text>\n";
    svg += "<text x=\"" + fmt("%.0f", w - 16.0) + "\" y=\"" + fmt("%.0f", h - 28.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\" "
           "fill=\"#666666\">" +
           fmt("%.3g", ax.hi) + "</text>\n";
    svg += "<text x=\"52\" y=\"" + fmt("%.0f", h - 44.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" "
           "fill=\"#666666\">" +
           fmt("%.3g", ay.lo) + "</text>\n";
    svg += "<text x=\"52\" y=\"20\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"10\" fill=\"#666666\">" +
           fmt("%.3g", ay.hi) + "</text>\n";

    std::unordered_set<int> anomaly_rows(anomalies.begin(), anomalies.end());
    std::unordered_set<int> owned_rows(owned.begin(), owned.end());

    for (int i = 0; i < n; ++i) {
        if (anomaly_rows.count(i)) continue;
        append_marker(svg, "pt-normal", ax.map(xs[i]), ay.map(ys[i]), "2", "#9aa0a6");
    }
    for (int row : anomalies) {
        if (owned_rows.count(row)) continue;
        append_marker(svg, "pt-anomaly", ax.map(xs[row]), ay.map(ys[row]), "3", "#1f77b4");
    }
    for (int row : owned) {
        const double cx = ax.map(xs[row]);
        const double cy = ay.map(ys[row]);
        append_marker(svg, "pt-owned", cx, cy, "3.5", "#d62728");
        svg += "<text class=\"pt-label\" x=\"" + fmt("%.2f", cx + 5.0) + "\" y=\"" +
               fmt("%.2f", cy - 5.0) +
               "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#d62728\">" +
               xml_escape(node_ids[static_cast<std::size_t>(row)]) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

std::string plot_file_name(int rank, const PairPlotId& plot) {
    const auto& names = FeatureMatrix::feature_names();
    return "plot_" + std::to_string(rank) + "_" +
           std::string(names[static_cast<std::size_t>(plot.feature_x)]) + "_" +
           std::string(names[static_cast<std::size_t>(plot.feature_y)]) + ".svg";
}

namespace {

std::string json_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

} // namespace

std::string report_to_json(const ExplanationReport& report) {
    std::string out;
    out.reserve(1024);
    out += "{\n";
    out += "  \"budget\": " + std::to_string(report.budget) + ",\n";

    out += "  \"config\": {\n";
    out += "    \"delimiter\": \"" + json_escape(std::string(1, report.config.delimiter)) + "\",\n";
    out += "    \"mode\": \"" + json_escape(report.config.mode) + "\",\n";
    out += "    \"sample\": " + std::to_string(report.config.sample) + ",\n";
    out += "    \"scale\": \"" + json_escape(report.config.scale) + "\",\n";
    out += "    \"seed\": " + std::to_string(report.config.seed) + ",\n";
    out += "    \"top_k\": " + std::to_string(report.config.top_k) + ",\n";
    out += "    \"trees\": " + std::to_string(report.config.trees) + "\n";
    out += "  },\n";

    out += "  \"incrimination\": " + json_number(report.incrimination) + ",\n";
    out += "  \"incrimination_ideal\": " + json_number(report.incrimination_ideal) + ",\n";
    out += "  \"objective\": " + json_number(report.objective) + ",\n";

    out += "  \"plots\": [";
    for (std::size_t p = 0; p < report.plots.size(); ++p) {
        const ReportPlot& plot = report.plots[p];
        out += p == 0 ? "\n" : ",\n";
        out += "    {\n";
        out += "      \"feature_x\": \"" + json_escape(plot.feature_x) + "\",\n";
        out += "      \"feature_y\": \"" + json_escape(plot.feature_y) + "\",\n";
        out += "      \"owners\": [";
        for (std::size_t o = 0; o < plot.owners.size(); ++o) {
            out += o == 0 ? "\n" : ",\n";
            out += "        {\n";
            out += "          \"id\": \"" + json_escape(plot.owners[o].id) + "\",\n";
            out += "          \"score\": " + json_number(plot.owners[o].score) + "\n";
            out += "        }";
        }
        out += plot.owners.empty() ? "],\n" : "\n      ],\n";
        out += "      \"rank\": " + std::to_string(plot.rank) + "\n";
        out += "    }";
    }
    out += report.plots.empty() ? "]\n" : "\n  ]\n";
    out += "}\n";
    return out;
}

void write_feature_table(std::ostream& out, const FeatureMatrix& features,
                         const std::vector<std::string>& node_ids, char delimiter) {
    out << "node";
    for (const auto& name : FeatureMatrix::feature_names()) out << delimiter << name;
    out << '\n';
    char buf[64];
    for (int i = 0; i < features.rows(); ++i) {
        out << node_ids[static_cast<std::size_t>(i)];
        for (int c = 0; c < kFeatureCount; ++c) {
            std::snprintf(buf, sizeof(buf), "%.9g", features.values(i, c));
            out << delimiter << buf;
        }
        out << '\n';
    }
}

void write_score_table(std::ostream& out, const ScoreMatrix& scores,
                       const std::vector<std::string>& anomaly_ids, char delimiter) {
    const auto& names = FeatureMatrix::feature_names();
    out << "anomaly";
    for (const PairPlotId& plot : scores.plot_order) {
        out << delimiter << names[static_cast<std::size_t>(plot.feature_x)] << '|'
            << names[static_cast<std::size_t>(plot.feature_y)];
    }
    out << '\n';
    char buf[64];
    for (int i = 0; i < scores.k(); ++i) {
        out << anomaly_ids[static_cast<std::size_t>(i)];
        for (int j = 0; j < scores.l(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.9g", scores.scores(i, j));
            out << delimiter << buf;
        }
        out << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw DataError("write failed: " + path);
}

} // namespace lookout
