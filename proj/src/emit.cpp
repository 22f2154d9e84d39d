// SPDX-License-Identifier: Apache-2.0
#include "pilotopt/emit.hpp"

#include "pilotopt/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace pilotopt {

namespace {

std::string fmt_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::optional<double> parse_optional(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    return os;
}

} // namespace

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    if (name == "svg") return OutputFormat::Svg;
    throw ConfigError("unknown format '" + name + "' (expected csv, json or svg)");
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << '\n';
    for (const SweepRow& r : rows) {
        os << fmt_number(r.snr_db) << ',' << r.n << ',' << r.algorithm << ',' << fmt_number(r.wsmse_analytic) << ','
           << (r.wsmse_empirical ? fmt_number(*r.wsmse_empirical) : "") << ','
           << (r.std_error ? fmt_number(*r.std_error) : "") << ',' << r.trials << ','
           << (r.sweeps ? std::to_string(*r.sweeps) : "") << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kSweepCsvHeader) throw ConfigError("sweep CSV: unexpected header");
    std::vector<SweepRow> rows;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw ConfigError("sweep CSV: expected 8 fields in '" + line + "'");
        SweepRow r;
        r.snr_db = std::stod(f[0]);
        r.n = std::stoi(f[1]);
        r.algorithm = f[2];
        r.wsmse_analytic = std::stod(f[3]);
        r.wsmse_empirical = parse_optional(f[4]);
        r.std_error = parse_optional(f[5]);
        r.trials = static_cast<std::size_t>(std::stoull(f[6]));
        if (!f[7].empty()) r.sweeps = std::stoi(f[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows) {
    nlohmann::json doc = nlohmann::json::array();
    for (const SweepRow& r : rows) {
        nlohmann::json j;
        j["snr_db"] = r.snr_db;
        j["n"] = r.n;
        j["algorithm"] = r.algorithm;
        j["wsmse_analytic"] = r.wsmse_analytic;
        j["wsmse_empirical"] = r.wsmse_empirical ? nlohmann::json(*r.wsmse_empirical) : nlohmann::json();
        j["stderr"] = r.std_error ? nlohmann::json(*r.std_error) : nlohmann::json();
        j["trials"] = r.trials;
        j["sweeps"] = r.sweeps ? nlohmann::json(*r.sweeps) : nlohmann::json();
        doc.push_back(std::move(j));
    }
    os << doc.dump(2) << '\n';
}

void write_sweep_svg(std::ostream& os, const std::vector<SweepRow>& rows, const std::string& title) {
    std::vector<ChartSeries> series;
    std::map<std::pair<std::string, int>, std::size_t> index;
    for (const SweepRow& r : rows) {
        const auto key = std::make_pair(r.algorithm, r.n);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, series.size()).first;
            series.push_back({r.algorithm + " N=" + std::to_string(r.n), {}, {}});
        }
        series[it->second].x.push_back(r.snr_db);
        series[it->second].y.push_back(r.wsmse_empirical.value_or(r.wsmse_analytic));
    }
    write_svg_chart(os, series, title, "SNR (dB)", "normalized WSMSE", true);
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceSeries>& series) {
    os << kConvergenceCsvHeader << '\n';
    for (const ConvergenceSeries& s : series) {
        const std::string label = to_string(s.init);
        os << label << ",0," << fmt_number(s.trace.initial_objective) << '\n';
        for (std::size_t i = 0; i < s.trace.objective_per_update.size(); ++i) {
            os << label << ',' << i + 1 << ',' << fmt_number(s.trace.objective_per_update[i]) << '\n';
        }
    }
}

void write_convergence_json(std::ostream& os, const std::vector<ConvergenceSeries>& series) {
    nlohmann::json doc = nlohmann::json::array();
    for (const ConvergenceSeries& s : series) {
        nlohmann::json j;
        j["snr_db"] = s.snr_db;
        j["init"] = to_string(s.init);
        j["initial_objective"] = s.trace.initial_objective;
        j["objective_per_update"] = s.trace.objective_per_update;
        j["sweeps_completed"] = s.trace.sweeps_completed;
        j["converged"] = s.trace.converged;
        j["degenerate_updates"] = s.trace.degenerate_updates;
        doc.push_back(std::move(j));
    }
    os << doc.dump(2) << '\n';
}

void write_convergence_svg(std::ostream& os, const std::vector<ConvergenceSeries>& series, const std::string& title) {
    std::vector<ChartSeries> chart;
    for (const ConvergenceSeries& s : series) {
        ChartSeries c{to_string(s.init) + " @ " + fmt_number(s.snr_db) + " dB", {0.0}, {s.trace.initial_objective}};
        for (std::size_t i = 0; i < s.trace.objective_per_update.size(); ++i) {
            c.x.push_back(static_cast<double>(i + 1));
            c.y.push_back(s.trace.objective_per_update[i]);
        }
        chart.push_back(std::move(c));
    }
    write_svg_chart(os, chart, title, "update index", "tr(A^-1)", true);
}

void write_svg_chart(std::ostream& os, const std::vector<ChartSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label, bool log_y) {
    constexpr double width = 720, height = 440;
    constexpr double left = 70, right = 200, top = 40, bottom = 50;
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (log_y && !(s.y[i] > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (log_y) {
        ymin = std::floor(ymin);
        ymax = std::ceil(ymax);
    }
    if (ymax == ymin) ymax = ymin + 1;

    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * plot_h; };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
       << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(title)
       << "</text>\n"
       << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    if (log_y) {
        for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); ++d) {
            const double y = top + (1.0 - (d - ymin) / (ymax - ymin)) * plot_h;
            os << "<line x1=\"" << left << "\" y1=\"" << fmt_coord(y) << "\" x2=\"" << left + plot_w << "\" y2=\""
               << fmt_coord(y) << "\" stroke=\"#dddddd\"/>\n"
               << "<text x=\"" << left - 6 << "\" y=\"" << fmt_coord(y + 4)
               << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d << "</text>\n";
        }
    }
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        os << "<text x=\"" << fmt_coord(px(xv)) << "\" y=\"" << top + plot_h + 16
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_number(xv)
           << "</text>\n";
    }
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(x_label)
       << "</text>\n"
       << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 16 " << top + plot_h / 2
       << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(y_label)
       << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* colour = palette[s % std::size(palette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (log_y && !(series[s].y[i] > 0.0)) continue;
            os << (first ? "" : " ") << fmt_coord(px(series[s].x[i])) << ',' << fmt_coord(py(series[s].y[i]));
            first = false;
        }
        os << "\"/>\n";
        const double ly = top + 14 + 16.0 * static_cast<double>(s);
        os << "<line x1=\"" << left + plot_w + 10 << "\" y1=\"" << fmt_coord(ly - 4) << "\" x2=\""
           << left + plot_w + 30 << "\" y2=\"" << fmt_coord(ly - 4) << "\" stroke=\"" << colour
           << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << left + plot_w + 34 << "\" y=\"" << fmt_coord(ly)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(series[s].label) << "</text>\n";
    }
    os << "</svg>\n";
}

void emit_sweep(const std::string& path, OutputFormat format, const std::vector<SweepRow>& rows,
                const std::string& title) {
    std::ofstream os = open_output(path);
    switch (format) {
    case OutputFormat::Csv: write_sweep_csv(os, rows); break;
    case OutputFormat::Json: write_sweep_json(os, rows); break;
    case OutputFormat::Svg: write_sweep_svg(os, rows, title); break;
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

void emit_convergence(const std::string& path, OutputFormat format, const std::vector<ConvergenceSeries>& series,
                      const std::string& title) {
    std::ofstream os = open_output(path);
    switch (format) {
    case OutputFormat::Csv: write_convergence_csv(os, series); break;
    case OutputFormat::Json: write_convergence_json(os, series); break;
    case OutputFormat::Svg: write_convergence_svg(os, series, title); break;
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

} // namespace pilotopt
