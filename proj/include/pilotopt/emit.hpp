// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pilotopt/harness.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pilotopt {

enum class OutputFormat { Csv, Json, Svg };

OutputFormat parse_format(const std::string& name);

inline constexpr const char* kSweepCsvHeader = "snr_db,n,algorithm,wsmse_analytic,wsmse_empirical,stderr,trials,sweeps";
inline constexpr const char* kConvergenceCsvHeader = "init,update_index,objective";

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& is);
void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows);
// One polyline per (algorithm, N), WSMSE against SNR on a log axis.
void write_sweep_svg(std::ostream& os, const std::vector<SweepRow>& rows, const std::string& title);

// update_index 0 is the starting objective.
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceSeries>& series);
void write_convergence_json(std::ostream& os, const std::vector<ConvergenceSeries>& series);
void write_convergence_svg(std::ostream& os, const std::vector<ConvergenceSeries>& series, const std::string& title);

struct ChartSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_svg_chart(std::ostream& os, const std::vector<ChartSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label, bool log_y);

void emit_sweep(const std::string& path, OutputFormat format, const std::vector<SweepRow>& rows,
                const std::string& title);
void emit_convergence(const std::string& path, OutputFormat format, const std::vector<ConvergenceSeries>& series,
                      const std::string& title);

} // namespace pilotopt
