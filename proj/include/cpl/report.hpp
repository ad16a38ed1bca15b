#pragma once

#include "cpl/rate.hpp"

namespace cpl {

// Writes one CSV and one SVG per rate table plus a summary.txt into out_dir.
// Output is byte-stable for identical inputs; files are written atomically.
void emit_report(const ExperimentReport& report, const std::string& out_dir);

std::string rate_table_csv(const RateTable& table);
RateTable read_rate_table_csv(const std::string& path);

// Self-contained log-log SVG line chart of the positive entries.
std::string rate_table_svg(const RateTable& table);

std::string summary_text(const ExperimentReport& report);

}  // namespace cpl
