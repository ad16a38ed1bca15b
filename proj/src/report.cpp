#include "cpl/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpl/io.hpp"

namespace cpl {

std::string rate_table_csv(const RateTable& table) {
  std::string out = "parameter,distance,mode,error_bound\n";
  for (const auto& e : table.entries) {
    out += format_double(e.parameter);
    out += ',';
    out += format_double(e.distance);
    out += ',';
    out += to_string(e.mode);
    out += ',';
    out += format_double(e.error_bound);
    out += '\n';
  }
  return out;
}

RateTable read_rate_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "parameter,distance,mode,error_bound")
    throw io_error("bad rate table header in " + path);
  RateTable table;
  table.id = std::filesystem::path(path).stem().string();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f1, f2, f3, f4;
    if (!std::getline(ls, f1, ',') || !std::getline(ls, f2, ',') ||
        !std::getline(ls, f3, ',') || !std::getline(ls, f4))
      throw io_error("bad rate table row in " + path);
    table.entries.push_back({parse_double(f1), parse_double(f2),
                             provenance_from_string(f3), parse_double(f4)});
  }
  return table;
}

std::string rate_table_svg(const RateTable& table) {
  constexpr int W = 640, H = 480, ML = 60, MR = 20, MT = 20, MB = 40;
  std::vector<std::pair<double, double>> pts;  // (log10 x, log10 y)
  for (const auto& e : table.entries)
    if (e.parameter > 0.0 && e.distance > 0.0)
      pts.emplace_back(std::log10(e.parameter), std::log10(e.distance));

  std::string svg =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
      "viewBox=\"0 0 640 480\">\n"
      "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<text x=\"10\" y=\"14\" font-size=\"12\" font-family=\"monospace\">" +
         table.id + " (log-log)</text>\n";
  // Axes box
  svg += "<rect x=\"" + std::to_string(ML) + "\" y=\"" + std::to_string(MT) +
         "\" width=\"" + std::to_string(W - ML - MR) + "\" height=\"" +
         std::to_string(H - MT - MB) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  if (pts.size() >= 2) {
    double x0 = pts[0].first, x1 = pts[0].first;
    double y0 = pts[0].second, y1 = pts[0].second;
    for (const auto& p : pts) {
      x0 = std::min(x0, p.first);
      x1 = std::max(x1, p.first);
      y0 = std::min(y0, p.second);
      y1 = std::max(y1, p.second);
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
    if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
    auto sx = [&](double lx) {
      return ML + (lx - x0) / (x1 - x0) * (W - ML - MR);
    };
    auto sy = [&](double ly) {
      return H - MB - (ly - y0) / (y1 - y0) * (H - MT - MB);
    };
    std::string path;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      path += (i == 0 ? "M" : " L");
      path += format_double(std::round(sx(pts[i].first) * 100.0) / 100.0);
      path += ' ';
      path += format_double(std::round(sy(pts[i].second) * 100.0) / 100.0);
    }
    svg += "<path d=\"" + path +
           "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
    for (const auto& p : pts) {
      svg += "<circle cx=\"" +
             format_double(std::round(sx(p.first) * 100.0) / 100.0) +
             "\" cy=\"" +
             format_double(std::round(sy(p.second) * 100.0) / 100.0) +
             "\" r=\"2.5\" fill=\"steelblue\"/>\n";
    }
    svg += "<text x=\"" + std::to_string(ML) + "\" y=\"" +
           std::to_string(H - 10) + "\" font-size=\"10\" "
           "font-family=\"monospace\">log10 parameter in [" +
           format_double(x0) + ", " + format_double(x1) + "]</text>\n";
    svg += "<text x=\"10\" y=\"" + std::to_string(H / 2) +
           "\" font-size=\"10\" font-family=\"monospace\" "
           "transform=\"rotate(-90 10," + std::to_string(H / 2) +
           ")\">log10 distance in [" + format_double(y0) + ", " +
           format_double(y1) + "]</text>\n";
  } else {
    svg += "<text x=\"60\" y=\"240\" font-size=\"12\" "
           "font-family=\"monospace\">fewer than 2 positive points</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string summary_text(const ExperimentReport& report) {
  std::string out;
  out += "experiment: " + report.id + "\n";
  out += "seed: " + std::to_string(report.seed) + "\n";
  out += "tol: " + format_double(report.tol) + "\n";
  out += "verdict: " + to_string(report.verdict) + "\n";
  for (const auto& [id, fit] : report.fits) {
    out += "fit " + id + ": slope=" + format_double(fit.slope) +
           " intercept=" + format_double(fit.intercept) +
           " r2=" + format_double(fit.r_squared) +
           " excluded_zeros=" + std::to_string(fit.excluded_zeros) + "\n";
  }
  for (const auto& t : report.tables) {
    out += "table " + t.id + ": " + std::to_string(t.entries.size()) +
           " entries (family " + t.family_id + ")\n";
  }
  for (const auto& n : report.notes) out += n + "\n";
  return out;
}

void emit_report(const ExperimentReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (const auto& t : report.tables) {
    write_file_atomic((fs::path(out_dir) / (t.id + ".csv")).string(),
                      rate_table_csv(t));
    write_file_atomic((fs::path(out_dir) / (t.id + ".svg")).string(),
                      rate_table_svg(t));
  }
  write_file_atomic((fs::path(out_dir) / "summary.txt").string(),
                    summary_text(report));
}

}  // namespace cpl
