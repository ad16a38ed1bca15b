// Command-line front end: distribution operations, polyhedral distances,
// and the experiment harness. Exit status: 0 pass, 1 fail, 2 config error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpl/distribution.hpp"
#include "cpl/experiments.hpp"
#include "cpl/io.hpp"
#include "cpl/metric.hpp"
#include "cpl/report.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
  std::uint64_t seed = cpl::kDefaultSeed;
  std::string out = "out";
  double tol = 1e-12;
  int threads = 1;
  bool quick = false;
};

void write_output(const GlobalOpts& g, const std::string& name,
                  const std::string& content) {
  fs::create_directories(g.out);
  cpl::write_file_atomic((fs::path(g.out) / name).string(), content);
}

int run_dist(const std::string& action, const std::vector<std::string>& files,
             double alpha, double cp_tol, std::uint64_t n,
             const GlobalOpts& g) {
  auto f = cpl::load_distribution(files.at(0));
  std::string summary;
  if (action == "convolve") {
    auto h = cpl::load_distribution(files.at(1));
    auto r = cpl::convolve(f, h);
    write_output(g, "convolve.dist", cpl::emit_distribution(r));
    summary = "convolve: " + std::to_string(r.size()) + " atoms";
  } else if (action == "power") {
    auto r = cpl::power(f, n);
    write_output(g, "power.dist", cpl::emit_distribution(r));
    summary = "power " + std::to_string(n) + ": " + std::to_string(r.size()) +
              " atoms";
  } else if (action == "cp") {
    auto r = cpl::compound_poisson(alpha, f, cp_tol);
    write_output(g, "cp.dist", cpl::emit_distribution(r.dist));
    summary = "cp alpha=" + cpl::format_double(alpha) + ": " +
              std::to_string(r.dist.size()) +
              " atoms, error_bound=" + cpl::format_double(r.error_bound);
  } else {  // classcheck
    auto rep = cpl::class_check(f);
    summary = std::string("classcheck: symmetric=") +
              (rep.is_symmetric ? "yes" : "no");
    if (rep.is_symmetric)
      summary += " alpha_lower_bound=" +
                 cpl::format_double(rep.alpha_lower_bound) + " min_charfn=" +
                 cpl::format_double(rep.min_charfn_value);
    summary += " grid_points=" + std::to_string(rep.grid_points_checked);
  }
  write_output(g, action + ".txt", summary + "\n");
  std::cout << summary << "\n";
  return 0;
}

int run_rho(const std::string& mode, const std::string& file_a,
            const std::string& file_b, const std::string& directions_file,
            int m, const GlobalOpts& g) {
  auto a = cpl::load_distribution(file_a);
  auto b = cpl::load_distribution(file_b);
  auto compute = [&]() -> std::pair<cpl::DistanceCertificate, std::string> {
    if (mode == "kolmogorov") return {cpl::kolmogorov_rho(a, b), "exact"};
    if (mode == "fixed-directions") {
      auto poly = cpl::load_polyhedron(directions_file);
      std::vector<cpl::Point> dirs;
      for (const auto& hs : poly.halfspaces()) dirs.push_back(hs.direction);
      cpl::DirectionSet t(poly.dim(), dirs);
      cpl::FixedDirectionOptions opts;
      opts.seed = g.seed;
      auto cert = cpl::rho_fixed_directions(a, b, t, cpl::FixedMode::exact, opts);
      std::string name = cert.mode == cpl::CertMode::exact_fixed_directions
                             ? "exact"
                             : "lower-bound";
      return {cert, name};
    }
    cpl::SearchOptions opts;
    opts.seed = g.seed;
    return {cpl::rho_m_search(a, b, m, opts), "lower-bound"};
  };
  auto [cert, mode_name] = compute();
  std::string out = "value " + cpl::format_double(cert.value) + "\nmode " +
                    mode_name + "\n" + cpl::emit_polyhedron(cert.witness);
  write_output(g, "rho.txt", out);
  std::cout << out;
  return 0;
}

cpl::ExperimentReport run_one_experiment(const std::string& name,
                                         const std::string& family,
                                         const GlobalOpts& g) {
  cpl::HarnessConfig cfg;
  cfg.seed = g.seed;
  cfg.tol = g.tol;
  cfg.threads = g.threads;
  if (g.quick) cfg.n_grid = {8, 16, 32, 64, 128};
  if (name == "thm1") {
    cfg.family_id = family.empty() ? "lazy-rademacher" : family;
    return cpl::thm1_experiment(cpl::named_family(cfg.family_id), cfg);
  }
  if (name == "thm2") {
    std::vector<double> p_grid = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05};
    return cpl::thm2_experiment(p_grid, 500, cfg);
  }
  if (name == "thm3") {
    cfg.family_id = family.empty() ? "rademacher" : family;
    return cpl::thm3_experiment(cpl::named_family(cfg.family_id), cfg);
  }
  if (name == "thm4") {
    std::vector<std::uint64_t> grid;
    for (auto n : cfg.n_grid)
      if (n >= 16) grid.push_back(n);
    cfg.n_grid = grid;
    cpl::DirectionSet t(2, {{1.0, 0.0}, {0.0, 1.0}});
    return cpl::thm4_experiment(cpl::product2d_family(), t, {0.5, 1.5, 3.5},
                                cfg);
  }
  if (name == "thm5") {
    cfg.family_id = family.empty() ? "lazy-rademacher" : family;
    return cpl::thm5_experiment(cpl::named_family(cfg.family_id), cfg);
  }
  if (name == "highdim") return cpl::high_dim_experiment(cfg);
  throw cpl::invalid_input("unknown experiment: " + name);
}

int run_experiment(const std::string& name, const std::string& family,
                   const GlobalOpts& g) {
  std::vector<std::string> names;
  if (name == "all")
    names = {"thm1", "thm2", "thm3", "thm4", "thm5", "highdim"};
  else
    names = {name};
  cpl::Verdict worst = cpl::Verdict::pass;
  for (const auto& id : names) {
    auto report = run_one_experiment(id, family, g);
    cpl::emit_report(report, (fs::path(g.out) / id).string());
    std::cout << id << ": " << cpl::to_string(report.verdict) << "\n";
    if (report.verdict == cpl::Verdict::fail) worst = cpl::Verdict::fail;
  }
  return worst == cpl::Verdict::fail ? 1 : 0;
}

int run_report(const std::string& csv, const GlobalOpts& g) {
  auto table = cpl::read_rate_table_csv(csv);
  write_output(g, table.id + ".svg", cpl::rate_table_svg(table));
  std::string summary = "table " + table.id + ": " +
                        std::to_string(table.entries.size()) + " entries\n";
  try {
    auto fit = cpl::fit_slope(table);
    summary += "fit: slope=" + cpl::format_double(fit.slope) +
               " intercept=" + cpl::format_double(fit.intercept) +
               " r2=" + cpl::format_double(fit.r_squared) +
               " excluded_zeros=" + std::to_string(fit.excluded_zeros) + "\n";
  } catch (const cpl::invalid_input& e) {
    summary += std::string("fit: unavailable (") + e.what() + ")\n";
  }
  write_output(g, table.id + ".txt", summary);
  std::cout << summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compound Poisson laws, polyhedral distances, and rate experiments"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--seed", g.seed, "random seed (fixed default, reproducible)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--tol", g.tol, "numerical tolerance for truncations");
  app.add_option("--threads", g.threads, "worker thread cap for experiments");
  app.add_flag("--quick", g.quick, "reduced grids (n <= 128) for CI");

  auto* dist = app.add_subcommand("dist", "distribution operations");
  dist->fallthrough();
  std::string dist_action;
  std::vector<std::string> dist_files;
  double alpha = 1.0, cp_tol = 1e-10;
  std::uint64_t power_n = 0;
  dist->add_option("action", dist_action, "convolve | power | cp | classcheck")
      ->required()
      ->check(CLI::IsMember({"convolve", "power", "cp", "classcheck"}));
  dist->add_option("--alpha", alpha, "compound Poisson rate (cp)");
  dist->add_option("--cp-tol", cp_tol, "compound Poisson truncation tol (cp)");
  dist->add_option("--n", power_n, "convolution power exponent (power)");
  dist->add_option("files", dist_files, "distribution literal file(s)")
      ->required();

  auto* rho = app.add_subcommand("rho", "polyhedral distance between two laws");
  rho->fallthrough();
  std::string rho_mode, rho_a, rho_b, rho_dirs;
  int rho_m = 2;
  rho->add_option("mode", rho_mode, "kolmogorov | fixed-directions | search")
      ->required()
      ->check(CLI::IsMember({"kolmogorov", "fixed-directions", "search"}));
  rho->add_option("file_a", rho_a, "first distribution literal")->required();
  rho->add_option("file_b", rho_b, "second distribution literal")->required();
  rho->add_option("--directions", rho_dirs,
                  "polyhedron literal supplying the direction set");
  rho->add_option("--m", rho_m, "number of halfspaces (search)");

  auto* experiment = app.add_subcommand("experiment", "run a rate experiment");
  experiment->fallthrough();
  std::string exp_name, exp_family;
  experiment
      ->add_option("name", exp_name,
                   "thm1 | thm2 | thm3 | thm4 | thm5 | highdim | all")
      ->required()
      ->check(CLI::IsMember(
          {"thm1", "thm2", "thm3", "thm4", "thm5", "highdim", "all"}));
  experiment->add_option("--family", exp_family,
                         "input family (rademacher, lazy-rademacher, ...)");

  auto* report = app.add_subcommand("report", "re-render a rate-table CSV");
  report->fallthrough();
  std::string report_csv;
  report->add_option("csv", report_csv, "rate table CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (dist->parsed()) {
      if (dist_action == "convolve" && dist_files.size() != 2)
        throw cpl::invalid_input("convolve needs two input files");
      if (dist_action != "convolve" && dist_files.size() != 1)
        throw cpl::invalid_input(dist_action + " needs one input file");
      return run_dist(dist_action, dist_files, alpha, cp_tol, power_n, g);
    }
    if (rho->parsed()) {
      if (rho_mode == "fixed-directions" && rho_dirs.empty())
        throw cpl::invalid_input("fixed-directions needs --directions");
      return run_rho(rho_mode, rho_a, rho_b, rho_dirs, rho_m, g);
    }
    if (experiment->parsed()) return run_experiment(exp_name, exp_family, g);
    if (report->parsed()) return run_report(report_csv, g);
  } catch (const cpl::invalid_input& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const cpl::io_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const cpl::resource_limit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
