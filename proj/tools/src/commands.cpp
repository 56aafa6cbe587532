#include "commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>

#include "model_file.hpp"
#include "report_csv.hpp"
#include "rnm/cpt_generator.hpp"
#include "rnm/rng.hpp"
#include "rnm/version.hpp"

namespace rnm::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 1;
  fs::path output_dir = ".";
  double time_budget = 0.0;  // seconds, 0 = unlimited
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << content;
  file.close();
  if (!file) throw OutputError(fmt::format("cannot write '{}'", path.string()));
}

StopPredicate make_stop(const GlobalOptions& g) {
  if (g.time_budget <= 0.0) return {};
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                             std::chrono::duration<double>(g.time_budget));
  return [deadline] { return std::chrono::steady_clock::now() >= deadline; };
}

json grid_json(const VarianceGrid& grid) {
  json ceilings = json::object();
  for (const auto& [m, c] : grid.ceiling_by_m) ceilings[std::to_string(m)] = c;
  return {{"floor", grid.floor}, {"ceiling", grid.ceiling}, {"points", grid.points},
          {"ceiling_by_m", ceilings}};
}

void write_manifest(const GlobalOptions& g, std::string_view command, json parameters,
                    const std::vector<std::string>& files, bool complete) {
  json manifest = {
      {"tool", "rnm"},
      {"version", std::string(kVersion)},
      {"command", std::string(command)},
      {"seed", g.seed},
      {"rng", std::string(kRngAlgorithm)},
      {"threads", g.threads},
      {"parameters", std::move(parameters)},
      {"files", files},
      {"complete", complete},
  };
  write_file(g.output_dir / "manifest.json", manifest.dump(2) + "\n");
}

int finish(const GlobalOptions& g, std::string_view command, json parameters,
           const std::vector<std::string>& files, bool complete, std::ostream& err) {
  write_manifest(g, command, std::move(parameters), files, complete);
  if (complete) return kExitOk;
  fmt::print(err, "time budget of {} s exhausted; partial results written\n", g.time_budget);
  return kExitResource;
}

// --- subcommands --------------------------------------------------------------

struct GenCptOptions {
  std::string model;
  std::string output;
};

int gen_cpt(const GlobalOptions& g, const GenCptOptions& o, std::ostream& out) {
  const auto model = read_model_file(o.model);
  const auto cpt = generate_cpt(model.spec, model.fragment, model.params, {g.threads});
  const fs::path path = o.output.empty() ? g.output_dir / "cpt.csv" : fs::path(o.output);
  write_file(path, cpt_csv(cpt));
  fmt::print(out, "{} rows written to {}\n", cpt.size(), path.string());
  return kExitOk;
}

struct CheckPropsOptions {
  int trials = 1000;
  bool mutate = false;
};

int check_props(const GlobalOptions& g, const CheckPropsOptions& o, std::ostream& out) {
  const auto report = run_property_suite({o.trials, g.seed, g.threads, o.mutate});
  write_file(g.output_dir / "counterexamples.csv", counterexamples_csv(report));
  write_manifest(g, "check-props", {{"trials", o.trials}, {"mutate_for_test", o.mutate}},
                 {"counterexamples.csv"}, true);
  fmt::print(out, "{} trials, {} counterexamples\n", report.trials, report.counterexamples.size());
  return report.counterexamples.empty() ? kExitOk : kExitPropertyFailure;
}

struct CurveOptions {
  std::vector<int> m_values = {3, 4, 5, 6, 7, 8, 9, 10, 20};
  VarianceGrid grid;
};

int fig2(const GlobalOptions& g, const CurveOptions& o, std::ostream& out, std::ostream& err) {
  const auto report = run_fig2({o.m_values, o.grid, g.threads}, make_stop(g));
  write_file(g.output_dir / "fig2.csv", fig2_csv(report));
  double max_ub = 0.0;
  double max_rnm = 0.0;
  for (const auto& r : report.rows) {
    max_ub = std::max(max_ub, r.d_ub);
    max_rnm = std::max({max_rnm, r.d_rnm5, r.d_rnm10});
  }
  fmt::print(out, "{} rows; max D_ub {:.4g}, max D_RNM {:.4g}\n", report.rows.size(), max_ub, max_rnm);
  return finish(g, "fig2", {{"m_values", o.m_values}, {"grid", grid_json(o.grid)}}, {"fig2.csv"},
                report.complete, err);
}

struct Table1Options {
  int replications = 1000;
  std::string ceiling = "quarter";
  int sample_size = 5;
};

int table1(const GlobalOptions& g, const Table1Options& o, std::ostream& out, std::ostream& err) {
  WeightUpdateConfig config;
  config.replications = o.replications;
  config.seed = g.seed;
  config.ceiling = o.ceiling == "full" ? VarianceCeiling::full : VarianceCeiling::quarter;
  config.sample_size = o.sample_size;
  config.threads = g.threads;
  const auto report = run_weight_update(config, make_stop(g));
  write_file(g.output_dir / "table1.csv", table1_csv(report));
  fmt::print(out, "N = {}: e1_bar {:.4g}, e2_bar {:.4g}, e1_hat {:.4g}, e2_hat {:.4g}\n",
             report.records.size(), report.mean_e1, report.mean_e2, report.max_e1, report.max_e2);
  return finish(g, "table1",
                {{"replications", o.replications},
                 {"variance_ceiling", o.ceiling},
                 {"variance_floor", config.variance_floor},
                 {"sample_size", o.sample_size}},
                {"table1.csv"}, report.complete, err);
}

struct Fig3Options {
  CurveOptions curves;
  std::vector<int> sample_sizes = {3, 5, 10};
  int parents = 4;
};

int fig3(const GlobalOptions& g, const Fig3Options& o, std::ostream& out, std::ostream& err) {
  const auto report =
      run_fig3({o.curves.m_values, o.sample_sizes, o.curves.grid, o.parents, g.threads}, make_stop(g));
  write_file(g.output_dir / "fig3.csv", fig3_csv(report));
  write_file(g.output_dir / "fig3_roots.csv", fig3_roots_csv(report));
  fmt::print(out, "{} roots, {} rows\n", report.roots.size(), report.rows.size());
  return finish(g, "fig3",
                {{"m_values", o.curves.m_values},
                 {"sample_sizes", o.sample_sizes},
                 {"parents", o.parents},
                 {"grid", grid_json(o.curves.grid)}},
                {"fig3.csv", "fig3_roots.csv"}, report.complete, err);
}

struct BisectOptions {
  int j = 1;
  int n = 4;
  int m = 5;
  int k = 4;
  double variance = 0.01;
  int sample_size = 3;
};

int bisect(const BisectOptions& o, std::ostream& out, std::ostream& err) {
  try {
    fmt::print(out, "{}", bisection_csv(bisect_wmax(o.j, o.n, o.m, o.k, o.variance, o.sample_size)));
    return kExitOk;
  } catch (const RootNotFound& e) {
    fmt::print(err, "{}\n{}", e.what(), profile_csv(e.profile()));
    return kExitValidation;
  }
}

void add_curve_options(CLI::App* sub, CurveOptions& o) {
  sub->add_option("--m", o.m_values, "State counts")->delimiter(',');
  sub->add_option("--points", o.grid.points, "Variance grid points")->check(CLI::PositiveNumber);
  sub->add_option("--variance-floor", o.grid.floor, "Grid lower end (excluded)");
  sub->add_option("--variance-ceiling", o.grid.ceiling, "Grid upper end");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ranked nodes method: CPT generation and numerical studies", "rnm"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", g.output_dir, "Directory for CSV and manifest output");
  app.add_option("--time-budget", g.time_budget, "Stop after this many seconds (0: no limit)")
      ->check(CLI::NonNegativeNumber);

  std::function<int()> action;

  GenCptOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-cpt", "Generate the CPT of a model file");
  gen_cmd->add_option("model", gen.model, "Model file")->required();
  gen_cmd->add_option("-o,--output", gen.output, "CSV path (default <output-dir>/cpt.csv)");
  gen_cmd->callback([&] { action = [&] { return gen_cpt(g, gen, out); }; });

  CheckPropsOptions props;
  auto* props_cmd = app.add_subcommand("check-props", "Run the randomized property suites");
  props_cmd->add_option("--trials", props.trials, "Random tuples per suite")->check(CLI::PositiveNumber);
  props_cmd->add_flag("--mutate-for-test", props.mutate, "Corrupt each distribution to test the harness");
  props_cmd->callback([&] { action = [&] { return check_props(g, props, out); }; });

  CurveOptions fig2_opts;
  auto* fig2_cmd = app.add_subcommand("fig2", "D_ub and D_RNM curves under WMEAN");
  add_curve_options(fig2_cmd, fig2_opts);
  fig2_cmd->callback([&] { action = [&] { return fig2(g, fig2_opts, out, err); }; });

  Table1Options t1;
  auto* t1_cmd = app.add_subcommand("table1", "Weight-update robustness experiment");
  t1_cmd->add_option("--n-reps", t1.replications, "Replications")->check(CLI::PositiveNumber);
  t1_cmd->add_option("--variance-ceiling", t1.ceiling, "Upper variance bound: quarter = 1/(4m^2), full = 1/m^2")
      ->check(CLI::IsMember({"quarter", "full"}));
  t1_cmd->add_option("--sample-size", t1.sample_size, "Sample size s")->check(CLI::Range(2, 1000));
  t1_cmd->callback([&] { action = [&] { return table1(g, t1, out, err); }; });

  Fig3Options f3;
  f3.curves.m_values = {3, 4, 5, 6, 7, 8, 9, 10, 20};
  auto* f3_cmd = app.add_subcommand("fig3", "D_1 curves under MIXMINMAX");
  add_curve_options(f3_cmd, f3.curves);
  f3_cmd->add_option("--s", f3.sample_sizes, "Sample sizes")->delimiter(',');
  f3_cmd->add_option("--parents", f3.parents, "Parent count n")->check(CLI::PositiveNumber);
  f3_cmd->callback([&] { action = [&] { return fig3(g, f3, out, err); }; });

  BisectOptions b;
  auto* b_cmd = app.add_subcommand("bisect-wmax", "Solve the MIXMINMAX weight for a probability tie");
  b_cmd->add_option("--j", b.j, "1: P(k) = P(k+1), 2: P(k-1) = P(k+1)")->check(CLI::Range(1, 2));
  b_cmd->add_option("--n", b.n, "Parent count");
  b_cmd->add_option("--m", b.m, "State count");
  b_cmd->add_option("--k", b.k, "Child state k");
  b_cmd->add_option("--variance", b.variance, "Variance");
  b_cmd->add_option("--sample-size", b.sample_size, "Sample size s");
  b_cmd->callback([&] { action = [&] { return bisect(b, out, err); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    return action();
  } catch (const ValidationError& e) {
    fmt::print(err, "invalid weights: {}\n", e.what());
    return kExitValidation;
  } catch (const ResourceError& e) {
    fmt::print(err, "resource limit: {}\n", e.what());
    return kExitResource;
  } catch (const OutputError& e) {
    fmt::print(err, "{}\n", e.what());
    return kExitResource;
  } catch (const fs::filesystem_error& e) {
    fmt::print(err, "{}\n", e.what());
    return kExitResource;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  }
}

}  // namespace rnm::cli
