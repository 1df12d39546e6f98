// dcm: mine differentially correlated variable sets, or run the planted
// clique simulation study.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcm/data.hpp"
#include "dcm/error.hpp"
#include "dcm/parallel.hpp"
#include "dcm/report.hpp"
#include "dcm/search.hpp"
#include "dcm/sim.hpp"

namespace {

constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

struct MineOptions {
  std::string cond1, cond2, out, table;
  double alpha = 0.05;
  std::size_t init_size = 50, max_iter = 100, max_cliques = 10, restarts = 3;
  std::uint64_t seed = 1;
  int direction = 1;
  std::string delimiter;  // empty: by file extension
};

struct SimulateOptions {
  dcm::SimulationSpec spec;
  std::string grid = "0.2:0,0.3:0,0.4:0,0.5:0";
  std::string background = "uncorrelated";
  std::string out, report;
  double alpha = 0.05;
  std::size_t init_size = 50, max_iter = 100;
  bool no_fish = false;
  std::string delimiter = "tab";
};

char delimiter_char(const std::string& name) { return name == "comma" ? ',' : '\t'; }

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dcm::IoError("cannot write '" + path + "'");
  return out;
}

int run_mine(const MineOptions& opt) {
  dcm::Delimiter delim = dcm::Delimiter::Auto;
  if (opt.delimiter == "comma") delim = dcm::Delimiter::Comma;
  if (opt.delimiter == "tab") delim = dcm::Delimiter::Tab;

  dcm::DataMatrix first = dcm::ingest(opt.cond1, delim);
  dcm::DataMatrix second = dcm::align_to(first, dcm::ingest(opt.cond2, delim));
  if (opt.direction == 2) std::swap(first, second);
  const auto c1 = dcm::standardize(first);
  const auto c2 = dcm::standardize(second);

  dcm::MineConfig config;
  config.alpha = opt.alpha;
  config.max_iter = opt.max_iter;
  config.max_cliques = opt.max_cliques;
  config.init.init_size = std::min<std::size_t>(opt.init_size, c1.p());
  config.init.restarts = opt.restarts;
  config.init.rng_seed = opt.seed;
  const dcm::MiningRun run = dcm::mine(c1, c2, config);
  if (run.small_sample) {
    std::cerr << "warning: fewer than " << dcm::kSmallSampleWarning
              << " samples in a condition; p-values may be anticonservative\n";
  }

  const nlohmann::json echo{{"command", "mine"},
                            {"cond1", opt.cond1},
                            {"cond2", opt.cond2},
                            {"direction", opt.direction == 1 ? "cond1_higher" : "cond2_higher"},
                            {"alpha", opt.alpha},
                            {"init_size", config.init.init_size},
                            {"restarts", opt.restarts},
                            {"max_iter", opt.max_iter},
                            {"max_cliques", opt.max_cliques},
                            {"seed", opt.seed},
                            {"n1", c1.n()},
                            {"n2", c2.n()},
                            {"p", c1.p()}};
  const auto report = dcm::mining_report(run, c1.variable_names(), echo);
  const char table_delim = opt.delimiter == "comma" ? ',' : '\t';
  if (!opt.out.empty()) {
    auto out = open_output(opt.out);
    out << report.dump(2) << '\n';
  } else {
    std::cout << report.dump(2) << '\n';
  }
  if (!opt.table.empty()) {
    auto out = open_output(opt.table);
    dcm::write_mining_table(out, run, c1.variable_names(), table_delim);
  } else if (!opt.out.empty()) {
    dcm::write_mining_table(std::cout, run, c1.variable_names(), table_delim);
  }
  std::cerr << run.cliques.size() << " clique(s) found\n";
  return 0;
}

std::vector<dcm::GridCell> parse_grid(const std::string& text) {
  std::vector<dcm::GridCell> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw dcm::ValidationError("grid cell '" + item + "' is not rho1:rho2");
    try {
      grid.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw dcm::ValidationError("grid cell '" + item + "' is not numeric");
    }
  }
  return grid;
}

int run_simulate(const SimulateOptions& opt) {
  dcm::StudyConfig config;
  config.grid = parse_grid(opt.grid);
  config.base = opt.spec;
  config.with_fish = !opt.no_fish;
  config.mine.alpha = opt.alpha;
  config.mine.max_iter = opt.max_iter;
  config.mine.init.init_size = opt.init_size;
  if (opt.background == "both") {
    config.backgrounds = {dcm::Background::Uncorrelated, dcm::Background::Positive};
  } else if (auto b = dcm::parse_background(opt.background)) {
    config.backgrounds = {*b};
  } else {
    throw dcm::ValidationError("unknown background '" + opt.background + "'");
  }
  opt.spec.validate();
  if (opt.init_size > opt.spec.p) throw dcm::ValidationError("init_size exceeds p");

  const dcm::StudyTable table = dcm::run_study(config);
  const char d = delimiter_char(opt.delimiter);
  const nlohmann::json echo{{"command", "simulate"},
                            {"p", opt.spec.p},
                            {"k", opt.spec.k},
                            {"n1", opt.spec.n1},
                            {"n2", opt.spec.n2},
                            {"grid", opt.grid},
                            {"background", opt.background},
                            {"replicates", opt.spec.replicates},
                            {"seed", opt.spec.rng_seed},
                            {"alpha", opt.alpha},
                            {"init_size", opt.init_size},
                            {"max_iter", opt.max_iter},
                            {"fish", !opt.no_fish}};
  if (opt.out.empty()) {
    dcm::write_study_table(std::cout, table, d);
  } else {
    auto out = open_output(opt.out);
    dcm::write_study_table(out, table, d);
  }
  const std::string report_path = !opt.report.empty() ? opt.report
                                  : !opt.out.empty()  ? opt.out + ".json"
                                                      : std::string{};
  if (!report_path.empty()) {
    auto out = open_output(report_path);
    out << dcm::study_report(table, echo).dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential correlation mining"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);

  MineOptions mine;
  auto* mine_cmd = app.add_subcommand("mine", "Find variable sets more correlated in condition 1");
  mine_cmd->add_option("--cond1", mine.cond1, "Condition 1 data (header row + samples)")->required();
  mine_cmd->add_option("--cond2", mine.cond2, "Condition 2 data")->required();
  mine_cmd->add_option("--alpha", mine.alpha, "FDR level")->check(CLI::Range(1e-12, 1.0 - 1e-12));
  mine_cmd->add_option("--init-size", mine.init_size, "Initial set size")->check(CLI::Range(2, 1 << 30));
  mine_cmd->add_option("--restarts", mine.restarts, "Greedy restarts per initialization")->check(CLI::Range(1, 1000));
  mine_cmd->add_option("--max-iter", mine.max_iter, "Iteration limit per search")->check(CLI::Range(1, 1 << 30));
  mine_cmd->add_option("--max-cliques", mine.max_cliques, "Maximum number of sets to report")->check(CLI::NonNegativeNumber);
  mine_cmd->add_option("--seed", mine.seed, "Random seed");
  mine_cmd->add_option("--direction", mine.direction, "1: condition 1 higher, 2: condition 2 higher")->check(CLI::IsMember({1, 2}));
  mine_cmd->add_option("--out", mine.out, "Structured report path (default: stdout)");
  mine_cmd->add_option("--table", mine.table, "Delimited per-member table path");
  mine_cmd->add_option("--delimiter", mine.delimiter, "Input/table delimiter")->check(CLI::IsMember({"comma", "tab"}));
  mine_cmd->add_option("--threads", threads, "Cap on worker threads")->check(CLI::NonNegativeNumber);

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Planted-clique recovery study");
  sim_cmd->add_option("--p", sim.spec.p, "Variables")->check(CLI::Range(2, 1 << 30));
  sim_cmd->add_option("--k", sim.spec.k, "Planted clique size")->check(CLI::Range(2, 1 << 30));
  sim_cmd->add_option("--n1", sim.spec.n1, "Condition 1 samples")->check(CLI::Range(4, 1 << 30));
  sim_cmd->add_option("--n2", sim.spec.n2, "Condition 2 samples")->check(CLI::Range(4, 1 << 30));
  sim_cmd->add_option("--grid", sim.grid, "Comma-separated rho1:rho2 cells");
  sim_cmd->add_option("--background", sim.background, "uncorrelated, positive or both")
      ->check(CLI::IsMember({"uncorrelated", "positive", "both"}));
  sim_cmd->add_option("--replicates", sim.spec.replicates, "Trials per cell")->check(CLI::Range(1, 1 << 30));
  sim_cmd->add_option("--seed", sim.spec.rng_seed, "Master seed");
  sim_cmd->add_option("--alpha", sim.alpha, "FDR level")->check(CLI::Range(1e-12, 1.0 - 1e-12));
  sim_cmd->add_option("--init-size", sim.init_size, "Initial set size")->check(CLI::Range(2, 1 << 30));
  sim_cmd->add_option("--max-iter", sim.max_iter, "Iteration limit per search")->check(CLI::Range(1, 1 << 30));
  sim_cmd->add_flag("--no-fish", sim.no_fish, "Skip the FISH clustering baseline");
  sim_cmd->add_option("--out", sim.out, "Results table path (default: stdout)");
  sim_cmd->add_option("--report", sim.report, "Structured report path (default: OUT.json)");
  sim_cmd->add_option("--delimiter", sim.delimiter, "Table delimiter")->check(CLI::IsMember({"comma", "tab"}));
  sim_cmd->add_option("--threads", threads, "Cap on worker threads")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  dcm::set_threads(threads);
  try {
    if (mine_cmd->parsed()) return run_mine(mine);
    return run_simulate(sim);
  } catch (const dcm::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const dcm::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
