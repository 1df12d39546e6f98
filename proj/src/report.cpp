#include "dcm/report.hpp"

#include <cstdio>

namespace dcm {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace

nlohmann::json mining_report(const MiningRun& run, const std::vector<std::string>& names,
                             const nlohmann::json& config_echo) {
  nlohmann::json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["config"] = config_echo;
  doc["initializations"] = run.initializations;
  doc["small_sample_warning"] = run.small_sample;
  nlohmann::json cliques = nlohmann::json::array();
  for (std::size_t c = 0; c < run.cliques.size(); ++c) {
    const SearchOutcome& o = run.cliques[c];
    nlohmann::json entry;
    entry["rank"] = c + 1;
    entry["status"] = std::string(to_string(o.status));
    entry["size"] = o.final_set.size();
    entry["iterations"] = o.iterations;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : o.trace) trace.push_back({t.set_size, t.selected});
    entry["trace"] = std::move(trace);
    nlohmann::json members = nlohmann::json::array();
    for (Index i : o.final_set) {
      members.push_back({{"name", names.at(i)},
                         {"index", i},
                         {"delta", o.report.delta.at(i)},
                         {"sigma0", o.report.sigma0.at(i)},
                         {"pvalue", o.report.pvalues.at(i)}});
    }
    entry["members"] = std::move(members);
    if (c < run.residualizations.size()) {
      const auto& r = run.residualizations[c];
      nlohmann::json dropped = nlohmann::json::array();
      for (Index i : r.dropped) dropped.push_back(names.at(i));
      entry["residualization"] = {{"cond1_explained", r.cond1.explained},
                                  {"cond2_explained", r.cond2.explained},
                                  {"dropped", std::move(dropped)}};
    }
    cliques.push_back(std::move(entry));
  }
  doc["cliques"] = std::move(cliques);
  return doc;
}

void write_mining_table(std::ostream& out, const MiningRun& run,
                        const std::vector<std::string>& names, char d) {
  out << "clique" << d << "status" << d << "size" << d << "iterations" << d << "variable" << d
      << "delta" << d << "sigma0" << d << "pvalue" << '\n';
  for (std::size_t c = 0; c < run.cliques.size(); ++c) {
    const SearchOutcome& o = run.cliques[c];
    for (Index i : o.final_set) {
      out << c + 1 << d << to_string(o.status) << d << o.final_set.size() << d << o.iterations
          << d << names.at(i) << d << fixed(o.report.delta[i]) << d << fixed(o.report.sigma0[i])
          << d << sci(o.report.pvalues[i]) << '\n';
    }
  }
}

nlohmann::json study_report(const StudyTable& table, const nlohmann::json& config_echo) {
  nlohmann::json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["config"] = config_echo;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json row{{"method", r.method},
                       {"background", std::string(to_string(r.background))},
                       {"rho1", r.rho1},
                       {"rho2", r.rho2},
                       {"replicates", r.replicates},
                       {"mean_fpr", r.mean_fpr},
                       {"mean_fnr", r.mean_fnr},
                       {"mean_selected_size", r.mean_selected_size}};
    if (r.method == "DCM") {
      row["outcomes"] = {{"converged", r.converged},
                         {"cycle_overlap", r.cycle_overlap},
                         {"degenerate", r.degenerate},
                         {"iteration_limit", r.iteration_limit}};
      row["fixed_point_violations"] = r.fixed_point_violations;
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

void write_study_table(std::ostream& out, const StudyTable& table, char d) {
  out << "method" << d << "background" << d << "rho1" << d << "rho2" << d << "replicates" << d
      << "mean_fpr" << d << "mean_fnr" << d << "mean_selected_size" << d << "converged" << d
      << "cycle_overlap" << d << "degenerate" << d << "iteration_limit" << d
      << "fixed_point_violations" << '\n';
  for (const auto& r : table.rows) {
    out << r.method << d << to_string(r.background) << d << fixed(r.rho1, 3) << d
        << fixed(r.rho2, 3) << d << r.replicates << d << fixed(r.mean_fpr) << d
        << fixed(r.mean_fnr) << d << fixed(r.mean_selected_size, 3) << d << r.converged << d
        << r.cycle_overlap << d << r.degenerate << d << r.iteration_limit << d
        << r.fixed_point_violations << '\n';
  }
}

}  // namespace dcm
