#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcm/search.hpp"
#include "dcm/sim.hpp"

namespace dcm {

inline constexpr int kReportSchemaVersion = 1;

/// Structured mining report: schema_version, config echo, clique array with
/// per-member delta and p-value against the final set.
nlohmann::json mining_report(const MiningRun& run, const std::vector<std::string>& names,
                             const nlohmann::json& config_echo);

/// One row per clique member.
void write_mining_table(std::ostream& out, const MiningRun& run,
                        const std::vector<std::string>& names, char delimiter);

nlohmann::json study_report(const StudyTable& table, const nlohmann::json& config_echo);

/// One row per (method, background, rho1, rho2).
void write_study_table(std::ostream& out, const StudyTable& table, char delimiter);

}  // namespace dcm
