#pragma once

#include <string>

#include <json.hpp>

#include "pdt/audit.hpp"
#include "pdt/protocol.hpp"
#include "pdt/rates.hpp"

namespace pdt {

using Json = nlohmann::ordered_json;

// Machine-readable records; key order is fixed so identical inputs
// produce byte-identical output.
Json rate_bounds_record(double eps1, double eps2, int num_files);
Json size_plan_record(const ProtocolParams& params, const SizePlan& plan);
Json run_record(const ProtocolParams& params, const RunSeeds& seeds,
                std::uint64_t master_seed, const RunOutcome& outcome,
                bool dump);
Json privacy_report_record(const TinyConfig& cfg, const PrivacyReport& report);
Json monte_carlo_record(const ProtocolParams& params, std::uint64_t seed,
                        const MonteCarloStats& stats);

std::string sweep_csv_header();
std::string sweep_csv_row(const ProtocolParams& params, std::uint64_t trials,
                          const MonteCarloStats& stats);

}  // namespace pdt
