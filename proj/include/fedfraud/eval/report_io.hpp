#pragma once

#include <string>
#include <vector>

#include "fedfraud/dp/accountant.hpp"
#include "fedfraud/eval/metrics.hpp"
#include "json.hpp"

namespace fedfraud::eval {

nlohmann::json to_json(const MetricReport& report);
MetricReport metric_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const dp::LedgerSnapshot& snapshot);
dp::LedgerSnapshot ledger_snapshot_from_json(const nlohmann::json& j);

// Plot data for one PR curve: threshold sweep points plus the no-skill line.
void write_pr_curve_csv(const std::string& path, const PrCurve& curve);

}  // namespace fedfraud::eval
