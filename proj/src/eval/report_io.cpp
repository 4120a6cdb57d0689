#include "fedfraud/eval/report_io.hpp"

#include "fedfraud/common/csv.hpp"

namespace fedfraud::eval {

nlohmann::json to_json(const MetricReport& r) {
    nlohmann::json j;
    j["f1"] = r.f1;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["accuracy"] = r.accuracy;
    j["mean_per_type_f1"] = r.mean_per_type_f1;
    j["auprc"] = r.auprc;
    j["degenerate"] = r.degenerate;
    nlohmann::json per_type = nlohmann::json::object();
    for (const auto& [t, f1] : r.per_type) per_type[std::to_string(t)] = f1;
    j["per_type_f1"] = per_type;
    j["confusion"] = {{"tp", r.cm.tp}, {"fp", r.cm.fp}, {"fn", r.cm.fn}, {"tn", r.cm.tn}};
    return j;
}

MetricReport metric_report_from_json(const nlohmann::json& j) {
    MetricReport r;
    r.f1 = j.at("f1").get<double>();
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.accuracy = j.at("accuracy").get<double>();
    r.mean_per_type_f1 = j.at("mean_per_type_f1").get<double>();
    r.auprc = j.at("auprc").get<double>();
    r.degenerate = j.at("degenerate").get<bool>();
    for (const auto& [key, value] : j.at("per_type_f1").items())
        r.per_type[std::stoi(key)] = value.get<double>();
    const auto& cm = j.at("confusion");
    r.cm.tp = cm.at("tp").get<std::size_t>();
    r.cm.fp = cm.at("fp").get<std::size_t>();
    r.cm.fn = cm.at("fn").get<std::size_t>();
    r.cm.tn = cm.at("tn").get<std::size_t>();
    return r;
}

nlohmann::json to_json(const dp::LedgerSnapshot& s) {
    return {{"sigma", s.sigma},   {"sampling_rate", s.sampling_rate}, {"delta", s.delta},
            {"steps", s.steps},   {"epsilon", s.epsilon},             {"best_order", s.best_order}};
}

dp::LedgerSnapshot ledger_snapshot_from_json(const nlohmann::json& j) {
    dp::LedgerSnapshot s;
    s.sigma = j.at("sigma").get<double>();
    s.sampling_rate = j.at("sampling_rate").get<double>();
    s.delta = j.at("delta").get<double>();
    s.steps = j.at("steps").get<std::size_t>();
    s.epsilon = j.at("epsilon").get<double>();
    s.best_order = j.at("best_order").get<int>();
    return s;
}

void write_pr_curve_csv(const std::string& path, const PrCurve& curve) {
    CsvWriter w(path);
    w.write_row({"recall", "precision", "auprc", "no_skill"});
    for (const auto& [recall, precision] : curve.points)
        w.write_row({format_double(recall), format_double(precision), format_double(curve.auprc),
                     format_double(curve.no_skill)});
}

}  // namespace fedfraud::eval
