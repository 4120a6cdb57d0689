#include "fedfraud/features/scaler.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fedfraud/features/features.hpp"
#include "json.hpp"

namespace fedfraud::features {

ScalerParams fit_scaler(const Matrix& x, const std::string& partition_label, DiagCounters* diags) {
    if (x.rows == 0) throw std::invalid_argument("fit_scaler: empty scaling set");
    if (x.cols != feature_count()) throw std::invalid_argument("fit_scaler: layout mismatch");
    if (partition_label == "test")
        throw std::invalid_argument("fit_scaler: refusing to fit on the test partition");

    ScalerParams s;
    s.layout = feature_layout();
    s.fitted_on = partition_label;
    s.mean.assign(x.cols, 0.0);
    s.sd.assign(x.cols, 1.0);

    const double n = static_cast<double>(x.rows);
    for (std::size_t c = 0; c < x.cols; ++c) {
        if (!is_scaled_feature(c)) continue;
        double sum = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) sum += x.at(r, c);
        const double mean = sum / n;
        double ss = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) {
            const double d = x.at(r, c) - mean;
            ss += d * d;
        }
        double sd = std::sqrt(ss / n);
        if (sd <= 0.0) {
            sd = 1.0;
            if (diags) diags->bump("degenerate_scaler_column");
        }
        s.mean[c] = mean;
        s.sd[c] = sd;
    }
    return s;
}

namespace {

void check_layout(std::size_t cols, const ScalerParams& s, const char* what) {
    if (cols != s.layout.size() || s.mean.size() != s.layout.size() ||
        s.sd.size() != s.layout.size())
        throw std::invalid_argument(std::string(what) + ": layout mismatch");
}

}  // namespace

void apply_scaler(Matrix& x, const ScalerParams& s) {
    check_layout(x.cols, s, "apply_scaler");
    for (std::size_t c = 0; c < x.cols; ++c) {
        if (!is_scaled_feature(c)) continue;
        const double mean = s.mean[c];
        const double inv_sd = 1.0 / s.sd[c];
        for (std::size_t r = 0; r < x.rows; ++r) x.at(r, c) = (x.at(r, c) - mean) * inv_sd;
    }
}

std::vector<double> apply_scaler(const std::vector<double>& v, const ScalerParams& s) {
    check_layout(v.size(), s, "apply_scaler");
    std::vector<double> out = v;
    for (std::size_t c = 0; c < out.size(); ++c)
        if (is_scaled_feature(c)) out[c] = (out[c] - s.mean[c]) / s.sd[c];
    return out;
}

void inverse_scaler(Matrix& x, const ScalerParams& s) {
    check_layout(x.cols, s, "inverse_scaler");
    for (std::size_t c = 0; c < x.cols; ++c) {
        if (!is_scaled_feature(c)) continue;
        for (std::size_t r = 0; r < x.rows; ++r) x.at(r, c) = x.at(r, c) * s.sd[c] + s.mean[c];
    }
}

void save_scaler(const std::string& path, const ScalerParams& s) {
    nlohmann::json j;
    j["convention"] = "population_sd";
    j["fitted_on"] = s.fitted_on;
    j["layout"] = s.layout;
    j["mean"] = s.mean;
    j["sd"] = s.sd;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write scaler: " + path);
    out << j.dump(2) << "\n";
}

ScalerParams load_scaler(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read scaler: " + path);
    nlohmann::json j;
    in >> j;
    ScalerParams s;
    s.fitted_on = j.at("fitted_on").get<std::string>();
    s.layout = j.at("layout").get<std::vector<std::string>>();
    s.mean = j.at("mean").get<std::vector<double>>();
    s.sd = j.at("sd").get<std::vector<double>>();
    if (s.layout != feature_layout())
        throw std::runtime_error("scaler layout does not match this build: " + path);
    return s;
}

}  // namespace fedfraud::features
