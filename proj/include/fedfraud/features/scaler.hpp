#pragma once

#include <string>
#include <vector>

#include "fedfraud/common/diagnostics.hpp"
#include "fedfraud/common/matrix.hpp"

namespace fedfraud::features {

// Standardization parameters, population (1/N) convention. One-hot columns
// are passed through unchanged.
struct ScalerParams {
    std::vector<std::string> layout;
    std::vector<double> mean;
    std::vector<double> sd;
    std::string fitted_on;  // partition identifier, never "test"
};

// Fits per-feature mean/sd on the given matrix. Degenerate columns (sd == 0)
// get sd replaced by 1 with a diagnostic. Refuses test-partition data.
ScalerParams fit_scaler(const Matrix& x, const std::string& partition_label,
                        DiagCounters* diags = nullptr);

void apply_scaler(Matrix& x, const ScalerParams& s);
std::vector<double> apply_scaler(const std::vector<double>& v, const ScalerParams& s);
void inverse_scaler(Matrix& x, const ScalerParams& s);

void save_scaler(const std::string& path, const ScalerParams& s);
ScalerParams load_scaler(const std::string& path);

}  // namespace fedfraud::features
