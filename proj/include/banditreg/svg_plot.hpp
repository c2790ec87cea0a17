#pragma once

#include <string>
#include <vector>

#include "banditreg/harness.hpp"

namespace banditreg {

// Self-contained vector plots of a run's artifacts. prediction.svg overlays
// y_true and y_pred (exactly two polylines) with the training range shaded;
// error.svg plots abs_err vs x with the data maximum as the top axis label
// (id="y-max"); losses.svg overlays critic and actor loss vs epoch.
void write_prediction_svg(const std::string& path, const EvalTable& table, double train_lo,
                          double train_hi);
void write_error_svg(const std::string& path, const EvalTable& table);
void write_losses_svg(const std::string& path, const std::vector<MetricsRow>& metrics);

} // namespace banditreg
