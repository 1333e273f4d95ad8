#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "eop/estimator.hpp"

namespace eop {

struct LabeledCurve {
  std::string label;
  EopCurve curve;
};

/// Standalone SVG: one mean polyline and one translucent mean +/- std band
/// per curve, a legend, and the budget/performance axis labels. Output bytes
/// are deterministic for identical input.
void emit_figure(const std::vector<LabeledCurve>& curves, std::ostream& out);
void emit_figure(const std::vector<LabeledCurve>& curves, const std::string& path);

}  // namespace eop
