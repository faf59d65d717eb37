#pragma once

#include <string>

#include "mtn/harness/evaluate.hpp"

namespace mtn::harness {

/// JSON document of schema kReportSchema. Every ratio is an exact
/// "num/den" string with a "defined" flag; there is no timestamp, so equal
/// reports serialize to identical bytes.
std::string report_json(const EvalReport& report);

/// Tier 1 class table (Class, Precision, Recall, Counts, Prop), the
/// corpus Tier 2/3 line (TER, MNR, FPR, Time/Pitch/Staff Prec and shifts)
/// and coverage. Three decimals, four for Prop.
std::string report_text(const EvalReport& report);

}  // namespace mtn::harness
