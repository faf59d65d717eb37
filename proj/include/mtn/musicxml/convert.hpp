#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtn/model.hpp"
#include "mtn/musicxml/diagnostics.hpp"

namespace mtn::musicxml {

struct ConvertOptions {
  std::string work_id;  // defaults to the work or movement title, else "work"
  bool inject_line_starts = true;
};

struct Conversion {
  Work work;
  Warnings warnings;
  std::vector<std::string> line_starts;        // measure ids opening a system
  std::vector<std::string> page_starts;        // measure ids opening a page
  std::vector<std::string> implicit_measures;  // pickups and other implicit measures
};

/// Converts score-partwise or score-timewise MusicXML into a canonical,
/// validated work. Throws ConversionError when divisions are missing, a
/// backup runs past the measure start, or the result does not validate.
Conversion convert_score(std::string_view bytes, const ConvertOptions& options = {});

/// Gives every listed measure a synthetic Attributes node restating the
/// clef and key active on each staff, unless the measure already opens
/// with them. Marks the measures as line starts. Idempotent. Throws
/// ConversionError for an unknown measure id.
Work inject_line_starts(Work work, std::span<const std::string> measure_ids);

}  // namespace mtn::musicxml
