#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vismca/annotation/store.hpp"

namespace vismca::annotation {

struct DetectedLabel {
  std::string class_name;
  double max_confidence = 0.0;

  friend bool operator==(const DetectedLabel&, const DetectedLabel&) = default;
};

/// The two label sections shown while correcting one image. Together they
/// partition the dataset classes.
struct LabelMenu {
  std::vector<DetectedLabel> detected;  // max confidence desc, then name asc
  std::vector<std::string> alternative;  // name asc
};

LabelMenu label_menu(const Dataset& dataset, std::string_view image_id);

inline constexpr std::string_view kExportHeader = "image_id,person_id,label,origin,difficult";

/// image_id,person_id,label,origin,difficult; one row per (image, label) of
/// every correction record, sorted by image then label. LF line endings,
/// RFC-4180 quoting.
std::string export_csv(const CorrectionStore& store);

/// Reads an export back as ground-truth entries (one per image, in file
/// order). Throws Error(ParseError) on a malformed document.
std::vector<GroundTruthEntry> parse_export_csv(std::string_view text);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view value);

}  // namespace vismca::annotation
