#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vismca/core/errors.hpp"
#include "vismca/core/geometry.hpp"

namespace vismca {

enum class Verdict { Unreviewed, TruePositive, FalsePositive };

/// Wire names used by the log, the API and the CLI: "unreviewed", "tp", "fp".
std::string_view verdict_name(Verdict v) noexcept;
std::optional<Verdict> parse_verdict(std::string_view name) noexcept;

struct ImageRecord {
  std::string id;
  std::string person;
  int width = 0;
  int height = 0;
  std::optional<std::string> uri;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Detection {
  std::string id;
  std::string image;
  std::string class_name;
  BBox bbox;
  double confidence = 0.0;
  // Always Unreviewed inside a Dataset; reviewer verdicts live in the
  // correction store.
  Verdict verdict = Verdict::Unreviewed;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct GroundTruthEntry {
  std::string image;
  std::vector<std::string> labels;

  friend bool operator==(const GroundTruthEntry&, const GroundTruthEntry&) = default;
};

/// Structurally parsed but not yet validated dataset content.
struct DatasetParts {
  std::vector<std::string> classes;
  std::vector<std::string> people;
  std::vector<ImageRecord> images;
  std::vector<Detection> detections;
  std::optional<std::vector<GroundTruthEntry>> ground_truth;

  friend bool operator==(const DatasetParts&, const DatasetParts&) = default;
};

struct ValidationIssue {
  std::string code;
  std::string entity;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;
  std::size_t images = 0;
  std::size_t people = 0;
  std::size_t classes = 0;
  std::size_t detections = 0;

  [[nodiscard]] bool accepted() const noexcept { return errors.empty(); }
  [[nodiscard]] bool has_error(std::string_view code) const;
  [[nodiscard]] bool has_warning(std::string_view code) const;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);

  [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Reports every invariant violation of a candidate dataset. Never throws.
ValidationReport validate_dataset(const DatasetParts& candidate);

/// Immutable, validated corpus with lookup indices. Safe to share read-only
/// between threads.
class Dataset {
 public:
  /// Throws ValidationError when the candidate has validation errors.
  static Dataset from_parts(DatasetParts parts);

  [[nodiscard]] const std::vector<std::string>& classes() const noexcept { return parts_.classes; }
  [[nodiscard]] const std::vector<std::string>& people() const noexcept { return parts_.people; }
  [[nodiscard]] const std::vector<ImageRecord>& images() const noexcept { return parts_.images; }
  [[nodiscard]] const std::vector<Detection>& detections() const noexcept { return parts_.detections; }
  [[nodiscard]] const std::optional<std::vector<GroundTruthEntry>>& ground_truth() const noexcept {
    return parts_.ground_truth;
  }
  [[nodiscard]] const DatasetParts& parts() const noexcept { return parts_; }

  [[nodiscard]] const ImageRecord* find_image(std::string_view id) const;
  [[nodiscard]] const Detection* find_detection(std::string_view id) const;
  [[nodiscard]] bool has_class(std::string_view name) const;
  [[nodiscard]] bool has_person(std::string_view id) const;

  /// Detections of one image, in input order.
  [[nodiscard]] std::vector<std::reference_wrapper<const Detection>> detections_of(
      std::string_view image_id) const;
  /// Images of one person, in input order.
  [[nodiscard]] std::vector<std::reference_wrapper<const ImageRecord>> images_of(
      std::string_view person) const;

  friend bool operator==(const Dataset& a, const Dataset& b) { return a.parts_ == b.parts_; }

 private:
  explicit Dataset(DatasetParts parts);

  DatasetParts parts_;
  std::map<std::string, std::size_t, std::less<>> image_index_;
  std::map<std::string, std::size_t, std::less<>> detection_index_;
  std::map<std::string, std::size_t, std::less<>> class_index_;
  std::map<std::string, std::size_t, std::less<>> person_index_;
  std::vector<std::vector<std::size_t>> detections_by_image_;
  std::vector<std::vector<std::size_t>> images_by_person_;
};

}  // namespace vismca
