#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vismca/annotation/store.hpp"

namespace vismca::cooccurrence {

inline constexpr std::size_t kDefaultSuggestionCount = 5;
inline constexpr double kDefaultIouThreshold = 0.5;

/// Single-link components of `detections` (all from one image) under
/// iou >= threshold with iou > 0. Members are sorted by id and clusters by
/// their smallest member. Throws Error(BadThreshold) outside [0, 1] and
/// Error(BadArgument) when detections span several images.
std::vector<std::vector<std::string>> cluster_overlapping(std::span<const Detection> detections,
                                                          double iou_threshold);

enum class SuggestionReason { Combination, Overlap };

std::string_view suggestion_reason_name(SuggestionReason r) noexcept;

struct Suggestion {
  std::string class_name;
  double score = 0.0;
  SuggestionReason reason = SuggestionReason::Combination;

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

struct SuggestionList {
  std::string image;
  std::vector<Suggestion> suggestions;  // score desc, then class asc
};

/// Label suggestions for one image from two sources:
///  - combination: for each assigned label L, P(C | L) over the other
///    corrected images (leave-one-out), maxed over L;
///  - overlap: clusters of overlapping detections that mix classes propose
///    each of their classes, scored by the cluster's top confidence.
/// Already assigned classes are never suggested. The higher score wins on
/// duplicates; the list is truncated to k.
SuggestionList suggest_labels(const annotation::CorrectionStore& store, std::string_view image_id,
                              std::size_t k = kDefaultSuggestionCount,
                              double iou_threshold = kDefaultIouThreshold);

}  // namespace vismca::cooccurrence
