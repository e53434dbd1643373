#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vismca/annotation/store.hpp"
#include "vismca/core/model.hpp"

namespace vismca::metrics {

struct Histogram {
  std::vector<double> bin_edges;  // ascending, 0.0 .. 1.0
  std::vector<std::size_t> counts;  // bin_edges.size() - 1 entries
};

/// Equal-width bins over [0, 1]; every bin is [lo, hi) except the last,
/// which also takes 1.0. Throws Error(BadBinCount) when bins < 1.
Histogram confidence_histogram(const Dataset& dataset, int bins);

/// Images whose highest detection confidence is below tau, plus images with
/// no detections. Detection-free images come first (by id), the rest by
/// their maximum ascending, then id. Throws Error(BadThreshold) unless
/// 0 <= tau <= 1.
std::vector<std::string> low_confidence_images(const Dataset& dataset, double tau);

/// Outcome of one reviewed detection in the confidence ranking.
enum class RankOutcome { Hit, Miss };

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  bool hit = false;  // this rank credited a true positive
};

struct PRCurve {
  std::vector<PRPoint> points;  // one per reviewed, ranked detection
  std::size_t positives = 0;
};

/// Walks a ranked outcome list against `positives` relevant items.
PRCurve curve_from_ranking(std::span<const RankOutcome> ranking, std::size_t positives);

/// Precision/recall for one class.
///
/// Detections of the class are ranked by confidence descending (ties by id
/// ascending); unreviewed ones are skipped. Ground truth is the set of
/// corrected images whose labels contain the class. A TruePositive verdict
/// is credited only once per image and only when that image's corrected
/// labels contain the class; every other reviewed detection counts as a
/// false positive. Throws Error(UnknownClass) or Error(NoPositives).
PRCurve precision_recall(const annotation::CorrectionStore& store, std::string_view class_name);

/// Non-interpolated AP: sum of precision at each credited true positive,
/// divided by the total positive count (missed positives pull it down).
double average_precision(const PRCurve& curve);

struct ClassMetrics {
  std::string class_name;
  std::optional<double> ap;  // empty when the class has no positives
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t unreviewed = 0;
  std::size_t positives = 0;
};

/// One entry per dataset class, in dataset order.
std::vector<ClassMetrics> class_metrics(const annotation::CorrectionStore& store);

struct CoverageReport {
  std::size_t classes_total = 0;
  std::size_t classes_detected = 0;
  std::size_t missed_pairs = 0;
  std::size_t truth_pairs = 0;
  double missed_fraction = 0.0;
  bool empty_truth = true;
};

CoverageReport coverage_report(const annotation::CorrectionStore& store);

}  // namespace vismca::metrics
