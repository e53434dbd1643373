#include "vismca/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace vismca::metrics {

Histogram confidence_histogram(const Dataset& dataset, int bins) {
  if (bins < 1) throw Error(Errc::BadBinCount, "histogram needs at least one bin");

  Histogram h;
  const auto n = static_cast<std::size_t>(bins);
  h.bin_edges.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) h.bin_edges[i] = static_cast<double>(i) / bins;
  h.counts.assign(n, 0);

  for (const auto& det : dataset.detections()) {
    const double c = det.confidence;
    auto idx = static_cast<std::size_t>(std::clamp(std::floor(c * bins), 0.0, double(n - 1)));
    // Reconcile floor(c * bins) with the stored edges.
    while (idx > 0 && c < h.bin_edges[idx]) --idx;
    while (idx + 1 < n && c >= h.bin_edges[idx + 1]) ++idx;
    ++h.counts[idx];
  }
  return h;
}

std::vector<std::string> low_confidence_images(const Dataset& dataset, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(Errc::BadThreshold, "tau must lie in [0, 1]");

  struct Entry {
    std::optional<double> max_conf;
    const std::string* id;
  };
  std::vector<Entry> picked;
  for (const auto& img : dataset.images()) {
    std::optional<double> best;
    for (const Detection& det : dataset.detections_of(img.id)) {
      best = best ? std::max(*best, det.confidence) : det.confidence;
    }
    if (!best || *best < tau) picked.push_back({best, &img.id});
  }
  std::sort(picked.begin(), picked.end(), [](const Entry& a, const Entry& b) {
    if (a.max_conf.has_value() != b.max_conf.has_value()) return !a.max_conf.has_value();
    if (a.max_conf && *a.max_conf != *b.max_conf) return *a.max_conf < *b.max_conf;
    return *a.id < *b.id;
  });

  std::vector<std::string> out;
  out.reserve(picked.size());
  for (const auto& e : picked) out.push_back(*e.id);
  return out;
}

PRCurve curve_from_ranking(std::span<const RankOutcome> ranking, std::size_t positives) {
  PRCurve curve;
  curve.positives = positives;
  curve.points.reserve(ranking.size());
  std::size_t tp = 0;
  std::size_t seen = 0;
  for (RankOutcome r : ranking) {
    ++seen;
    const bool hit = r == RankOutcome::Hit;
    if (hit) ++tp;
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    const double recall = positives == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(positives);
    curve.points.push_back({recall, precision, hit});
  }
  return curve;
}

namespace {

std::vector<const Detection*> ranked_detections(const Dataset& dataset, std::string_view class_name) {
  std::vector<const Detection*> ranked;
  for (const auto& det : dataset.detections()) {
    if (det.class_name == class_name) ranked.push_back(&det);
  }
  std::sort(ranked.begin(), ranked.end(), [](const Detection* a, const Detection* b) {
    if (a->confidence != b->confidence) return a->confidence > b->confidence;
    return a->id < b->id;
  });
  return ranked;
}

std::set<std::string_view> positive_images(const annotation::CorrectionStore& store,
                                           std::string_view class_name) {
  std::set<std::string_view> out;
  for (const auto& [image, rec] : store.records()) {
    if (rec.labels.contains(class_name)) out.insert(image);
  }
  return out;
}

std::vector<RankOutcome> match_ranking(const annotation::CorrectionStore& store,
                                       std::string_view class_name,
                                       const std::set<std::string_view>& truth) {
  std::vector<RankOutcome> outcomes;
  std::set<std::string_view> credited;
  for (const Detection* det : ranked_detections(store.dataset(), class_name)) {
    const Verdict v = store.verdict(det->id);
    if (v == Verdict::Unreviewed) continue;
    const bool hit = v == Verdict::TruePositive && truth.contains(det->image) &&
                     credited.insert(det->image).second;
    outcomes.push_back(hit ? RankOutcome::Hit : RankOutcome::Miss);
  }
  return outcomes;
}

}  // namespace

PRCurve precision_recall(const annotation::CorrectionStore& store, std::string_view class_name) {
  if (!store.dataset().has_class(class_name)) {
    throw Error(Errc::UnknownClass, "unknown class '" + std::string(class_name) + "'");
  }
  const auto truth = positive_images(store, class_name);
  if (truth.empty()) {
    throw Error(Errc::NoPositives, "class '" + std::string(class_name) + "' has no corrected occurrences");
  }
  const auto outcomes = match_ranking(store, class_name, truth);
  return curve_from_ranking(outcomes, truth.size());
}

double average_precision(const PRCurve& curve) {
  if (curve.positives == 0) throw Error(Errc::NoPositives, "average precision needs positives > 0");
  double sum = 0.0;
  for (const auto& p : curve.points) {
    if (p.hit) sum += p.precision;
  }
  return sum / static_cast<double>(curve.positives);
}

std::vector<ClassMetrics> class_metrics(const annotation::CorrectionStore& store) {
  const Dataset& dataset = store.dataset();
  std::map<std::string_view, ClassMetrics*> by_class;
  std::vector<ClassMetrics> out(dataset.classes().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].class_name = dataset.classes()[i];
    by_class.emplace(out[i].class_name, &out[i]);
  }
  for (const auto& det : dataset.detections()) {
    ClassMetrics& m = *by_class.at(det.class_name);
    switch (store.verdict(det.id)) {
      case Verdict::TruePositive: ++m.tp; break;
      case Verdict::FalsePositive: ++m.fp; break;
      case Verdict::Unreviewed: ++m.unreviewed; break;
    }
  }
  for (auto& m : out) {
    const auto truth = positive_images(store, m.class_name);
    m.positives = truth.size();
    if (m.positives == 0) continue;
    const auto outcomes = match_ranking(store, m.class_name, truth);
    m.ap = average_precision(curve_from_ranking(outcomes, truth.size()));
  }
  return out;
}

CoverageReport coverage_report(const annotation::CorrectionStore& store) {
  const Dataset& dataset = store.dataset();
  CoverageReport r;
  r.classes_total = dataset.classes().size();

  std::set<std::string_view> detected_classes;
  for (const auto& det : dataset.detections()) detected_classes.insert(det.class_name);
  r.classes_detected = detected_classes.size();

  for (const auto& [image, rec] : store.records()) {
    std::set<std::string_view> present;
    for (const Detection& det : dataset.detections_of(image)) present.insert(det.class_name);
    for (const auto& label : rec.labels) {
      ++r.truth_pairs;
      if (!present.contains(label)) ++r.missed_pairs;
    }
  }
  r.empty_truth = r.truth_pairs == 0;
  r.missed_fraction = r.empty_truth ? 0.0
                                    : static_cast<double>(r.missed_pairs) /
                                          static_cast<double>(r.truth_pairs);
  return r;
}

}  // namespace vismca::metrics
