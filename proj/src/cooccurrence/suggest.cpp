#include "vismca/cooccurrence/suggest.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace vismca::cooccurrence {

namespace {

void check_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::BadThreshold, "iou threshold must lie in [0, 1]");
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

std::string_view suggestion_reason_name(SuggestionReason r) noexcept {
  return r == SuggestionReason::Combination ? "combination" : "overlap";
}

std::vector<std::vector<std::string>> cluster_overlapping(std::span<const Detection> detections,
                                                          double iou_threshold) {
  check_threshold(iou_threshold);
  for (const auto& d : detections) {
    if (d.image != detections.front().image) {
      throw Error(Errc::BadArgument, "cluster_overlapping needs detections of a single image");
    }
  }

  // Sort indices by id so the result does not depend on input order.
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return detections[a].id < detections[b].id; });

  std::vector<std::size_t> parent(order.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const double v = iou(detections[order[i]].bbox, detections[order[j]].bbox);
      if (v > 0.0 && v >= iou_threshold) {
        const std::size_t a = find_root(parent, i);
        const std::size_t b = find_root(parent, j);
        // Keep the smaller position as root so roots follow id order.
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < order.size(); ++i) {
    groups[find_root(parent, i)].push_back(detections[order[i]].id);
  }
  std::vector<std::vector<std::string>> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

SuggestionList suggest_labels(const annotation::CorrectionStore& store, std::string_view image_id,
                              std::size_t k, double iou_threshold) {
  const Dataset& dataset = store.dataset();
  if (!dataset.find_image(image_id)) {
    throw Error(Errc::UnknownImage, "unknown image '" + std::string(image_id) + "'");
  }
  check_threshold(iou_threshold);
  if (k == 0) throw Error(Errc::BadArgument, "k must be positive");

  const annotation::LabelSet empty;
  const auto* own = store.record(image_id);
  const annotation::LabelSet& assigned = own ? own->labels : empty;

  std::map<std::string, Suggestion, std::less<>> best;
  auto offer = [&](const std::string& cls, double score, SuggestionReason reason) {
    if (assigned.contains(cls) || score <= 0.0) return;
    auto [it, inserted] = best.try_emplace(cls, Suggestion{cls, score, reason});
    if (!inserted && score > it->second.score) it->second = Suggestion{cls, score, reason};
  };

  // Combination: leave-one-out conditional frequency.
  for (const auto& given : assigned) {
    std::size_t with_given = 0;
    std::map<std::string_view, std::size_t> joint;
    for (const auto& [other_id, rec] : store.records()) {
      if (other_id == image_id || !rec.labels.contains(given)) continue;
      ++with_given;
      for (const auto& c : rec.labels) {
        if (c != given) ++joint[c];
      }
    }
    if (with_given == 0) continue;
    for (const auto& [cls, n] : joint) {
      offer(std::string(cls), static_cast<double>(n) / static_cast<double>(with_given),
            SuggestionReason::Combination);
    }
  }

  // Overlap: mixed-class clusters of this image's detections.
  std::vector<Detection> dets;
  for (const Detection& d : dataset.detections_of(image_id)) dets.push_back(d);
  if (!dets.empty()) {
    std::map<std::string_view, const Detection*> by_id;
    for (const auto& d : dets) by_id.emplace(d.id, &d);
    for (const auto& cluster : cluster_overlapping(dets, iou_threshold)) {
      std::set<std::string_view> classes;
      double top = 0.0;
      for (const auto& id : cluster) {
        const Detection* d = by_id.at(id);
        classes.insert(d->class_name);
        top = std::max(top, d->confidence);
      }
      if (classes.size() < 2) continue;
      for (const auto& cls : classes) offer(std::string(cls), top, SuggestionReason::Overlap);
    }
  }

  SuggestionList list{std::string(image_id), {}};
  for (auto& [cls, s] : best) list.suggestions.push_back(std::move(s));
  std::sort(list.suggestions.begin(), list.suggestions.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.class_name < b.class_name;
  });
  if (list.suggestions.size() > k) list.suggestions.resize(k);
  return list;
}

}  // namespace vismca::cooccurrence
