#include "vismca/service/json_codec.hpp"

#include "vismca/core/json_text.hpp"
#include "vismca/core/timestamp.hpp"

namespace vismca::service {

namespace {

json issues(const std::vector<ValidationIssue>& list) {
  json out = json::array();
  for (const auto& i : list) out.push_back({{"code", i.code}, {"entity", i.entity}, {"message", i.message}});
  return out;
}

json edge_json(const graph::Edge& e) {
  return {{"person", e.person}, {"object", e.object}, {"images", e.weight_images},
          {"instances", e.weight_instances}};
}

json marginals(const std::vector<cooccurrence::Marginal>& list, const char* key) {
  json out = json::array();
  for (const auto& m : list) {
    out.push_back({{key, m.key},
                   {"detected_count", m.detected_count},
                   {"detected_image_count", m.detected_image_count},
                   {"corrected_count", m.corrected_count}});
  }
  return out;
}

}  // namespace

json to_json(const ValidationReport& r) {
  return {{"errors", issues(r.errors)},
          {"warnings", issues(r.warnings)},
          {"counts",
           {{"images", r.images}, {"people", r.people}, {"classes", r.classes}, {"detections", r.detections}}}};
}

json to_json(const ImageRecord& img) {
  json out = {{"id", img.id}, {"person", img.person}, {"width", img.width}, {"height", img.height}};
  out["uri"] = img.uri ? json(*img.uri) : json(nullptr);
  return out;
}

json to_json(const Detection& det, Verdict verdict) {
  return {{"id", det.id},
          {"image", det.image},
          {"class", det.class_name},
          {"bbox", {det.bbox.x, det.bbox.y, det.bbox.w, det.bbox.h}},
          {"confidence", det.confidence},
          {"verdict", verdict_name(verdict)}};
}

json to_json(const annotation::CorrectionRecord& rec) {
  return {{"image", rec.image},
          {"labels", std::vector<std::string>(rec.labels.begin(), rec.labels.end())},
          {"difficult", rec.difficult},
          {"revision", rec.revision},
          {"updated_at", format_timestamp(rec.updated_at)}};
}

json to_json(const annotation::LabelMenu& menu) {
  json detected = json::array();
  for (const auto& d : menu.detected) detected.push_back({{"class", d.class_name}, {"confidence", d.max_confidence}});
  return {{"detected", std::move(detected)}, {"alternative", menu.alternative}};
}

json to_json(const metrics::Histogram& h) {
  std::size_t total = 0;
  for (auto c : h.counts) total += c;
  return {{"bin_edges", h.bin_edges}, {"counts", h.counts}, {"total", total}};
}

json to_json(const metrics::ClassMetrics& m) {
  return {{"class", m.class_name}, {"ap", optional_number(m.ap)},  {"tp", m.tp},
          {"fp", m.fp},            {"unreviewed", m.unreviewed},   {"positives", m.positives},
          {"no_positives", m.positives == 0}};
}

json to_json(const std::vector<metrics::ClassMetrics>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

json to_json(const metrics::CoverageReport& r) {
  return {{"classes_total", r.classes_total}, {"classes_detected", r.classes_detected},
          {"missed_pairs", r.missed_pairs},   {"truth_pairs", r.truth_pairs},
          {"missed_fraction", r.missed_fraction}, {"empty_truth", r.empty_truth}};
}

json to_json(const cooccurrence::MatrixSummary& s) {
  return {{"per_person", marginals(s.per_person, "person")},
          {"per_object", marginals(s.per_object, "object")},
          {"detected_total", s.detected_total},
          {"corrected_total", s.corrected_total}};
}

json to_json(const cooccurrence::DistributionMatrix& m) {
  json cells = json::array();
  for (const auto& c : m.cells()) {
    cells.push_back({{"person", c.person},
                     {"object", c.object},
                     {"detected_count", c.detected_count},
                     {"detected_image_count", c.detected_image_count},
                     {"mean_confidence", optional_number(c.mean_confidence)},
                     {"corrected_count", c.corrected_count}});
  }
  return {{"people", m.people()}, {"objects", m.objects()}, {"cells", std::move(cells)},
          {"summary", to_json(m.summary())}};
}

json to_json(const cooccurrence::SuggestionList& s) {
  json items = json::array();
  for (const auto& x : s.suggestions) {
    items.push_back({{"class", x.class_name}, {"score", x.score},
                     {"reason", cooccurrence::suggestion_reason_name(x.reason)}});
  }
  return {{"image", s.image}, {"suggestions", std::move(items)}};
}

json to_json(const graph::OwnershipGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back(edge_json(e));
  json refs = json::object();
  for (const auto& [object, image] : g.reference_images()) refs[object] = image;
  return {{"source", graph::source_name(g.source())}, {"people", g.people_nodes()},
          {"objects", g.object_nodes()}, {"edges", std::move(edges)},
          {"reference_images", std::move(refs)}};
}

json to_json(const graph::EgoNetwork& ego) {
  json edges = json::array();
  for (const auto& e : ego.edges) edges.push_back(edge_json(e));
  return {{"focus", ego.focus}, {"owners", ego.owners}, {"edges", std::move(edges)}};
}

json to_json(const std::vector<graph::SharedObject>& shared) {
  json out = json::array();
  for (const auto& s : shared) out.push_back({{"object", s.object}, {"owner_count", s.owner_count}});
  return out;
}

json error_json(Errc code, std::string_view message) {
  return {{"error", errc_name(code)}, {"message", message}};
}

}  // namespace vismca::service
