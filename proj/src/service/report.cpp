#include "vismca/service/report.hpp"

#include "vismca/cooccurrence/matrix.hpp"
#include "vismca/core/json_text.hpp"
#include "vismca/metrics/metrics.hpp"
#include "vismca/service/json_codec.hpp"

namespace vismca::service {

nlohmann::json build_report(const annotation::CorrectionStore& store, const ReportParams& params) {
  const Dataset& dataset = store.dataset();
  const auto log = store.log();
  const Timestamp generated = log.empty() ? Timestamp{} : log.back().at;

  const auto matrix = cooccurrence::build_matrix(store);
  const auto corrected = graph::build_graph(store, graph::Source::Corrected);

  json overlap = json::array();
  for (const auto& s : cooccurrence::overlap_stats(matrix)) {
    overlap.push_back({{"person", s.person},
                       {"overlap_cells", s.overlap_cells},
                       {"detected_only_cells", s.detected_only_cells},
                       {"corrected_only_cells", s.corrected_only_cells}});
  }

  json report;
  report["generated_at"] = format_timestamp(generated);
  report["revision"] = store.revision();
  report["dataset"] = {{"images", dataset.images().size()},
                       {"people", dataset.people().size()},
                       {"classes", dataset.classes().size()},
                       {"detections", dataset.detections().size()}};
  report["params"] = {{"shared_k", params.shared_k},
                      {"group_size", params.group_size},
                      {"min_images", params.min_images}};
  report["coverage"] = to_json(metrics::coverage_report(store));
  report["per_class"] = to_json(metrics::class_metrics(store));
  report["matrix_summary"] = to_json(matrix.summary());
  report["overlap"] = std::move(overlap);
  report["shared_objects"] = {
      {"at_least", to_json(graph::objects_shared_by(corrected, params.shared_k, graph::ShareMode::AtLeast))},
      {"exactly", to_json(graph::objects_shared_by(corrected, params.shared_k, graph::ShareMode::Exactly))}};
  report["totem"] = graph::totem_candidates(corrected, params.group_size, params.min_images);
  return report;
}

std::string render_report(const annotation::CorrectionStore& store, const ReportParams& params) {
  return canonical_dump(build_report(store, params), 2) + "\n";
}

}  // namespace vismca::service
