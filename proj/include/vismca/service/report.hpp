#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "vismca/annotation/store.hpp"
#include "vismca/graph/ownership_graph.hpp"

namespace vismca::service {

struct ReportParams {
  std::size_t shared_k = 8;
  std::size_t group_size = graph::kDefaultTotemGroupSize;
  std::size_t min_images = graph::kDefaultTotemMinImages;
};

/// Coverage, per-class metrics, matrix summary, shared-object queries and
/// totem candidates, all computed from one store snapshot. generated_at is
/// the time of the last log event (the epoch for an empty log), so equal
/// inputs give equal reports.
nlohmann::json build_report(const annotation::CorrectionStore& store, const ReportParams& params = {});

/// Canonical text of build_report: sorted keys, six-decimal floats, trailing
/// newline.
std::string render_report(const annotation::CorrectionStore& store, const ReportParams& params = {});

}  // namespace vismca::service
