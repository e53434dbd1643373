#pragma once

#include <json.hpp>

#include "vismca/annotation/review.hpp"
#include "vismca/annotation/store.hpp"
#include "vismca/cooccurrence/matrix.hpp"
#include "vismca/cooccurrence/suggest.hpp"
#include "vismca/graph/ownership_graph.hpp"
#include "vismca/metrics/metrics.hpp"

namespace vismca::service {

using nlohmann::json;

json to_json(const ValidationReport& report);
json to_json(const ImageRecord& image);
json to_json(const Detection& det, Verdict verdict);
json to_json(const annotation::CorrectionRecord& rec);
json to_json(const annotation::LabelMenu& menu);
json to_json(const metrics::Histogram& h);
json to_json(const metrics::ClassMetrics& m);
json to_json(const std::vector<metrics::ClassMetrics>& ms);
json to_json(const metrics::CoverageReport& r);
json to_json(const cooccurrence::MatrixSummary& s);
json to_json(const cooccurrence::DistributionMatrix& m);
json to_json(const cooccurrence::SuggestionList& s);
json to_json(const graph::OwnershipGraph& g);
json to_json(const graph::EgoNetwork& ego);
json to_json(const std::vector<graph::SharedObject>& shared);

/// {"error": "<code>", "message": "..."}
json error_json(Errc code, std::string_view message);

}  // namespace vismca::service
