#include <doctest.h>

#include <algorithm>
#include <set>

#include "vismca/cooccurrence/matrix.hpp"
#include "vismca/fixture/fixture.hpp"
#include "vismca/graph/ownership_graph.hpp"
#include "vismca/metrics/metrics.hpp"

using namespace vismca;

namespace {

annotation::CorrectionStore seeded(std::uint64_t seed) {
  auto d = std::make_shared<const Dataset>(Dataset::from_parts(fixture::generate(seed)));
  annotation::CorrectionStore s(d);
  s.seed_from_ground_truth();
  return s;
}

}  // namespace

TEST_CASE("fixture is deterministic per seed") {
  CHECK(fixture::generate(0) == fixture::generate(0));
  CHECK_FALSE(fixture::generate(0) == fixture::generate(1));
}

TEST_CASE("fixture statistics hold for every seed") {
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 99ULL, 123456789ULL}) {
    CAPTURE(seed);
    const auto s = seeded(seed);
    const Dataset& d = s.dataset();
    CHECK(d.images().size() == fixture::kImages);
    CHECK(d.people().size() == fixture::kPeople);
    CHECK(d.classes().size() == fixture::kClasses);
    CHECK(validate_dataset(d.parts()).warnings.empty());

    const auto cov = metrics::coverage_report(s);
    CHECK(cov.classes_detected == fixture::kDetectedClasses);
    CHECK(cov.truth_pairs == fixture::kTruthPairs);
    CHECK(cov.missed_pairs == fixture::kMissedPairs);
    CHECK(cov.missed_fraction == 0.53);

    const auto g = graph::build_graph(s, graph::Source::Corrected);
    CHECK(g.people_nodes().size() == 40);
    CHECK(g.object_nodes().size() == 43);
    const auto at_least = graph::objects_shared_by(g, 8, graph::ShareMode::AtLeast);
    const auto exactly = graph::objects_shared_by(g, 8, graph::ShareMode::Exactly);
    CHECK(at_least.size() == 9);
    REQUIRE(exactly.size() == 4);
    std::set<std::string> exact_names;
    for (const auto& e : exactly) exact_names.insert(e.object);
    CHECK(exact_names == std::set<std::string>(fixture::kExactlyEight.begin(), fixture::kExactlyEight.end()));
    CHECK(graph::totem_candidates(g, 8, 2) == std::vector<std::string>{std::string(fixture::kTotem)});
    CHECK(graph::totem_candidates(g, 8, 1).size() == 4);
    CHECK(graph::ego_network(g, fixture::kTotem, false).owners.size() == 8);

    const auto m = cooccurrence::build_matrix(s);
    for (auto person : fixture::kMissedObjectOwners) {
      const auto& cell = m.cell(person, fixture::kMissedObject);
      CHECK(cell.corrected_count >= 1);
      CHECK(cell.detected_count == 0);
    }
    for (const auto& o : cooccurrence::overlap_stats(m)) {
      if (o.person == fixture::kSingleOverlapPerson) CHECK(o.overlap_cells == 1);
    }
  }
}

TEST_CASE("fixture boxes stay inside their images") {
  const auto d = Dataset::from_parts(fixture::generate(4));
  for (const auto& det : d.detections()) {
    const auto* img = d.find_image(det.image);
    REQUIRE(img != nullptr);
    CHECK(det.bbox.x >= 0);
    CHECK(det.bbox.right() <= img->width);
    CHECK(det.bbox.bottom() <= img->height);
    CHECK(det.confidence >= 0.0);
    CHECK(det.confidence <= 1.0);
  }
}
