#include <doctest.h>

#include "test_support.hpp"
#include "vismca/cooccurrence/matrix.hpp"

using namespace vismca;
using namespace vismca::cooccurrence;
using annotation::CorrectionStore;
using vismca::testing::PartsBuilder;
using vismca::testing::stepping_clock;

namespace {

std::shared_ptr<const Dataset> toy() {
  PartsBuilder b;
  b.classes({"gClamp", "key", "pen"}).people({"Person1", "Person2"});
  b.image("i1", "Person1").image("i2", "Person1").image("i3", "Person1").image("j1", "Person2");
  b.det("a", "i1", "gClamp", 0.9).det("b", "i2", "gClamp", 0.5).det("c", "i3", "gClamp", 0.7);
  b.det("d", "i3", "key", 0.4).det("e", "i3", "key", 0.6);
  return b.build();
}

}  // namespace

TEST_CASE("matrix cells count instances, images and mean confidence") {
  CorrectionStore s(toy(), stepping_clock());
  s.assign_labels("i1", {"gClamp"}, false);
  s.assign_labels("j1", {"pen"}, false);
  const auto m = build_matrix(s);
  CHECK(m.cells().size() == 6);

  const auto& g = m.cell("Person1", "gClamp");
  CHECK(g.detected_count == 3);
  CHECK(g.detected_image_count == 3);
  REQUIRE(g.mean_confidence.has_value());
  CHECK(*g.mean_confidence == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(g.corrected_count == 1);

  const auto& k = m.cell("Person1", "key");
  CHECK(k.detected_count == 2);
  CHECK(k.detected_image_count == 1);

  const auto& untouched = m.cell("Person2", "gClamp");
  CHECK(untouched.detected_count == 0);
  CHECK(untouched.detected_image_count == 0);
  CHECK_FALSE(untouched.mean_confidence.has_value());
  CHECK(untouched.corrected_count == 0);
  CHECK(m.cell("Person2", "pen").corrected_count == 1);

  CHECK(&m.at(0, 1) == &k);
  CHECK_THROWS_AS((void)m.cell("Person9", "pen"), Error);
}

TEST_CASE("matrix marginals add up") {
  CorrectionStore s(toy(), stepping_clock());
  s.assign_labels("i3", {"gClamp", "key"}, false);
  const auto m = build_matrix(s);
  const auto& sum = m.summary();
  CHECK(sum.detected_total == 5);
  CHECK(sum.corrected_total == 2);
  REQUIRE(sum.per_person.size() == 2);
  CHECK(sum.per_person[0].key == "Person1");
  CHECK(sum.per_person[0].detected_count == 5);
  CHECK(sum.per_person[0].detected_image_count == 4);  // row sum: i3 counts once per class
  CHECK(sum.per_person[1].detected_count == 0);
  REQUIRE(sum.per_object.size() == 3);
  CHECK(sum.per_object[1].key == "key");
  CHECK(sum.per_object[1].detected_count == 2);
  CHECK(sum.per_object[1].corrected_count == 1);
}

TEST_CASE("matrix csv") {
  CorrectionStore s(toy(), stepping_clock());
  s.assign_labels("j1", {"pen"}, false);
  const std::string csv = matrix_csv(build_matrix(s));
  CHECK(csv.rfind("person,object,detected_count,detected_image_count,mean_confidence,corrected_count\n", 0) == 0);
  CHECK(csv.find("Person1,gClamp,3,3,0.700000,0\n") != std::string::npos);
  CHECK(csv.find("Person2,pen,0,0,,1\n") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("overlap stats") {
  CorrectionStore s(toy(), stepping_clock());
  s.assign_labels("i1", {"gClamp", "pen"}, false);
  const auto stats = overlap_stats(build_matrix(s));
  REQUIRE(stats.size() == 2);
  CHECK(stats[0] == PersonOverlap{"Person1", 1, 1, 1});
  CHECK(stats[1] == PersonOverlap{"Person2", 0, 0, 0});
}
