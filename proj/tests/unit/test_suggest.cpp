#include <doctest.h>

#include "test_support.hpp"
#include "vismca/cooccurrence/suggest.hpp"

using namespace vismca;
using namespace vismca::cooccurrence;
using annotation::CorrectionStore;
using vismca::testing::PartsBuilder;
using vismca::testing::stepping_clock;

namespace {

Detection box(std::string id, std::string cls, BBox b, double conf = 0.5) {
  return {std::move(id), "img", std::move(cls), b, conf, Verdict::Unreviewed};
}

}  // namespace

TEST_CASE("single-link clustering chains through a middle box") {
  // iou(A,B) = iou(B,C) = 0.5, A and C only touch.
  const std::vector<Detection> dets{box("A", "x", {0, 0, 10, 10}), box("B", "x", {0, 0, 20, 10}),
                                    box("C", "x", {10, 0, 10, 10})};
  const auto clusters = cluster_overlapping(dets, 0.4);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0] == std::vector<std::string>{"A", "B", "C"});
  CHECK(cluster_overlapping(dets, 0.6).size() == 3);
}

TEST_CASE("clustering at threshold zero still needs positive overlap") {
  const std::vector<Detection> dets{box("b", "x", {0, 0, 5, 5}), box("a", "x", {50, 50, 5, 5})};
  const auto clusters = cluster_overlapping(dets, 0.0);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0] == std::vector<std::string>{"a"});
  CHECK(clusters[1] == std::vector<std::string>{"b"});
}

TEST_CASE("clustering edge cases") {
  const std::vector<Detection> one{box("only", "x", {0, 0, 5, 5})};
  CHECK(cluster_overlapping(one, 0.5) == std::vector<std::vector<std::string>>{{"only"}});
  CHECK(cluster_overlapping({}, 0.5).empty());
  CHECK_THROWS_AS(cluster_overlapping(one, 1.5), Error);
  std::vector<Detection> two_images{box("a", "x", {0, 0, 5, 5}), box("b", "x", {0, 0, 5, 5})};
  two_images[1].image = "other";
  CHECK_THROWS_AS(cluster_overlapping(two_images, 0.5), Error);
}

TEST_CASE("combination suggestions use leave-one-out co-occurrence") {
  PartsBuilder b;
  b.classes({"pen", "eraser", "key"}).people({"P"});
  for (int i = 0; i < 5; ++i) b.image("img" + std::to_string(i), "P");
  CorrectionStore s(b.build(), stepping_clock());
  s.assign_labels("img0", {"pen"}, false);
  s.assign_labels("img1", {"pen", "eraser"}, false);
  s.assign_labels("img2", {"pen", "eraser"}, false);
  s.assign_labels("img3", {"pen", "eraser"}, false);
  s.assign_labels("img4", {"pen"}, false);
  const auto list = suggest_labels(s, "img0");
  CHECK(list.image == "img0");
  REQUIRE(list.suggestions.size() == 1);
  CHECK(list.suggestions[0].class_name == "eraser");
  CHECK(list.suggestions[0].score == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(list.suggestions[0].reason == SuggestionReason::Combination);
  // Assigned labels are never proposed again.
  for (const auto& sg : suggest_labels(s, "img1").suggestions) CHECK(sg.class_name != "eraser");
}

TEST_CASE("overlap suggestions need mixed classes") {
  PartsBuilder b;
  b.classes({"pen", "key"}).people({"P"}).image("same", "P").image("mixed", "P").image("bare", "P");
  // Same-class pair at IoU 0.8.
  b.det("s1", "same", "pen", 0.9, {0, 0, 10, 10}).det("s2", "same", "pen", 0.7, {0, 0, 10, 8});
  b.det("m1", "mixed", "pen", 0.6, {0, 0, 10, 10}).det("m2", "mixed", "key", 0.8, {0, 0, 10, 8});
  CorrectionStore s(b.build(), stepping_clock());
  CHECK(suggest_labels(s, "same").suggestions.empty());
  CHECK(suggest_labels(s, "bare").suggestions.empty());

  const auto mixed = suggest_labels(s, "mixed");
  REQUIRE(mixed.suggestions.size() == 2);
  CHECK(mixed.suggestions[0] == Suggestion{"key", 0.8, SuggestionReason::Overlap});
  CHECK(mixed.suggestions[1] == Suggestion{"pen", 0.8, SuggestionReason::Overlap});
  CHECK(suggest_labels(s, "mixed", 1).suggestions.size() == 1);
}

TEST_CASE("suggestion argument errors") {
  PartsBuilder b;
  b.classes({"pen"}).people({"P"}).image("i", "P");
  CorrectionStore s(b.build(), stepping_clock());
  auto code_of = [&](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::IoError;
  };
  CHECK(code_of([&] { (void)suggest_labels(s, "nope"); }) == Errc::UnknownImage);
  CHECK(code_of([&] { (void)suggest_labels(s, "i", 0); }) == Errc::BadArgument);
  CHECK(code_of([&] { (void)suggest_labels(s, "i", 5, -0.1); }) == Errc::BadThreshold);
}
