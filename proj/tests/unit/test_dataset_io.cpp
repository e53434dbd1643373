#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "vismca/core/dataset_io.hpp"
#include "vismca/core/json_text.hpp"
#include "vismca/core/timestamp.hpp"
#include "vismca/fixture/fixture.hpp"

using namespace vismca;

namespace {

constexpr std::string_view kMinimal = R"({
  "classes": ["pen"],
  "people": ["Person1"],
  "images": [{"id": "img1", "person": "Person1", "width": 640, "height": 480, "uri": "img/1.jpg"}],
  "detections": []
})";

}  // namespace

TEST_CASE("minimal dataset parses") {
  const Dataset d = ingest_dataset(kMinimal);
  CHECK(d.classes().size() == 1);
  CHECK(d.people().size() == 1);
  CHECK(d.images().size() == 1);
  CHECK(d.detections().empty());
  CHECK(d.images()[0].uri == "img/1.jpg");
  CHECK_FALSE(d.ground_truth().has_value());
}

TEST_CASE("stream and string ingestion agree") {
  std::istringstream in{std::string(kMinimal)};
  CHECK(ingest_dataset(in) == ingest_dataset(kMinimal));
}

TEST_CASE("malformed input is a parse error") {
  auto code_of = [](std::string_view text) {
    try {
      (void)ingest_dataset(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::IoError;
  };
  CHECK(code_of("{") == Errc::ParseError);
  CHECK(code_of("[]") == Errc::ParseError);
  CHECK(code_of(R"({"classes": ["a"], "people": [], "images": []})") == Errc::ParseError);
  CHECK(code_of(R"({"classes": [1], "people": [], "images": [], "detections": []})") == Errc::ParseError);
  CHECK(code_of(R"({"classes": ["a"], "people": ["P"], "images": [{"id": "i", "person": "P", "width": 1.5,
                   "height": 2}], "detections": []})") == Errc::ParseError);
  CHECK(code_of(R"({"classes": ["a"], "people": ["P"], "images": [{"id": "i", "person": "P", "width": 10,
                   "height": 10}], "detections": [{"id": "d", "image": "i", "class": "a", "bbox": [0, 0, 1],
                   "confidence": 0.5}]})") == Errc::ParseError);
  // Well-formed but invalid content is a validation error, not a parse error.
  CHECK(code_of(R"({"classes": ["a"], "people": ["P"], "images": [], "detections": [{"id": "d",
                   "image": "img_404", "class": "a", "bbox": [0, 0, 1, 1], "confidence": 0.5}]})") ==
        Errc::ValidationError);
}

TEST_CASE("serialize then parse is the identity") {
  const DatasetParts parts = fixture::generate(3);
  const std::string text = serialize_dataset(parts);
  CHECK(parse_dataset(text) == parts);
  CHECK(serialize_dataset(parse_dataset(text)) == text);
}

TEST_CASE("fixture ingests cleanly") {
  const Dataset d = ingest_dataset(serialize_dataset(fixture::generate()));
  CHECK(d.images().size() == 900);
  CHECK(d.people().size() == 40);
  CHECK(d.classes().size() == 43);
  const auto r = validate_dataset(d.parts());
  CHECK(r.errors.empty());
  CHECK(r.warnings.empty());
}

TEST_CASE("timestamps format and parse") {
  const auto t = parse_timestamp("2026-10-15T08:30:00.125Z");
  REQUIRE(t.has_value());
  CHECK(format_timestamp(*t) == "2026-10-15T08:30:00.125Z");
  CHECK(format_timestamp(Timestamp{}) == "1970-01-01T00:00:00.000Z");
  CHECK_FALSE(parse_timestamp("yesterday").has_value());
  CHECK_FALSE(parse_timestamp("2026-10-15 08:30:00").has_value());
}

TEST_CASE("canonical dump sorts keys and fixes float width") {
  nlohmann::json j = {{"b", 0.5}, {"a", 1}, {"c", {{"z", 1.0 / 3.0}, {"y", nullptr}}}};
  CHECK(canonical_dump(j) == R"({"a":1,"b":0.500000,"c":{"y":null,"z":0.333333}})");
  CHECK(canonical_dump(nlohmann::json(std::nan(""))) == "null");
  CHECK(canonical_dump(nlohmann::json::array()) == "[]");
  CHECK(canonical_dump(nlohmann::json("x\"y")) == R"("x\"y")");
}
