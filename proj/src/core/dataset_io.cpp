#include "vismca/core/dataset_io.hpp"

#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace vismca {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(Errc::ParseError, "dataset schema: " + where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) schema_error(where, "expected a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema_error(where, "expected an integer");
  const auto value = v.get<std::int64_t>();
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    schema_error(where, "integer out of range");
  }
  return static_cast<int>(value);
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where, "expected an array");
  return v;
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < as_array(v, where).size(); ++i) {
    out.push_back(as_string(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

DatasetParts parse_dataset(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("malformed dataset JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("$", "top level must be an object");

  DatasetParts parts;
  parts.classes = string_list(require(doc, "classes", "$"), "classes");
  parts.people = string_list(require(doc, "people", "$"), "people");

  const json& images = as_array(require(doc, "images", "$"), "images");
  parts.images.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    const json& obj = images[i];
    if (!obj.is_object()) schema_error(where, "expected an object");
    ImageRecord img;
    img.id = as_string(require(obj, "id", where), where + ".id");
    img.person = as_string(require(obj, "person", where), where + ".person");
    img.width = as_int(require(obj, "width", where), where + ".width");
    img.height = as_int(require(obj, "height", where), where + ".height");
    if (auto it = obj.find("uri"); it != obj.end() && !it->is_null()) {
      img.uri = as_string(*it, where + ".uri");
    }
    parts.images.push_back(std::move(img));
  }

  const json& dets = as_array(require(doc, "detections", "$"), "detections");
  parts.detections.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const std::string where = "detections[" + std::to_string(i) + "]";
    const json& obj = dets[i];
    if (!obj.is_object()) schema_error(where, "expected an object");
    Detection det;
    det.id = as_string(require(obj, "id", where), where + ".id");
    det.image = as_string(require(obj, "image", where), where + ".image");
    det.class_name = as_string(require(obj, "class", where), where + ".class");
    const json& box = as_array(require(obj, "bbox", where), where + ".bbox");
    if (box.size() != 4) schema_error(where + ".bbox", "expected [x, y, w, h]");
    det.bbox = BBox{as_number(box[0], where + ".bbox"), as_number(box[1], where + ".bbox"),
                    as_number(box[2], where + ".bbox"), as_number(box[3], where + ".bbox")};
    det.confidence = as_number(require(obj, "confidence", where), where + ".confidence");
    parts.detections.push_back(std::move(det));
  }

  if (auto it = doc.find("ground_truth"); it != doc.end() && !it->is_null()) {
    const json& gts = as_array(*it, "ground_truth");
    std::vector<GroundTruthEntry> entries;
    entries.reserve(gts.size());
    for (std::size_t i = 0; i < gts.size(); ++i) {
      const std::string where = "ground_truth[" + std::to_string(i) + "]";
      const json& obj = gts[i];
      if (!obj.is_object()) schema_error(where, "expected an object");
      GroundTruthEntry entry;
      entry.image = as_string(require(obj, "image", where), where + ".image");
      entry.labels = string_list(require(obj, "labels", where), where + ".labels");
      entries.push_back(std::move(entry));
    }
    parts.ground_truth = std::move(entries);
  }
  return parts;
}

Dataset ingest_dataset(std::string_view json_text) {
  return Dataset::from_parts(parse_dataset(json_text));
}

Dataset ingest_dataset(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return ingest_dataset(text);
}

Dataset ingest_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open dataset file " + path.string());
  return ingest_dataset(in);
}

std::string serialize_dataset(const DatasetParts& parts) {
  nlohmann::ordered_json doc;
  doc["classes"] = parts.classes;
  doc["people"] = parts.people;

  auto images = nlohmann::ordered_json::array();
  for (const auto& img : parts.images) {
    nlohmann::ordered_json obj;
    obj["id"] = img.id;
    obj["person"] = img.person;
    obj["width"] = img.width;
    obj["height"] = img.height;
    if (img.uri) obj["uri"] = *img.uri;
    images.push_back(std::move(obj));
  }
  doc["images"] = std::move(images);

  auto dets = nlohmann::ordered_json::array();
  for (const auto& det : parts.detections) {
    nlohmann::ordered_json obj;
    obj["id"] = det.id;
    obj["image"] = det.image;
    obj["class"] = det.class_name;
    obj["bbox"] = {det.bbox.x, det.bbox.y, det.bbox.w, det.bbox.h};
    obj["confidence"] = det.confidence;
    dets.push_back(std::move(obj));
  }
  doc["detections"] = std::move(dets);

  if (parts.ground_truth) {
    auto gts = nlohmann::ordered_json::array();
    for (const auto& gt : *parts.ground_truth) {
      nlohmann::ordered_json obj;
      obj["image"] = gt.image;
      obj["labels"] = gt.labels;
      gts.push_back(std::move(obj));
    }
    doc["ground_truth"] = std::move(gts);
  }
  return doc.dump(1) + "\n";
}

std::string serialize_dataset(const Dataset& dataset) { return serialize_dataset(dataset.parts()); }

}  // namespace vismca
