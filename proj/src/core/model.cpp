#include "vismca/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace vismca {

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Unreviewed: return "unreviewed";
    case Verdict::TruePositive: return "tp";
    case Verdict::FalsePositive: return "fp";
  }
  return "unreviewed";
}

std::optional<Verdict> parse_verdict(std::string_view name) noexcept {
  if (name == "unreviewed") return Verdict::Unreviewed;
  if (name == "tp") return Verdict::TruePositive;
  if (name == "fp") return Verdict::FalsePositive;
  return std::nullopt;
}

bool ValidationReport::has_error(std::string_view code) const {
  return std::any_of(errors.begin(), errors.end(), [&](const auto& e) { return e.code == code; });
}

bool ValidationReport::has_warning(std::string_view code) const {
  return std::any_of(warnings.begin(), warnings.end(), [&](const auto& e) { return e.code == code; });
}

namespace {

std::string summarize(const ValidationReport& report) {
  std::string msg = "dataset rejected with " + std::to_string(report.errors.size()) + " error(s)";
  if (!report.errors.empty()) {
    const auto& first = report.errors.front();
    msg += "; first: " + first.code + " (" + first.entity + "): " + first.message;
  }
  return msg;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(Errc::ValidationError, summarize(report)), report_(std::move(report)) {}

ValidationReport validate_dataset(const DatasetParts& d) {
  ValidationReport r;
  r.images = d.images.size();
  r.people = d.people.size();
  r.classes = d.classes.size();
  r.detections = d.detections.size();

  auto error = [&](std::string code, std::string entity, std::string message) {
    r.errors.push_back({std::move(code), std::move(entity), std::move(message)});
  };
  auto warning = [&](std::string code, std::string entity, std::string message) {
    r.warnings.push_back({std::move(code), std::move(entity), std::move(message)});
  };

  std::set<std::string_view> classes;
  for (const auto& c : d.classes) {
    if (c.empty()) error("EMPTY_ID", c, "class name is empty");
    if (!classes.insert(c).second) error("DUPLICATE_CLASS", c, "class listed more than once");
  }

  std::set<std::string_view> people;
  for (const auto& p : d.people) {
    if (p.empty()) error("EMPTY_ID", p, "person id is empty");
    if (!people.insert(p).second) error("DUPLICATE_PERSON_ID", p, "person listed more than once");
  }

  std::map<std::string_view, const ImageRecord*> images;
  for (const auto& img : d.images) {
    if (img.id.empty()) error("EMPTY_ID", img.id, "image id is empty");
    if (!images.emplace(img.id, &img).second) {
      error("DUPLICATE_IMAGE_ID", img.id, "image id appears more than once");
    }
    if (!people.contains(img.person)) {
      error("UNKNOWN_PERSON", img.id, "image owner '" + img.person + "' is not a listed person");
    }
    if (img.width <= 0 || img.height <= 0) {
      error("BAD_IMAGE_SIZE", img.id, "image width and height must be positive");
    }
  }

  std::set<std::string_view> detection_ids;
  for (const auto& det : d.detections) {
    if (det.id.empty()) error("EMPTY_ID", det.id, "detection id is empty");
    if (!detection_ids.insert(det.id).second) {
      error("DUPLICATE_DETECTION_ID", det.id, "detection id appears more than once");
    }
    if (!classes.contains(det.class_name)) {
      error("UNKNOWN_CLASS", det.id, "class '" + det.class_name + "' is not a listed class");
    }
    if (!std::isfinite(det.confidence) || det.confidence < 0.0 || det.confidence > 1.0) {
      error("CONFIDENCE_RANGE", det.id, "confidence must lie in [0, 1]");
    }

    const BBox& b = det.bbox;
    const bool finite = std::isfinite(b.x) && std::isfinite(b.y) && std::isfinite(b.w) &&
                        std::isfinite(b.h);
    const bool box_ok = finite && b.w > 0.0 && b.h > 0.0 && b.x >= 0.0 && b.y >= 0.0;
    if (!box_ok) {
      error("BAD_BBOX", det.id, "bbox needs w > 0, h > 0, x >= 0, y >= 0");
    }

    auto it = images.find(det.image);
    if (it == images.end()) {
      error("DANGLING_IMAGE_REF", det.id, "image '" + det.image + "' does not exist");
      continue;
    }
    const ImageRecord& img = *it->second;
    if (box_ok && img.width > 0 && img.height > 0) {
      if (b.right() > img.width || b.bottom() > img.height) {
        warning("BBOX_OUT_OF_BOUNDS", det.id, "bbox extends past the image bounds");
      }
      if (b.w <= 1.0 && b.h <= 1.0 && (img.width > 1 || img.height > 1)) {
        warning("SUSPECT_NORMALIZED", det.id, "bbox looks like normalized coordinates");
      }
    }
  }

  if (d.ground_truth) {
    std::set<std::string_view> seen;
    for (const auto& gt : *d.ground_truth) {
      if (!images.contains(gt.image)) {
        error("DANGLING_IMAGE_REF", gt.image, "ground truth names a missing image");
      }
      if (!seen.insert(gt.image).second) {
        error("DUPLICATE_GROUND_TRUTH", gt.image, "image has more than one ground truth entry");
      }
      for (const auto& label : gt.labels) {
        if (!classes.contains(label)) {
          error("UNKNOWN_LABEL", gt.image, "ground truth label '" + label + "' is not a listed class");
        }
      }
    }
  }
  return r;
}

Dataset Dataset::from_parts(DatasetParts parts) {
  ValidationReport report = validate_dataset(parts);
  if (!report.accepted()) throw ValidationError(std::move(report));
  return Dataset(std::move(parts));
}

Dataset::Dataset(DatasetParts parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.classes.size(); ++i) class_index_.emplace(parts_.classes[i], i);
  for (std::size_t i = 0; i < parts_.people.size(); ++i) person_index_.emplace(parts_.people[i], i);
  images_by_person_.resize(parts_.people.size());
  for (std::size_t i = 0; i < parts_.images.size(); ++i) {
    image_index_.emplace(parts_.images[i].id, i);
    images_by_person_[person_index_.at(parts_.images[i].person)].push_back(i);
  }
  detections_by_image_.resize(parts_.images.size());
  for (std::size_t i = 0; i < parts_.detections.size(); ++i) {
    auto& det = parts_.detections[i];
    det.verdict = Verdict::Unreviewed;
    detection_index_.emplace(det.id, i);
    detections_by_image_[image_index_.at(det.image)].push_back(i);
  }
}

const ImageRecord* Dataset::find_image(std::string_view id) const {
  auto it = image_index_.find(id);
  return it == image_index_.end() ? nullptr : &parts_.images[it->second];
}

const Detection* Dataset::find_detection(std::string_view id) const {
  auto it = detection_index_.find(id);
  return it == detection_index_.end() ? nullptr : &parts_.detections[it->second];
}

bool Dataset::has_class(std::string_view name) const { return class_index_.contains(name); }

bool Dataset::has_person(std::string_view id) const { return person_index_.contains(id); }

std::vector<std::reference_wrapper<const Detection>> Dataset::detections_of(
    std::string_view image_id) const {
  std::vector<std::reference_wrapper<const Detection>> out;
  auto it = image_index_.find(image_id);
  if (it == image_index_.end()) return out;
  for (std::size_t i : detections_by_image_[it->second]) out.emplace_back(parts_.detections[i]);
  return out;
}

std::vector<std::reference_wrapper<const ImageRecord>> Dataset::images_of(
    std::string_view person) const {
  std::vector<std::reference_wrapper<const ImageRecord>> out;
  auto it = person_index_.find(person);
  if (it == person_index_.end()) return out;
  for (std::size_t i : images_by_person_[it->second]) out.emplace_back(parts_.images[i]);
  return out;
}

}  // namespace vismca
