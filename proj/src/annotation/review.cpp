#include "vismca/annotation/review.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace vismca::annotation {

LabelMenu label_menu(const Dataset& dataset, std::string_view image_id) {
  if (!dataset.find_image(image_id)) {
    throw Error(Errc::UnknownImage, "unknown image '" + std::string(image_id) + "'");
  }

  std::map<std::string_view, double> best;
  for (const Detection& det : dataset.detections_of(image_id)) {
    auto [it, inserted] = best.emplace(det.class_name, det.confidence);
    if (!inserted) it->second = std::max(it->second, det.confidence);
  }

  LabelMenu menu;
  for (const auto& [name, conf] : best) menu.detected.push_back({std::string(name), conf});
  std::sort(menu.detected.begin(), menu.detected.end(), [](const auto& a, const auto& b) {
    if (a.max_confidence != b.max_confidence) return a.max_confidence > b.max_confidence;
    return a.class_name < b.class_name;
  });

  for (const auto& c : dataset.classes()) {
    if (!best.contains(c)) menu.alternative.push_back(c);
  }
  std::sort(menu.alternative.begin(), menu.alternative.end());
  return menu;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string export_csv(const CorrectionStore& store) {
  const Dataset& dataset = store.dataset();
  std::string out(kExportHeader);
  out += '\n';
  // records_ is keyed by image id and labels are an ordered set, so iteration
  // order is already the export order.
  for (const auto& [image_id, rec] : store.records()) {
    const ImageRecord* img = dataset.find_image(image_id);
    std::set<std::string_view> detected;
    for (const Detection& det : dataset.detections_of(image_id)) detected.insert(det.class_name);
    for (const auto& label : rec.labels) {
      out += csv_field(image_id);
      out += ',';
      out += csv_field(img->person);
      out += ',';
      out += csv_field(label);
      out += ',';
      out += detected.contains(label) ? "detected" : "manual";
      out += ',';
      out += rec.difficult ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

namespace {

// RFC-4180 records; accepts LF or CRLF line endings.
std::vector<std::vector<std::string>> parse_csv_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    rows.push_back(std::move(row));
    row.clear();
    field_started = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      if (field_started && !field.empty()) throw Error(Errc::ParseError, "stray quote in CSV field");
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (i + 1 >= text.size() || text[i + 1] != '\n') throw Error(Errc::ParseError, "bare CR in CSV");
    } else {
      field += c;
      field_started = true;
    }
    ++i;
  }
  if (quoted) throw Error(Errc::ParseError, "unterminated quoted CSV field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

}  // namespace

std::vector<GroundTruthEntry> parse_export_csv(std::string_view text) {
  auto rows = parse_csv_rows(text);
  if (rows.empty()) throw Error(Errc::ParseError, "CSV export is empty");
  const std::vector<std::string> header = {"image_id", "person_id", "label", "origin", "difficult"};
  if (rows.front() != header) throw Error(Errc::ParseError, "unexpected CSV header");

  std::vector<GroundTruthEntry> entries;
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw Error(Errc::ParseError, "CSV row " + std::to_string(r + 1) + " has " +
                                        std::to_string(row.size()) + " fields");
    }
    auto [it, inserted] = index.emplace(row[0], entries.size());
    if (inserted) entries.push_back({row[0], {}});
    entries[it->second].labels.push_back(row[2]);
  }
  return entries;
}

}  // namespace vismca::annotation
