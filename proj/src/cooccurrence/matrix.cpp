#include "vismca/cooccurrence/matrix.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "vismca/annotation/review.hpp"

namespace vismca::cooccurrence {

DistributionMatrix::DistributionMatrix(std::vector<std::string> people,
                                       std::vector<std::string> objects,
                                       std::vector<MatrixCell> cells, MatrixSummary summary)
    : people_(std::move(people)),
      objects_(std::move(objects)),
      cells_(std::move(cells)),
      summary_(std::move(summary)) {}

const MatrixCell& DistributionMatrix::cell(std::string_view person, std::string_view object) const {
  auto p = std::find(people_.begin(), people_.end(), person);
  auto o = std::find(objects_.begin(), objects_.end(), object);
  if (p == people_.end() || o == objects_.end()) {
    throw Error(Errc::BadArgument,
                "no matrix cell for (" + std::string(person) + ", " + std::string(object) + ")");
  }
  return at(static_cast<std::size_t>(p - people_.begin()), static_cast<std::size_t>(o - objects_.begin()));
}

DistributionMatrix build_matrix(const annotation::CorrectionStore& store) {
  const Dataset& dataset = store.dataset();
  const auto& people = dataset.people();
  const auto& objects = dataset.classes();

  std::map<std::string_view, std::size_t> object_idx;
  for (std::size_t i = 0; i < objects.size(); ++i) object_idx.emplace(objects[i], i);

  std::vector<MatrixCell> cells(people.size() * objects.size());
  std::vector<double> conf_sum(cells.size(), 0.0);
  for (std::size_t p = 0; p < people.size(); ++p) {
    for (std::size_t o = 0; o < objects.size(); ++o) {
      auto& c = cells[p * objects.size() + o];
      c.person = people[p];
      c.object = objects[o];
    }
    for (const ImageRecord& img : dataset.images_of(people[p])) {
      std::set<std::size_t> classes_in_image;
      for (const Detection& det : dataset.detections_of(img.id)) {
        const std::size_t k = p * objects.size() + object_idx.at(det.class_name);
        ++cells[k].detected_count;
        conf_sum[k] += det.confidence;
        classes_in_image.insert(k);
      }
      for (std::size_t k : classes_in_image) ++cells[k].detected_image_count;
      if (const auto* rec = store.record(img.id)) {
        for (const auto& label : rec->labels) ++cells[p * objects.size() + object_idx.at(label)].corrected_count;
      }
    }
  }

  MatrixSummary summary;
  summary.per_person.resize(people.size());
  summary.per_object.resize(objects.size());
  for (std::size_t p = 0; p < people.size(); ++p) summary.per_person[p].key = people[p];
  for (std::size_t o = 0; o < objects.size(); ++o) summary.per_object[o].key = objects[o];
  for (std::size_t k = 0; k < cells.size(); ++k) {
    auto& c = cells[k];
    if (c.detected_count > 0) {
      c.mean_confidence =
          std::clamp(conf_sum[k] / static_cast<double>(c.detected_count), 0.0, 1.0);
    }
    for (Marginal* m : {&summary.per_person[k / objects.size()], &summary.per_object[k % objects.size()]}) {
      m->detected_count += c.detected_count;
      m->detected_image_count += c.detected_image_count;
      m->corrected_count += c.corrected_count;
    }
    summary.detected_total += c.detected_count;
    summary.corrected_total += c.corrected_count;
  }
  return DistributionMatrix(people, objects, std::move(cells), std::move(summary));
}

std::string matrix_csv(const DistributionMatrix& matrix) {
  std::vector<const MatrixCell*> rows;
  rows.reserve(matrix.cells().size());
  for (const auto& c : matrix.cells()) rows.push_back(&c);
  std::sort(rows.begin(), rows.end(), [](const MatrixCell* a, const MatrixCell* b) {
    if (a->person != b->person) return a->person < b->person;
    return a->object < b->object;
  });

  std::string out = "person,object,detected_count,detected_image_count,mean_confidence,corrected_count\n";
  for (const MatrixCell* c : rows) {
    out += annotation::csv_field(c->person);
    out += ',';
    out += annotation::csv_field(c->object);
    out += ',' + std::to_string(c->detected_count);
    out += ',' + std::to_string(c->detected_image_count);
    out += ',';
    if (c->mean_confidence) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", *c->mean_confidence);
      out += buf;
    }
    out += ',' + std::to_string(c->corrected_count);
    out += '\n';
  }
  return out;
}

std::vector<PersonOverlap> overlap_stats(const DistributionMatrix& matrix) {
  std::vector<PersonOverlap> out;
  out.reserve(matrix.people().size());
  for (std::size_t p = 0; p < matrix.people().size(); ++p) {
    PersonOverlap s{matrix.people()[p]};
    for (std::size_t o = 0; o < matrix.objects().size(); ++o) {
      const auto& c = matrix.at(p, o);
      const bool det = c.detected_count > 0;
      const bool corr = c.corrected_count > 0;
      if (det && corr) {
        ++s.overlap_cells;
      } else if (det) {
        ++s.detected_only_cells;
      } else if (corr) {
        ++s.corrected_only_cells;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace vismca::cooccurrence
