#include "vismca/annotation/store.hpp"

#include <utility>

namespace vismca::annotation {

std::string_view event_kind_name(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::SetVerdict: return "SetVerdict";
    case EventKind::AssignLabels: return "AssignLabels";
    case EventKind::BulkVerdict: return "BulkVerdict";
  }
  return "SetVerdict";
}

CorrectionStore::CorrectionStore(std::shared_ptr<const Dataset> dataset, Clock clock)
    : dataset_(std::move(dataset)), clock_(std::move(clock)) {
  if (!dataset_) throw Error(Errc::BadArgument, "correction store needs a dataset");
}

Verdict CorrectionStore::verdict(std::string_view detection_id) const {
  auto it = verdicts_.find(detection_id);
  return it == verdicts_.end() ? Verdict::Unreviewed : it->second;
}

const CorrectionRecord* CorrectionStore::record(std::string_view image_id) const {
  auto it = records_.find(image_id);
  return it == records_.end() ? nullptr : &it->second;
}

void CorrectionStore::require_detection(std::string_view id, Errc code) const {
  if (!dataset_->find_detection(id)) {
    throw Error(code, "unknown detection '" + std::string(id) + "'");
  }
}

LogEvent CorrectionStore::prepare_set_verdict(std::string_view detection_id, Verdict v) const {
  require_detection(detection_id, Errc::UnknownDetection);
  return LogEvent{revision() + 1, SetVerdictPayload{std::string(detection_id), v}, clock_()};
}

LogEvent CorrectionStore::prepare_bulk_verdict(std::span<const std::string> detection_ids,
                                               Verdict v) const {
  if (detection_ids.empty()) throw Error(Errc::EmptySelection, "bulk verdict needs at least one id");
  for (const auto& id : detection_ids) require_detection(id, Errc::UnknownDetection);
  BulkVerdictPayload payload{{detection_ids.begin(), detection_ids.end()}, v};
  return LogEvent{revision() + 1, std::move(payload), clock_()};
}

LogEvent CorrectionStore::prepare_assign_labels(std::string_view image_id, LabelSet labels,
                                                bool difficult) const {
  if (!dataset_->find_image(image_id)) {
    throw Error(Errc::UnknownImage, "unknown image '" + std::string(image_id) + "'");
  }
  for (const auto& label : labels) {
    if (!dataset_->has_class(label)) {
      throw Error(Errc::UnknownLabel, "label '" + label + "' is not a dataset class");
    }
  }
  AssignLabelsPayload payload{std::string(image_id), std::move(labels), difficult};
  return LogEvent{revision() + 1, std::move(payload), clock_()};
}

namespace {

[[noreturn]] void corrupt(const LogEvent& e, const std::string& what) {
  throw Error(Errc::CorruptLog, "event " + std::to_string(e.seq) + ": " + what);
}

}  // namespace

void CorrectionStore::apply(const LogEvent& event) {
  if (event.seq != revision() + 1) {
    throw Error(Errc::CorruptLog, "expected seq " + std::to_string(revision() + 1) + ", found " +
                                      std::to_string(event.seq));
  }

  // Validate fully before mutating anything.
  if (const auto* p = std::get_if<SetVerdictPayload>(&event.payload)) {
    if (!dataset_->find_detection(p->detection)) corrupt(event, "unknown detection " + p->detection);
    verdicts_[p->detection] = p->verdict;
  } else if (const auto* p = std::get_if<BulkVerdictPayload>(&event.payload)) {
    if (p->detections.empty()) corrupt(event, "empty bulk verdict");
    for (const auto& id : p->detections) {
      if (!dataset_->find_detection(id)) corrupt(event, "unknown detection " + id);
    }
    for (const auto& id : p->detections) verdicts_[id] = p->verdict;
  } else if (const auto* p = std::get_if<AssignLabelsPayload>(&event.payload)) {
    if (!dataset_->find_image(p->image)) corrupt(event, "unknown image " + p->image);
    for (const auto& label : p->labels) {
      if (!dataset_->has_class(label)) corrupt(event, "unknown label " + label);
    }
    auto& rec = records_[p->image];
    const std::uint64_t next_revision = rec.revision + 1;
    rec = CorrectionRecord{p->image, p->labels, p->difficult, next_revision, event.at};
  }
  log_.push_back(event);
}

std::uint64_t CorrectionStore::set_verdict(std::string_view detection_id, Verdict v) {
  apply(prepare_set_verdict(detection_id, v));
  return revision();
}

std::size_t CorrectionStore::bulk_set_verdict(std::span<const std::string> detection_ids,
                                              Verdict v) {
  LogEvent event = prepare_bulk_verdict(detection_ids, v);
  apply(event);
  const auto& ids = std::get<BulkVerdictPayload>(event.payload).detections;
  return std::set<std::string_view>(ids.begin(), ids.end()).size();
}

const CorrectionRecord& CorrectionStore::assign_labels(std::string_view image_id, LabelSet labels,
                                                       bool difficult) {
  apply(prepare_assign_labels(image_id, std::move(labels), difficult));
  return records_.find(image_id)->second;
}

std::size_t CorrectionStore::seed_from_ground_truth() {
  const auto& gt = dataset_->ground_truth();
  if (!gt) return 0;
  std::size_t n = 0;
  for (const auto& entry : *gt) {
    assign_labels(entry.image, LabelSet(entry.labels.begin(), entry.labels.end()), false);
    ++n;
  }
  return n;
}

StoreSnapshot CorrectionStore::snapshot() const { return {revision(), records_, verdicts_}; }

CorrectionStore CorrectionStore::restore(std::shared_ptr<const Dataset> dataset, StoreSnapshot snap,
                                         std::vector<LogEvent> log, Clock clock) {
  if (snap.seq > log.size()) {
    throw Error(Errc::CorruptLog, "snapshot at seq " + std::to_string(snap.seq) +
                                      " is ahead of the log (" + std::to_string(log.size()) +
                                      " events)");
  }
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].seq != i + 1) {
      throw Error(Errc::CorruptLog, "log seq " + std::to_string(log[i].seq) + " at position " +
                                        std::to_string(i + 1));
    }
  }
  CorrectionStore store(std::move(dataset), std::move(clock));
  for (const auto& [image, rec] : snap.records) {
    if (!store.dataset_->find_image(image)) {
      throw Error(Errc::CorruptLog, "snapshot names unknown image " + image);
    }
  }
  for (const auto& [det, v] : snap.verdicts) {
    if (!store.dataset_->find_detection(det)) {
      throw Error(Errc::CorruptLog, "snapshot names unknown detection " + det);
    }
  }
  store.records_ = std::move(snap.records);
  store.verdicts_ = std::move(snap.verdicts);
  std::vector<LogEvent> tail(std::make_move_iterator(log.begin() + static_cast<std::ptrdiff_t>(snap.seq)),
                             std::make_move_iterator(log.end()));
  log.resize(snap.seq);
  store.log_ = std::move(log);
  for (const auto& e : tail) store.apply(e);
  return store;
}

CorrectionStore replay(std::shared_ptr<const Dataset> dataset, std::span<const LogEvent> log) {
  CorrectionStore store(std::move(dataset));
  for (const auto& e : log) store.apply(e);
  return store;
}

}  // namespace vismca::annotation
