#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vismca/core/model.hpp"
#include "vismca/core/timestamp.hpp"

namespace vismca::annotation {

using LabelSet = std::set<std::string, std::less<>>;

/// Human truth for one image. Replaced wholesale on every save.
struct CorrectionRecord {
  std::string image;
  LabelSet labels;
  bool difficult = false;
  std::uint64_t revision = 0;  // per image, starts at 1
  Timestamp updated_at{};

  friend bool operator==(const CorrectionRecord&, const CorrectionRecord&) = default;
};

enum class EventKind { SetVerdict, AssignLabels, BulkVerdict };

std::string_view event_kind_name(EventKind kind) noexcept;

struct SetVerdictPayload {
  std::string detection;
  Verdict verdict = Verdict::Unreviewed;
  friend bool operator==(const SetVerdictPayload&, const SetVerdictPayload&) = default;
};

struct AssignLabelsPayload {
  std::string image;
  LabelSet labels;
  bool difficult = false;
  friend bool operator==(const AssignLabelsPayload&, const AssignLabelsPayload&) = default;
};

struct BulkVerdictPayload {
  std::vector<std::string> detections;
  Verdict verdict = Verdict::Unreviewed;
  friend bool operator==(const BulkVerdictPayload&, const BulkVerdictPayload&) = default;
};

using EventPayload = std::variant<SetVerdictPayload, AssignLabelsPayload, BulkVerdictPayload>;

struct LogEvent {
  std::uint64_t seq = 0;  // dense, from 1
  EventPayload payload;
  Timestamp at{};

  [[nodiscard]] EventKind kind() const noexcept { return static_cast<EventKind>(payload.index()); }

  friend bool operator==(const LogEvent&, const LogEvent&) = default;
};

/// Materialized state at one log position, persisted for fast startup.
struct StoreSnapshot {
  std::uint64_t seq = 0;
  std::map<std::string, CorrectionRecord, std::less<>> records;
  std::map<std::string, Verdict, std::less<>> verdicts;

  friend bool operator==(const StoreSnapshot&, const StoreSnapshot&) = default;
};

/// Correction state folded from an append-only event log.
///
/// Every mutation is split in two steps: a const `prepare_*` call validates
/// the request against the dataset and current state and returns the event it
/// would append, and `apply` folds a validated event into the state. The
/// convenience mutators do both. A rejected request never touches the state
/// or the log. Last write wins per image and per detection.
class CorrectionStore {
 public:
  explicit CorrectionStore(std::shared_ptr<const Dataset> dataset, Clock clock = system_now);

  [[nodiscard]] const Dataset& dataset() const noexcept { return *dataset_; }
  [[nodiscard]] const std::shared_ptr<const Dataset>& dataset_ptr() const noexcept { return dataset_; }

  /// Sequence number of the last applied event (0 when empty).
  [[nodiscard]] std::uint64_t revision() const noexcept { return log_.size(); }

  [[nodiscard]] Verdict verdict(std::string_view detection_id) const;
  [[nodiscard]] const CorrectionRecord* record(std::string_view image_id) const;
  [[nodiscard]] const std::map<std::string, CorrectionRecord, std::less<>>& records() const noexcept {
    return records_;
  }
  [[nodiscard]] const std::map<std::string, Verdict, std::less<>>& verdicts() const noexcept {
    return verdicts_;
  }
  [[nodiscard]] std::span<const LogEvent> log() const noexcept { return log_; }

  [[nodiscard]] LogEvent prepare_set_verdict(std::string_view detection_id, Verdict v) const;
  [[nodiscard]] LogEvent prepare_bulk_verdict(std::span<const std::string> detection_ids,
                                              Verdict v) const;
  [[nodiscard]] LogEvent prepare_assign_labels(std::string_view image_id, LabelSet labels,
                                               bool difficult) const;

  /// Folds one event into the state. Throws Error(CorruptLog) when the event
  /// is out of sequence or references entities the dataset does not have.
  void apply(const LogEvent& event);

  /// Returns the store revision after the change.
  std::uint64_t set_verdict(std::string_view detection_id, Verdict v);
  /// All-or-nothing. Returns the number of detections updated.
  std::size_t bulk_set_verdict(std::span<const std::string> detection_ids, Verdict v);
  const CorrectionRecord& assign_labels(std::string_view image_id, LabelSet labels, bool difficult);

  /// Seeds records from the dataset's ground truth (one AssignLabels event per
  /// entry). Returns the number of events appended.
  std::size_t seed_from_ground_truth();

  [[nodiscard]] StoreSnapshot snapshot() const;

  /// Rebuilds a store from a snapshot taken at `snap.seq` plus the complete
  /// log; only the events after the snapshot are folded.
  static CorrectionStore restore(std::shared_ptr<const Dataset> dataset, StoreSnapshot snap,
                                 std::vector<LogEvent> log, Clock clock = system_now);

  void set_clock(Clock clock) { clock_ = std::move(clock); }

  /// Full state equality: records, verdicts and log.
  friend bool operator==(const CorrectionStore& a, const CorrectionStore& b) {
    return a.records_ == b.records_ && a.verdicts_ == b.verdicts_ && a.log_ == b.log_;
  }

 private:
  void require_detection(std::string_view id, Errc code) const;

  std::shared_ptr<const Dataset> dataset_;
  Clock clock_;
  std::map<std::string, CorrectionRecord, std::less<>> records_;
  std::map<std::string, Verdict, std::less<>> verdicts_;
  std::vector<LogEvent> log_;
};

/// Rebuilds a store from a log. Throws Error(CorruptLog) on a sequence gap,
/// a duplicate, or an event that does not fit the dataset.
CorrectionStore replay(std::shared_ptr<const Dataset> dataset, std::span<const LogEvent> log);

}  // namespace vismca::annotation
