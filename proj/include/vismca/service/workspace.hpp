#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "vismca/annotation/event_log.hpp"
#include "vismca/annotation/store.hpp"

namespace vismca::service {

/// Files of one store directory.
struct StorePaths {
  explicit StorePaths(std::filesystem::path dir);

  std::filesystem::path dir;
  std::filesystem::path dataset;   // dataset.json
  std::filesystem::path log;       // corrections.log.jsonl
  std::filesystem::path snapshot;  // snapshot.json
  std::filesystem::path lock;      // LOCK
};

/// Exclusive advisory lock (flock) on <store>/LOCK, held for the object's
/// lifetime. Throws Error(StoreLocked) when another holder exists.
class StoreLock {
 public:
  static StoreLock acquire(const StorePaths& paths);

  StoreLock(StoreLock&& other) noexcept;
  StoreLock& operator=(StoreLock&& other) noexcept;
  StoreLock(const StoreLock&) = delete;
  StoreLock& operator=(const StoreLock&) = delete;
  ~StoreLock();

 private:
  explicit StoreLock(int fd) : fd_(fd) {}
  int fd_ = -1;
};

struct IngestResult {
  ValidationReport report;
  std::size_t seeded_records = 0;
  bool dataset_replaced = false;
};

/// Validates `dataset_file`, copies it into the store and seeds corrections
/// from its ground truth when the log is still empty. Throws ParseError,
/// ValidationError, StoreLocked, or IngestFailure when the store already
/// holds corrections for a different dataset.
IngestResult ingest_into_store(const std::filesystem::path& dataset_file,
                               const std::filesystem::path& store_dir, Clock clock = system_now);

/// A store directory opened for serving or batch work.
///
/// Readers call snapshot() and get an immutable store that stays consistent
/// for as long as they hold it. Mutations are serialized; each one is
/// validated, applied to a private copy, appended to the log, and only then
/// published. A failure at any step leaves both the log and the published
/// state untouched.
class Workspace {
 public:
  /// Throws IngestFailure (no or invalid dataset), CorruptLog, StoreLocked.
  static std::unique_ptr<Workspace> open(const std::filesystem::path& store_dir, bool read_only,
                                         Clock clock = system_now);

  [[nodiscard]] std::shared_ptr<const annotation::CorrectionStore> snapshot() const;
  [[nodiscard]] const Dataset& dataset() const noexcept { return *dataset_; }
  [[nodiscard]] bool read_only() const noexcept { return read_only_; }
  [[nodiscard]] const StorePaths& paths() const noexcept { return paths_; }

  std::uint64_t set_verdict(std::string_view detection_id, Verdict v);
  std::size_t bulk_set_verdict(std::span<const std::string> detection_ids, Verdict v);
  /// With expected_revision set, fails with Error(StaleRevision) unless the
  /// image's current record revision (0 when absent) matches.
  annotation::CorrectionRecord assign_labels(std::string_view image_id, annotation::LabelSet labels,
                                             bool difficult,
                                             std::optional<std::uint64_t> expected_revision = std::nullopt);

  /// Persists the current state for fast startup.
  void write_snapshot() const;

  /// Replaces the log writer; used to inject append failures in tests.
  void set_sink(std::unique_ptr<annotation::EventSink> sink);

 private:
  Workspace(StorePaths paths, bool read_only, std::shared_ptr<const Dataset> dataset,
            std::shared_ptr<const annotation::CorrectionStore> state, std::optional<StoreLock> lock,
            std::unique_ptr<annotation::EventSink> sink, Clock clock);

  template <class Prepare>
  std::shared_ptr<const annotation::CorrectionStore> commit(Prepare&& prepare);

  StorePaths paths_;
  bool read_only_;
  std::shared_ptr<const Dataset> dataset_;
  std::optional<StoreLock> lock_;
  std::unique_ptr<annotation::EventSink> sink_;
  Clock clock_;

  std::mutex write_mutex_;
  mutable std::mutex state_mutex_;
  std::shared_ptr<const annotation::CorrectionStore> state_;
};

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace vismca::service
