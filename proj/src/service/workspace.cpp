#include "vismca/service/workspace.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "vismca/core/dataset_io.hpp"

namespace vismca::service {

namespace fs = std::filesystem;
using annotation::CorrectionStore;

StorePaths::StorePaths(fs::path d)
    : dir(std::move(d)),
      dataset(dir / "dataset.json"),
      log(dir / "corrections.log.jsonl"),
      snapshot(dir / "snapshot.json"),
      lock(dir / "LOCK") {}

StoreLock StoreLock::acquire(const StorePaths& paths) {
  const int fd = ::open(paths.lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(Errc::IoError, "cannot open " + paths.lock.string() + ": " + std::strerror(errno));
  }
  if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
    const int err = errno;
    ::close(fd);
    if (err == EWOULDBLOCK) {
      throw Error(Errc::StoreLocked, "store " + paths.dir.string() + " is in use by another process");
    }
    throw Error(Errc::IoError, "cannot lock " + paths.lock.string() + ": " + std::strerror(err));
  }
  return StoreLock(fd);
}

StoreLock::StoreLock(StoreLock&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

StoreLock& StoreLock::operator=(StoreLock&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

StoreLock::~StoreLock() {
  if (fd_ >= 0) ::close(fd_);  // closing the descriptor releases the flock
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(Errc::IoError, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoError, "cannot move " + tmp.string() + " into place: " + ec.message());
}

IngestResult ingest_into_store(const fs::path& dataset_file, const fs::path& store_dir, Clock clock) {
  const std::string text = read_file(dataset_file);
  DatasetParts parts = parse_dataset(text);
  IngestResult result;
  result.report = validate_dataset(parts);
  auto dataset = std::make_shared<const Dataset>(Dataset::from_parts(std::move(parts)));

  std::error_code ec;
  fs::create_directories(store_dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create store " + store_dir.string() + ": " + ec.message());
  const StorePaths paths(store_dir);
  StoreLock lock = StoreLock::acquire(paths);

  std::vector<annotation::LogEvent> log = annotation::read_log_file(paths.log);
  if (fs::exists(paths.dataset)) {
    const bool same = ingest_dataset(read_file(paths.dataset)) == *dataset;
    if (!same && !log.empty()) {
      throw Error(Errc::IngestFailure,
                  "store " + store_dir.string() + " already holds corrections for a different dataset");
    }
    result.dataset_replaced = !same;
  }
  write_file_atomic(paths.dataset, serialize_dataset(*dataset));

  CorrectionStore store = annotation::replay(dataset, log);
  store.set_clock(clock);
  if (log.empty() && dataset->ground_truth()) {
    annotation::LogFileWriter writer(paths.log);
    CorrectionStore seeded(dataset, clock);
    result.seeded_records = seeded.seed_from_ground_truth();
    for (const auto& e : seeded.log()) writer.append(e);
    store = std::move(seeded);
  }
  write_file_atomic(paths.snapshot, annotation::encode_snapshot(store.snapshot()));
  return result;
}

Workspace::Workspace(StorePaths paths, bool read_only, std::shared_ptr<const Dataset> dataset,
                     std::shared_ptr<const CorrectionStore> state, std::optional<StoreLock> lock,
                     std::unique_ptr<annotation::EventSink> sink, Clock clock)
    : paths_(std::move(paths)),
      read_only_(read_only),
      dataset_(std::move(dataset)),
      lock_(std::move(lock)),
      sink_(std::move(sink)),
      clock_(std::move(clock)),
      state_(std::move(state)) {}

std::unique_ptr<Workspace> Workspace::open(const fs::path& store_dir, bool read_only, Clock clock) {
  StorePaths paths(store_dir);
  if (!fs::exists(paths.dataset)) {
    throw Error(Errc::IngestFailure, "store " + store_dir.string() + " has no dataset; run ingest first");
  }

  std::optional<StoreLock> lock;
  if (!read_only) lock.emplace(StoreLock::acquire(paths));

  std::shared_ptr<const Dataset> dataset;
  try {
    dataset = std::make_shared<const Dataset>(ingest_dataset(read_file(paths.dataset)));
  } catch (const Error& e) {
    throw Error(Errc::IngestFailure, std::string("stored dataset is unusable: ") + e.what());
  }

  std::vector<annotation::LogEvent> log = annotation::read_log_file(paths.log);
  std::optional<CorrectionStore> store;
  if (fs::exists(paths.snapshot)) {
    // The snapshot only speeds up startup; the log stays authoritative.
    try {
      auto snap = annotation::decode_snapshot(read_file(paths.snapshot));
      if (snap.seq <= log.size()) store.emplace(CorrectionStore::restore(dataset, std::move(snap), log, clock));
    } catch (const Error&) {
      store.reset();
    }
  }
  if (!store) {
    store.emplace(annotation::replay(dataset, log));
    store->set_clock(clock);
  }

  std::unique_ptr<annotation::EventSink> sink;
  if (!read_only) sink = std::make_unique<annotation::LogFileWriter>(paths.log);
  auto state = std::make_shared<const CorrectionStore>(std::move(*store));
  return std::unique_ptr<Workspace>(new Workspace(std::move(paths), read_only, std::move(dataset),
                                                  std::move(state), std::move(lock), std::move(sink),
                                                  std::move(clock)));
}

std::shared_ptr<const CorrectionStore> Workspace::snapshot() const {
  std::lock_guard lk(state_mutex_);
  return state_;
}

template <class Prepare>
std::shared_ptr<const CorrectionStore> Workspace::commit(Prepare&& prepare) {
  std::lock_guard writer(write_mutex_);
  if (read_only_) throw Error(Errc::ReadOnly, "workspace is read-only");
  auto current = snapshot();
  annotation::LogEvent event = prepare(*current);
  auto next = std::make_shared<CorrectionStore>(*current);
  next->apply(event);
  sink_->append(event);
  std::lock_guard lk(state_mutex_);
  state_ = next;
  return next;
}

std::uint64_t Workspace::set_verdict(std::string_view detection_id, Verdict v) {
  return commit([&](const CorrectionStore& s) { return s.prepare_set_verdict(detection_id, v); })->revision();
}

std::size_t Workspace::bulk_set_verdict(std::span<const std::string> detection_ids, Verdict v) {
  commit([&](const CorrectionStore& s) { return s.prepare_bulk_verdict(detection_ids, v); });
  return std::set<std::string_view>(detection_ids.begin(), detection_ids.end()).size();
}

annotation::CorrectionRecord Workspace::assign_labels(std::string_view image_id, annotation::LabelSet labels,
                                                      bool difficult,
                                                      std::optional<std::uint64_t> expected_revision) {
  auto state = commit([&](const CorrectionStore& s) {
    if (expected_revision) {
      const auto* rec = s.record(image_id);
      const std::uint64_t current = rec ? rec->revision : 0;
      if (current != *expected_revision) {
        throw Error(Errc::StaleRevision, "image " + std::string(image_id) + " is at revision " +
                                             std::to_string(current) + ", not " +
                                             std::to_string(*expected_revision));
      }
    }
    return s.prepare_assign_labels(image_id, std::move(labels), difficult);
  });
  return *state->record(image_id);
}

void Workspace::write_snapshot() const {
  if (read_only_) return;
  write_file_atomic(paths_.snapshot, annotation::encode_snapshot(snapshot()->snapshot()));
}

void Workspace::set_sink(std::unique_ptr<annotation::EventSink> sink) {
  std::lock_guard writer(write_mutex_);
  sink_ = std::move(sink);
}

}  // namespace vismca::service
