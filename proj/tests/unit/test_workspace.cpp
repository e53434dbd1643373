#include <doctest.h>

#include "store_support.hpp"
#include "vismca/annotation/event_log.hpp"
#include "vismca/service/workspace.hpp"

using namespace vismca;
using namespace vismca::service;
using vismca::testing::PartsBuilder;
using vismca::testing::TempDir;

namespace {

DatasetParts toy() {
  PartsBuilder b;
  b.classes({"pen", "key"}).people({"P"}).image("i1", "P").image("i2", "P");
  b.det("d1", "i1", "pen", 0.9).det("d2", "i2", "key", 0.4);
  b.truth("i1", {"pen"});
  return b.parts();
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::IoError;
}

class FailingSink final : public annotation::EventSink {
 public:
  void append(const annotation::LogEvent&) override { throw Error(Errc::IoError, "disk full"); }
};

}  // namespace

TEST_CASE("ingest writes dataset, seeded log and snapshot") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  const StorePaths paths(store);
  CHECK(std::filesystem::exists(paths.dataset));
  CHECK(std::filesystem::exists(paths.snapshot));
  CHECK(annotation::read_log_file(paths.log).size() == 1);

  // Re-ingesting the same dataset keeps the corrections.
  const auto again = ingest_into_store(dir / "data.json", store);
  CHECK(again.seeded_records == 0);
  CHECK_FALSE(again.dataset_replaced);
  CHECK(annotation::read_log_file(paths.log).size() == 1);
}

TEST_CASE("ingest refuses to swap the dataset under existing corrections") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  auto other = toy();
  other.classes.push_back("cup");
  write_file_atomic(dir / "other.json", serialize_dataset(other));
  CHECK(code_of([&] { ingest_into_store(dir / "other.json", store); }) == Errc::IngestFailure);
}

TEST_CASE("ingest reports invalid data") {
  TempDir dir;
  auto bad = toy();
  bad.detections[0].confidence = 1.5;
  write_file_atomic(dir / "bad.json", serialize_dataset(bad));
  CHECK(code_of([&] { ingest_into_store(dir / "bad.json", dir / "store"); }) == Errc::ValidationError);
  write_file_atomic(dir / "junk.json", "{");
  CHECK(code_of([&] { ingest_into_store(dir / "junk.json", dir / "store"); }) == Errc::ParseError);
}

TEST_CASE("open without ingest fails") {
  TempDir dir;
  CHECK(code_of([&] { (void)Workspace::open(dir / "nothing", false); }) == Errc::IngestFailure);
}

TEST_CASE("a store has a single writer") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  auto first = Workspace::open(store, false);
  CHECK(code_of([&] { (void)Workspace::open(store, false); }) == Errc::StoreLocked);
  CHECK(code_of([&] { (void)ingest_into_store(dir / "data.json", store); }) == Errc::StoreLocked);
  CHECK_NOTHROW((void)Workspace::open(store, true));
  first.reset();
  CHECK_NOTHROW((void)Workspace::open(store, false));
}

TEST_CASE("mutations persist across reopen") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  {
    auto ws = Workspace::open(store, false);
    ws->set_verdict("d1", Verdict::TruePositive);
    ws->assign_labels("i2", {"key"}, true);
  }
  auto ws = Workspace::open(store, true);
  const auto s = ws->snapshot();
  CHECK(s->verdict("d1") == Verdict::TruePositive);
  CHECK(s->record("i2")->difficult);
  CHECK(s->revision() == 3);
  CHECK(*s == annotation::replay(s->dataset_ptr(), annotation::read_log_file(ws->paths().log)));
}

TEST_CASE("a failed append leaves log and state untouched") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  auto ws = Workspace::open(store, false);
  const std::string log_before = read_file(ws->paths().log);
  const auto state_before = ws->snapshot();
  ws->set_sink(std::make_unique<FailingSink>());
  CHECK(code_of([&] { ws->set_verdict("d1", Verdict::FalsePositive); }) == Errc::IoError);
  const std::vector<std::string> ids{"d1", "d2"};
  CHECK(code_of([&] { ws->bulk_set_verdict(ids, Verdict::FalsePositive); }) == Errc::IoError);
  CHECK(ws->snapshot() == state_before);
  CHECK(read_file(ws->paths().log) == log_before);
}

TEST_CASE("validation failures never reach the log") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  auto ws = Workspace::open(store, false);
  const std::string log_before = read_file(ws->paths().log);
  const std::vector<std::string> ids{"d1", "ghost"};
  CHECK(code_of([&] { ws->bulk_set_verdict(ids, Verdict::TruePositive); }) == Errc::UnknownDetection);
  CHECK(code_of([&] { ws->assign_labels("i1", {"flyingCar"}, false); }) == Errc::UnknownLabel);
  CHECK(read_file(ws->paths().log) == log_before);
  CHECK(ws->snapshot()->verdict("d1") == Verdict::Unreviewed);
}

TEST_CASE("optimistic revision check") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  auto ws = Workspace::open(store, false);
  CHECK(ws->assign_labels("i2", {"key"}, false, 0).revision == 1);
  CHECK(code_of([&] { ws->assign_labels("i2", {}, false, 0); }) == Errc::StaleRevision);
  CHECK(ws->assign_labels("i2", {}, false, 1).revision == 2);
}

TEST_CASE("read-only workspaces reject writes") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  auto ws = Workspace::open(store, true);
  CHECK(code_of([&] { ws->set_verdict("d1", Verdict::TruePositive); }) == Errc::ReadOnly);
}

TEST_CASE("snapshots taken before a write stay unchanged") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  auto ws = Workspace::open(store, false);
  const auto before = ws->snapshot();
  ws->set_verdict("d2", Verdict::TruePositive);
  CHECK(before->verdict("d2") == Verdict::Unreviewed);
  CHECK(ws->snapshot()->verdict("d2") == Verdict::TruePositive);
}

TEST_CASE("stale or damaged snapshots fall back to the log") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  {
    auto ws = Workspace::open(store, false);
    ws->set_verdict("d1", Verdict::TruePositive);  // newer than the ingest snapshot
  }
  CHECK(Workspace::open(store, true)->snapshot()->verdict("d1") == Verdict::TruePositive);
  write_file_atomic(StorePaths(store).snapshot, "garbage");
  CHECK(Workspace::open(store, true)->snapshot()->verdict("d1") == Verdict::TruePositive);
}

TEST_CASE("a corrupt log refuses to open") {
  TempDir dir;
  const auto store = vismca::testing::make_store(dir, toy());
  const StorePaths paths(store);
  std::string log = read_file(paths.log);
  log.pop_back();  // torn final line
  write_file_atomic(paths.log, log);
  std::filesystem::remove(paths.snapshot);
  CHECK(code_of([&] { (void)Workspace::open(store, true); }) == Errc::CorruptLog);
}
