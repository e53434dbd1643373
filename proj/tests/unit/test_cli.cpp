#include <doctest.h>

#include <sys/wait.h>

#include <csignal>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "store_support.hpp"
#include "vismca/service/cli.hpp"
#include "vismca/service/report.hpp"

using namespace vismca;
using namespace vismca::service;
using vismca::testing::TempDir;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "vismca");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

/// Fixture written with the CLI and ingested into dir/store.
std::string fixture_store(const TempDir& dir) {
  const std::string data = (dir / "fixture.json").string();
  const std::string store = (dir / "store").string();
  REQUIRE(run({"fixture", "--out", data}).code == kExitOk);
  REQUIRE(run({"ingest", "--data", data, "--store", store}).code == kExitOk);
  return store;
}

}  // namespace

TEST_CASE("ingest succeeds and writes a snapshot") {
  TempDir dir;
  const std::string store = fixture_store(dir);
  CHECK(std::filesystem::exists(StorePaths(store).snapshot));
  const auto json_run = run({"ingest", "--data", (dir / "fixture.json").string(), "--store", store, "--json"});
  CHECK(json_run.code == kExitOk);
  const auto body = nlohmann::json::parse(json_run.out);
  CHECK(body["validation"]["counts"]["images"] == 900);
  CHECK(body["seeded_records"] == 0);
}

TEST_CASE("analyze totem prints the single totem") {
  TempDir dir;
  const std::string store = fixture_store(dir);
  const auto o = run({"analyze", "totem", "--store", store, "--group-size", "8", "--min-images", "2"});
  CHECK(o.code == kExitOk);
  CHECK(o.out == "canadaPencil\n");
  const auto relaxed = run({"analyze", "totem", "--store", store, "--group-size", "8", "--min-images", "1", "--json"});
  CHECK(nlohmann::json::parse(relaxed.out).size() == 4);
  const auto shared = run({"analyze", "shared", "--store", store, "--k", "8", "--mode", "exact"});
  CHECK(std::count(shared.out.begin(), shared.out.end(), '\n') == 4);
}

TEST_CASE("usage errors exit with 2 and print usage") {
  const auto unknown = run({"ingest", "--bogus"});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"serve", "--store", "x", "--port", "70000"}).code == kExitUsage);
  CHECK(run({"analyze"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("domain failures exit with 1") {
  TempDir dir;
  const auto missing = run({"ingest", "--data", (dir / "none.json").string(), "--store", (dir / "s").string()});
  CHECK(missing.code == kExitFailure);
  CHECK(missing.err.find("error:") == 0);

  write_file_atomic(dir / "bad.json", R"({"classes": ["a"], "people": ["P"], "images": [],
    "detections": [{"id": "d", "image": "img_404", "class": "a", "bbox": [0, 0, 1, 1], "confidence": 0.5}]})");
  const auto invalid = run({"ingest", "--data", (dir / "bad.json").string(), "--store", (dir / "s").string(), "--json"});
  CHECK(invalid.code == kExitFailure);
  const auto err = nlohmann::json::parse(invalid.err);
  CHECK(err["error"] == "ValidationError");
  CHECK(err["validation"]["errors"][0]["code"] == "DANGLING_IMAGE_REF");

  const auto no_store = run({"export", "--store", (dir / "empty").string(), "--out", "-", "--json"});
  CHECK(no_store.code == kExitFailure);
  CHECK(nlohmann::json::parse(no_store.err)["error"] == "IngestFailure");
}

TEST_CASE("report is byte-identical across runs") {
  TempDir dir;
  const std::string store = fixture_store(dir);
  const std::string a = (dir / "a.json").string();
  const std::string b = (dir / "b.json").string();
  CHECK(run({"report", "--store", store, "--out", a}).code == kExitOk);
  CHECK(run({"report", "--store", store, "--out", b, "--json"}).code == kExitOk);
  CHECK(read_file(a) == read_file(b));
  const auto report = nlohmann::json::parse(read_file(a));
  CHECK(report["coverage"]["classes_detected"] == 22);
  CHECK(report["coverage"]["missed_fraction"] == 0.53);
  CHECK(report["totem"] == nlohmann::json::array({"canadaPencil"}));
  CHECK(report["shared_objects"]["at_least"].size() == 9);
  CHECK(report["shared_objects"]["exactly"].size() == 4);
}

TEST_CASE("fixture output is stable and seedable") {
  const auto a = run({"fixture", "--out", "-"});
  const auto b = run({"fixture", "--out", "-", "--seed", "0"});
  const auto c = run({"fixture", "--out", "-", "--seed", "5"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("CLI export equals the HTTP export") {
  TempDir dir;
  const std::string store = fixture_store(dir);
  {
    auto ws = Workspace::open(store, false);
    ws->assign_labels("img_0001", {"gClamp"}, true);
  }
  const auto cli = run({"export", "--store", store, "--out", "-"});
  REQUIRE(cli.code == kExitOk);

  const int port = vismca::testing::free_port();
  const pid_t child = ::fork();
  REQUIRE(child >= 0);
  if (child == 0) {
    ::execl(VISMCA_BINARY, VISMCA_BINARY, "serve", "--store", store.c_str(), "--port",
            std::to_string(port).c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  httplib::Client client("127.0.0.1", port);
  httplib::Result res;
  for (int attempt = 0; attempt < 100 && !res; ++attempt) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    res = client.Get("/api/export.csv");
  }
  REQUIRE(res);
  CHECK(res->body == cli.out);

  // The running server holds the store lock.
  CHECK(run({"ingest", "--data", (dir / "fixture.json").string(), "--store", store}).code == kExitFailure);

  ::kill(child, SIGTERM);
  int status = 0;
  ::waitpid(child, &status, 0);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
}
