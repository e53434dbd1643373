#include "vismca/service/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <functional>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "vismca/annotation/review.hpp"
#include "vismca/core/dataset_io.hpp"
#include "vismca/core/json_text.hpp"
#include "vismca/fixture/fixture.hpp"
#include "vismca/service/http_service.hpp"
#include "vismca/service/json_codec.hpp"
#include "vismca/service/report.hpp"

namespace vismca::service {

namespace {

namespace fs = std::filesystem;

std::atomic<bool> g_stop_requested{false};

extern "C" void on_stop_signal(int) { g_stop_requested.store(true); }

/// Writes to `path`, or to `out` when path is "-".
void emit(const std::string& path, std::string_view content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  write_file_atomic(path, content);
}

struct Options {
  std::string data;
  std::string store;
  std::string out;
  std::string static_dir;
  int port = 8080;
  bool read_only = false;
  bool json_output = false;
  std::size_t group_size = graph::kDefaultTotemGroupSize;
  std::size_t min_images = graph::kDefaultTotemMinImages;
  std::size_t k = 8;
  std::string mode = "at_least";
  std::uint64_t seed = 0;
};

int do_ingest(const Options& o, std::ostream& out) {
  const IngestResult r = ingest_into_store(o.data, o.store);
  if (o.json_output) {
    out << canonical_dump({{"validation", to_json(r.report)},
                           {"seeded_records", r.seeded_records},
                           {"dataset_replaced", r.dataset_replaced}})
        << "\n";
    return kExitOk;
  }
  const auto& c = r.report;
  out << "ingested " << c.images << " images, " << c.people << " people, " << c.classes << " classes, "
      << c.detections << " detections\n";
  for (const auto& w : r.report.warnings) out << "warning " << w.code << ": " << w.message << "\n";
  if (r.seeded_records > 0) out << "seeded " << r.seeded_records << " corrections from ground truth\n";
  return kExitOk;
}

int do_serve(const Options& o, std::ostream& out) {
  ServiceConfig config;
  config.store_dir = o.store;
  config.port = o.port;
  config.read_only = o.read_only;
  if (!o.static_dir.empty()) config.static_dir = o.static_dir;
  Service service(config);
  service.start();
  out << "serving " << o.store << " on http://" << config.host << ":" << service.port() << "\n" << std::flush;

  g_stop_requested.store(false);
  auto previous_int = std::signal(SIGINT, on_stop_signal);
  auto previous_term = std::signal(SIGTERM, on_stop_signal);
  while (!g_stop_requested.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  service.stop();
  return kExitOk;
}

int do_export(const Options& o, std::ostream& out) {
  auto ws = Workspace::open(o.store, true);
  emit(o.out, annotation::export_csv(*ws->snapshot()), out);
  return kExitOk;
}

int do_totem(const Options& o, std::ostream& out) {
  auto ws = Workspace::open(o.store, true);
  const auto g = graph::build_graph(*ws->snapshot(), graph::Source::Corrected);
  const auto candidates = graph::totem_candidates(g, o.group_size, o.min_images);
  if (o.json_output) {
    out << canonical_dump(candidates) << "\n";
  } else {
    for (const auto& c : candidates) out << c << "\n";
  }
  return kExitOk;
}

int do_shared(const Options& o, std::ostream& out) {
  graph::ShareMode mode;
  if (o.mode == "exact") {
    mode = graph::ShareMode::Exactly;
  } else if (o.mode == "at_least") {
    mode = graph::ShareMode::AtLeast;
  } else {
    throw Error(Errc::BadArgument, "--mode must be 'exact' or 'at_least'");
  }
  auto ws = Workspace::open(o.store, true);
  const auto g = graph::build_graph(*ws->snapshot(), graph::Source::Corrected);
  const auto shared = graph::objects_shared_by(g, o.k, mode);
  if (o.json_output) {
    out << canonical_dump(to_json(shared)) << "\n";
  } else {
    for (const auto& s : shared) out << s.object << "\t" << s.owner_count << "\n";
  }
  return kExitOk;
}

int do_report(const Options& o, std::ostream& out) {
  auto ws = Workspace::open(o.store, true);
  ReportParams params;
  params.shared_k = o.k;
  params.group_size = o.group_size;
  params.min_images = o.min_images;
  emit(o.out, render_report(*ws->snapshot(), params), out);
  return kExitOk;
}

int do_fixture(const Options& o, std::ostream& out) {
  emit(o.out, serialize_dataset(fixture::generate(o.seed)), out);
  return kExitOk;
}

int report_failure(const Error& e, bool json_output, std::ostream& err) {
  if (json_output) {
    err << canonical_dump(error_json(e.code(), e.what())) << "\n";
  } else {
    err << "error: " << e.what() << "\n";
  }
  return kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Review detections, correct labels and analyze object ownership.", "vismca"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&, std::ostream&)> action;

  auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", o.json_output, "Machine-readable output and errors"); };
  auto bind = [&](CLI::App* sub, int (*fn)(const Options&, std::ostream&)) {
    sub->callback([&action, fn] { action = fn; });
  };

  auto* ingest = app.add_subcommand("ingest", "Validate a dataset and load it into a store");
  ingest->add_option("--data", o.data, "Dataset JSON file")->required();
  ingest->add_option("--store", o.store, "Store directory")->required();
  json_flag(ingest);
  bind(ingest, do_ingest);

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API for a store");
  serve->add_option("--store", o.store, "Store directory")->required();
  serve->add_option("--port", o.port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--static", o.static_dir, "Directory with built UI assets");
  serve->add_flag("--read-only", o.read_only, "Reject mutations and skip the store lock");
  json_flag(serve);
  bind(serve, do_serve);

  auto* exp = app.add_subcommand("export", "Write the corrected labels as CSV");
  exp->add_option("--store", o.store, "Store directory")->required();
  exp->add_option("--out", o.out, "Output file, - for stdout")->required();
  json_flag(exp);
  bind(exp, do_export);

  auto* analyze = app.add_subcommand("analyze", "Ownership queries on the corrected graph");
  analyze->require_subcommand(1);
  auto* totem = analyze->add_subcommand("totem", "Objects owned by exactly N people, each with M images");
  totem->add_option("--store", o.store, "Store directory")->required();
  totem->add_option("--group-size", o.group_size, "Owner count N")->check(CLI::PositiveNumber);
  totem->add_option("--min-images", o.min_images, "Images per owner M")->check(CLI::PositiveNumber);
  json_flag(totem);
  bind(totem, do_totem);
  auto* shared = analyze->add_subcommand("shared", "Objects by number of owners");
  shared->add_option("--store", o.store, "Store directory")->required();
  shared->add_option("--k", o.k, "Owner count")->check(CLI::PositiveNumber);
  shared->add_option("--mode", o.mode, "exact or at_least")->check(CLI::IsMember({"exact", "at_least"}));
  json_flag(shared);
  bind(shared, do_shared);

  auto* report = app.add_subcommand("report", "Write the analysis report as JSON");
  report->add_option("--store", o.store, "Store directory")->required();
  report->add_option("--out", o.out, "Output file, - for stdout")->required();
  report->add_option("--k", o.k, "Owner count for the shared-object queries")->check(CLI::PositiveNumber);
  report->add_option("--group-size", o.group_size, "Totem owner count")->check(CLI::PositiveNumber);
  report->add_option("--min-images", o.min_images, "Totem images per owner")->check(CLI::PositiveNumber);
  json_flag(report);
  bind(report, do_report);

  auto* fix = app.add_subcommand("fixture", "Emit the synthetic evaluation dataset");
  fix->add_option("--out", o.out, "Output file, - for stdout")->required();
  fix->add_option("--seed", o.seed, "Generator seed");
  json_flag(fix);
  bind(fix, do_fixture);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    return action(o, out);
  } catch (const ValidationError& e) {
    if (o.json_output) {
      json body = error_json(Errc::ValidationError, e.what());
      body["validation"] = to_json(e.report());
      err << canonical_dump(body) << "\n";
    } else {
      err << "error: " << e.what() << "\n";
      for (const auto& issue : e.report().errors) err << "  " << issue.code << ": " << issue.message << "\n";
    }
    return kExitFailure;
  } catch (const Error& e) {
    return report_failure(e, o.json_output, err);
  } catch (const std::exception& e) {
    return report_failure(Error(Errc::IoError, e.what()), o.json_output, err);
  }
}

}  // namespace vismca::service
