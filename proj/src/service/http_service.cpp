#include "vismca/service/http_service.hpp"

#include <algorithm>
#include <charconv>
#include <thread>

#include <httplib.h>

#include "vismca/annotation/review.hpp"
#include "vismca/core/json_text.hpp"
#include "vismca/metrics/metrics.hpp"
#include "vismca/service/json_codec.hpp"

namespace vismca::service {

namespace {

using annotation::CorrectionStore;

constexpr std::size_t kDefaultPageSize = 50;
constexpr std::size_t kMaxPageSize = 500;

int http_status(Errc code) {
  switch (code) {
    case Errc::UnknownDetection:
    case Errc::UnknownImage:
    case Errc::UnknownObject:
    case Errc::UnknownClass:
      return 404;
    case Errc::StaleRevision:
      return 409;
    case Errc::ReadOnly:
      return 403;
    case Errc::ParseError:
    case Errc::ValidationError:
    case Errc::UnknownLabel:
    case Errc::EmptySelection:
    case Errc::NoPositives:
    case Errc::BadBinCount:
    case Errc::BadThreshold:
    case Errc::BadArgument:
    case Errc::WrongSource:
      return 400;
    default:
      return 500;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(canonical_dump(body), "application/json");
}

void send_error(httplib::Response& res, Errc code, std::string_view message) {
  send_json(res, error_json(code, message), http_status(code));
}

template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, Errc::ParseError, e.what());
    } catch (const std::exception& e) {
      send_error(res, Errc::IoError, e.what());
    }
  };
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

template <class T>
T number_param(const httplib::Request& req, const char* name, T fallback) {
  auto raw = param(req, name);
  if (!raw || raw->empty()) return fallback;
  T value{};
  auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), value);
  if (ec != std::errc{} || ptr != raw->data() + raw->size()) {
    throw Error(Errc::BadArgument, std::string("query parameter '") + name + "' is not a number");
  }
  return value;
}

double real_param(const httplib::Request& req, const char* name, double fallback) {
  auto raw = param(req, name);
  if (!raw || raw->empty()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(*raw, &used);
    if (used != raw->size()) throw std::invalid_argument(*raw);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::BadArgument, std::string("query parameter '") + name + "' is not a number");
  }
}

std::optional<bool> bool_param(const httplib::Request& req, const char* name) {
  auto raw = param(req, name);
  if (!raw || raw->empty()) return std::nullopt;
  if (*raw == "true" || *raw == "1") return true;
  if (*raw == "false" || *raw == "0") return false;
  throw Error(Errc::BadArgument, std::string("query parameter '") + name + "' must be true or false");
}

graph::Source source_param(const httplib::Request& req) {
  auto raw = param(req, "source");
  if (!raw || *raw == "corrected") return graph::Source::Corrected;
  if (*raw == "detected") return graph::Source::Detected;
  throw Error(Errc::BadArgument, "source must be 'corrected' or 'detected'");
}

json parse_body(const httplib::Request& req) {
  json body;
  try {
    body = json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("request body is not JSON: ") + e.what());
  }
  if (!body.is_object()) throw Error(Errc::ParseError, "request body must be a JSON object");
  return body;
}

Verdict body_verdict(const json& body) {
  auto it = body.find("verdict");
  if (it == body.end() || !it->is_string()) throw Error(Errc::ParseError, "body needs a 'verdict' string");
  auto v = parse_verdict(it->get<std::string>());
  if (!v) throw Error(Errc::BadArgument, "verdict must be 'tp', 'fp' or 'unreviewed'");
  return *v;
}

std::vector<std::string> body_strings(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_array()) {
    throw Error(Errc::ParseError, std::string("body needs a '") + key + "' array");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw Error(Errc::ParseError, std::string("'") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::optional<double> max_confidence(const Dataset& dataset, std::string_view image_id) {
  std::optional<double> best;
  for (const Detection& d : dataset.detections_of(image_id)) {
    best = best ? std::max(*best, d.confidence) : d.confidence;
  }
  return best;
}

json image_summary(const CorrectionStore& store, const ImageRecord& img) {
  const Dataset& dataset = store.dataset();
  json item = to_json(img);
  item["detection_count"] = dataset.detections_of(img.id).size();
  item["max_confidence"] = optional_number(max_confidence(dataset, img.id));
  if (const auto* rec = store.record(img.id)) {
    item["correction"] = to_json(*rec);
  } else {
    item["correction"] = nullptr;
  }
  return item;
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  std::unique_ptr<Workspace> workspace;
  httplib::Server server;
  std::thread listener;
  int bound_port = 0;
  bool running = false;

  void routes();
};

void Service::Impl::routes() {
  Workspace& ws = *workspace;

  // SO_REUSEPORT (httplib's default) would let a second server share the
  // port silently; plain SO_REUSEADDR still allows a quick restart.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });

  server.Get("/api/dataset/summary", guarded([&](const httplib::Request&, httplib::Response& res) {
    auto s = ws.snapshot();
    const Dataset& d = s->dataset();
    send_json(res, {{"images", d.images().size()},
                    {"people", d.people().size()},
                    {"classes", d.classes().size()},
                    {"detections", d.detections().size()},
                    {"corrected_images", s->records().size()},
                    {"revision", s->revision()},
                    {"read_only", ws.read_only()},
                    {"class_names", d.classes()},
                    {"person_ids", d.people()}});
  }));

  server.Get("/api/images", guarded([&](const httplib::Request& req, httplib::Response& res) {
    auto s = ws.snapshot();
    const Dataset& d = s->dataset();
    const auto person = param(req, "person");
    const auto unlabeled = bool_param(req, "unlabeled");
    const auto page = number_param<std::size_t>(req, "page", 1);
    const auto page_size = number_param<std::size_t>(req, "page_size", kDefaultPageSize);
    if (page < 1 || page_size < 1 || page_size > kMaxPageSize) {
      throw Error(Errc::BadArgument, "page >= 1 and 1 <= page_size <= " + std::to_string(kMaxPageSize));
    }

    std::vector<const ImageRecord*> candidates;
    if (param(req, "max_conf") && !param(req, "max_conf")->empty()) {
      for (const auto& id : metrics::low_confidence_images(d, real_param(req, "max_conf", 1.0))) {
        candidates.push_back(d.find_image(id));
      }
    } else {
      for (const auto& img : d.images()) candidates.push_back(&img);
      std::sort(candidates.begin(), candidates.end(),
                [](const ImageRecord* a, const ImageRecord* b) { return a->id < b->id; });
    }
    std::vector<const ImageRecord*> matched;
    for (const ImageRecord* img : candidates) {
      if (person && !person->empty() && img->person != *person) continue;
      if (unlabeled && (s->record(img->id) == nullptr) != *unlabeled) continue;
      matched.push_back(img);
    }

    json items = json::array();
    const std::size_t first = (page - 1) * page_size;
    for (std::size_t i = first; i < matched.size() && i < first + page_size; ++i) {
      items.push_back(image_summary(*s, *matched[i]));
    }
    send_json(res, {{"total", matched.size()}, {"page", page}, {"page_size", page_size}, {"items", items}});
  }));

  server.Get(R"(/api/images/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
    auto s = ws.snapshot();
    const std::string id = req.matches[1];
    const ImageRecord* img = s->dataset().find_image(id);
    if (!img) throw Error(Errc::UnknownImage, "unknown image '" + id + "'");
    json dets = json::array();
    for (const Detection& det : s->dataset().detections_of(id)) dets.push_back(to_json(det, s->verdict(det.id)));
    json body = {{"image", to_json(*img)},
                 {"detections", std::move(dets)},
                 {"label_menu", to_json(annotation::label_menu(s->dataset(), id))}};
    body["correction"] = s->record(id) ? to_json(*s->record(id)) : json(nullptr);
    send_json(res, body);
  }));

  server.Post(R"(/api/images/([^/]+)/labels)", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const json body = parse_body(req);
    const auto labels = body_strings(body, "labels");
    bool difficult = false;
    if (auto it = body.find("difficult"); it != body.end()) {
      if (!it->is_boolean()) throw Error(Errc::ParseError, "'difficult' must be a boolean");
      difficult = it->get<bool>();
    }
    std::optional<std::uint64_t> expected;
    if (auto it = body.find("expected_revision"); it != body.end() && !it->is_null()) {
      if (!it->is_number_unsigned()) throw Error(Errc::ParseError, "'expected_revision' must be a count");
      expected = it->get<std::uint64_t>();
    }
    const auto rec =
        ws.assign_labels(id, annotation::LabelSet(labels.begin(), labels.end()), difficult, expected);
    send_json(res, to_json(rec));
  }));

  server.Post(R"(/api/detections/([^/]+)/verdict)", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const Verdict v = body_verdict(parse_body(req));
    const auto revision = ws.set_verdict(id, v);
    send_json(res, {{"detection", id}, {"verdict", verdict_name(v)}, {"revision", revision}});
  }));

  server.Post("/api/detections/verdicts", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    const auto ids = body_strings(body, "ids");
    const Verdict v = body_verdict(body);
    const auto applied = ws.bulk_set_verdict(ids, v);
    send_json(res, {{"applied", applied}, {"verdict", verdict_name(v)}, {"revision", ws.snapshot()->revision()}});
  }));

  server.Get("/api/metrics/distribution", guarded([&](const httplib::Request& req, httplib::Response& res) {
    auto s = ws.snapshot();
    send_json(res, to_json(metrics::confidence_histogram(s->dataset(), number_param<int>(req, "bins", 10))));
  }));

  server.Get("/api/metrics/ap", guarded([&](const httplib::Request&, httplib::Response& res) {
    auto s = ws.snapshot();
    send_json(res, {{"revision", s->revision()}, {"classes", to_json(metrics::class_metrics(*s))}});
  }));

  server.Get("/api/metrics/coverage", guarded([&](const httplib::Request&, httplib::Response& res) {
    send_json(res, to_json(metrics::coverage_report(*ws.snapshot())));
  }));

  server.Get("/api/matrix", guarded([&](const httplib::Request&, httplib::Response& res) {
    send_json(res, to_json(cooccurrence::build_matrix(*ws.snapshot())));
  }));

  server.Get("/api/matrix.csv", guarded([&](const httplib::Request&, httplib::Response& res) {
    res.set_content(cooccurrence::matrix_csv(cooccurrence::build_matrix(*ws.snapshot())), "text/csv; charset=utf-8");
  }));

  server.Get("/api/graph", guarded([&](const httplib::Request& req, httplib::Response& res) {
    send_json(res, to_json(graph::build_graph(*ws.snapshot(), source_param(req))));
  }));

  server.Get("/api/graph/ego", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const auto object = param(req, "object");
    if (!object || object->empty()) throw Error(Errc::BadArgument, "query parameter 'object' is required");
    const auto g = graph::build_graph(*ws.snapshot(), source_param(req));
    send_json(res, to_json(graph::ego_network(g, *object, bool_param(req, "neighbors").value_or(true))));
  }));

  server.Get("/api/graph/shared", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const auto k = number_param<std::size_t>(req, "k", 8);
    const std::string mode_name = param(req, "mode").value_or("at_least");
    graph::ShareMode mode;
    if (mode_name == "exact" || mode_name == "exactly") {
      mode = graph::ShareMode::Exactly;
    } else if (mode_name == "at_least") {
      mode = graph::ShareMode::AtLeast;
    } else {
      throw Error(Errc::BadArgument, "mode must be 'exact' or 'at_least'");
    }
    const auto g = graph::build_graph(*ws.snapshot(), source_param(req));
    send_json(res, {{"k", k}, {"mode", mode == graph::ShareMode::Exactly ? "exact" : "at_least"},
                    {"objects", to_json(graph::objects_shared_by(g, k, mode))}});
  }));

  server.Get("/api/totem", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const auto group_size = number_param<std::size_t>(req, "group_size", graph::kDefaultTotemGroupSize);
    const auto min_images = number_param<std::size_t>(req, "min_images", graph::kDefaultTotemMinImages);
    const auto g = graph::build_graph(*ws.snapshot(), graph::Source::Corrected);
    send_json(res, {{"group_size", group_size},
                    {"min_images", min_images},
                    {"candidates", graph::totem_candidates(g, group_size, min_images)}});
  }));

  server.Get(R"(/api/suggestions/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto k = number_param<std::size_t>(req, "k", cooccurrence::kDefaultSuggestionCount);
    const double iou = real_param(req, "iou", cooccurrence::kDefaultIouThreshold);
    send_json(res, to_json(cooccurrence::suggest_labels(*ws.snapshot(), id, k, iou)));
  }));

  server.Get("/api/export.csv", guarded([&](const httplib::Request&, httplib::Response& res) {
    res.set_content(annotation::export_csv(*ws.snapshot()), "text/csv; charset=utf-8");
  }));

  if (config.static_dir) {
    if (!server.set_mount_point("/", config.static_dir->string())) {
      throw Error(Errc::IoError, "static directory " + config.static_dir->string() + " does not exist");
    }
  }
}

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
  if (config.port < 1 || config.port > 65535) {
    throw Error(Errc::BadArgument, "port must lie in [1, 65535]");
  }
  impl_->config = std::move(config);
  if (impl_->config.dataset_path) {
    if (impl_->config.read_only) throw Error(Errc::ReadOnly, "cannot ingest into a read-only store");
    ingest_into_store(*impl_->config.dataset_path, impl_->config.store_dir);
  }
  impl_->workspace = Workspace::open(impl_->config.store_dir, impl_->config.read_only);
  impl_->routes();
}

Service::~Service() {
  try {
    stop();
  } catch (...) {
  }
}

void Service::start() {
  if (impl_->running) return;
  if (!impl_->server.bind_to_port(impl_->config.host, impl_->config.port)) {
    throw Error(Errc::PortInUse, "cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
  }
  impl_->bound_port = impl_->config.port;
  impl_->running = true;
  impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void Service::stop() {
  if (!impl_->running) return;
  impl_->server.stop();
  if (impl_->listener.joinable()) impl_->listener.join();
  impl_->running = false;
  impl_->workspace->write_snapshot();
}

int Service::port() const noexcept { return impl_->bound_port; }

Workspace& Service::workspace() noexcept { return *impl_->workspace; }

}  // namespace vismca::service
