#include "vismca/annotation/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

namespace vismca::annotation {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void corrupt(const std::string& what) { throw Error(Errc::CorruptLog, what); }

Verdict verdict_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) corrupt(std::string("missing verdict field ") + key);
  auto v = parse_verdict(it->get<std::string>());
  if (!v) corrupt("bad verdict '" + it->get<std::string>() + "'");
  return *v;
}

std::string string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) corrupt(std::string("missing string field ") + key);
  return it->get<std::string>();
}

std::vector<std::string> string_array(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) corrupt(std::string("missing array field ") + key);
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) corrupt(std::string("non-string entry in ") + key);
    out.push_back(v.get<std::string>());
  }
  return out;
}

ordered_json record_to_json(const CorrectionRecord& rec) {
  ordered_json obj;
  obj["image"] = rec.image;
  obj["labels"] = std::vector<std::string>(rec.labels.begin(), rec.labels.end());
  obj["difficult"] = rec.difficult;
  obj["revision"] = rec.revision;
  obj["updated_at"] = format_timestamp(rec.updated_at);
  return obj;
}

}  // namespace

std::string encode_event(const LogEvent& event) {
  ordered_json payload;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SetVerdictPayload>) {
          payload["detection"] = p.detection;
          payload["verdict"] = verdict_name(p.verdict);
        } else if constexpr (std::is_same_v<T, AssignLabelsPayload>) {
          payload["image"] = p.image;
          payload["labels"] = std::vector<std::string>(p.labels.begin(), p.labels.end());
          payload["difficult"] = p.difficult;
        } else {
          payload["detections"] = p.detections;
          payload["verdict"] = verdict_name(p.verdict);
        }
      },
      event.payload);

  ordered_json obj;
  obj["seq"] = event.seq;
  obj["kind"] = event_kind_name(event.kind());
  obj["payload"] = std::move(payload);
  obj["at"] = format_timestamp(event.at);
  return obj.dump();
}

LogEvent decode_event(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    corrupt(std::string("unparsable log line: ") + e.what());
  }
  if (!obj.is_object()) corrupt("log line is not an object");

  LogEvent event;
  auto seq = obj.find("seq");
  if (seq == obj.end() || !seq->is_number_unsigned()) corrupt("missing or bad seq");
  event.seq = seq->get<std::uint64_t>();

  auto at = parse_timestamp(string_field(obj, "at"));
  if (!at) corrupt("bad timestamp in event " + std::to_string(event.seq));
  event.at = *at;

  auto payload_it = obj.find("payload");
  if (payload_it == obj.end() || !payload_it->is_object()) corrupt("missing payload");
  const json& p = *payload_it;

  const std::string kind = string_field(obj, "kind");
  if (kind == "SetVerdict") {
    event.payload = SetVerdictPayload{string_field(p, "detection"), verdict_field(p, "verdict")};
  } else if (kind == "AssignLabels") {
    auto labels = string_array(p, "labels");
    auto difficult = p.find("difficult");
    if (difficult == p.end() || !difficult->is_boolean()) corrupt("missing difficult flag");
    event.payload = AssignLabelsPayload{string_field(p, "image"),
                                        LabelSet(labels.begin(), labels.end()),
                                        difficult->get<bool>()};
  } else if (kind == "BulkVerdict") {
    event.payload = BulkVerdictPayload{string_array(p, "detections"), verdict_field(p, "verdict")};
  } else {
    corrupt("unknown event kind '" + kind + "'");
  }
  return event;
}

std::vector<LogEvent> decode_log(std::string_view text) {
  std::vector<LogEvent> events;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      corrupt("line " + std::to_string(line_no) + " is not newline-terminated (torn write)");
    }
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) corrupt("empty line " + std::to_string(line_no));
    LogEvent e = decode_event(line);
    const std::uint64_t expected = events.size() + 1;
    if (e.seq != expected) {
      corrupt("expected seq " + std::to_string(expected) + " but found " + std::to_string(e.seq));
    }
    events.push_back(std::move(e));
  }
  return events;
}

std::string encode_log(std::span<const LogEvent> events) {
  std::string out;
  for (const auto& e : events) {
    out += encode_event(e);
    out += '\n';
  }
  return out;
}

std::vector<LogEvent> read_log_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return {};
    throw Error(Errc::IoError, "cannot read log " + path.string());
  }
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_log(text);
}

LogFileWriter::LogFileWriter(const std::filesystem::path& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(Errc::IoError, "cannot open log " + path.string() + ": " + std::strerror(errno));
  }
}

LogFileWriter::~LogFileWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void LogFileWriter::append(const LogEvent& event) {
  const std::string line = encode_event(event) + "\n";
  const off_t start = ::lseek(fd_, 0, SEEK_END);
  ssize_t written = 0;
  do {
    written = ::write(fd_, line.data(), line.size());
  } while (written < 0 && errno == EINTR);

  if (written != static_cast<ssize_t>(line.size())) {
    const int err = errno;
    // Roll back a short write so the log never holds a partial event.
    if (written > 0 && start >= 0) {
      // Best effort; a tail left behind is reported as CorruptLog on the next read.
      [[maybe_unused]] const int rc = ::ftruncate(fd_, start);
    }
    throw Error(Errc::IoError, "append to " + path_.string() + " failed: " +
                                   (written < 0 ? std::strerror(err) : "short write"));
  }
  if (::fsync(fd_) != 0) {
    throw Error(Errc::IoError, "fsync of " + path_.string() + " failed: " + std::strerror(errno));
  }
}

std::string encode_snapshot(const StoreSnapshot& snap) {
  ordered_json doc;
  doc["seq"] = snap.seq;
  auto records = ordered_json::array();
  for (const auto& [image, rec] : snap.records) records.push_back(record_to_json(rec));
  doc["records"] = std::move(records);
  ordered_json verdicts = ordered_json::object();
  for (const auto& [det, v] : snap.verdicts) verdicts[det] = verdict_name(v);
  doc["verdicts"] = std::move(verdicts);
  return doc.dump(1) + "\n";
}

StoreSnapshot decode_snapshot(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    corrupt(std::string("unparsable snapshot: ") + e.what());
  }
  if (!doc.is_object()) corrupt("snapshot is not an object");
  StoreSnapshot snap;
  auto seq = doc.find("seq");
  if (seq == doc.end() || !seq->is_number_unsigned()) corrupt("snapshot without seq");
  snap.seq = seq->get<std::uint64_t>();

  auto records = doc.find("records");
  if (records == doc.end() || !records->is_array()) corrupt("snapshot without records");
  for (const auto& r : *records) {
    if (!r.is_object()) corrupt("snapshot record is not an object");
    CorrectionRecord rec;
    rec.image = string_field(r, "image");
    auto labels = string_array(r, "labels");
    rec.labels = LabelSet(labels.begin(), labels.end());
    auto difficult = r.find("difficult");
    if (difficult == r.end() || !difficult->is_boolean()) corrupt("record without difficult");
    rec.difficult = difficult->get<bool>();
    auto revision = r.find("revision");
    if (revision == r.end() || !revision->is_number_unsigned()) corrupt("record without revision");
    rec.revision = revision->get<std::uint64_t>();
    auto at = parse_timestamp(string_field(r, "updated_at"));
    if (!at) corrupt("record with bad updated_at");
    rec.updated_at = *at;
    const std::string key = rec.image;
    snap.records.emplace(key, std::move(rec));
  }

  auto verdicts = doc.find("verdicts");
  if (verdicts == doc.end() || !verdicts->is_object()) corrupt("snapshot without verdicts");
  for (auto it = verdicts->begin(); it != verdicts->end(); ++it) {
    if (!it.value().is_string()) corrupt("bad verdict in snapshot");
    auto v = parse_verdict(it.value().get<std::string>());
    if (!v) corrupt("bad verdict in snapshot");
    snap.verdicts.emplace(it.key(), *v);
  }
  return snap;
}

}  // namespace vismca::annotation
