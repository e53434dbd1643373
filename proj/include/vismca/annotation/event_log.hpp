#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vismca/annotation/store.hpp"

namespace vismca::annotation {

/// One JSON object, no trailing newline:
/// {"seq":1,"kind":"SetVerdict","payload":{...},"at":"2026-10-15T08:30:00.000Z"}
std::string encode_event(const LogEvent& event);
/// Throws Error(CorruptLog) on anything that is not a well-formed event.
LogEvent decode_event(std::string_view line);

/// Parses a whole JSON-Lines log and checks that seq is dense from 1.
std::vector<LogEvent> decode_log(std::string_view text);
std::string encode_log(std::span<const LogEvent> events);

/// Reads corrections.log.jsonl; a missing file is an empty log.
std::vector<LogEvent> read_log_file(const std::filesystem::path& path);

/// Destination for validated events. Appends must be all-or-nothing: on
/// failure nothing observable may have been written.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void append(const LogEvent& event) = 0;
};

/// Appends events to a JSON-Lines file. Each event goes out as a single
/// write() of the complete line followed by fsync.
class LogFileWriter final : public EventSink {
 public:
  explicit LogFileWriter(const std::filesystem::path& path);
  ~LogFileWriter() override;
  LogFileWriter(const LogFileWriter&) = delete;
  LogFileWriter& operator=(const LogFileWriter&) = delete;

  void append(const LogEvent& event) override;

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

std::string encode_snapshot(const StoreSnapshot& snap);
StoreSnapshot decode_snapshot(std::string_view text);

}  // namespace vismca::annotation
