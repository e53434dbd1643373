#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "vismca/service/workspace.hpp"

namespace vismca::service {

struct ServiceConfig {
  std::filesystem::path store_dir;
  /// Ingested into store_dir before opening when set.
  std::optional<std::filesystem::path> dataset_path;
  int port = 8080;  // 1..65535
  std::string host = "127.0.0.1";
  std::optional<std::filesystem::path> static_dir;
  bool read_only = false;
};

/// JSON-over-HTTP front end of one workspace. Every GET handler works on a
/// single store snapshot; every POST goes through the workspace writer and is
/// acknowledged only after the event reached the log.
class Service {
 public:
  /// Opens the workspace. Throws IngestFailure, CorruptLog, StoreLocked, or
  /// BadArgument for an out-of-range port.
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and starts answering on a background thread. Throws PortInUse.
  void start();
  /// Stops the listener, joins the thread and writes a snapshot.
  void stop();

  [[nodiscard]] int port() const noexcept;
  [[nodiscard]] Workspace& workspace() noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vismca::service
