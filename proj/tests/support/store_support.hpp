#pragma once

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <stdexcept>

#include "test_support.hpp"
#include "vismca/core/dataset_io.hpp"
#include "vismca/fixture/fixture.hpp"
#include "vismca/service/workspace.hpp"

namespace vismca::testing {

/// A port that was free a moment ago; the kernel picks it.
inline int free_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  socklen_t len = sizeof addr;
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    ::close(fd);
    throw std::runtime_error("cannot find a free port");
  }
  ::close(fd);
  return ntohs(addr.sin_port);
}

/// Writes `parts` as dataset.json under `dir` and ingests it into dir/store.
inline std::filesystem::path make_store(const TempDir& dir, const DatasetParts& parts) {
  const auto data = dir / "data.json";
  service::write_file_atomic(data, serialize_dataset(parts));
  const auto store = dir / "store";
  service::ingest_into_store(data, store, stepping_clock());
  return store;
}

inline std::filesystem::path make_fixture_store(const TempDir& dir, std::uint64_t seed = 0) {
  return make_store(dir, fixture::generate(seed));
}

}  // namespace vismca::testing
