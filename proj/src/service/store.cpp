/*
 * Copyright 2026 The gaitcloud Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gaitcloud/service/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gaitcloud/error.hpp"
#include "gaitcloud/service/util.hpp"

namespace gaitcloud::service {
namespace {

[[noreturn]] void io_error(const std::string& what) {
  throw Error(ErrorCode::Internal, what + ": " + std::strerror(errno));
}

void write_all(int fd, const char* data, std::size_t size, const std::string& what) {
  while (size > 0) {
    const ssize_t n = ::write(fd, data, size);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_error(what);
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

void write_file_durably(const std::filesystem::path& path, const char* data, std::size_t size) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_error("open " + path.string());
  write_all(fd, data, size, "write " + path.string());
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_error("fsync " + path.string());
  }
  ::close(fd);
}

void sync_dir(const std::filesystem::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
}

}  // namespace

Store::Store(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_ / "blobs");
  open_catalog();
}

Store::~Store() {
  if (fd_ >= 0) ::close(fd_);
}

void Store::open_catalog() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = ::open(catalog_path().c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) io_error("open catalog");
}

std::vector<nlohmann::json> Store::replay() {
  std::lock_guard lock(mutex_);
  std::ifstream in(catalog_path(), std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  std::vector<nlohmann::json> out;
  std::size_t pos = 0;
  std::size_t good_end = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // torn tail: no terminating newline
    try {
      out.push_back(nlohmann::json::parse(text.substr(pos, nl - pos)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Internal, "corrupt catalog record at byte " + std::to_string(pos) +
                                           ": " + e.what());
    }
    pos = nl + 1;
    good_end = pos;
  }
  if (good_end < text.size()) {
    if (::truncate(catalog_path().c_str(), static_cast<off_t>(good_end)) != 0) {
      io_error("truncate torn catalog tail");
    }
    open_catalog();
  }
  return out;
}

void Store::append(const nlohmann::json& record) {
  const std::string line = record.dump() + "\n";
  std::lock_guard lock(mutex_);
  write_all(fd_, line.data(), line.size(), "append catalog");
  if (::fdatasync(fd_) != 0) io_error("sync catalog");
  fault("after_catalog");
}

std::filesystem::path Store::blob_path(const std::string& hash) const {
  return dir_ / "blobs" / hash.substr(0, 2) / hash;
}

std::string Store::put_blob(std::span<const std::uint8_t> bytes) {
  const auto hash = sha256_hex(bytes);
  const auto path = blob_path(hash);
  if (!std::filesystem::exists(path)) {
    std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp." + random_hex(4);
    write_file_durably(tmp, reinterpret_cast<const char*>(bytes.data()), bytes.size());
    std::filesystem::rename(tmp, path);
    sync_dir(path.parent_path());
  }
  fault("after_blob");
  return hash;
}

std::string Store::put_blob(std::string_view text) {
  return put_blob(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

bool Store::has_blob(const std::string& hash) const {
  return hash.size() >= 2 && std::filesystem::exists(blob_path(hash));
}

std::vector<std::uint8_t> Store::get_blob(const std::string& hash) const {
  if (!has_blob(hash)) throw Error(ErrorCode::NotFound, "blob " + hash + " not found");
  std::ifstream in(blob_path(hash), std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string Store::get_blob_text(const std::string& hash) const {
  const auto bytes = get_blob(hash);
  return {bytes.begin(), bytes.end()};
}

void Store::rewrite(const std::vector<nlohmann::json>& records) {
  std::string text;
  for (const auto& r : records) text += r.dump() + "\n";
  std::lock_guard lock(mutex_);
  auto tmp = catalog_path();
  tmp += ".tmp";
  write_file_durably(tmp, text.data(), text.size());
  std::filesystem::rename(tmp, catalog_path());
  sync_dir(dir_);
  open_catalog();
}

}  // namespace gaitcloud::service
