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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gaitcloud::service {

// Append-only JSON-lines catalog plus content-addressed blobs:
//   <dir>/catalog.jsonl
//   <dir>/blobs/<first two hex>/<sha256>
// Writers store the blob first and then append the catalog entry that refers
// to it, so a crash in between leaves only an unreferenced blob.
class Store {
 public:
  // Called at named points of a write ("after_blob", "after_catalog"); tests
  // use it to simulate a crash.
  using FaultHook = std::function<void(std::string_view point)>;

  explicit Store(std::filesystem::path dir);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // Every complete catalog record in order. A torn final line (crash during
  // append) is skipped and truncated away; corruption elsewhere throws
  // Internal.
  std::vector<nlohmann::json> replay();

  void append(const nlohmann::json& record);

  // Returns the content hash; writing an existing blob is a no-op.
  std::string put_blob(std::span<const std::uint8_t> bytes);
  std::string put_blob(std::string_view text);
  std::vector<std::uint8_t> get_blob(const std::string& hash) const;  // throws NotFound
  std::string get_blob_text(const std::string& hash) const;
  bool has_blob(const std::string& hash) const;

  // Atomically replaces the catalog with the given records (tmp + rename).
  void rewrite(const std::vector<nlohmann::json>& records);

  void set_fault_hook(FaultHook hook) { hook_ = std::move(hook); }
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path catalog_path() const { return dir_ / "catalog.jsonl"; }

 private:
  std::filesystem::path blob_path(const std::string& hash) const;
  void open_catalog();
  void fault(std::string_view point) {
    if (hook_) hook_(point);
  }

  std::filesystem::path dir_;
  int fd_ = -1;
  std::mutex mutex_;
  FaultHook hook_;
};

}  // namespace gaitcloud::service
