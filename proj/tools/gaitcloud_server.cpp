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

// The gait platform: REST API plus the device TCP ingest listener.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/error.hpp"
#include "gaitcloud/service/http_api.hpp"
#include "gaitcloud/service/platform.hpp"
#include "gaitcloud/service/tcp_ingest.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  using namespace gaitcloud;
  CLI::App app{"gaitcloud-server: insole gait platform"};
  service::PlatformConfig cfg;
  std::string data_dir = "gaitcloud-data";
  std::string models_dir = "models";
  std::string layout_path;
  std::string http_host = "127.0.0.1";
  int http_port = 8080;
  std::string tcp_host = "127.0.0.1";
  int tcp_port = 9090;
  std::int64_t ttl_s = 24 * 3600;
  std::string admin_credential;

  app.add_option("--data-dir", data_dir, "catalog and blob directory")->envname("GAITCLOUD_DATA_DIR");
  app.add_option("--models-dir", models_dir, "tree-ensemble model files")->envname("GAITCLOUD_MODELS_DIR");
  app.add_option("--layout", layout_path, "sensor layout JSON (default layout when empty)")
      ->envname("GAITCLOUD_LAYOUT");
  app.add_option("--http-host", http_host, "REST bind address")->envname("GAITCLOUD_HTTP_HOST");
  app.add_option("--http-port", http_port, "REST port (0 = any free port)")->envname("GAITCLOUD_HTTP_PORT");
  app.add_option("--tcp-host", tcp_host, "ingest bind address")->envname("GAITCLOUD_TCP_HOST");
  app.add_option("--tcp-port", tcp_port, "ingest port (0 = any, -1 = disabled)")->envname("GAITCLOUD_TCP_PORT");
  app.add_option("--workers", cfg.workers, "analysis worker threads")->envname("GAITCLOUD_WORKERS");
  app.add_option("--token-ttl", ttl_s, "token lifetime in seconds")->envname("GAITCLOUD_TOKEN_TTL");
  app.add_option("--admin-user", cfg.bootstrap_admin_username, "bootstrap admin username")
      ->envname("GAITCLOUD_ADMIN_USER");
  app.add_option("--admin-credential", admin_credential,
                 "creates the bootstrap admin on first start")
      ->envname("GAITCLOUD_ADMIN_CREDENTIAL");
  CLI11_PARSE(app, argc, argv);

  try {
    cfg.data_dir = data_dir;
    cfg.models_dir = models_dir;
    cfg.auth.token_ttl_ms = ttl_s * 1000;
    if (!layout_path.empty()) cfg.layout = load_layout(layout_path);
    if (!admin_credential.empty()) cfg.bootstrap_admin_credential = admin_credential;

    service::Platform platform(cfg);
    service::HttpApi api(platform);
    const int bound_http = api.bind(http_host, http_port);
    if (bound_http < 0) throw Error(ErrorCode::Internal, "cannot bind HTTP port");
    std::thread http_thread([&] { api.serve(); });

    std::optional<service::TcpIngestServer> tcp;
    std::thread tcp_thread;
    if (tcp_port >= 0) {
      tcp.emplace(platform);
      const int bound_tcp = tcp->bind(tcp_host, tcp_port);
      tcp_thread = std::thread([&] { tcp->serve(); });
      std::cout << "tcp ingest listening on " << tcp_host << ":" << bound_tcp << std::endl;
    }
    std::cout << "http listening on " << http_host << ":" << bound_http << std::endl;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));

    api.stop();
    http_thread.join();
    if (tcp) {
      tcp->stop();
      tcp_thread.join();
    }
  } catch (const std::exception& e) {
    std::cerr << "gaitcloud-server: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
