// Copyright 2026 The ICUL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "icul/stub_server.h"

#include <atomic>

#include "httplib.h"
#include "icul/status.h"

namespace icul {

StubServer::StubServer(std::vector<std::string> bodies, std::string path)
    : path_(std::move(path)) {
  if (bodies.empty()) bodies.push_back("{}");
  auto canned = std::make_shared<std::vector<std::string>>(std::move(bodies));
  auto next = std::make_shared<std::atomic<size_t>>(0);
  handler_ = [canned, next](const std::string&) {
    const size_t i = std::min(next->fetch_add(1), canned->size() - 1);
    return StubReply{200, (*canned)[i]};
  };
}

StubServer::StubServer(Handler handler, std::string path)
    : handler_(std::move(handler)), path_(std::move(path)) {}

StubServer::~StubServer() { Stop(); }

int StubServer::Start(int port) {
  server_ = std::make_unique<httplib::Server>();
  server_->Post(path_, [this](const httplib::Request& req,
                              httplib::Response& res) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      requests_.push_back({req.body, req.get_header_value("Authorization")});
    }
    const StubReply reply = handler_(req.body);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  });
  port_ = port == 0 ? server_->bind_to_any_port("127.0.0.1")
                    : (server_->bind_to_port("127.0.0.1", port) ? port : -1);
  if (port_ < 0) {
    throw Error(ErrorCode::kIo,
                "stub server cannot bind port " + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void StubServer::Stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string StubServer::url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

std::vector<StubRequest> StubServer::requests() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_;
}

}  // namespace icul
