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

// A local completion endpoint that answers from canned payloads and keeps
// every request it receives. Used to exercise the remote backend offline.

#ifndef ICUL_STUB_SERVER_H_
#define ICUL_STUB_SERVER_H_

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace icul {

struct StubReply {
  int status = 200;
  std::string body;
};

struct StubRequest {
  std::string body;
  std::string authorization;
};

class StubServer {
 public:
  using Handler = std::function<StubReply(const std::string& body)>;

  // Replays `bodies` in order, then keeps repeating the last one.
  explicit StubServer(std::vector<std::string> bodies,
                      std::string path = "/v1/completions");
  StubServer(Handler handler, std::string path = "/v1/completions");
  ~StubServer();

  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  // Binds 127.0.0.1 (port 0 picks a free one) and serves on a background
  // thread. Returns the bound port; throws kIo when binding fails.
  int Start(int port = 0);
  void Stop();

  // "http://127.0.0.1:<port>"
  std::string url() const;
  // In arrival order.
  std::vector<StubRequest> requests() const;

 private:
  Handler handler_;
  std::string path_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
  mutable std::mutex mu_;
  std::vector<StubRequest> requests_;
};

}  // namespace icul

#endif  // ICUL_STUB_SERVER_H_
