// Copyright 2026 The WDC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP front end of a rating study.

#ifndef WDC_RATERD_SERVER_H_
#define WDC_RATERD_SERVER_H_

#include <memory>
#include <string>

#include "wdc/raterd/study.h"

namespace httplib {
class Server;
}

namespace wdc::raterd {

// GET /task, POST /rating, GET /scores, GET /crop/<token>, and the rater UI
// bundle from StudyConfig::static_dir under "/".
class Server {
 public:
  explicit Server(Study& study);
  ~Server();

  // Binds and serves until Stop(). Returns false when binding fails.
  bool Listen(const std::string& host, int port);
  // Binds to a free port and returns it, or -1. Serve with ListenAfterBind().
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  void Stop();
  void WaitUntilReady();

 private:
  Study& study_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace wdc::raterd

#endif  // WDC_RATERD_SERVER_H_
