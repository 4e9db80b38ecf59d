// Copyright 2026 The nlvoice Authors
// SPDX-License-Identifier: Apache-2.0
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

#ifndef NLV_SERVICE_SERVICE_H_
#define NLV_SERVICE_SERVICE_H_

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "nlv/assistant/contacts.h"
#include "nlv/assistant/dialog.h"
#include "nlv/models/model.h"

namespace httplib {
class Server;
}

namespace nlv::service {

using Clock = std::chrono::steady_clock;

struct ServiceConfig {
  std::chrono::seconds idle_timeout{15 * 60};
  size_t max_body_bytes = 10 * 1024 * 1024;
  size_t number_length = 9;
  double reject_threshold = assistant::kRejectThreshold;
  std::function<Clock::time_point()> now = [] { return Clock::now(); };
};

// HTTP adapter over the assistant. Routes:
//
//   POST   /v1/sessions                 new Idle session
//   GET    /v1/sessions/{id}            state, prompt, vocabulary, transcript
//   DELETE /v1/sessions/{id}
//   POST   /v1/sessions/{id}/utterance  {"class_id"} JSON, or an audio/wav or
//                                       application/x-nlf1 body for the ASR model
//   POST   /v1/classify?model=langid|asr
//   GET    /v1/contacts
//   GET    /v1/vocabulary
//
// Errors are {"error": <reason>, "message": <text>} with 400, 404, 409, 413,
// 415 or 503. An utterance may carry expected_state (JSON field or query
// parameter); a mismatch with the session's state answers 409.
class AssistantService {
 public:
  AssistantService(assistant::ContactStore& store, ServiceConfig config = {},
                   std::optional<models::Model> asr_model = std::nullopt,
                   std::optional<models::Model> langid_model = std::nullopt);
  ~AssistantService();

  AssistantService(const AssistantService&) = delete;
  AssistantService& operator=(const AssistantService&) = delete;

  void Register(httplib::Server& server);

  size_t session_count() const;
  // Drops sessions idle for longer than the timeout. Called on every request.
  void ExpireSessions();

 private:
  struct Entry;

  std::shared_ptr<Entry> Lookup(const std::string& id);

  assistant::ContactStore& store_;
  ServiceConfig config_;
  std::optional<models::Model> asr_model_;
  std::optional<models::Model> langid_model_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  uint64_t id_counter_ = 0;
  uint64_t id_salt_;
};

// Blocks serving on host:port until the server is stopped.
void Serve(AssistantService& service, const std::string& host, int port);

}  // namespace nlv::service

#endif  // NLV_SERVICE_SERVICE_H_
