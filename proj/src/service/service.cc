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

#include "nlv/service/service.h"

#include <cstdio>
#include <random>

#include "httplib.h"
#include "json.hpp"
#include "nlv/common/error.h"
#include "nlv/common/random.h"
#include "nlv/dsp/audio.h"
#include "nlv/dsp/mel.h"
#include "nlv/dsp/wav.h"
#include "nlv/tensorcore/ops.h"

namespace nlv::service {

using nlohmann::json;
using namespace nlv::assistant;

struct AssistantService::Entry {
  std::mutex mu;
  DialogSession session;
  Clock::time_point last_used;
  bool closed = false;
};

namespace {

struct HttpError {
  int status;
  std::string reason;
  std::string message;
};

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, const HttpError& e) {
  Reply(res, e.status, {{"error", e.reason}, {"message", e.message}});
}

json ClassJson(int id) {
  const auto& c = ClassById(id);
  return {{"class_id", c.class_id},
          {"category", CategoryName(c.category)},
          {"language", LanguageName(c.language)},
          {"display_text", c.display_text},
          {"mnemonic", c.mnemonic}};
}

json VocabularyJson(const std::set<int>& ids) {
  json out = json::array();
  for (int id : ids) out.push_back(ClassJson(id));
  return out;
}

json SessionJson(const std::string& id, const DialogSession& s, bool with_transcript) {
  json out = {{"session_id", id},
              {"state", static_cast<int>(s.state)},
              {"state_name", StateName(s.state)},
              {"language", s.language ? json(LanguageName(*s.language)) : json(nullptr)},
              {"prompt", s.prompt},
              {"active_vocabulary", VocabularyJson(ActiveVocabulary(s))}};
  if (with_transcript) {
    json turns = json::array();
    for (const auto& t : s.transcript) {
      json turn = {{"role", t.role}, {"text", t.text}, {"state", t.state}};
      if (t.class_id) turn["class_id"] = *t.class_id;
      turns.push_back(std::move(turn));
    }
    out["transcript"] = std::move(turns);
  }
  return out;
}

// Mel features for WAV bodies, the raw sequence for NLF1 bodies.
dsp::FeatureSequence FeaturesFromBody(const httplib::Request& req) {
  const std::string type = req.get_header_value("Content-Type");
  std::span<const uint8_t> bytes(reinterpret_cast<const uint8_t*>(req.body.data()),
                                 req.body.size());
  try {
    if (type.rfind("audio/wav", 0) == 0 || type.rfind("audio/x-wav", 0) == 0 ||
        type.rfind("audio/wave", 0) == 0) {
      return dsp::MelSpectrogram(dsp::Preprocess(dsp::DecodeWav(bytes)));
    }
    if (type.rfind("application/x-nlf1", 0) == 0) return dsp::DecodeFeatures(bytes);
  } catch (const Error& e) {
    throw HttpError{400, "bad_audio", e.what()};
  }
  throw HttpError{415, "unsupported_media_type",
                  "expected application/json, audio/wav or application/x-nlf1"};
}

std::vector<double> RunModel(const models::Model& m, const dsp::FeatureSequence& fs) {
  try {
    return m.Logits(fs);
  } catch (const Error& e) {
    throw HttpError{400, e.code() == ErrorCode::kDimMismatch ? "dim_mismatch" : "bad_features",
                    e.what()};
  }
}

bool IsJson(const httplib::Request& req) {
  return req.get_header_value("Content-Type").rfind("application/json", 0) == 0;
}

}  // namespace

AssistantService::AssistantService(ContactStore& store, ServiceConfig config,
                                   std::optional<models::Model> asr_model,
                                   std::optional<models::Model> langid_model)
    : store_(store),
      config_(std::move(config)),
      asr_model_(std::move(asr_model)),
      langid_model_(std::move(langid_model)),
      id_salt_(std::random_device{}() ^ (static_cast<uint64_t>(std::random_device{}()) << 32)) {
  if (asr_model_ && asr_model_->config().num_classes != static_cast<uint32_t>(kNumClasses)) {
    throw Error(ErrorCode::kConfigMismatch, "ASR model must have 105 classes");
  }
}

AssistantService::~AssistantService() = default;

size_t AssistantService::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

void AssistantService::ExpireSessions() {
  const auto now = config_.now();
  std::lock_guard lock(mu_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    bool stale;
    {
      std::lock_guard entry_lock(it->second->mu);
      stale = now - it->second->last_used > config_.idle_timeout;
      if (stale) it->second->closed = true;
    }
    it = stale ? sessions_.erase(it) : std::next(it);
  }
}

std::shared_ptr<AssistantService::Entry> AssistantService::Lookup(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw HttpError{404, "unknown_session", "no session " + id};
  return it->second;
}

void AssistantService::Register(httplib::Server& server) {
  server.set_payload_max_length(config_.max_body_bytes);

  // Wraps a handler with expiry, body-size and error mapping.
  auto wrap = [this](auto fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        ExpireSessions();
        if (req.body.size() > config_.max_body_bytes) {
          throw HttpError{413, "payload_too_large",
                          "body exceeds " + std::to_string(config_.max_body_bytes) + " bytes"};
        }
        fn(req, res);
      } catch (const HttpError& e) {
        ReplyError(res, e);
      } catch (const Error& e) {
        ReplyError(res, {400, std::string(ErrorCodeName(e.code())), e.what()});
      } catch (const json::exception& e) {
        ReplyError(res, {400, "malformed_body", e.what()});
      } catch (const std::logic_error& e) {
        ReplyError(res, {400, "malformed_body", e.what()});
      }
    };
  };

  server.Post("/v1/sessions", wrap([this](const httplib::Request&, httplib::Response& res) {
    auto entry = std::make_shared<Entry>();
    entry->session = NewSession(config_.number_length);
    entry->last_used = config_.now();
    std::string id;
    {
      std::lock_guard lock(mu_);
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%016llx%08llx",
                    static_cast<unsigned long long>(DeriveSeed(id_salt_, id_counter_)),
                    static_cast<unsigned long long>(id_counter_ & 0xffffffffULL));
      ++id_counter_;
      id = buf;
      sessions_[id] = entry;
    }
    Reply(res, 201, SessionJson(id, entry->session, false));
  }));

  server.Get(R"(/v1/sessions/([0-9a-f]+))",
             wrap([this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               auto entry = Lookup(id);
               std::lock_guard lock(entry->mu);
               entry->last_used = config_.now();
               Reply(res, 200, SessionJson(id, entry->session, true));
             }));

  server.Delete(R"(/v1/sessions/([0-9a-f]+))",
                wrap([this](const httplib::Request& req, httplib::Response& res) {
                  const std::string id = req.matches[1];
                  std::shared_ptr<Entry> entry;
                  {
                    std::lock_guard lock(mu_);
                    auto it = sessions_.find(id);
                    if (it == sessions_.end()) {
                      throw HttpError{404, "unknown_session", "no session " + id};
                    }
                    entry = it->second;
                    sessions_.erase(it);
                  }
                  std::lock_guard lock(entry->mu);
                  entry->closed = true;
                  res.status = 204;
                }));

  server.Post(R"(/v1/sessions/([0-9a-f]+)/utterance)",
              wrap([this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto entry = Lookup(id);
    std::optional<int> expected_state;
    if (req.has_param("expected_state")) {
      expected_state = std::stoi(req.get_param_value("expected_state"));
    }
    std::optional<int> class_id;
    double confidence = 1.0;
    std::optional<dsp::FeatureSequence> features;
    if (IsJson(req)) {
      const json body = json::parse(req.body);
      if (!body.is_object()) throw HttpError{400, "malformed_body", "expected a JSON object"};
      if (body.contains("expected_state")) expected_state = body.at("expected_state").get<int>();
      if (body.contains("confidence")) confidence = body.at("confidence").get<double>();
      if (body.contains("class_id")) {
        class_id = body.at("class_id").get<int>();
      } else if (body.contains("mnemonic")) {
        std::lock_guard lock(entry->mu);
        class_id = ParseMnemonic(body.at("mnemonic").get<std::string>(), entry->session.language);
        if (!class_id) throw HttpError{400, "not_in_vocabulary", "unknown mnemonic"};
      } else {
        throw HttpError{400, "malformed_body", "expected class_id"};
      }
    } else {
      features = FeaturesFromBody(req);
      if (!asr_model_) throw HttpError{503, "asr_model_unavailable", "no ASR model loaded"};
    }

    std::lock_guard lock(entry->mu);
    if (entry->closed) throw HttpError{404, "unknown_session", "session ended"};
    entry->last_used = config_.now();
    DialogSession& s = entry->session;
    if (expected_state && *expected_state != static_cast<int>(s.state)) {
      throw HttpError{409, "state_conflict",
                      "session is in state " + std::to_string(static_cast<int>(s.state))};
    }
    if (IsFinal(s.state)) throw HttpError{409, "state_conflict", "session is in a final state"};

    json out;
    if (features) {
      const auto c = ClassifyLogits(s, RunModel(*asr_model_, *features), config_.reject_threshold);
      if (c.rejected) {
        out = SessionJson(id, s, false);
        out["recognized"] = nullptr;
        out["rejected"] = {{"class_id", c.class_id}, {"confidence", c.confidence}};
        out["prompt"] = "Sorry, I did not understand. " + s.prompt;
        Reply(res, 200, out);
        return;
      }
      class_id = c.class_id;
      confidence = c.confidence;
    }
    if (*class_id < 0 || *class_id >= kNumClasses || !ActiveVocabulary(s).count(*class_id)) {
      throw HttpError{400, "not_in_vocabulary",
                      "class " + std::to_string(*class_id) + " is not accepted in state " +
                          std::to_string(static_cast<int>(s.state))};
    }
    const auto r = Transition(s, *class_id, store_, confidence);
    out = SessionJson(id, s, false);
    out["recognized"] = {{"class_id", *class_id},
                         {"confidence", confidence},
                         {"display_text", ClassById(*class_id).display_text}};
    out["rejected"] = nullptr;
    out["state"] = static_cast<int>(r.entered);
    out["state_name"] = StateName(r.entered);
    out["prompt"] = r.prompt;
    if (r.side_effect) {
      out["side_effect"] = {{"type", SideEffectName(r.side_effect->type)},
                            {"name", r.side_effect->name},
                            {"phone", r.side_effect->phone}};
    }
    Reply(res, 200, out);
  }));

  server.Post("/v1/classify", wrap([this](const httplib::Request& req, httplib::Response& res) {
    const std::string which = req.has_param("model") ? req.get_param_value("model") : "asr";
    const models::Model* m = nullptr;
    if (which == "asr") {
      m = asr_model_ ? &*asr_model_ : nullptr;
    } else if (which == "langid") {
      m = langid_model_ ? &*langid_model_ : nullptr;
    } else {
      throw HttpError{400, "bad_model", "model must be langid or asr"};
    }
    if (!m) throw HttpError{503, "model_unavailable", "no " + which + " model loaded"};
    const auto fs = FeaturesFromBody(req);
    const auto p = tc::Softmax(RunModel(*m, fs));
    const size_t best = static_cast<size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    Reply(res, 200, {{"model", which}, {"probabilities", p}, {"class_id", best}});
  }));

  server.Get("/v1/contacts", wrap([this](const httplib::Request&, httplib::Response& res) {
    json list = json::array();
    for (const auto& c : store_.List()) list.push_back({{"name", c.name}, {"phone", c.phone}});
    Reply(res, 200, {{"contacts", list}});
  }));

  server.Get("/v1/vocabulary", wrap([](const httplib::Request&, httplib::Response& res) {
    json all = json::array();
    for (const auto& c : Vocabulary()) all.push_back(ClassJson(c.class_id));
    Reply(res, 200, {{"classes", all}});
  }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 413) {
      ReplyError(res, {413, "payload_too_large", "request body too large"});
    } else if (res.status == 404) {
      ReplyError(res, {404, "not_found", "no such route"});
    }
  });
}

void Serve(AssistantService& service, const std::string& host, int port) {
  httplib::Server server;
  service.Register(server);
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::kIoError, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

}  // namespace nlv::service
