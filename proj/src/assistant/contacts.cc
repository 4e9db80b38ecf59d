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

#include "nlv/assistant/contacts.h"

#include <mutex>

#include "json.hpp"
#include "nlv/common/binary_io.h"
#include "nlv/common/error.h"

namespace nlv::assistant {

ContactStore::ContactStore(std::filesystem::path path, size_t number_length)
    : path_(std::move(path)), number_length_(number_length) {
  if (!std::filesystem::exists(*path_)) return;
  const auto bytes = ReadFileBytes(*path_);
  for (const Contact& c : DecodeContacts(std::string(bytes.begin(), bytes.end()))) {
    CheckPhone(c.phone);
    if (!contacts_.emplace(c.name, c.phone).second) {
      throw Error(ErrorCode::kDuplicateName, c.name);
    }
  }
}

void ContactStore::CheckPhone(const std::string& phone) const {
  if (phone.size() != number_length_) {
    throw Error(ErrorCode::kInvalidPhone, "expected " + std::to_string(number_length_) +
                                              " digits, got '" + phone + "'");
  }
  for (char ch : phone) {
    if (ch < '0' || ch > '9') throw Error(ErrorCode::kInvalidPhone, "'" + phone + "'");
  }
}

void ContactStore::Add(const Contact& c) {
  if (c.name.empty()) throw Error(ErrorCode::kInvalidArgument, "empty contact name");
  CheckPhone(c.phone);
  std::unique_lock lock(mu_);
  if (contacts_.count(c.name)) throw Error(ErrorCode::kDuplicateName, c.name);
  contacts_.emplace(c.name, c.phone);
  PersistLocked();
}

Contact ContactStore::Find(const std::string& name) const {
  auto c = TryFind(name);
  if (!c) throw Error(ErrorCode::kNotFound, name);
  return *c;
}

std::optional<Contact> ContactStore::TryFind(const std::string& name) const {
  std::shared_lock lock(mu_);
  auto it = contacts_.find(name);
  if (it == contacts_.end()) return std::nullopt;
  return Contact{it->first, it->second};
}

bool ContactStore::Contains(const std::string& name) const { return TryFind(name).has_value(); }

void ContactStore::Update(const std::string& name, const std::string& phone) {
  CheckPhone(phone);
  std::unique_lock lock(mu_);
  auto it = contacts_.find(name);
  if (it == contacts_.end()) throw Error(ErrorCode::kNotFound, name);
  it->second = phone;
  PersistLocked();
}

void ContactStore::Delete(const std::string& name) {
  std::unique_lock lock(mu_);
  if (contacts_.erase(name) == 0) throw Error(ErrorCode::kNotFound, name);
  PersistLocked();
}

std::vector<Contact> ContactStore::List() const {
  std::shared_lock lock(mu_);
  std::vector<Contact> out;
  for (const auto& [name, phone] : contacts_) out.push_back({name, phone});
  return out;
}

void ContactStore::PersistLocked() const {
  if (!path_) return;
  std::vector<Contact> all;
  for (const auto& [name, phone] : contacts_) all.push_back({name, phone});
  const std::string text = EncodeContacts(all);
  WriteFileAtomic(*path_, text);
}

std::string EncodeContacts(const std::vector<Contact>& contacts) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["contacts"] = nlohmann::json::array();
  for (const Contact& c : contacts) {
    doc["contacts"].push_back({{"name", c.name}, {"phone", c.phone}});
  }
  return doc.dump(2) + "\n";
}

std::vector<Contact> DecodeContacts(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptHeader, std::string("contact file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer() ||
      !doc.contains("contacts") || !doc["contacts"].is_array()) {
    throw Error(ErrorCode::kSchemaVersionMismatch, "contact file lacks version/contacts");
  }
  if (doc["version"].get<int>() != 1) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "contact file version " + doc["version"].dump());
  }
  std::vector<Contact> out;
  for (const auto& entry : doc["contacts"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("phone") || !entry["phone"].is_string()) {
      throw Error(ErrorCode::kSchemaVersionMismatch, "malformed contact entry");
    }
    out.push_back({entry["name"].get<std::string>(), entry["phone"].get<std::string>()});
  }
  return out;
}

}  // namespace nlv::assistant
