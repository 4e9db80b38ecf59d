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

#ifndef NLV_ASSISTANT_CONTACTS_H_
#define NLV_ASSISTANT_CONTACTS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace nlv::assistant {

struct Contact {
  std::string name;
  std::string phone;

  bool operator==(const Contact&) const = default;
};

// Name-keyed contact list. With a backing path every mutation rewrites the
// file atomically as {"version": 1, "contacts": [{"name", "phone"}]}.
// Mutations take an exclusive lock; reads share it.
class ContactStore {
 public:
  explicit ContactStore(size_t number_length = 9) : number_length_(number_length) {}
  // Loads `path` if it exists.
  explicit ContactStore(std::filesystem::path path, size_t number_length = 9);

  ContactStore(const ContactStore&) = delete;
  ContactStore& operator=(const ContactStore&) = delete;

  void Add(const Contact& c);
  Contact Find(const std::string& name) const;
  std::optional<Contact> TryFind(const std::string& name) const;
  bool Contains(const std::string& name) const;
  void Update(const std::string& name, const std::string& phone);
  void Delete(const std::string& name);
  std::vector<Contact> List() const;  // sorted by name

  size_t number_length() const { return number_length_; }

 private:
  void CheckPhone(const std::string& phone) const;
  void PersistLocked() const;

  std::optional<std::filesystem::path> path_;
  size_t number_length_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::string> contacts_;
};

std::string EncodeContacts(const std::vector<Contact>& contacts);
std::vector<Contact> DecodeContacts(const std::string& json_text);

}  // namespace nlv::assistant

#endif  // NLV_ASSISTANT_CONTACTS_H_
