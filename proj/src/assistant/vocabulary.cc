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

#include "nlv/assistant/vocabulary.h"

#include <array>
#include <charconv>
#include <vector>

#include "nlv/common/error.h"

namespace nlv::assistant {
namespace {

constexpr std::array<std::string_view, 5> kLanguageNames{
    "francais", "maninka", "pular", "susu", "language_independent"};

constexpr std::array<std::string_view, 10> kDigitWords{
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine"};

constexpr std::array<std::string_view, kNumNames> kNames{
    "fatoumata", "mamadou", "mariama", "mohamed", "kadiatou", "ibrahima", "aissatou",
    "aminata",   "alpha",   "thierno", "abdoulaye", "aboubacar", "amadou", "fanta",
    "mariame",   "oumou",   "ousmane", "adama",   "marie",    "moussa",  "aissata",
    "hawa",      "sekou",   "hadja",   "djenabou"};

struct Group {
  Category category;
  int index;
  int code;
  std::string_view slug;
  std::string_view mnemonic;
  std::string_view text;
};

// Language-specific utterances in class-id order.
constexpr std::array<Group, 20> kGroups{{
    {Category::kWakeWord, 0, 101, "wake_word", "wake", "Wake word"},
    {Category::kAdd, 0, 201, "add_contact", "add", "Add a contact"},
    {Category::kSearch, 0, 202, "search_contact", "search", "Search a contact"},
    {Category::kUpdate, 0, 203, "update_contact", "update", "Update that"},
    {Category::kDelete, 0, 204, "delete_contact", "delete", "Delete that"},
    {Category::kCall, 0, 205, "call_contact", "call", "Call that"},
    {Category::kYes, 0, 206, "yes", "yes", "Yes"},
    {Category::kNo, 0, 207, "no", "no", "No"},
    {Category::kDigit, 0, 301, "zero", "digit:0", "0"},
    {Category::kDigit, 1, 302, "one", "digit:1", "1"},
    {Category::kDigit, 2, 303, "two", "digit:2", "2"},
    {Category::kDigit, 3, 304, "three", "digit:3", "3"},
    {Category::kDigit, 4, 305, "four", "digit:4", "4"},
    {Category::kDigit, 5, 306, "five", "digit:5", "5"},
    {Category::kDigit, 6, 307, "six", "digit:6", "6"},
    {Category::kDigit, 7, 308, "seven", "digit:7", "7"},
    {Category::kDigit, 8, 309, "eight", "digit:8", "8"},
    {Category::kDigit, 9, 310, "nine", "digit:9", "9"},
    {Category::kMom, 0, 401, "mom", "mom", "Mom"},
    {Category::kDad, 0, 402, "dad", "dad", "Dad"},
}};

std::string Capitalize(std::string_view s) {
  std::string out(s);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 32);
  return out;
}

std::vector<UtteranceClass> BuildVocabulary() {
  std::vector<UtteranceClass> v;
  v.reserve(kNumClasses);
  for (const Group& g : kGroups) {
    for (int lang = 0; lang < 4; ++lang) {
      UtteranceClass c;
      c.class_id = static_cast<int>(v.size());
      c.category = g.category;
      c.language = static_cast<Language>(lang);
      c.index = g.index;
      c.utterance_id = std::to_string(g.code) + "_" + std::string(g.slug);
      c.mnemonic = std::string(kLanguageNames[lang]) + ":" + std::string(g.mnemonic);
      c.display_text = std::string(g.text) + " (" + std::string(kLanguageNames[lang]) + ")";
      v.push_back(std::move(c));
    }
  }
  for (int i = 0; i < kNumNames; ++i) {
    UtteranceClass c;
    c.class_id = static_cast<int>(v.size());
    c.category = Category::kName;
    c.language = Language::kIndependent;
    c.index = i;
    c.utterance_id = std::to_string(501 + i) + "_" + std::string(kNames[i]);
    c.mnemonic = "name:" + std::string(kNames[i]);
    c.display_text = Capitalize(kNames[i]);
    v.push_back(std::move(c));
  }
  return v;
}

const std::vector<UtteranceClass>& Table() {
  static const std::vector<UtteranceClass> table = BuildVocabulary();
  return table;
}

}  // namespace

std::span<const UtteranceClass> Vocabulary() { return Table(); }

const UtteranceClass& ClassById(int class_id) {
  if (class_id < 0 || class_id >= kNumClasses) {
    throw Error(ErrorCode::kNotInVocabulary, "class id " + std::to_string(class_id));
  }
  return Table()[static_cast<size_t>(class_id)];
}

int ClassId(Category category, Language language, int index) {
  if (category == Category::kName) return NameClassId(index);
  if (language == Language::kIndependent) {
    throw Error(ErrorCode::kInvalidArgument, "category requires a language");
  }
  for (size_t g = 0; g < kGroups.size(); ++g) {
    if (kGroups[g].category == category && kGroups[g].index == index) {
      return static_cast<int>(g) * 4 + static_cast<int>(language);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "no such class");
}

int NameClassId(int name_index) {
  if (name_index < 0 || name_index >= kNumNames) {
    throw Error(ErrorCode::kInvalidArgument, "name index " + std::to_string(name_index));
  }
  return 80 + name_index;
}

std::string_view LanguageName(Language language) {
  return kLanguageNames[static_cast<size_t>(language)];
}

std::optional<Language> ParseLanguage(std::string_view name) {
  for (size_t i = 0; i < kLanguageNames.size(); ++i) {
    if (kLanguageNames[i] == name) return static_cast<Language>(i);
  }
  return std::nullopt;
}

std::string_view CategoryName(Category category) {
  switch (category) {
    case Category::kWakeWord: return "wake_word";
    case Category::kAdd: return "add";
    case Category::kSearch: return "search";
    case Category::kUpdate: return "update";
    case Category::kDelete: return "delete";
    case Category::kCall: return "call";
    case Category::kYes: return "yes";
    case Category::kNo: return "no";
    case Category::kDigit: return "digit";
    case Category::kMom: return "mom";
    case Category::kDad: return "dad";
    case Category::kName: return "name";
  }
  return "unknown";
}

std::string ContactName(const UtteranceClass& c) {
  if (c.category == Category::kMom) return "Mom";
  if (c.category == Category::kDad) return "Dad";
  return c.display_text;
}

std::optional<int> ParseMnemonic(std::string_view text, std::optional<Language> session_language) {
  int id = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (ec == std::errc() && end == text.data() + text.size()) {
    if (id >= 0 && id < kNumClasses) return id;
    return std::nullopt;
  }
  for (const auto& c : Table()) {
    if (c.mnemonic == text) return c.class_id;
    if (c.category == Category::kName && c.mnemonic.substr(5) == text) return c.class_id;
  }
  if (session_language && *session_language != Language::kIndependent) {
    const std::string qualified = std::string(LanguageName(*session_language)) + ":" +
                                  std::string(text);
    for (const auto& c : Table()) {
      if (c.mnemonic == qualified) return c.class_id;
    }
  }
  return std::nullopt;
}

}  // namespace nlv::assistant
