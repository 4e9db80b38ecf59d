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

#ifndef NLV_ASSISTANT_VOCABULARY_H_
#define NLV_ASSISTANT_VOCABULARY_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace nlv::assistant {

enum class Language { kFrancais, kManinka, kPular, kSusu, kIndependent };

enum class Category {
  kWakeWord,
  kAdd,
  kSearch,
  kUpdate,
  kDelete,
  kCall,
  kYes,
  kNo,
  kDigit,
  kMom,
  kDad,
  kName,
};

inline constexpr int kNumClasses = 105;
inline constexpr int kNumNames = 25;

struct UtteranceClass {
  int class_id = 0;
  Category category = Category::kWakeWord;
  Language language = Language::kFrancais;
  int index = 0;             // digit value or name position, else 0
  std::string utterance_id;  // e.g. "201_add_contact"
  std::string mnemonic;      // e.g. "susu:add", "susu:digit:6", "name:fatoumata"
  std::string display_text;  // e.g. "Add a contact (susu)", "Fatoumata"
};

// The 105 classes ordered by class id: four languages for each of the
// 20 language-specific utterances, then the language-independent names.
std::span<const UtteranceClass> Vocabulary();
const UtteranceClass& ClassById(int class_id);

int ClassId(Category category, Language language, int index = 0);
int NameClassId(int name_index);

std::string_view LanguageName(Language language);
std::optional<Language> ParseLanguage(std::string_view name);
std::string_view CategoryName(Category category);

// The spoken form used for contact names, e.g. "Fatoumata", "Mom".
std::string ContactName(const UtteranceClass& c);

// Resolves a mnemonic to a class id. Accepted forms:
//   <lang>:<command>, <lang>:digit:<d>, name:<name>, <name>, a bare class
//   id, and digit:<d> / <command> resolved against `session_language`.
std::optional<int> ParseMnemonic(std::string_view text,
                                 std::optional<Language> session_language = std::nullopt);

}  // namespace nlv::assistant

#endif  // NLV_ASSISTANT_VOCABULARY_H_
