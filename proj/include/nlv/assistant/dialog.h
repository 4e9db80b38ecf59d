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

#ifndef NLV_ASSISTANT_DIALOG_H_
#define NLV_ASSISTANT_DIALOG_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlv/assistant/contacts.h"
#include "nlv/assistant/vocabulary.h"
#include "nlv/dsp/features.h"
#include "nlv/models/model.h"

namespace nlv::assistant {

enum class DialogState {
  kIdle = 0,
  kMainMenu = 1,
  kAddAwaitName = 2,
  kAddConfirmName = 3,
  kAddAwaitDigits = 4,
  kAddConfirm = 5,
  kAddCommit = 6,
  kSearchAwaitName = 7,
  kFoundMenu = 8,
  kCallCommit = 9,
  kUpdateAwaitDigits = 10,
  kMutateCommit = 11,
};

inline constexpr int kNumStates = 12;
// Below this classifier confidence a recognized name is confirmed first.
inline constexpr double kNameConfirmThreshold = 0.75;
inline constexpr double kRejectThreshold = 0.5;

std::string_view StateName(DialogState s);
bool IsFinal(DialogState s);

// Yes/no confirmation awaited inside FoundMenu (delete) or
// UpdateAwaitDigits (full number entered).
enum class Pending { kNone, kUpdate, kDelete };

struct Turn {
  std::string role;  // "user" or "assistant"
  std::string text;
  std::optional<int> class_id;  // user turns
  int state = 0;                // state after the turn
};

struct DialogSession {
  DialogState state = DialogState::kIdle;
  std::optional<Language> language;
  std::optional<std::string> draft_name;
  std::string digits;
  std::optional<Contact> found;
  Pending pending = Pending::kNone;
  std::vector<Turn> transcript;
  size_t number_length = 9;
  std::string prompt;
};

enum class SideEffectType { kAddContact, kCall, kUpdateContact, kDeleteContact };
std::string_view SideEffectName(SideEffectType t);

struct SideEffect {
  SideEffectType type;
  std::string name;
  std::string phone;

  bool operator==(const SideEffect&) const = default;
};

struct TransitionResult {
  // The state entered by this utterance. Commit states (6, 9, 11) are
  // reported here while the session itself has already reset to Idle.
  DialogState entered;
  std::string prompt;
  std::optional<SideEffect> side_effect;
};

DialogSession NewSession(size_t number_length = 9);

std::set<int> ActiveVocabulary(const DialogSession& s);

// Applies one utterance. Throws NotInVocabulary when `class_id` is not in
// ActiveVocabulary(s); the session is left untouched in that case.
// `confidence` below kNameConfirmThreshold routes names through state 3.
TransitionResult Transition(DialogSession& s, int class_id, ContactStore& store,
                            double confidence = 1.0);

struct Classification {
  int class_id = -1;
  double confidence = 0.0;
  bool rejected = true;

  bool operator==(const Classification&) const = default;
};

// Softmax over `active` only; entries outside it are zero.
std::vector<double> MaskedSoftmax(std::span<const double> logits, const std::set<int>& active);

// Arg-max of the masked softmax; rejected below `tau`. Throws
// EmptyVocabulary in final states.
Classification ClassifyLogits(const DialogSession& s, std::span<const double> logits,
                              double tau = kRejectThreshold);
Classification ClassifyInState(const DialogSession& s, const dsp::FeatureSequence& fs,
                               const models::Model& asr_model, double tau = kRejectThreshold);

}  // namespace nlv::assistant

#endif  // NLV_ASSISTANT_DIALOG_H_
