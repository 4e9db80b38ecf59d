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

#include "nlv/assistant/dialog.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlv/common/error.h"

namespace nlv::assistant {
namespace {

constexpr std::string_view kIdlePrompt = "Say the wake word.";
constexpr std::string_view kMenuPrompt = "Yes, what would you like to do?";
constexpr std::string_view kNamePrompt = "What is the name of the contact?";
constexpr std::string_view kNumberPrompt = "What is their phone number?";
constexpr std::string_view kSearchPrompt = "Which contact are you looking for?";
constexpr std::string_view kNewNumberPrompt = "What is the new phone number?";
constexpr std::string_view kDonePrompt = "OK. Done";

void Insert(std::set<int>& out, Category c, Language lang, int index = 0) {
  out.insert(ClassId(c, lang, index));
}

void ResetToIdle(DialogSession& s) {
  s.state = DialogState::kIdle;
  s.language.reset();
  s.draft_name.reset();
  s.digits.clear();
  s.found.reset();
  s.pending = Pending::kNone;
}

std::string FoundPrompt(const Contact& c) {
  return c.name + ": " + c.phone + ". What would you like to do?";
}

}  // namespace

std::string_view StateName(DialogState s) {
  switch (s) {
    case DialogState::kIdle: return "Idle";
    case DialogState::kMainMenu: return "MainMenu";
    case DialogState::kAddAwaitName: return "AddAwaitName";
    case DialogState::kAddConfirmName: return "AddConfirmName";
    case DialogState::kAddAwaitDigits: return "AddAwaitDigits";
    case DialogState::kAddConfirm: return "AddConfirm";
    case DialogState::kAddCommit: return "AddCommit";
    case DialogState::kSearchAwaitName: return "SearchAwaitName";
    case DialogState::kFoundMenu: return "FoundMenu";
    case DialogState::kCallCommit: return "CallCommit";
    case DialogState::kUpdateAwaitDigits: return "UpdateAwaitDigits";
    case DialogState::kMutateCommit: return "MutateCommit";
  }
  return "Unknown";
}

bool IsFinal(DialogState s) {
  return s == DialogState::kAddCommit || s == DialogState::kCallCommit ||
         s == DialogState::kMutateCommit;
}

std::string_view SideEffectName(SideEffectType t) {
  switch (t) {
    case SideEffectType::kAddContact: return "add_contact";
    case SideEffectType::kCall: return "call";
    case SideEffectType::kUpdateContact: return "update_contact";
    case SideEffectType::kDeleteContact: return "delete_contact";
  }
  return "unknown";
}

DialogSession NewSession(size_t number_length) {
  if (number_length == 0) throw Error(ErrorCode::kInvalidArgument, "number_length must be > 0");
  DialogSession s;
  s.number_length = number_length;
  s.prompt = std::string(kIdlePrompt);
  return s;
}

std::set<int> ActiveVocabulary(const DialogSession& s) {
  std::set<int> out;
  if (s.state == DialogState::kIdle) {
    for (int lang = 0; lang < 4; ++lang) {
      Insert(out, Category::kWakeWord, static_cast<Language>(lang));
    }
    return out;
  }
  if (IsFinal(s.state) || !s.language) return out;
  const Language lang = *s.language;
  auto yes_no = [&] {
    Insert(out, Category::kYes, lang);
    Insert(out, Category::kNo, lang);
  };
  auto digits = [&] {
    for (int d = 0; d < 10; ++d) Insert(out, Category::kDigit, lang, d);
  };
  switch (s.state) {
    case DialogState::kMainMenu:
      Insert(out, Category::kAdd, lang);
      Insert(out, Category::kSearch, lang);
      break;
    case DialogState::kAddAwaitName:
    case DialogState::kSearchAwaitName:
      for (int i = 0; i < kNumNames; ++i) out.insert(NameClassId(i));
      Insert(out, Category::kMom, lang);
      Insert(out, Category::kDad, lang);
      break;
    case DialogState::kAddConfirmName:
    case DialogState::kAddConfirm:
      yes_no();
      break;
    case DialogState::kAddAwaitDigits:
      digits();
      break;
    case DialogState::kUpdateAwaitDigits:
      if (s.pending == Pending::kUpdate) {
        yes_no();
      } else {
        digits();
      }
      break;
    case DialogState::kFoundMenu:
      if (s.pending == Pending::kDelete) {
        yes_no();
      } else {
        Insert(out, Category::kCall, lang);
        Insert(out, Category::kUpdate, lang);
        Insert(out, Category::kDelete, lang);
        Insert(out, Category::kNo, lang);
      }
      break;
    default:
      break;
  }
  return out;
}

TransitionResult Transition(DialogSession& s, int class_id, ContactStore& store,
                            double confidence) {
  if (!ActiveVocabulary(s).count(class_id)) {
    throw Error(ErrorCode::kNotInVocabulary,
                "class " + std::to_string(class_id) + " in state " +
                    std::string(StateName(s.state)));
  }
  const UtteranceClass& u = ClassById(class_id);
  s.transcript.push_back({"user", u.display_text, class_id, static_cast<int>(s.state)});

  TransitionResult r{s.state, "", std::nullopt};
  auto go = [&](DialogState next, std::string prompt) {
    s.state = next;
    r.entered = next;
    r.prompt = std::move(prompt);
  };
  auto commit = [&](DialogState final_state, SideEffect effect) {
    r.entered = final_state;
    r.side_effect = std::move(effect);
    ResetToIdle(s);
  };

  switch (s.state) {
    case DialogState::kIdle:
      s.language = u.language;
      go(DialogState::kMainMenu, std::string(kMenuPrompt));
      break;
    case DialogState::kMainMenu:
      if (u.category == Category::kAdd) {
        go(DialogState::kAddAwaitName, std::string(kNamePrompt));
      } else {
        go(DialogState::kSearchAwaitName, std::string(kSearchPrompt));
      }
      break;
    case DialogState::kAddAwaitName: {
      const std::string name = ContactName(u);
      if (store.Contains(name)) {
        go(DialogState::kAddAwaitName,
           name + " is already in your contacts. " + std::string(kNamePrompt));
      } else if (confidence < kNameConfirmThreshold) {
        s.draft_name = name;
        go(DialogState::kAddConfirmName, "Did you say " + name + "?");
      } else {
        s.draft_name = name;
        s.digits.clear();
        go(DialogState::kAddAwaitDigits, std::string(kNumberPrompt));
      }
      break;
    }
    case DialogState::kAddConfirmName:
      if (u.category == Category::kYes) {
        s.digits.clear();
        go(DialogState::kAddAwaitDigits, std::string(kNumberPrompt));
      } else {
        s.draft_name.reset();
        go(DialogState::kAddAwaitName, std::string(kNamePrompt));
      }
      break;
    case DialogState::kAddAwaitDigits:
      s.digits.push_back(static_cast<char>('0' + u.index));
      if (s.digits.size() == s.number_length) {
        go(DialogState::kAddConfirm, "Are you sure to add " + *s.draft_name);
      } else {
        go(DialogState::kAddAwaitDigits, s.digits);
      }
      break;
    case DialogState::kAddConfirm:
      if (u.category == Category::kYes) {
        const Contact c{*s.draft_name, s.digits};
        try {
          store.Add(c);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kDuplicateName) throw;
          ResetToIdle(s);
          r.entered = DialogState::kIdle;
          r.prompt = c.name + " is already in your contacts.";
          break;
        }
        r.prompt = std::string(kDonePrompt);
        commit(DialogState::kAddCommit, {SideEffectType::kAddContact, c.name, c.phone});
      } else {
        s.draft_name.reset();
        s.digits.clear();
        go(DialogState::kAddAwaitName, std::string(kNamePrompt));
      }
      break;
    case DialogState::kSearchAwaitName: {
      const std::string name = ContactName(u);
      if (auto c = store.TryFind(name)) {
        s.found = *c;
        go(DialogState::kFoundMenu, FoundPrompt(*c));
      } else {
        go(DialogState::kSearchAwaitName,
           name + " is not in your contacts. " + std::string(kSearchPrompt));
      }
      break;
    }
    case DialogState::kFoundMenu: {
      const Contact c = *s.found;
      if (s.pending == Pending::kDelete) {
        if (u.category == Category::kYes) {
          store.Delete(c.name);
          r.prompt = std::string(kDonePrompt);
          commit(DialogState::kMutateCommit, {SideEffectType::kDeleteContact, c.name, c.phone});
        } else {
          s.pending = Pending::kNone;
          go(DialogState::kFoundMenu, FoundPrompt(c));
        }
      } else if (u.category == Category::kCall) {
        r.prompt = "Calling " + c.name;
        commit(DialogState::kCallCommit, {SideEffectType::kCall, c.name, c.phone});
      } else if (u.category == Category::kUpdate) {
        s.digits.clear();
        go(DialogState::kUpdateAwaitDigits, std::string(kNewNumberPrompt));
      } else if (u.category == Category::kDelete) {
        s.pending = Pending::kDelete;
        go(DialogState::kFoundMenu, "Are you sure to delete " + c.name);
      } else {
        ResetToIdle(s);
        go(DialogState::kIdle, "OK.");
      }
      break;
    }
    case DialogState::kUpdateAwaitDigits: {
      const Contact c = *s.found;
      if (s.pending == Pending::kUpdate) {
        if (u.category == Category::kYes) {
          store.Update(c.name, s.digits);
          r.prompt = std::string(kDonePrompt);
          commit(DialogState::kMutateCommit,
                 {SideEffectType::kUpdateContact, c.name, s.digits});
        } else {
          s.pending = Pending::kNone;
          s.digits.clear();
          go(DialogState::kFoundMenu, FoundPrompt(c));
        }
      } else {
        s.digits.push_back(static_cast<char>('0' + u.index));
        if (s.digits.size() == s.number_length) {
          s.pending = Pending::kUpdate;
          go(DialogState::kUpdateAwaitDigits,
             "Are you sure to update " + c.name + " to " + s.digits);
        } else {
          go(DialogState::kUpdateAwaitDigits, s.digits);
        }
      }
      break;
    }
    default:
      break;
  }
  s.prompt = r.prompt;
  s.transcript.push_back({"assistant", r.prompt, std::nullopt, static_cast<int>(r.entered)});
  return r;
}

std::vector<double> MaskedSoftmax(std::span<const double> logits, const std::set<int>& active) {
  std::vector<double> p(logits.size(), 0.0);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (int id : active) {
    if (id < 0 || static_cast<size_t>(id) >= logits.size()) {
      throw Error(ErrorCode::kShapeMismatch, "active class outside the logit vector");
    }
    max_logit = std::max(max_logit, logits[static_cast<size_t>(id)]);
  }
  double z = 0.0;
  for (int id : active) {
    p[static_cast<size_t>(id)] = std::exp(logits[static_cast<size_t>(id)] - max_logit);
    z += p[static_cast<size_t>(id)];
  }
  for (int id : active) p[static_cast<size_t>(id)] /= z;
  return p;
}

Classification ClassifyLogits(const DialogSession& s, std::span<const double> logits,
                              double tau) {
  const std::set<int> active = ActiveVocabulary(s);
  if (active.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary, "state " + std::string(StateName(s.state)));
  }
  if (logits.size() != static_cast<size_t>(kNumClasses)) {
    throw Error(ErrorCode::kShapeMismatch, "expected " + std::to_string(kNumClasses) + " logits");
  }
  const auto p = MaskedSoftmax(logits, active);
  Classification c;
  for (int id : active) {
    if (c.class_id < 0 || p[static_cast<size_t>(id)] > c.confidence) {
      c.class_id = id;
      c.confidence = p[static_cast<size_t>(id)];
    }
  }
  c.rejected = c.confidence < tau;
  return c;
}

Classification ClassifyInState(const DialogSession& s, const dsp::FeatureSequence& fs,
                               const models::Model& asr_model, double tau) {
  if (ActiveVocabulary(s).empty()) {
    throw Error(ErrorCode::kEmptyVocabulary, "state " + std::string(StateName(s.state)));
  }
  return ClassifyLogits(s, asr_model.Logits(fs), tau);
}

}  // namespace nlv::assistant
