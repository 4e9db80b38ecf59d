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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <queue>
#include <set>
#include <thread>

#include "gtest/gtest.h"
#include "nlv/assistant/contacts.h"
#include "nlv/assistant/dialog.h"
#include "nlv/assistant/vocabulary.h"
#include "nlv/common/error.h"
#include "nlv/common/random.h"

namespace nlv::assistant {
namespace {

int Id(std::string_view mnemonic, std::optional<Language> lang = std::nullopt) {
  auto id = ParseMnemonic(mnemonic, lang);
  EXPECT_TRUE(id.has_value()) << mnemonic;
  return id.value_or(-1);
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

std::filesystem::path TempPath(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "nlv_assistant_test";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::filesystem::remove(p);
  return p;
}

TEST(VocabularyTest, CountsAndLayout) {
  const auto v = Vocabulary();
  ASSERT_EQ(v.size(), 105u);
  std::map<Category, int> counts;
  for (size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(v[i].class_id, static_cast<int>(i));
    ++counts[v[i].category];
  }
  EXPECT_EQ(counts[Category::kWakeWord], 4);
  int commands = 0;
  for (auto c : {Category::kAdd, Category::kSearch, Category::kUpdate, Category::kDelete,
                 Category::kCall, Category::kYes, Category::kNo}) {
    commands += counts[c];
  }
  EXPECT_EQ(commands, 28);
  EXPECT_EQ(counts[Category::kDigit], 40);
  EXPECT_EQ(counts[Category::kMom] + counts[Category::kDad], 8);
  EXPECT_EQ(counts[Category::kName], 25);

  EXPECT_EQ(v[0].utterance_id, "101_wake_word");
  EXPECT_EQ(v[0].language, Language::kFrancais);
  EXPECT_EQ(v[7].utterance_id, "201_add_contact");
  EXPECT_EQ(v[7].language, Language::kSusu);
  EXPECT_EQ(v[65].utterance_id, "309_eight");
  EXPECT_EQ(v[65].language, Language::kManinka);
  EXPECT_EQ(v[79].utterance_id, "402_dad");
  EXPECT_EQ(v[80].utterance_id, "501_fatoumata");
  EXPECT_EQ(v[104].utterance_id, "525_djenabou");
  EXPECT_EQ(v[104].language, Language::kIndependent);

  // (utterance_id, language) identifies the class.
  std::set<std::pair<std::string, Language>> keys;
  for (const auto& c : v) keys.insert({c.utterance_id, c.language});
  EXPECT_EQ(keys.size(), 105u);
}

TEST(VocabularyTest, MnemonicsRoundTrip) {
  for (const auto& c : Vocabulary()) {
    EXPECT_EQ(ParseMnemonic(c.mnemonic), c.class_id) << c.mnemonic;
  }
  EXPECT_EQ(Id("susu:wake"), 3);
  EXPECT_EQ(Id("digit:6", Language::kSusu), ClassId(Category::kDigit, Language::kSusu, 6));
  EXPECT_EQ(Id("fatoumata"), 80);
  EXPECT_EQ(Id("42"), 42);
  EXPECT_FALSE(ParseMnemonic("digit:6").has_value());
  EXPECT_FALSE(ParseMnemonic("105").has_value());
  EXPECT_FALSE(ParseMnemonic("klingon:add").has_value());
}

TEST(ActiveVocabularyTest, FixedSizes) {
  ContactStore store;
  auto s = NewSession();
  EXPECT_EQ(ActiveVocabulary(s), (std::set<int>{0, 1, 2, 3}));
  Transition(s, Id("susu:wake"), store);
  const auto menu = ActiveVocabulary(s);
  ASSERT_EQ(menu.size(), 2u);
  for (int id : menu) EXPECT_EQ(ClassById(id).language, Language::kSusu);
  Transition(s, Id("susu:add"), store);
  EXPECT_EQ(ActiveVocabulary(s).size(), 27u);
}

TEST(DialogTest, AddContactWalkthrough) {
  ContactStore store;
  auto s = NewSession();
  std::vector<int> states;
  std::vector<std::string> prompts;
  std::vector<SideEffect> effects;
  auto say = [&](std::string_view m) {
    auto r = Transition(s, Id(m, s.language), store);
    if (states.empty() || states.back() != static_cast<int>(r.entered)) {
      states.push_back(static_cast<int>(r.entered));
      prompts.push_back(r.prompt);
    }
    if (r.side_effect) effects.push_back(*r.side_effect);
  };
  say("susu:wake");
  say("add");
  say("fatoumata");
  for (char d : std::string("698332529")) say(std::string("digit:") + d);
  say("yes");
  EXPECT_EQ(states, (std::vector<int>{1, 2, 4, 5, 6}));
  EXPECT_EQ(prompts, (std::vector<std::string>{
                         "Yes, what would you like to do?", "What is the name of the contact?",
                         "What is their phone number?", "Are you sure to add Fatoumata",
                         "OK. Done"}));
  ASSERT_EQ(effects.size(), 1u);
  EXPECT_EQ(effects[0], (SideEffect{SideEffectType::kAddContact, "Fatoumata", "698332529"}));
  EXPECT_EQ(store.Find("Fatoumata").phone, "698332529");
  EXPECT_EQ(s.state, DialogState::kIdle);
  EXPECT_FALSE(s.language.has_value());
  EXPECT_EQ(s.transcript.size(), 2u * 13u);
}

TEST(DialogTest, OutOfVocabularyLeavesSessionUntouched) {
  ContactStore store;
  auto s = NewSession();
  Transition(s, Id("pular:wake"), store);
  const size_t turns = s.transcript.size();
  EXPECT_EQ(CodeOf([&] { Transition(s, Id("pular:digit:3"), store); }),
            ErrorCode::kNotInVocabulary);
  EXPECT_EQ(CodeOf([&] { Transition(s, Id("susu:add"), store); }), ErrorCode::kNotInVocabulary);
  EXPECT_EQ(s.state, DialogState::kMainMenu);
  EXPECT_EQ(s.transcript.size(), turns);
}

TEST(DialogTest, SearchCallUpdateDelete) {
  ContactStore store;
  store.Add({"Hawa", "123456789"});
  auto s = NewSession();
  auto say = [&](std::string_view m) { return Transition(s, Id(m, s.language), store); };

  say("maninka:wake");
  say("search");
  auto r = say("mamadou");
  EXPECT_EQ(r.entered, DialogState::kSearchAwaitName);
  r = say("hawa");
  EXPECT_EQ(r.entered, DialogState::kFoundMenu);
  EXPECT_NE(r.prompt.find("123456789"), std::string::npos);
  r = say("call");
  EXPECT_EQ(r.entered, DialogState::kCallCommit);
  EXPECT_EQ(*r.side_effect, (SideEffect{SideEffectType::kCall, "Hawa", "123456789"}));
  EXPECT_EQ(s.state, DialogState::kIdle);

  say("maninka:wake");
  say("search");
  say("hawa");
  say("update");
  for (char d : std::string("98765432")) {
    EXPECT_FALSE(say(std::string("digit:") + d).side_effect);
  }
  r = say("digit:1");
  EXPECT_EQ(r.entered, DialogState::kUpdateAwaitDigits);
  EXPECT_EQ(ActiveVocabulary(s).size(), 2u);
  r = say("no");
  EXPECT_EQ(r.entered, DialogState::kFoundMenu);
  EXPECT_EQ(store.Find("Hawa").phone, "123456789");
  say("update");
  for (char d : std::string("987654321")) say(std::string("digit:") + d);
  r = say("yes");
  EXPECT_EQ(r.entered, DialogState::kMutateCommit);
  EXPECT_EQ(*r.side_effect, (SideEffect{SideEffectType::kUpdateContact, "Hawa", "987654321"}));
  EXPECT_EQ(store.Find("Hawa").phone, "987654321");

  say("maninka:wake");
  say("search");
  say("hawa");
  r = say("delete");
  EXPECT_EQ(r.entered, DialogState::kFoundMenu);
  EXPECT_FALSE(r.side_effect);
  r = say("no");
  EXPECT_EQ(r.entered, DialogState::kFoundMenu);
  EXPECT_TRUE(store.Contains("Hawa"));
  say("delete");
  r = say("yes");
  EXPECT_EQ(r.entered, DialogState::kMutateCommit);
  EXPECT_EQ(r.side_effect->type, SideEffectType::kDeleteContact);
  EXPECT_FALSE(store.Contains("Hawa"));

  say("maninka:wake");
  say("search");
  EXPECT_EQ(say("hawa").entered, DialogState::kSearchAwaitName);
}

TEST(DialogTest, LowConfidenceNameIsConfirmed) {
  ContactStore store;
  auto s = NewSession(3);
  Transition(s, Id("francais:wake"), store);
  Transition(s, Id("francais:add"), store);
  auto r = Transition(s, Id("francais:mom"), store, 0.6);
  EXPECT_EQ(r.entered, DialogState::kAddConfirmName);
  EXPECT_EQ(r.prompt, "Did you say Mom?");
  r = Transition(s, Id("francais:no"), store);
  EXPECT_EQ(r.entered, DialogState::kAddAwaitName);
  Transition(s, Id("francais:mom"), store, 0.6);
  r = Transition(s, Id("francais:yes"), store);
  EXPECT_EQ(r.entered, DialogState::kAddAwaitDigits);
  for (int d = 0; d < 3; ++d) Transition(s, ClassId(Category::kDigit, Language::kFrancais, d), store);
  EXPECT_EQ(s.state, DialogState::kAddConfirm);
  r = Transition(s, Id("francais:no"), store);
  EXPECT_EQ(r.entered, DialogState::kAddAwaitName);
  EXPECT_TRUE(store.List().empty());
}

TEST(DialogTest, ExistingNameIsNotAddedTwice) {
  ContactStore store(2);
  store.Add({"Fanta", "12"});
  auto s = NewSession(2);
  Transition(s, Id("susu:wake"), store);
  Transition(s, Id("susu:add"), store);
  auto r = Transition(s, Id("fanta"), store);
  EXPECT_EQ(r.entered, DialogState::kAddAwaitName);
  EXPECT_EQ(store.List().size(), 1u);
}

// Exhaustive exploration of the dialog graph with two-digit numbers.

std::string Key(const DialogSession& s) {
  std::string k = std::to_string(static_cast<int>(s.state)) + "|";
  k += s.language ? std::string(LanguageName(*s.language)) : "-";
  k += "|" + s.draft_name.value_or("-") + "|" + s.digits + "|";
  k += s.found ? s.found->name + ":" + s.found->phone : "-";
  k += "|" + std::to_string(static_cast<int>(s.pending));
  return k;
}

struct Explored {
  std::vector<DialogSession> sessions;
  std::set<std::pair<int, int>> edges;  // state -> entered state, plus commit -> Idle
  std::vector<std::pair<int, SideEffect>> effects;
};

void SeedStore(ContactStore& store) {
  store.Add({"Fatoumata", "12"});
  store.Add({"Dad", "34"});
}

Explored Explore() {
  Explored out;
  std::set<std::string> seen;
  std::queue<DialogSession> frontier;
  auto start = NewSession(2);
  seen.insert(Key(start));
  frontier.push(start);
  while (!frontier.empty()) {
    DialogSession s = frontier.front();
    frontier.pop();
    out.sessions.push_back(s);
    for (int id : ActiveVocabulary(s)) {
      for (double confidence : {1.0, 0.5}) {
        ContactStore store(2);
        SeedStore(store);
        DialogSession next = s;
        next.transcript.clear();
        auto r = Transition(next, id, store, confidence);
        out.edges.insert({static_cast<int>(s.state), static_cast<int>(r.entered)});
        if (IsFinal(r.entered)) out.edges.insert({static_cast<int>(r.entered), 0});
        if (r.side_effect) out.effects.push_back({static_cast<int>(r.entered), *r.side_effect});
        if (seen.insert(Key(next)).second) frontier.push(next);
      }
    }
  }
  return out;
}

TEST(DialogGraphTest, ReachabilityAndNoDeadEnds) {
  const auto ex = Explore();
  std::map<int, std::set<int>> fwd, back;
  for (auto [a, b] : ex.edges) {
    fwd[a].insert(b);
    back[b].insert(a);
  }
  auto closure = [](std::map<int, std::set<int>>& g, int from) {
    std::set<int> seen{from};
    std::vector<int> stack{from};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g[v]) {
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    return seen;
  };
  std::set<int> all;
  for (int i = 0; i < kNumStates; ++i) all.insert(i);
  EXPECT_EQ(closure(fwd, 0), all);
  EXPECT_EQ(closure(back, 0), all);
}

TEST(DialogGraphTest, VocabularySoundnessExhaustive) {
  auto ex = Explore();
  // Final states are never resting states; construct them directly.
  for (auto final_state : {DialogState::kAddCommit, DialogState::kCallCommit,
                           DialogState::kMutateCommit}) {
    auto s = NewSession(2);
    s.state = final_state;
    s.language = Language::kSusu;
    ex.sessions.push_back(s);
  }
  std::set<int> states_covered;
  size_t pairs = 0;
  for (const auto& s : ex.sessions) {
    states_covered.insert(static_cast<int>(s.state));
    const auto active = ActiveVocabulary(s);
    if (IsFinal(s.state)) { EXPECT_TRUE(active.empty()); }
    for (int id = 0; id < kNumClasses; ++id) {
      ContactStore store(2);
      SeedStore(store);
      DialogSession copy = s;
      bool accepted = true;
      try {
        Transition(copy, id, store);
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::kNotInVocabulary);
        accepted = false;
      }
      ASSERT_EQ(accepted, active.count(id) == 1) << Key(s) << " class " << id;
      ++pairs;
    }
  }
  EXPECT_EQ(states_covered.size(), 12u);
  EXPECT_GE(pairs, 12u * 105u);
}

TEST(DialogGraphTest, LanguageLockAndSideEffectStates) {
  const auto ex = Explore();
  for (const auto& s : ex.sessions) {
    if (s.state == DialogState::kIdle) {
      EXPECT_FALSE(s.language.has_value());
      continue;
    }
    ASSERT_TRUE(s.language.has_value());
    for (int id : ActiveVocabulary(s)) {
      const auto& c = ClassById(id);
      if (c.category != Category::kName) { EXPECT_EQ(c.language, *s.language); }
    }
    EXPECT_LE(s.digits.size(), s.number_length);
  }
  ASSERT_FALSE(ex.effects.empty());
  for (const auto& [state, effect] : ex.effects) {
    EXPECT_TRUE(state == 6 || state == 9 || state == 11);
  }
}

TEST(DialogTest, ReplayReproducesStore) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    ContactStore store(3);
    auto s = NewSession(3);
    std::vector<std::pair<int, double>> said;
    for (int step = 0; step < 200; ++step) {
      const auto active = ActiveVocabulary(s);
      auto it = active.begin();
      std::advance(it, static_cast<long>(rng.Below(active.size())));
      const double conf = rng.Uniform() < 0.2 ? 0.6 : 0.9;
      Transition(s, *it, store, conf);
      said.push_back({*it, conf});
    }
    ContactStore replay_store(3);
    auto replay = NewSession(3);
    for (auto [id, conf] : said) Transition(replay, id, replay_store, conf);
    EXPECT_EQ(replay_store.List(), store.List());
    EXPECT_EQ(Key(replay), Key(s));
  }
}

TEST(ClassifyTest, MaskedSoftmaxMatchesSubsetSoftmax) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> logits(105);
    for (double& l : logits) l = rng.Uniform(-10, 10);
    std::set<int> active;
    const size_t n = 1 + rng.Below(30);
    while (active.size() < n) active.insert(static_cast<int>(rng.Below(105)));
    const auto p = MaskedSoftmax(logits, active);
    double z = 0.0;
    for (int id : active) z += std::exp(logits[static_cast<size_t>(id)]);
    for (int id = 0; id < 105; ++id) {
      const double expected = active.count(id) ? std::exp(logits[static_cast<size_t>(id)]) / z : 0.0;
      EXPECT_NEAR(p[static_cast<size_t>(id)], expected, 1e-12);
    }
  }
}

TEST(ClassifyTest, DecisionsFollowTheMask) {
  ContactStore store;
  auto s = NewSession();
  std::vector<double> logits(105, 0.0);
  logits[50] = 30.0;  // out of set everywhere below
  logits[2] = 3.0;
  auto c = ClassifyLogits(s, logits);
  EXPECT_EQ(c.class_id, 2);
  EXPECT_FALSE(c.rejected);

  // A single-class set always yields confidence 1.
  s.state = DialogState::kFoundMenu;
  s.language = Language::kPular;
  s.found = Contact{"Hawa", "123456789"};
  std::vector<double> flat(105, 0.0);
  c = ClassifyLogits(s, flat);
  EXPECT_NEAR(c.confidence, 0.25, 1e-15);
  EXPECT_TRUE(c.rejected);
  EXPECT_EQ(MaskedSoftmax(flat, {17})[17], 1.0);

  s.state = DialogState::kCallCommit;
  EXPECT_EQ(CodeOf([&] { ClassifyLogits(s, flat); }), ErrorCode::kEmptyVocabulary);
}

TEST(ClassifyTest, RunsTheAsrModel) {
  auto m = models::Model::Build(models::ModelConfig::Asr(8), 3);
  Rng rng(23);
  dsp::FeatureSequence fs;
  fs.frames = 20;
  fs.dims = 8;
  for (int i = 0; i < 160; ++i) fs.data.push_back(static_cast<float>(rng.Normal()));
  auto s = NewSession();
  const auto c = ClassifyInState(s, fs, m, 0.0);
  EXPECT_TRUE(ActiveVocabulary(s).count(c.class_id));
  EXPECT_EQ(c, ClassifyLogits(s, m.Logits(fs), 0.0));
}

TEST(ContactStoreTest, CrudAndErrors) {
  ContactStore store;
  store.Add({"Sekou", "111222333"});
  EXPECT_EQ(store.Find("Sekou").phone, "111222333");
  EXPECT_EQ(CodeOf([&] { store.Add({"Sekou", "111222333"}); }), ErrorCode::kDuplicateName);
  EXPECT_EQ(CodeOf([&] { store.Add({"Hawa", "12345678"}); }), ErrorCode::kInvalidPhone);
  EXPECT_EQ(CodeOf([&] { store.Add({"Hawa", "12345678x"}); }), ErrorCode::kInvalidPhone);
  EXPECT_EQ(CodeOf([&] { store.Update("Hawa", "123456789"); }), ErrorCode::kNotFound);
  store.Add({"Adama", "999999999"});
  const auto list = store.List();
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0].name, "Adama");
  store.Delete("Sekou");
  EXPECT_EQ(CodeOf([&] { store.Find("Sekou"); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { store.Delete("Sekou"); }), ErrorCode::kNotFound);
}

TEST(ContactStoreTest, PersistsAcrossReload) {
  const auto path = TempPath("contacts.json");
  {
    ContactStore store(path);
    store.Add({"Moussa", "123456789"});
    store.Update("Moussa", "555555555");
  }
  ContactStore reloaded(path);
  EXPECT_EQ(reloaded.Find("Moussa").phone, "555555555");
  const auto back = DecodeContacts(EncodeContacts(reloaded.List()));
  EXPECT_EQ(back, reloaded.List());
  EXPECT_EQ(CodeOf([] { DecodeContacts(R"({"version": 2, "contacts": []})"); }),
            ErrorCode::kSchemaVersionMismatch);
}

TEST(ContactStoreTest, ConcurrentWritersSerialize) {
  const auto path = TempPath("concurrent.json");
  ContactStore store(path, 1);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&store, t] {
      for (int i = 0; i < 25; ++i) {
        store.Add({"c" + std::to_string(t) + "_" + std::to_string(i), std::to_string(i % 10)});
        store.List();
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(store.List().size(), 200u);
  EXPECT_EQ(ContactStore(path, 1).List(), store.List());
}

}  // namespace
}  // namespace nlv::assistant
