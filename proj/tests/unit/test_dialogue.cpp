// Copyright 2026 The Tempo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tempo/dialogue.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "tempo/demos.hpp"
#include "tempo/synthesis.hpp"

using namespace tempo;

namespace {

Dialogue two_speaker_dialogue(std::size_t turns) {
  Dialogue d;
  d.id = "d1";
  for (std::size_t i = 0; i < turns; ++i)
    d.turns.push_back({i % 2 == 0 ? "A" : "B", TimeInterval(0), "utt " + std::to_string(i)});
  return d;
}

bool has_violation(const ValidationResult& r, DialogueViolation v) {
  for (DialogueViolation code : r.violations)
    if (code == v) return true;
  return false;
}

}  // namespace

TEST_CASE("validate_dialogue accepts a well-formed dialogue") {
  CHECK(validate_dialogue(two_speaker_dialogue(5)).ok());
  CHECK(validate_dialogue(two_speaker_dialogue(2)).ok());
}

TEST_CASE("validate_dialogue rejects non-alternation") {
  Dialogue d;
  d.turns = {{"A", TimeInterval(0), "x"}, {"A", TimeInterval(0), "y"}, {"B", TimeInterval(0), "z"}};
  const auto r = validate_dialogue(d);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0] == DialogueViolation::non_alternating);

  Dialogue three;  // a third speaker also breaks alternation
  three.turns = {{"A", TimeInterval(0), "x"}, {"B", TimeInterval(0), "y"},
                 {"C", TimeInterval(0), "z"}};
  CHECK(has_violation(validate_dialogue(three), DialogueViolation::non_alternating));
}

TEST_CASE("validate_dialogue rejects a delayed first turn") {
  Dialogue d = two_speaker_dialogue(4);
  d.turns.front().interval_before = TimeInterval(20);
  const auto r = validate_dialogue(d);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0] == DialogueViolation::first_turn_delay);
}

TEST_CASE("validate_dialogue rejects empty utterances and reserved markers") {
  Dialogue d = two_speaker_dialogue(4);
  d.turns[2].utterance = "   ";
  CHECK(has_violation(validate_dialogue(d), DialogueViolation::empty_utterance));

  Dialogue m = two_speaker_dialogue(4);
  m.turns[1].utterance = "sneaky <TIME> token";
  CHECK(has_violation(validate_dialogue(m), DialogueViolation::reserved_token));

  Dialogue s = two_speaker_dialogue(4);
  s.turns[0].speaker = "<SPK>A";
  s.turns[2].speaker = "<SPK>A";
  CHECK(has_violation(validate_dialogue(s), DialogueViolation::reserved_token));
}

TEST_CASE("validate_dialogue rejects dialogues with fewer than two turns") {
  Dialogue d;
  d.turns = {{"A", TimeInterval(0), "alone"}};
  CHECK(has_violation(validate_dialogue(d), DialogueViolation::too_few_turns));
  CHECK(has_violation(validate_dialogue(Dialogue{}), DialogueViolation::too_few_turns));
}

TEST_CASE("all six demo dialogues validate after parsing") {
  for (const std::string& demo : synth::builtin_demo_pool()) {
    const auto candidate = synth::parse_generated_dialogue(demo, "demo");
    REQUIRE(candidate.parsed.has_value());
    CHECK(validate_dialogue(*candidate.parsed).ok());
  }
}

TEST_CASE("context_at slices the prefix and names the target speaker") {
  const Dialogue d = two_speaker_dialogue(5);

  const DialogueContext full = context_at(d, 5);
  REQUIRE(full.turns.size() == 4);
  CHECK(full.turns.back().utterance == "utt 3");
  CHECK(full.target_speaker == d.turns[4].speaker);

  const DialogueContext minimal = context_at(two_speaker_dialogue(2), 2);
  REQUIRE(minimal.turns.size() == 1);
  CHECK(minimal.target_speaker == "B");
}

TEST_CASE("context_at rejects out-of-range turn indices") {
  const Dialogue d = two_speaker_dialogue(2);
  CHECK_THROWS_AS(context_at(d, 3), std::out_of_range);
  CHECK_THROWS_AS(context_at(d, 1), std::out_of_range);
  CHECK_THROWS_AS(context_at(d, 0), std::out_of_range);
}

TEST_CASE("target speaker differs from the last context speaker") {
  const Dialogue d = two_speaker_dialogue(6);
  for (std::size_t t = 2; t <= d.turns.size(); ++t) {
    const DialogueContext ctx = context_at(d, t);
    CHECK(ctx.target_speaker != ctx.turns.back().speaker);
  }
}
