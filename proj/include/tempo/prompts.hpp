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

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tempo/util.hpp"

namespace tempo::llm {

/// A prompt body with `{slot}` placeholders. Slot names start with a letter
/// and may contain letters, digits, spaces, '_' and '-'; anything else inside
/// braces (e.g. "{A,B}") is literal text.
struct PromptTemplate {
  std::string name;
  std::string body;
  std::vector<std::string> slots;  // required, deduplicated, in order of first appearance
};

namespace detail {

inline bool valid_slot_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != ' ' && c != '_' && c != '-')
      return false;
  }
  return true;
}

}  // namespace detail

inline PromptTemplate make_template(std::string name, std::string body) {
  PromptTemplate t;
  t.name = std::move(name);
  t.body = std::move(body);
  std::size_t pos = 0;
  while ((pos = t.body.find('{', pos)) != std::string::npos) {
    const std::size_t close = t.body.find('}', pos + 1);
    if (close == std::string::npos) break;
    const std::string_view inner =
        std::string_view(t.body).substr(pos + 1, close - pos - 1);
    if (detail::valid_slot_name(inner)) {
      bool seen = false;
      for (const std::string& s : t.slots)
        if (s == inner) {
          seen = true;
          break;
        }
      if (!seen) t.slots.emplace_back(inner);
      pos = close + 1;
    } else {
      pos = pos + 1;
    }
  }
  return t;
}

class PromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Literal single-pass substitution; substituted values are never rescanned.
/// Every slot must be bound and every binding must name a slot.
inline std::string render(const PromptTemplate& t,
                          const std::map<std::string, std::string>& bindings) {
  for (const std::string& slot : t.slots)
    if (!bindings.contains(slot))
      throw PromptError("render('" + t.name + "'): missing slot '" + slot + "'");
  for (const auto& [key, value] : bindings) {
    bool known = false;
    for (const std::string& slot : t.slots)
      if (slot == key) {
        known = true;
        break;
      }
    if (!known) throw PromptError("render('" + t.name + "'): unknown slot '" + key + "'");
  }

  std::string out;
  out.reserve(t.body.size());
  std::size_t pos = 0;
  while (pos < t.body.size()) {
    const std::size_t open = t.body.find('{', pos);
    if (open == std::string::npos) {
      out.append(t.body, pos, std::string::npos);
      break;
    }
    out.append(t.body, pos, open - pos);
    const std::size_t close = t.body.find('}', open + 1);
    const std::string_view inner = close == std::string::npos
                                       ? std::string_view{}
                                       : std::string_view(t.body).substr(open + 1, close - open - 1);
    if (close != std::string::npos && detail::valid_slot_name(inner) &&
        bindings.contains(std::string(inner))) {
      out += bindings.at(std::string(inner));
      pos = close + 1;
    } else {
      out += '{';
      pos = open + 1;
    }
  }
  return out;
}

namespace builtin_prompts {

inline constexpr std::string_view kAtomicDurationEstimation =
    R"TPL(You are given a statement about common events in our daily lives. Your task is to estimate the typical duration of the key event in the form of (quantity of time + unit) (e.g., seconds, minutes, hours, days, weeks, months, years, decades, or centuries) based on the temporal common sense of average humans.

[Examples]
Statement: After dinner, he went to look for Max one last time before he had to take a bath and go to bed.
Key event: having dinner
Duration: 1 hour

Statement: Jennie and Bryan boarded a 6:00 A.M. flight from Seoul to Los Angeles International Airport.
Key event: flight from Seoul to Los Angeles
Duration: 12 hours

Event: Carl Laemmle, head of Universal Studios, gave Einstein a tour of his studio and introduced him to Chaplin.
Key event: tour of his studio
Duration: 45 minutes
[End of Examples]

Statement: {statement})TPL";

inline constexpr std::string_view kMcTacoEventDescription =
    R"TPL(You are given an event and a question and answer for the duration that denotes how much time is needed for the event to happen.
Write a story regarding the event in one sentence.

Sentence: {sentence}
Question: {question}
Answer: {duration})TPL";

inline constexpr std::string_view kAtomicEventDescription =
    R"TPL(You are given a statement, the key event and the duration that denotes how much time is needed for the event to happen.
Write a story regarding the event in one sentence.

Statement: {statement}
Key event: {event}
Duration: {duration})TPL";

inline constexpr std::string_view kDialogueGeneration =
    R"TPL(You are given an event narrative and the duration. Your task is to create an instant message dialogue between two speakers. The following conditions MUST be met.

[Instructions]
1. Speaker {A,B} is in the middle of the event now, while speaker {B,A} is physically apart from.
2. Do not directly mention the duration in the dialogue.
3. After {B,A}'s last turn, add "[{duration} later]", where duration is the amount of time passed in real world.
4-1. Generate {A,B}'s last message which is timely as if {A,B} spent time to finish the event.
4-2. In contrast, generate {A,B}'s last message as if {A,B} is responding instantaneously right before the event to happen.
Make sure that the timely response and the instantaneous response are time-situationally different.
[End of Instructions]

[Example]
{dialogue example}
[End of Example]

Narrative: {event description}
Duration: {duration})TPL";

inline constexpr std::string_view kTimingPredictionHeader =
    R"TPL(You are given a conversation between two speakers.
Your task is to estimate a time interval needed until the next response, considering the duration of the event in the conversation ranging from 0 minutes to 24 hours (1 day).
If the next response is expected to be immediate, you will output "0 minutes".
Otherwise, you will output a digit and a unit of time (e.g., 5 minutes, 2 hours).
Just output the time interval without any other text.)TPL";

inline constexpr std::string_view kTimingPredictionTail =
    R"TPL(### Dialogue context ###
{context}

Answer format: n (0<=n<=1440) minutes
The estimated time interval is:)TPL";

inline constexpr std::string_view kResponseGenerationHeader =
    R"TPL(You are given a conversation between two speakers and the elapsed time since the last utterance.
Your task is to generate the next response that aligns well with the temporal context represented by the time interval in parentheses.
Just output the response without any other text.)TPL";

inline constexpr std::string_view kResponseGenerationTail =
    R"TPL(### Dialogue context ###
{context}

### Next response ###
{target speaker}: ({time interval} later))TPL";

inline constexpr std::string_view kUserSimulator =
    R"TPL(You are a user simulator (user) engaging in an event-driven dialogue with a dialogue agent (agent).
Given the dialogue context, your task is to proceed the conversation by one turn under the following assumptions:
1. agent responds after the elapsed time specified in the parentheses from the previous user utterance. If the delay is "0 minutes", agent is assumed to respond immediately.
2. user is assumed to respond to agent without any delay.

Conversation:
{context})TPL";

inline constexpr std::string_view kGevalTurn =
    R"TPL(You will be given a conversation between two individuals via messaging, along with the elapsed time since the last utterance. You will then be given on potential response for the next turn.
Your task is to rate the response on one metric. Please make sure you read and understand these instructions carefully.

Evaluation Criteria:
{metric} (1-5): {criteria}

Evaluation Steps:
{steps}

Conversation:
{conversation}

Elapsed time: {elapsed time}

Response:
{response}

Score:)TPL";

inline constexpr std::string_view kGevalDialogue =
    R"TPL(You will be given a conversation between a dialogue agent and a user.
Throughout the conversation, the agent proactively determines the delay of its response to the user's previous message, simulating delayed responses due to event experiences that take certain time to process.
At each agent's turn, the delay is provided in the parentheses followed by the message.
Your task is to rate the dialogue agent on one metric. Please make sure you read and understand these instructions carefully.

Evaluation Criteria:
{metric} (1-5): {criteria}

Evaluation Steps:
{steps}

Conversation:
{conversation}

Score:)TPL";

}  // namespace builtin_prompts

/// The fixed template set. Bodies are embedded so the toolkit runs with no
/// asset lookup; the files under assets/prompts/ mirror them byte for byte and
/// are pinned by golden tests.
class PromptRegistry {
 public:
  static const PromptRegistry& builtin() {
    static const PromptRegistry registry = make_builtin();
    return registry;
  }

  const PromptTemplate& get(std::string_view name) const {
    for (const PromptTemplate& t : templates_)
      if (t.name == name) return t;
    throw PromptError("unknown prompt template '" + std::string(name) + "'");
  }

  bool contains(std::string_view name) const {
    for (const PromptTemplate& t : templates_)
      if (t.name == name) return true;
    return false;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(templates_.size());
    for (const PromptTemplate& t : templates_) out.push_back(t.name);
    return out;
  }

  const std::vector<PromptTemplate>& all() const { return templates_; }

  /// name -> FNV-1a hash of the body, recorded in run manifests.
  std::map<std::string, std::string> body_hashes() const {
    std::map<std::string, std::string> out;
    for (const PromptTemplate& t : templates_) out[t.name] = fnv1a_hex(t.body);
    return out;
  }

 private:
  static PromptRegistry make_builtin() {
    namespace bp = builtin_prompts;
    auto with_examples = [](std::string_view header, std::string_view tail) {
      return std::string(header) + "\n\n{examples}\n\n" + std::string(tail);
    };
    auto zero_shot = [](std::string_view header, std::string_view tail) {
      return std::string(header) + "\n\n" + std::string(tail);
    };

    PromptRegistry r;
    auto add = [&r](std::string name, std::string body) {
      r.templates_.push_back(make_template(std::move(name), std::move(body)));
    };
    add("atomic-duration-estimation", std::string(bp::kAtomicDurationEstimation));
    add("mc-taco-event-description", std::string(bp::kMcTacoEventDescription));
    add("atomic-event-description", std::string(bp::kAtomicEventDescription));
    add("dialogue-generation", std::string(bp::kDialogueGeneration));
    add("timing-prediction-zero-shot",
        zero_shot(bp::kTimingPredictionHeader, bp::kTimingPredictionTail));
    add("timing-prediction-few-shot",
        with_examples(bp::kTimingPredictionHeader, bp::kTimingPredictionTail));
    add("timing-prediction-cot",
        with_examples(bp::kTimingPredictionHeader, bp::kTimingPredictionTail));
    add("response-generation-zero-shot",
        zero_shot(bp::kResponseGenerationHeader, bp::kResponseGenerationTail));
    add("response-generation-few-shot",
        with_examples(bp::kResponseGenerationHeader, bp::kResponseGenerationTail));
    add("response-generation-cot",
        with_examples(bp::kResponseGenerationHeader, bp::kResponseGenerationTail));
    add("user-simulator", std::string(bp::kUserSimulator));
    add("geval-turn", std::string(bp::kGevalTurn));
    add("geval-dialogue", std::string(bp::kGevalDialogue));
    return r;
  }

  std::vector<PromptTemplate> templates_;
};

}  // namespace tempo::llm
