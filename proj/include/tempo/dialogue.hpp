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

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tempo/interval.hpp"
#include "tempo/util.hpp"

namespace tempo {

/// Markers reserved for the training-sequence format; they may not occur in
/// speaker identifiers or utterances.
inline constexpr std::array<std::string_view, 3> kReservedMarkers = {"<SPK>", "<TIME>", "<UTT>"};

inline bool contains_reserved_marker(std::string_view text) {
  for (std::string_view m : kReservedMarkers)
    if (text.find(m) != std::string_view::npos) return true;
  return false;
}

struct Turn {
  std::string speaker;
  TimeInterval interval_before;  // elapsed since the previous turn; 0 on the first turn
  std::string utterance;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Dialogue {
  std::string id;
  std::optional<std::string> event_id;
  std::vector<Turn> turns;
  // Instant counterpart of the final delayed response, populated only by the
  // benchmark-generation stage.
  std::optional<std::string> instant_variant;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

enum class EventSource { mc_taco, atomic, other };

inline std::string_view to_string(EventSource s) {
  switch (s) {
    case EventSource::mc_taco: return "mc-taco";
    case EventSource::atomic: return "atomic";
    case EventSource::other: return "other";
  }
  return "other";
}

inline EventSource event_source_from_string(std::string_view s) {
  if (s == "mc-taco" || s == "mctaco") return EventSource::mc_taco;
  if (s == "atomic") return EventSource::atomic;
  if (s == "other") return EventSource::other;
  throw std::invalid_argument("unknown event source: '" + std::string(s) + "'");
}

/// Narrative + key event + typical duration; the seed of every synthesized
/// dialogue. duration is expected to sit in [1, 1440] minutes post-filter.
struct EventRecord {
  std::string id;
  EventSource source = EventSource::other;
  std::string statement;
  std::string key_event;
  std::string narrative;
  TimeInterval duration;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct EventTriplet {
  std::string head;
  std::string relation;  // relation-category code, e.g. "xEffect"
  std::string tail;

  friend bool operator==(const EventTriplet&, const EventTriplet&) = default;
};

/// Turn prefix handed to a predictor: everything before the target turn, plus
/// the speaker expected to produce it.
struct DialogueContext {
  std::vector<Turn> turns;
  std::string target_speaker;
};

enum class DialogueViolation {
  too_few_turns,
  non_alternating,
  empty_utterance,
  reserved_token,
  first_turn_delay,
};

inline std::string_view to_string(DialogueViolation v) {
  switch (v) {
    case DialogueViolation::too_few_turns: return "too_few_turns";
    case DialogueViolation::non_alternating: return "non_alternating";
    case DialogueViolation::empty_utterance: return "empty_utterance";
    case DialogueViolation::reserved_token: return "reserved_token";
    case DialogueViolation::first_turn_delay: return "first_turn_delay";
  }
  return "unknown";
}

struct ValidationResult {
  std::vector<DialogueViolation> violations;  // deduplicated, in enum order
  bool ok() const { return violations.empty(); }
};

/// Structural validation: >= 2 turns, strict two-speaker alternation,
/// non-empty utterances, no reserved markers, zero interval on the first turn.
inline ValidationResult validate_dialogue(const Dialogue& d) {
  bool too_few = false, non_alt = false, empty_utt = false, reserved = false, first_delay = false;

  if (d.turns.size() < 2) too_few = true;
  if (!d.turns.empty() && d.turns.front().interval_before.minutes() != 0) first_delay = true;

  for (const Turn& t : d.turns) {
    if (trim(t.utterance).empty()) empty_utt = true;
    if (contains_reserved_marker(t.utterance) || contains_reserved_marker(t.speaker))
      reserved = true;
  }

  if (d.turns.size() >= 2) {
    const std::string& a = d.turns[0].speaker;
    const std::string& b = d.turns[1].speaker;
    if (a == b) {
      non_alt = true;
    } else {
      for (std::size_t i = 0; i < d.turns.size(); ++i) {
        if (d.turns[i].speaker != (i % 2 == 0 ? a : b)) {
          non_alt = true;
          break;
        }
      }
    }
  }

  ValidationResult r;
  if (too_few) r.violations.push_back(DialogueViolation::too_few_turns);
  if (non_alt) r.violations.push_back(DialogueViolation::non_alternating);
  if (empty_utt) r.violations.push_back(DialogueViolation::empty_utterance);
  if (reserved) r.violations.push_back(DialogueViolation::reserved_token);
  if (first_delay) r.violations.push_back(DialogueViolation::first_turn_delay);
  return r;
}

/// Context for predicting turn t (1-based, 2 <= t <= turns): the first t-1
/// turns plus the speaker of turn t.
inline DialogueContext context_at(const Dialogue& d, std::size_t t) {
  if (t < 2 || t > d.turns.size())
    throw std::out_of_range("context_at: turn index " + std::to_string(t) + " out of range");
  DialogueContext ctx;
  ctx.turns.assign(d.turns.begin(), d.turns.begin() + static_cast<std::ptrdiff_t>(t - 1));
  ctx.target_speaker = d.turns[t - 1].speaker;
  return ctx;
}

}  // namespace tempo
