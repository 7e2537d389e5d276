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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tempo/dialogue.hpp"
#include "tempo/duration.hpp"

namespace tempo {

/// Training-export settings. lambda is the weight on the timing loss in the
/// multi-task objective; the exporter only records it in manifests, it never
/// consumes it numerically. When context_tau_zero is set (the training
/// convention), every interval except the final turn's renders as "0 minutes".
struct ExportConfig {
  double lambda = 1.0;
  bool context_tau_zero = true;
};

enum class SpanKind { time, response };

inline std::string_view to_string(SpanKind k) {
  return k == SpanKind::time ? "time" : "response";
}

/// Half-open byte range into an exported sequence. time spans cover exactly
/// the rendered interval text, response spans exactly the utterance, for every
/// turn index >= 2 (1-based).
struct LossSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  SpanKind kind = SpanKind::time;
  std::size_t turn_index = 0;

  friend bool operator==(const LossSpan&, const LossSpan&) = default;
};

struct TrainingSequence {
  std::string text;
  std::vector<LossSpan> spans;
};

class TrainingFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Serializes a validated dialogue as
///   <SPK> {speaker} <TIME> {interval} <UTT> {utterance} ...
/// with single-space separators, one segment per turn, and emits loss spans
/// for every turn from the second onward. Throws std::invalid_argument when
/// the dialogue fails validation.
inline TrainingSequence to_training_sequence(const Dialogue& d, const ExportConfig& cfg = {}) {
  const ValidationResult v = validate_dialogue(d);
  if (!v.ok()) {
    std::string msg = "to_training_sequence: invalid dialogue:";
    for (DialogueViolation code : v.violations) msg += " " + std::string(to_string(code));
    throw std::invalid_argument(msg);
  }

  TrainingSequence out;
  const std::size_t n = d.turns.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Turn& turn = d.turns[i];
    const bool final_turn = (i + 1 == n);
    const std::string tau =
        (cfg.context_tau_zero && !final_turn) ? "0 minutes" : turn.interval_before.canonical();

    if (i > 0) out.text += ' ';
    out.text += "<SPK> ";
    out.text += turn.speaker;
    out.text += " <TIME> ";
    const std::size_t tau_begin = out.text.size();
    out.text += tau;
    const std::size_t tau_end = out.text.size();
    out.text += " <UTT> ";
    const std::size_t utt_begin = out.text.size();
    out.text += turn.utterance;
    const std::size_t utt_end = out.text.size();

    if (i >= 1) {
      out.spans.push_back({tau_begin, tau_end, SpanKind::time, i + 1});
      out.spans.push_back({utt_begin, utt_end, SpanKind::response, i + 1});
    }
  }
  return out;
}

namespace detail {

// Consumes "<marker> " at pos or fails.
inline void expect_marker(std::string_view text, std::size_t& pos, std::string_view marker) {
  if (text.compare(pos, marker.size(), marker) != 0)
    throw TrainingFormatError("from_training_sequence: expected " + std::string(marker) +
                              " at byte " + std::to_string(pos));
  pos += marker.size();
  if (pos >= text.size() || text[pos] != ' ')
    throw TrainingFormatError("from_training_sequence: missing separator after " +
                              std::string(marker));
  ++pos;
}

// Field runs until " <marker>"; the single separator space is consumed.
inline std::string_view take_field_until(std::string_view text, std::size_t& pos,
                                         std::string_view next_marker) {
  const std::size_t idx = text.find(next_marker, pos);
  if (idx == std::string_view::npos || idx == 0 || text[idx - 1] != ' ' || idx - 1 < pos)
    throw TrainingFormatError("from_training_sequence: expected " + std::string(next_marker) +
                              " after byte " + std::to_string(pos));
  std::string_view field = text.substr(pos, idx - 1 - pos);
  pos = idx;
  return field;
}

}  // namespace detail

/// Exact inverse of to_training_sequence on its image: parses the
/// <SPK>/<TIME>/<UTT> markers left to right. The returned dialogue has an
/// empty id and no event reference. Throws TrainingFormatError on malformed
/// marker order or an unparseable interval field.
inline Dialogue from_training_sequence(std::string_view text) {
  Dialogue d;
  if (text.empty()) throw TrainingFormatError("from_training_sequence: empty input");
  std::size_t pos = 0;
  while (pos < text.size()) {
    detail::expect_marker(text, pos, "<SPK>");
    Turn turn;
    turn.speaker = std::string(detail::take_field_until(text, pos, "<TIME>"));
    detail::expect_marker(text, pos, "<TIME>");
    const std::string_view tau_text = detail::take_field_until(text, pos, "<UTT>");
    detail::expect_marker(text, pos, "<UTT>");

    const std::size_t next = text.find("<SPK>", pos);
    std::string_view utterance;
    if (next == std::string_view::npos) {
      utterance = text.substr(pos);
      pos = text.size();
    } else {
      if (next == 0 || text[next - 1] != ' ' || next - 1 < pos)
        throw TrainingFormatError("from_training_sequence: missing separator before <SPK>");
      utterance = text.substr(pos, next - 1 - pos);
      pos = next;
    }
    turn.utterance = std::string(utterance);

    if (auto v = try_parse_duration(tau_text)) {
      turn.interval_before = *v;
    } else {
      throw TrainingFormatError("from_training_sequence: unparseable interval '" +
                                std::string(tau_text) + "'");
    }
    d.turns.push_back(std::move(turn));
  }
  return d;
}

}  // namespace tempo
