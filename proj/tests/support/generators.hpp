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

#include <string>
#include <vector>

#include "tempo/dialogue.hpp"
#include "tempo/metrics.hpp"
#include "tempo/util.hpp"

namespace tempo::test {

inline const std::vector<std::string>& word_pool() {
  // Deliberately awkward surface forms: punctuation, colons, brackets,
  // parentheses, digits, multibyte UTF-8. No reserved markers.
  static const std::vector<std::string> words = {
      "ok",    "sure",    "done!",  "wait...", "really?", "brb",     "at 5pm",  "one:two",
      "[yay]", "(maybe)", "café",   "aha",     "nope",    "later,",  "100%",    "see you",
      "hmm",   "so...",   "right!", "um",      "—yes",    "it's", "fine.",   "go/stop",
  };
  return words;
}

inline std::string random_utterance(Rng& rng) {
  const auto& pool = word_pool();
  const std::size_t n = 1 + rng.below(7);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out += rng.below(12) == 0 ? '\n' : ' ';
    out += pool[rng.below(pool.size())];
  }
  return out;
}

inline std::pair<std::string, std::string> random_speakers(Rng& rng) {
  static const std::vector<std::pair<std::string, std::string>> pairs = {
      {"A", "B"}, {"Alice", "Bob"}, {"user", "agent"}, {"Dr Lee", "Sam"}, {"P1", "P2"},
  };
  return pairs[rng.below(pairs.size())];
}

/// Arbitrary valid dialogue: alternating speakers, non-empty utterances,
/// first interval 0, remaining intervals anywhere in [0, 10080].
inline Dialogue random_dialogue(Rng& rng, std::size_t index = 0) {
  Dialogue d;
  d.id = "gen-" + std::to_string(index);
  const auto [a, b] = random_speakers(rng);
  const std::size_t turns = 2 + rng.below(9);
  for (std::size_t t = 0; t < turns; ++t) {
    Turn turn;
    turn.speaker = t % 2 == 0 ? a : b;
    turn.interval_before =
        t == 0 ? TimeInterval(0)
               : TimeInterval(rng.below(3) == 0 ? 0 : static_cast<long long>(rng.below(10081)));
    turn.utterance = random_utterance(rng);
    d.turns.push_back(std::move(turn));
  }
  return d;
}

/// Benchmark-shaped dialogue: even turn count (ends on the non-seed speaker),
/// instant context turns, delayed final in [1, 1440].
inline Dialogue random_benchmark_dialogue(Rng& rng, std::size_t index = 0) {
  Dialogue d;
  d.id = "bench-" + std::to_string(index);
  const auto [a, b] = random_speakers(rng);
  const std::size_t pairs = 1 + rng.below(4);
  for (std::size_t t = 0; t < pairs * 2; ++t) {
    Turn turn;
    turn.speaker = t % 2 == 0 ? a : b;
    turn.interval_before = TimeInterval(0);
    turn.utterance = random_utterance(rng);
    d.turns.push_back(std::move(turn));
  }
  d.turns.back().interval_before = TimeInterval(1 + static_cast<long long>(rng.below(1440)));
  return d;
}

inline std::vector<metrics::TimingPrediction> random_predictions(Rng& rng, std::size_t n) {
  std::vector<metrics::TimingPrediction> preds;
  preds.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    metrics::TimingPrediction p;
    p.dialogue_id = "d" + std::to_string(i);
    p.turn_index = static_cast<int>(2 + rng.below(8));
    p.predicted = TimeInterval(rng.below(2) == 0 ? 0 : static_cast<long long>(rng.below(1441)));
    p.gold = TimeInterval(rng.below(2) == 0 ? 0 : static_cast<long long>(rng.below(1441)));
    preds.push_back(std::move(p));
  }
  return preds;
}

}  // namespace tempo::test
