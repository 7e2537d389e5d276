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

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tempo/dialogue.hpp"
#include "tempo/gateway.hpp"
#include "tempo/prompts.hpp"
#include "tempo/simulate.hpp"

namespace tempo::judge {

enum class Metric {
  naturalness,
  turn_time_specificity,
  coherence,
  delay_appropriateness,
  dialogue_time_specificity,
};

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::naturalness: return "naturalness";
    case Metric::turn_time_specificity: return "turn_time_specificity";
    case Metric::coherence: return "coherence";
    case Metric::delay_appropriateness: return "delay_appropriateness";
    case Metric::dialogue_time_specificity: return "dialogue_time_specificity";
  }
  return "naturalness";
}

inline Metric metric_from_string(std::string_view s) {
  if (s == "naturalness") return Metric::naturalness;
  if (s == "turn_time_specificity" || s == "time_specificity_turn")
    return Metric::turn_time_specificity;
  if (s == "coherence") return Metric::coherence;
  if (s == "delay_appropriateness") return Metric::delay_appropriateness;
  if (s == "dialogue_time_specificity" || s == "time_specificity_dialogue")
    return Metric::dialogue_time_specificity;
  throw std::invalid_argument("unknown judge metric: '" + std::string(s) + "'");
}

inline bool is_turn_level(Metric m) {
  return m == Metric::naturalness || m == Metric::turn_time_specificity;
}

/// Rubric text rendered into the rating prompt: display name, one-line
/// criteria, numbered steps.
struct MetricDef {
  Metric id;
  std::string_view display_name;
  std::string_view criteria;
  std::string_view steps;
};

namespace rubric {

inline constexpr std::string_view kNaturalnessCriteria =
    "the extent to which the response reads naturally given the dialogue context.";
inline constexpr std::string_view kNaturalnessSteps =
    R"(1. Assess the flow and coherence of the response in the conversation: Consider how seamlessly the response connects with the previous message.
2. Evaluate the tone and style compatibility: Determine if the response's tone and style match those of the previous messages.
3. Rate on a scale from 1 to 5, where 1 indicates the response is unnatural or inappropriate, and 5 indicates a perfectly natural continuation of the conversation.)";

inline constexpr std::string_view kTurnTimeSpecificityCriteria =
    "the extent to which the response ONLY makes sense when the specified time has passed, "
    "contrary to a time-agnostic response that makes sense regardless of time.";
inline constexpr std::string_view kTurnTimeSpecificitySteps =
    R"(1. Read the provided conversation and take note of the elapsed time since the previous message.
2. Consider the context of the conversation, focusing on how the passage of time might affect the relevance or appropriateness of the response.
3. Evaluate whether the potential response provided is time-specific. That is, determine if the response directly relates to or is clearly influenced by the elapsed time between the last utterance and the response.
4. Rate on a scale from 1 to 5, where 1 indicates the response is completely time-agnostic and unaffected by the passage of time, and 5 indicates the response is entirely time-specific; it only makes sense because of the amount of time that has passed since the previous message.)";

inline constexpr std::string_view kCoherenceCriteria =
    "the extent to which the agent maintains a good conversation flow.";
inline constexpr std::string_view kCoherenceSteps =
    R"(1. Assess the flow and coherence of the agent's responses in the conversation.
2. Evaluate the tone and style compatibility throughout the conversation.
3. Rate on a scale from 1 to 5, where 1 indicates the agent's responses are incoherent or inappropriate, and 5 indicates the agent's responses are perfectly coherent and appropriate.)";

inline constexpr std::string_view kDelayAppropriatenessCriteria =
    "the extent to which the agent poses delays with appropriate frequency and amount.";
inline constexpr std::string_view kDelayAppropriatenessSteps =
    R"(1. Assess whether the agent poses unnecessary or excessively frequent delays that could harm the conversation flow.
2. Evaluate whether the amounts of delays (if not 0 minutes) reflect the typical duration of events implied in the corresponding message.
3. Rate on a scale from 1 to 5, where 1 indicates the agent overuses and misuses delays, and 5 indicates the agent uses delays appropriately in terms of frequency and amount.)";

inline constexpr std::string_view kDialogueTimeSpecificityCriteria =
    "the extent to which the agent's responses ONLY make sense when the specified time has "
    "passed, contrary to a time-agnostic responses that make sense regardless of time.";
inline constexpr std::string_view kDialogueTimeSpecificitySteps =
    R"(1. Read the provided conversation and take note of the elapsed times since the previous messages.
2. Consider the context of the conversation, focusing on how the passage of time might affect the relevance or appropriateness of the agent's responses.
3. Evaluate whether the agent's responses are time-specific. That is, determine if the responses directly relate to or are clearly influenced by the elapsed times.
4. Rate on a scale from 1 to 5, where 1 indicates the agent's responses are completely time-agnostic and unaffected by the passage of time, and 5 indicates the agent's responses are entirely time-specific; they only make sense because of the amount of time that has passed since the previous message.)";

}  // namespace rubric

inline const MetricDef& metric_def(Metric m) {
  static const MetricDef defs[] = {
      {Metric::naturalness, "Naturalness", rubric::kNaturalnessCriteria,
       rubric::kNaturalnessSteps},
      {Metric::turn_time_specificity, "Time-specificity", rubric::kTurnTimeSpecificityCriteria,
       rubric::kTurnTimeSpecificitySteps},
      {Metric::coherence, "Coherence", rubric::kCoherenceCriteria, rubric::kCoherenceSteps},
      {Metric::delay_appropriateness, "Delay-appropriateness",
       rubric::kDelayAppropriatenessCriteria, rubric::kDelayAppropriatenessSteps},
      {Metric::dialogue_time_specificity, "Time-specificity",
       rubric::kDialogueTimeSpecificityCriteria, rubric::kDialogueTimeSpecificitySteps},
  };
  for (const MetricDef& d : defs)
    if (d.id == m) return d;
  throw std::invalid_argument("metric_def: unknown metric");
}

enum class ScoreMode { sample_mean, logprob_weighted };

inline std::string_view to_string(ScoreMode m) {
  return m == ScoreMode::sample_mean ? "sample_mean" : "logprob_weighted";
}

struct JudgeScore {
  Metric metric = Metric::naturalness;
  double value = 0.0;  // in [1, 5]
  std::vector<int> samples;
  ScoreMode mode = ScoreMode::sample_mean;
};

class ScoreParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First standalone integer in 1..5; tolerates "Score: 4" and "4/5" and prose
/// around it.
inline int parse_score(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j - i == 1) {
        const int v = text[i] - '0';
        if (v >= 1 && v <= 5) return v;
      }
      i = j;
    } else {
      ++i;
    }
  }
  throw ScoreParseError("parse_score: no score in 1..5 found in '" + std::string(text) + "'");
}

struct JudgeOptions {
  int n_samples = 20;  // sample_mean only; logprob_weighted issues one call
  ScoreMode mode = ScoreMode::sample_mean;
  llm::SamplingParams sampling{1.0, 0.95, 16};
};

inline std::string render_turn_judge_prompt(const DialogueContext& ctx, TimeInterval interval,
                                            const std::string& response, Metric metric) {
  const MetricDef& def = metric_def(metric);
  return llm::render(llm::PromptRegistry::builtin().get("geval-turn"),
                     {{"metric", std::string(def.display_name)},
                      {"criteria", std::string(def.criteria)},
                      {"steps", std::string(def.steps)},
                      {"conversation", sim::render_context(ctx)},
                      {"elapsed time", interval.canonical()},
                      {"response", response}});
}

inline std::string render_dialogue_judge_prompt(const sim::SimulationTranscript& t,
                                                Metric metric) {
  const MetricDef& def = metric_def(metric);
  return llm::render(llm::PromptRegistry::builtin().get("geval-dialogue"),
                     {{"metric", std::string(def.display_name)},
                      {"criteria", std::string(def.criteria)},
                      {"steps", std::string(def.steps)},
                      {"conversation", sim::render_transcript(t)}});
}

namespace detail {

// Expectation over the in-range alternatives of the first score token,
// exp(logprob) mass renormalized.
inline double logprob_expectation(const llm::Completion& completion) {
  for (const llm::TokenLogProb& tok : completion.logprobs) {
    int v;
    try {
      v = parse_score(tok.token);
    } catch (const ScoreParseError&) {
      continue;
    }
    (void)v;
    double mass = 0.0, weighted = 0.0;
    std::map<int, double> by_score;
    const auto consider = [&](const std::string& token, double logprob) {
      try {
        const int s = parse_score(token);
        // Keep the max mass per score; alternatives list the same digit with
        // surrounding whitespace variants.
        const double p = std::exp(logprob);
        auto [it, inserted] = by_score.emplace(s, p);
        if (!inserted) it->second = std::max(it->second, p);
      } catch (const ScoreParseError&) {
      }
    };
    if (tok.top.empty()) {
      consider(tok.token, tok.logprob);
    } else {
      for (const llm::TokenAlternative& alt : tok.top) consider(alt.token, alt.logprob);
    }
    for (const auto& [score, p] : by_score) {
      mass += p;
      weighted += p * score;
    }
    if (mass <= 0.0) break;
    return weighted / mass;
  }
  throw ScoreParseError("logprob_weighted: completion carries no scoreable token");
}

inline JudgeScore score_prompt(const std::string& prompt, Metric metric, llm::ChatClient& gateway,
                               const JudgeOptions& opts) {
  if (opts.n_samples < 1) throw std::invalid_argument("judge: n_samples must be >= 1");
  JudgeScore score;
  score.metric = metric;
  score.mode = opts.mode;

  if (opts.mode == ScoreMode::logprob_weighted) {
    const std::vector<llm::ChatMessage> messages = {llm::user_message(prompt)};
    const llm::Completion c = gateway.complete(messages, opts.sampling, /*want_logprobs=*/true);
    if (!c.has_logprobs())
      throw llm::GatewayError(llm::GatewayErrorKind::malformed_payload,
                              "logprob_weighted scoring needs a backend that returns logprobs");
    score.value = logprob_expectation(c);
    try {
      score.samples.push_back(parse_score(c.text));
    } catch (const ScoreParseError&) {
    }
    return score;
  }

  std::vector<std::vector<llm::ChatMessage>> batch(
      static_cast<std::size_t>(opts.n_samples), {llm::user_message(prompt)});
  const std::vector<llm::Completion> completions = gateway.complete_batch(batch, opts.sampling);
  for (const llm::Completion& c : completions) {
    try {
      score.samples.push_back(parse_score(c.text));
    } catch (const ScoreParseError&) {
      // dropped sample
    }
  }
  if (score.samples.empty())
    throw ScoreParseError("judge: no sample produced a parseable score");
  double sum = 0.0;
  for (int s : score.samples) sum += s;
  score.value = sum / static_cast<double>(score.samples.size());
  return score;
}

}  // namespace detail

/// Turn-level rating: renders the rating prompt with the conversation, the
/// elapsed time and the candidate response, samples the judge, and aggregates
/// per mode. Samples without a parseable score are dropped; it is an error
/// when all are.
inline JudgeScore score_turn(const DialogueContext& ctx, TimeInterval interval,
                             const std::string& response, Metric metric, llm::ChatClient& gateway,
                             const JudgeOptions& opts = {}) {
  if (!is_turn_level(metric))
    throw std::invalid_argument("score_turn: metric is dialogue-level");
  return detail::score_prompt(render_turn_judge_prompt(ctx, interval, response, metric), metric,
                              gateway, opts);
}

/// Dialogue-level rating over a full transcript; agent delays are rendered in
/// parentheses ahead of each message.
inline JudgeScore score_dialogue(const sim::SimulationTranscript& t, Metric metric,
                                 llm::ChatClient& gateway, const JudgeOptions& opts = {}) {
  if (is_turn_level(metric))
    throw std::invalid_argument("score_dialogue: metric is turn-level");
  if (t.moves.empty()) throw std::invalid_argument("score_dialogue: empty transcript");
  return detail::score_prompt(render_dialogue_judge_prompt(t, metric), metric, gateway, opts);
}

// Scores file, one record per line:
//   {"item_id": str, "metric": str, "value": float, "samples": [int],
//    "mode": str}

inline nlohmann::json score_to_json(const std::string& item_id, const JudgeScore& s) {
  return {{"item_id", item_id},
          {"metric", std::string(to_string(s.metric))},
          {"value", s.value},
          {"samples", s.samples},
          {"mode", std::string(to_string(s.mode))}};
}

}  // namespace tempo::judge
