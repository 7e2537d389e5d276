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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tempo/dialogue.hpp"
#include "tempo/duration.hpp"
#include "tempo/gateway.hpp"
#include "tempo/metrics.hpp"
#include "tempo/prompts.hpp"

namespace tempo::sim {

/// One agent decision: how long to wait and what to say.
struct AgentMove {
  TimeInterval interval;
  std::string utterance;
  bool unparseable_interval = false;  // interval fell back to 0
};

/// Pluggable agent contract. propose() sees the conversation so far (speakers
/// "user"/"agent") and must return a non-empty utterance with a non-negative
/// interval.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual AgentMove propose(const DialogueContext& ctx) = 0;
};

struct SimulationConfig {
  int n_interactions = 10;      // agent moves per episode
  long long max_minutes = 1440;  // agent intervals are clamped here
  std::uint64_t seed = 0;
};

enum class MoveRole { user, agent };

inline std::string_view to_string(MoveRole r) { return r == MoveRole::user ? "user" : "agent"; }

struct Move {
  MoveRole role = MoveRole::user;
  TimeInterval interval_before;
  std::string utterance;
};

/// Ordered moves of one episode. Roles alternate starting with user, and user
/// moves always carry a 0 interval; this holds for aborted episodes too.
struct SimulationTranscript {
  std::string scenario_id;
  std::vector<Move> moves;
  std::vector<std::string> flags;
  bool aborted = false;
  std::string abort_reason;
};

/// Agent lines always show the delay in parentheses ("agent: (60 minutes)
/// ok"); user lines never do. This is the surface both the user simulator and
/// the dialogue-level judge read.
inline std::string render_transcript(const SimulationTranscript& t) {
  std::string out;
  for (const Move& m : t.moves) {
    if (!out.empty()) out += '\n';
    out += to_string(m.role);
    out += ": ";
    if (m.role == MoveRole::agent) {
      out += '(';
      out += m.interval_before.canonical();
      out += ") ";
    }
    out += m.utterance;
  }
  return out;
}

/// Context rendering for predictor prompts: intervals appear only when > 0.
inline std::string render_context(const DialogueContext& ctx) {
  std::string out;
  for (const Turn& t : ctx.turns) {
    if (!out.empty()) out += '\n';
    out += t.speaker;
    out += ": ";
    if (t.interval_before.minutes() > 0) {
      out += '(';
      out += t.interval_before.canonical();
      out += ") ";
    }
    out += t.utterance;
  }
  return out;
}

namespace detail {

inline DialogueContext context_from_moves(const std::vector<Move>& moves) {
  DialogueContext ctx;
  for (const Move& m : moves)
    ctx.turns.push_back(
        {std::string(to_string(m.role)), m.interval_before, m.utterance});
  ctx.target_speaker = "agent";
  return ctx;
}

inline std::string strip_role_prefix(std::string_view reply, std::string_view role) {
  std::string_view t = trim(reply);
  if (t.size() > role.size() + 1 && iequals(t.substr(0, role.size()), role) &&
      t[role.size()] == ':')
    t = trim(t.substr(role.size() + 1));
  return std::string(t);
}

}  // namespace detail

/// Runs one episode: cfg.n_interactions agent moves, each answered by one
/// simulator reply, on top of the seed user turn. Agent intervals above the
/// cap are clamped and flagged. Agent or gateway failures abort the episode
/// and preserve the partial transcript.
inline SimulationTranscript run_episode(const Turn& seed_turn, Agent& agent,
                                        llm::ChatClient& simulator, const SimulationConfig& cfg,
                                        std::string scenario_id = {}) {
  if (cfg.n_interactions < 1)
    throw std::invalid_argument("run_episode: n_interactions must be >= 1");

  SimulationTranscript t;
  t.scenario_id = std::move(scenario_id);
  t.moves.push_back({MoveRole::user, TimeInterval(0), seed_turn.utterance});

  const llm::PromptTemplate& simulator_prompt =
      llm::PromptRegistry::builtin().get("user-simulator");

  for (int k = 0; k < cfg.n_interactions; ++k) {
    AgentMove move;
    try {
      move = agent.propose(detail::context_from_moves(t.moves));
    } catch (const std::exception& e) {
      t.aborted = true;
      t.abort_reason = std::string("agent: ") + e.what();
      return t;
    }
    if (trim(move.utterance).empty()) {
      t.aborted = true;
      t.abort_reason = "agent: empty utterance";
      return t;
    }
    if (move.interval.minutes() > cfg.max_minutes) {
      move.interval = TimeInterval(cfg.max_minutes);
      t.flags.push_back("clamped_interval@" + std::to_string(t.moves.size()));
    }
    if (move.unparseable_interval)
      t.flags.push_back("unparseable_interval@" + std::to_string(t.moves.size()));
    t.moves.push_back({MoveRole::agent, move.interval, move.utterance});

    const std::string prompt =
        llm::render(simulator_prompt, {{"context", render_transcript(t)}});
    std::string reply;
    try {
      const std::vector<llm::ChatMessage> messages = {llm::user_message(prompt)};
      reply = simulator.complete(messages).text;
    } catch (const std::exception& e) {
      t.aborted = true;
      t.abort_reason = std::string("simulator: ") + e.what();
      return t;
    }
    const std::string utterance = detail::strip_role_prefix(reply, "user");
    if (utterance.empty()) {
      t.aborted = true;
      t.abort_reason = "simulator: empty reply";
      return t;
    }
    t.moves.push_back({MoveRole::user, TimeInterval(0), utterance});
  }
  return t;
}

/// Replays a fixed move list; episodes longer than the script fail.
class ScriptedAgent final : public Agent {
 public:
  explicit ScriptedAgent(std::vector<AgentMove> moves) : moves_(std::move(moves)) {}

  AgentMove propose(const DialogueContext&) override {
    if (next_ >= moves_.size()) throw std::runtime_error("ScriptedAgent: script exhausted");
    return moves_[next_++];
  }

  void rewind() { next_ = 0; }

 private:
  std::vector<AgentMove> moves_;
  std::size_t next_ = 0;
};

/// Replays the agent-side turns of a reference dialogue (turns 2, 4, ... with
/// their gold intervals), for oracle runs over benchmark dialogues.
inline std::vector<AgentMove> agent_moves_of(const Dialogue& d) {
  std::vector<AgentMove> moves;
  for (std::size_t i = 1; i < d.turns.size(); i += 2)
    moves.push_back({d.turns[i].interval_before, d.turns[i].utterance, false});
  return moves;
}

/// Replays the user-side turns (3, 5, ...) that follow each agent move.
inline std::vector<std::string> user_replies_of(const Dialogue& d) {
  std::vector<std::string> replies;
  for (std::size_t i = 2; i < d.turns.size(); i += 2) replies.push_back(d.turns[i].utterance);
  return replies;
}

enum class PromptStrategy { zero_shot, few_shot, cot };

inline std::string_view to_string(PromptStrategy s) {
  switch (s) {
    case PromptStrategy::zero_shot: return "zero_shot";
    case PromptStrategy::few_shot: return "few_shot";
    case PromptStrategy::cot: return "cot";
  }
  return "zero_shot";
}

inline PromptStrategy prompt_strategy_from_string(std::string_view s) {
  if (s == "zero_shot" || s == "zero-shot") return PromptStrategy::zero_shot;
  if (s == "few_shot" || s == "few-shot") return PromptStrategy::few_shot;
  if (s == "cot") return PromptStrategy::cot;
  throw std::invalid_argument("unknown prompting strategy: '" + std::string(s) + "'");
}

/// Two-step prompted agent: predicts the interval with the timing prompt,
/// then generates the response with the interval prefilled. An unparseable
/// interval falls back to 0 minutes with a flag instead of failing the
/// episode.
class PromptedAgent final : public Agent {
 public:
  PromptedAgent(llm::ChatClient& gateway, PromptStrategy strategy, std::string examples = {},
                llm::SamplingParams params = {})
      : gateway_(gateway), strategy_(strategy), examples_(std::move(examples)), params_(params) {
    if (strategy_ != PromptStrategy::zero_shot && examples_.empty())
      throw std::invalid_argument("PromptedAgent: strategy needs an examples block");
  }

  AgentMove propose(const DialogueContext& ctx) override {
    const auto& registry = llm::PromptRegistry::builtin();
    const std::string suffix = strategy_ == PromptStrategy::zero_shot ? "zero-shot"
                               : strategy_ == PromptStrategy::few_shot ? "few-shot"
                                                                       : "cot";
    std::map<std::string, std::string> timing_bindings = {{"context", render_context(ctx)}};
    if (strategy_ != PromptStrategy::zero_shot) timing_bindings["examples"] = examples_;
    const std::string timing_prompt =
        llm::render(registry.get("timing-prediction-" + suffix), timing_bindings);

    AgentMove move;
    const std::vector<llm::ChatMessage> timing_messages = {llm::user_message(timing_prompt)};
    const std::string timing_reply = gateway_.complete(timing_messages, params_).text;
    if (auto interval = scan_duration(timing_reply)) {
      move.interval = *interval;
    } else {
      move.interval = TimeInterval(0);
      move.unparseable_interval = true;
    }

    std::map<std::string, std::string> response_bindings = {
        {"context", render_context(ctx)},
        {"target speaker", ctx.target_speaker},
        {"time interval", move.interval.canonical()}};
    if (strategy_ != PromptStrategy::zero_shot) response_bindings["examples"] = examples_;
    const std::string response_prompt =
        llm::render(registry.get("response-generation-" + suffix), response_bindings);
    const std::vector<llm::ChatMessage> response_messages = {llm::user_message(response_prompt)};
    std::string reply = gateway_.complete(response_messages, params_).text;
    move.utterance = detail::strip_role_prefix(reply, ctx.target_speaker);
    // Models sometimes echo the "(N minutes later)" prefill.
    const std::string prefill = "(" + move.interval.canonical() + " later)";
    if (move.utterance.starts_with(prefill))
      move.utterance = std::string(trim(std::string_view(move.utterance).substr(prefill.size())));
    return move;
  }

 private:
  llm::ChatClient& gateway_;
  PromptStrategy strategy_;
  std::string examples_;
  llm::SamplingParams params_;
};

struct Scenario {
  std::string dialogue_id;
  Turn seed_turn;
  std::size_t corpus_index = 0;
};

inline bool has_delayed_turn(const Dialogue& d) {
  for (const Turn& t : d.turns)
    if (t.interval_before.minutes() > 0) return true;
  return false;
}

/// Seeded uniform sample, without replacement, of first turns from dialogues
/// satisfying the predicate (default: at least one delayed turn). Throws when
/// fewer than n dialogues qualify.
inline std::vector<Scenario> sample_scenarios(
    std::span<const Dialogue> corpus, std::size_t n, std::uint64_t seed,
    const std::function<bool(const Dialogue&)>& predicate = has_delayed_turn) {
  std::vector<std::size_t> qualifying;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (!corpus[i].turns.empty() && predicate(corpus[i])) qualifying.push_back(i);
  if (qualifying.size() < n)
    throw std::invalid_argument("sample_scenarios: only " + std::to_string(qualifying.size()) +
                                " dialogues qualify, need " + std::to_string(n));
  Rng rng(seed);
  rng.shuffle(qualifying);
  qualifying.resize(n);

  std::vector<Scenario> out;
  out.reserve(n);
  for (std::size_t idx : qualifying)
    out.push_back({corpus[idx].id, corpus[idx].turns.front(), idx});
  return out;
}

struct TranscriptPrediction {
  std::string scenario_id;
  std::size_t move_index = 0;  // position in the transcript
  TimeInterval predicted;
};

inline std::vector<TranscriptPrediction> transcript_timing_predictions(
    const SimulationTranscript& t) {
  std::vector<TranscriptPrediction> out;
  for (std::size_t i = 0; i < t.moves.size(); ++i)
    if (t.moves[i].role == MoveRole::agent)
      out.push_back({t.scenario_id, i, t.moves[i].interval_before});
  return out;
}

/// Replay mode: pairs each agent move with the matching gold interval. Throws
/// on a length mismatch.
inline std::vector<metrics::TimingPrediction> transcript_timing_predictions(
    const SimulationTranscript& t, std::span<const TimeInterval> gold) {
  const std::vector<TranscriptPrediction> preds = transcript_timing_predictions(t);
  if (preds.size() != gold.size())
    throw std::invalid_argument("transcript_timing_predictions: " + std::to_string(preds.size()) +
                                " agent moves vs " + std::to_string(gold.size()) +
                                " gold intervals");
  std::vector<metrics::TimingPrediction> out;
  out.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i)
    out.push_back({t.scenario_id, static_cast<int>(preds[i].move_index), preds[i].predicted,
                   gold[i]});
  return out;
}

// Transcript file, one record per line:
//   {"scenario_id": str, "moves": [{"role": "user"|"agent", "minutes": int,
//    "utterance": str}, ...], "flags": [str], "aborted": bool,
//    "abort_reason": str}

inline nlohmann::json transcript_to_json(const SimulationTranscript& t) {
  nlohmann::json moves = nlohmann::json::array();
  for (const Move& m : t.moves)
    moves.push_back({{"role", std::string(to_string(m.role))},
                     {"minutes", m.interval_before.minutes()},
                     {"utterance", m.utterance}});
  return {{"scenario_id", t.scenario_id}, {"moves", std::move(moves)}, {"flags", t.flags},
          {"aborted", t.aborted},         {"abort_reason", t.abort_reason}};
}

inline SimulationTranscript transcript_from_json(const nlohmann::json& j,
                                                 const std::filesystem::path& path = "<memory>",
                                                 std::size_t line = 0) {
  SimulationTranscript t;
  t.scenario_id = tempo::detail::require_field<std::string>(j, "scenario_id", path, line);
  if (!j.contains("moves") || !j.at("moves").is_array())
    throw JsonlError(path, line, "missing field 'moves'");
  for (const nlohmann::json& mj : j.at("moves")) {
    Move m;
    const std::string role = tempo::detail::require_field<std::string>(mj, "role", path, line);
    if (role == "user") m.role = MoveRole::user;
    else if (role == "agent") m.role = MoveRole::agent;
    else throw JsonlError(path, line, "unknown move role '" + role + "'");
    m.interval_before =
        TimeInterval(tempo::detail::require_field<long long>(mj, "minutes", path, line));
    m.utterance = tempo::detail::require_field<std::string>(mj, "utterance", path, line);
    t.moves.push_back(std::move(m));
  }
  if (j.contains("flags"))
    for (const nlohmann::json& f : j.at("flags")) t.flags.push_back(f.get<std::string>());
  t.aborted = j.value("aborted", false);
  t.abort_reason = j.value("abort_reason", "");
  return t;
}

inline std::vector<SimulationTranscript> load_transcripts(const std::filesystem::path& path) {
  std::vector<SimulationTranscript> out;
  for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t line) {
    out.push_back(transcript_from_json(j, path, line));
  });
  return out;
}

inline void store_transcripts(std::span<const SimulationTranscript> transcripts,
                              const std::filesystem::path& path) {
  std::vector<nlohmann::json> records;
  records.reserve(transcripts.size());
  for (const SimulationTranscript& t : transcripts) records.push_back(transcript_to_json(t));
  write_jsonl(path, records);
}

}  // namespace tempo::sim
