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

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tempo/corpus.hpp"
#include "tempo/demos.hpp"
#include "tempo/dialogue.hpp"
#include "tempo/duration.hpp"
#include "tempo/gateway.hpp"
#include "tempo/prompts.hpp"

namespace tempo::synth {

// ---------------------------------------------------------------------------
// Name pool and triplet realization
// ---------------------------------------------------------------------------

struct NamePool {
  std::vector<std::string> names;  // non-empty, deduplicated

  static NamePool builtin();
};

inline NamePool NamePool::builtin() {
  return {{
      "James",    "Mary",      "Robert",   "Patricia",  "John",     "Jennifer", "Michael",
      "Linda",    "David",     "Elizabeth", "William",  "Barbara",  "Richard",  "Susan",
      "Joseph",   "Jessica",   "Thomas",   "Sarah",     "Christopher", "Karen", "Charles",
      "Lisa",     "Daniel",    "Nancy",    "Matthew",   "Betty",    "Anthony",  "Sandra",
      "Mark",     "Margaret",  "Donald",   "Ashley",    "Steven",   "Kimberly", "Andrew",
      "Emily",    "Paul",      "Donna",    "Joshua",    "Michelle", "Kenneth",  "Carol",
      "Kevin",    "Amanda",    "Brian",    "Melissa",   "Timothy",  "Deborah",  "Ronald",
      "Stephanie", "Jason",    "Rebecca",  "George",    "Sharon",   "Edward",   "Laura",
      "Jeffrey",  "Cynthia",   "Ryan",     "Dorothy",   "Jacob",    "Amy",      "Nicholas",
      "Kathleen", "Gary",      "Angela",   "Eric",      "Shirley",  "Jonathan", "Emma",
      "Stephen",  "Brenda",    "Larry",    "Pamela",    "Justin",   "Nicole",   "Scott",
      "Anna",     "Brandon",   "Samantha", "Benjamin",  "Katherine", "Samuel",  "Christine",
      "Gregory",  "Debra",     "Alexander", "Rachel",   "Patrick",  "Olivia",   "Frank",
      "Carolyn",  "Jack",      "Maria",    "Dennis",    "Janet",    "Jerry",    "Heather",
      "Tyler",    "Diane",     "Jane",
  }};
}

/// Joining phrase per event-centered relation code; the realized statement is
/// "{head}, {phrase} {tail}.". Unknown relations fall back to "and".
inline const std::map<std::string, std::string>& relation_phrases() {
  static const std::map<std::string, std::string> table = {
      {"xEffect", "and as a result,"},
      {"oEffect", "and as a result,"},
      {"xReact", "and as a result, they feel"},
      {"oReact", "and as a result, others feel"},
      {"xWant", "and afterwards, they want"},
      {"oWant", "and afterwards, others want"},
      {"xNeed", "but beforehand, they need"},
      {"xIntent", "because they want"},
      {"xAttr", "so they are seen as"},
      {"xReason", "because"},
      {"isAfter", "after"},
      {"isBefore", "before"},
      {"HasSubEvent", "which includes"},
      {"HinderedBy", "which can be hindered by"},
      {"Causes", "which causes"},
      {"isFilledBy", "which involves"},
  };
  return table;
}

/// Loads a relation→phrase override table: "relation<TAB>phrase" per line.
inline std::map<std::string, std::string> load_relation_phrases(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open relation table: " + path.string());
  std::map<std::string, std::string> table;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("relation table: expected two tab-separated fields");
    table[std::string(trim(line.substr(0, tab)))] = std::string(trim(line.substr(tab + 1)));
  }
  return table;
}

namespace detail {

inline constexpr std::string_view kPlaceholders[] = {"PersonX", "PersonY", "PersonZ"};

inline std::string replace_word(std::string text, std::string_view word, std::string_view with) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t hit = text.find(word, pos);
    if (hit == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    const bool left_ok = hit == 0 || !std::isalnum(static_cast<unsigned char>(text[hit - 1]));
    const std::size_t end = hit + word.size();
    const bool right_ok = end >= text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
    out.append(text, pos, hit - pos);
    if (left_ok && right_ok) {
      out.append(with);
    } else {
      out.append(word);
    }
    pos = end;
  }
  return out;
}

inline std::string strip_trailing_period(std::string s) {
  while (!s.empty() && (s.back() == '.' || std::isspace(static_cast<unsigned char>(s.back()))))
    s.pop_back();
  return s;
}

}  // namespace detail

/// Joins head and tail with the relation's phrase and substitutes each
/// distinct PersonX/PersonY/PersonZ placeholder with a distinct,
/// seed-deterministic name from the pool. Throws when the pool is empty or
/// smaller than the number of distinct placeholders.
inline std::string realize_triplet(
    const EventTriplet& triplet, const NamePool& pool, std::uint64_t seed,
    const std::map<std::string, std::string>& phrases = relation_phrases()) {
  if (pool.names.empty()) throw std::invalid_argument("realize_triplet: empty name pool");

  const auto it = phrases.find(triplet.relation);
  const std::string& phrase = it != phrases.end() ? it->second : std::string("and");
  std::string statement = detail::strip_trailing_period(triplet.head) + ", " + phrase + " " +
                          detail::strip_trailing_period(triplet.tail) + ".";

  std::vector<std::string_view> present;
  for (std::string_view p : detail::kPlaceholders)
    if (statement.find(p) != std::string::npos) present.push_back(p);
  if (present.size() > pool.names.size())
    throw std::invalid_argument("realize_triplet: placeholder count exceeds pool size");

  Rng rng(seed);
  std::vector<std::string> remaining = pool.names;
  for (std::string_view p : present) {
    const std::size_t pick = static_cast<std::size_t>(rng.below(remaining.size()));
    statement = detail::replace_word(std::move(statement), p, remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return statement;
}

// ---------------------------------------------------------------------------
// Model-reply parsing
// ---------------------------------------------------------------------------

struct EstimationReply {
  std::string key_event;
  TimeInterval duration;
};

/// Parses "Key event:" / "Duration:" lines out of an estimation reply. On
/// failure returns nullopt and sets reason to one of missing_key_event,
/// missing_duration, duration_unparseable.
inline std::optional<EstimationReply> parse_estimation_reply(std::string_view reply,
                                                             std::string* reason = nullptr) {
  auto fail = [reason](const char* r) -> std::optional<EstimationReply> {
    if (reason) *reason = r;
    return std::nullopt;
  };
  std::optional<std::string> key_event;
  std::optional<std::string> duration_text;
  for (std::string_view line : split_lines(reply)) {
    const std::string_view t = trim(line);
    constexpr std::string_view kKey = "Key event:";
    constexpr std::string_view kDuration = "Duration:";
    if (!key_event && t.size() > kKey.size() && iequals(t.substr(0, kKey.size()), kKey))
      key_event = std::string(trim(t.substr(kKey.size())));
    else if (!duration_text && t.size() > kDuration.size() &&
             iequals(t.substr(0, kDuration.size()), kDuration))
      duration_text = std::string(trim(t.substr(kDuration.size())));
  }
  if (!duration_text) return fail("missing_duration");
  if (!key_event) return fail("missing_key_event");
  const auto interval = try_parse_duration(*duration_text);
  if (!interval) return fail("duration_unparseable");
  return EstimationReply{*key_event, *interval};
}

// ---------------------------------------------------------------------------
// Generated-dialogue parsing and filtering
// ---------------------------------------------------------------------------

struct DialogueCandidate {
  std::string event_id;
  std::string raw_text;
  std::optional<Dialogue> parsed;
  bool has_marker = false;
  TimeInterval marker_interval;
  std::string delayed_final;
  std::string instant_final;
  std::vector<std::string> reject_reasons;

  bool accepted() const { return parsed.has_value() && reject_reasons.empty(); }
};

struct FilterPolicy {
  long long min_minutes = 1;
  long long max_minutes = 1440;  // bounds inclusive
  bool require_marker = true;
  bool require_alternation = true;
  bool judge_exclusivity = false;
  double exclusivity_max_score = 3.0;  // contrary-condition rating must not exceed this
};

inline FilterPolicy filter_policy_from_json(const nlohmann::json& j) {
  FilterPolicy p;
  if (j.contains("min_minutes")) p.min_minutes = j.at("min_minutes").get<long long>();
  if (j.contains("max_minutes")) p.max_minutes = j.at("max_minutes").get<long long>();
  if (j.contains("require_marker")) p.require_marker = j.at("require_marker").get<bool>();
  if (j.contains("require_alternation"))
    p.require_alternation = j.at("require_alternation").get<bool>();
  if (j.contains("judge_exclusivity")) p.judge_exclusivity = j.at("judge_exclusivity").get<bool>();
  if (j.contains("exclusivity_max_score"))
    p.exclusivity_max_score = j.at("exclusivity_max_score").get<double>();
  if (p.min_minutes <= 0 || p.min_minutes > p.max_minutes)
    throw std::invalid_argument("filter policy: need 0 < min_minutes <= max_minutes");
  return p;
}

namespace detail {

inline bool is_label(std::string_view line, std::string_view label) {
  return iequals(trim(line), label);
}

struct SpeakerLine {
  std::string speaker;
  std::string utterance;
};

inline std::optional<SpeakerLine> match_speaker_line(std::string_view line) {
  const std::string_view t = trim(line);
  const std::size_t colon = t.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon > 64) return std::nullopt;
  const std::string_view speaker = trim(t.substr(0, colon));
  if (speaker.empty() || speaker.find('[') != std::string_view::npos) return std::nullopt;
  return SpeakerLine{std::string(speaker), std::string(trim(t.substr(colon + 1)))};
}

}  // namespace detail

/// Parses the generator's raw output: optional "Narrative:"/"Duration:"
/// header, alternating "X: utterance" lines, one "[<duration> later]" marker,
/// then the "(delayed response)"/"(instantaneous response)" finals (an
/// unlabeled first final counts as delayed, a second as instant). Problems
/// never throw; they land in reject_reasons.
inline DialogueCandidate parse_generated_dialogue(std::string_view raw,
                                                  std::string event_id = {}) {
  DialogueCandidate c;
  c.event_id = std::move(event_id);
  c.raw_text = std::string(raw);

  std::vector<Turn> turns;
  enum class State { header, turns, finals };
  State state = State::header;
  enum class Pending { none, delayed, instant };
  Pending pending = Pending::none;
  bool saw_delayed = false, saw_instant = false;
  std::string final_speaker;
  std::string* continuation = nullptr;

  auto reject = [&c](const char* reason) {
    for (const std::string& r : c.reject_reasons)
      if (r == reason) return;
    c.reject_reasons.emplace_back(reason);
  };

  for (std::string_view line : split_lines(raw)) {
    const std::string_view t = trim(line);
    if (t.empty()) continue;

    std::optional<TimeInterval> marker;
    bool marker_malformed = false;
    try {
      marker = extract_delay_marker(t);
    } catch (const std::invalid_argument&) {
      marker_malformed = true;
    }
    if (marker_malformed) {
      reject("marker_unparseable");
      continuation = nullptr;
      continue;
    }
    if (marker) {
      if (c.has_marker) {
        reject("multiple_markers");
      } else {
        c.has_marker = true;
        c.marker_interval = *marker;
        state = State::finals;
      }
      continuation = nullptr;
      continue;
    }

    if (detail::is_label(t, "(delayed response)") || detail::is_label(t, "(instantaneous response)")) {
      if (state == State::finals)
        pending = detail::is_label(t, "(delayed response)") ? Pending::delayed : Pending::instant;
      continuation = nullptr;
      continue;
    }

    if (state == State::finals) {
      if (auto sl = detail::match_speaker_line(t)) {
        const bool instant = pending == Pending::instant || (pending == Pending::none && saw_delayed);
        if (!instant && !saw_delayed) {
          c.delayed_final = sl->utterance;
          final_speaker = sl->speaker;
          saw_delayed = true;
          continuation = &c.delayed_final;
        } else if (instant && !saw_instant) {
          c.instant_final = sl->utterance;
          saw_instant = true;
          continuation = &c.instant_final;
        }
        pending = Pending::none;
        continue;
      }
      if (continuation) {
        *continuation += ' ';
        *continuation += t;
      }
      continue;
    }

    // Header lines appear before the first turn.
    if (state == State::header &&
        (t.starts_with("Narrative:") || t.starts_with("Duration:"))) {
      continue;
    }
    if (auto sl = detail::match_speaker_line(t)) {
      turns.push_back({sl->speaker, TimeInterval(0), sl->utterance});
      continuation = &turns.back().utterance;
      state = State::turns;
      continue;
    }
    if (continuation && state == State::turns) {
      *continuation += ' ';
      *continuation += t;
    }
  }

  if (turns.empty()) {
    reject("no_turns");
    return c;
  }
  if (c.has_marker && !saw_delayed) {
    reject("missing_final");
    return c;
  }

  Dialogue d;
  d.id = c.event_id.empty() ? "candidate" : c.event_id + "-dlg";
  if (!c.event_id.empty()) d.event_id = c.event_id;
  d.turns = std::move(turns);
  if (c.has_marker) {
    d.turns.push_back({final_speaker, c.marker_interval, c.delayed_final});
    if (saw_instant) d.instant_variant = c.instant_final;
  }
  c.parsed = std::move(d);
  return c;
}

/// Naturalness-style rating callback used for the mutual-exclusivity check:
/// (context, interval, response) → score in [1, 5].
using TurnJudgeFn =
    std::function<double(const DialogueContext&, TimeInterval, const std::string&)>;

/// Applies the filter policy: marker presence, delay bounds (inclusive),
/// structural validity, and optionally the judged mutual-exclusivity
/// condition (each final must rate poorly under the contrary temporal
/// condition). Appends reasons to the candidate; a candidate already
/// rejected upstream is left untouched.
inline void filter_candidate(DialogueCandidate& c, const FilterPolicy& policy,
                             const TurnJudgeFn& judge = nullptr) {
  if (!c.reject_reasons.empty() || !c.parsed) return;

  auto reject = [&c](std::string reason) {
    for (const std::string& r : c.reject_reasons)
      if (r == reason) return;
    c.reject_reasons.push_back(std::move(reason));
  };

  if (policy.require_marker && !c.has_marker) {
    reject("missing_marker");
    return;
  }
  if (c.has_marker && (c.marker_interval.minutes() < policy.min_minutes ||
                       c.marker_interval.minutes() > policy.max_minutes)) {
    reject("duration_out_of_range");
    return;
  }

  const ValidationResult v = validate_dialogue(*c.parsed);
  for (DialogueViolation code : v.violations) {
    if (code == DialogueViolation::non_alternating && !policy.require_alternation) continue;
    reject(std::string(to_string(code)));
  }
  if (!c.reject_reasons.empty()) return;

  if (policy.judge_exclusivity && c.has_marker) {
    if (!judge) {
      reject("judge_unavailable");
      return;
    }
    try {
      const DialogueContext ctx = context_at(*c.parsed, c.parsed->turns.size());
      const double delayed_as_instant = judge(ctx, TimeInterval(0), c.delayed_final);
      if (delayed_as_instant > policy.exclusivity_max_score) {
        reject("exclusivity_violated");
        return;
      }
      if (!c.instant_final.empty()) {
        const double instant_as_delayed = judge(ctx, c.marker_interval, c.instant_final);
        if (instant_as_delayed > policy.exclusivity_max_score) {
          reject("exclusivity_violated");
          return;
        }
      }
    } catch (const std::exception&) {
      reject("judge_unavailable");
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct PipelineConfig {
  EventSource source = EventSource::atomic;
  std::filesystem::path input_path;
  std::filesystem::path state_path;  // stage journal; enables resume
  std::filesystem::path out_corpus;
  std::filesystem::path reject_log;
  FilterPolicy policy;
  std::uint64_t seed = 0;
  NamePool names;                   // empty → builtin
  std::vector<std::string> demos;   // empty → builtin
  std::map<std::string, std::string> relations;  // empty → builtin
};

struct RejectEntry {
  std::string event_id;
  std::string stage;
  std::string reason;
};

struct PipelineOutcome {
  std::size_t total = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<RejectEntry> rejections;
};

/// Knowledge → statement → pseudo-labeled duration → narrative → one-shot
/// dialogue generation → parse + filter. Completed model calls are journaled
/// per (event, stage) so a re-run never re-issues them; per-event transient
/// gateway failures reject the candidate for this run but stay un-journaled
/// so a resume retries them.
class SynthesisPipeline {
 public:
  SynthesisPipeline(PipelineConfig cfg, llm::ChatClient& gateway, TurnJudgeFn judge = nullptr)
      : cfg_(std::move(cfg)), gateway_(gateway), judge_(std::move(judge)) {
    if (cfg_.names.names.empty()) cfg_.names = NamePool::builtin();
    if (cfg_.demos.empty()) cfg_.demos = builtin_demo_pool();
    if (cfg_.relations.empty()) cfg_.relations = relation_phrases();
    load_journal();
  }

  PipelineOutcome run() {
    std::vector<Item> items = ingest();
    stage_realize(items);
    stage_estimate(items);
    stage_describe(items);
    stage_generate(items);
    stage_parse_filter(items);
    return emit(items);
  }

 private:
  struct Item {
    std::string id;
    EventTriplet triplet;               // atomic source
    DurationQuestionRow row;            // mc-taco source
    EventRecord record;
    std::string generation_reply;
    std::optional<DialogueCandidate> candidate;
    std::vector<RejectEntry> rejections;

    bool live() const { return rejections.empty(); }
    void reject(const std::string& stage, std::string reason) {
      rejections.push_back({id, stage, std::move(reason)});
    }
  };

  std::vector<Item> ingest() {
    std::vector<Item> items;
    auto make_id = [this](std::size_t i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%06zu", i + 1);
      return std::string(to_string(cfg_.source)) + "-" + buf;
    };
    if (cfg_.source == EventSource::atomic) {
      const std::vector<EventTriplet> triplets = load_triplets_tsv(cfg_.input_path);
      items.resize(triplets.size());
      for (std::size_t i = 0; i < triplets.size(); ++i) {
        items[i].id = make_id(i);
        items[i].triplet = triplets[i];
        items[i].record.id = items[i].id;
        items[i].record.source = EventSource::atomic;
      }
    } else {
      const std::vector<DurationQuestionRow> rows = load_duration_rows_tsv(cfg_.input_path);
      items.resize(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        Item& it = items[i];
        it.id = make_id(i);
        it.row = rows[i];
        it.record.id = it.id;
        it.record.source = EventSource::mc_taco;
        it.record.statement = rows[i].sentence;
        const auto duration = try_parse_duration(rows[i].answer);
        if (!duration) {
          it.reject("ingest", "duration_unparseable");
        } else if (duration->minutes() < cfg_.policy.min_minutes ||
                   duration->minutes() > cfg_.policy.max_minutes) {
          it.reject("ingest", "duration_out_of_range");
        } else {
          it.record.duration = *duration;
        }
      }
    }
    return items;
  }

  void stage_realize(std::vector<Item>& items) {
    if (cfg_.source != EventSource::atomic) return;
    for (Item& it : items) {
      if (!it.live()) continue;
      it.record.statement =
          realize_triplet(it.triplet, cfg_.names, cfg_.seed ^ fnv1a(it.id), cfg_.relations);
    }
  }

  void stage_estimate(std::vector<Item>& items) {
    if (cfg_.source != EventSource::atomic) return;
    const auto& registry = llm::PromptRegistry::builtin();
    run_llm_stage(items, "estimate", [&](Item& it) {
      return llm::render(registry.get("atomic-duration-estimation"),
                         {{"statement", it.record.statement}});
    });
    for (Item& it : items) {
      if (!it.live()) continue;
      std::string reason;
      const auto parsed = parse_estimation_reply(journal_.at({it.id, "estimate"}), &reason);
      if (!parsed) {
        it.reject("estimate", reason);
        continue;
      }
      if (parsed->duration.minutes() < cfg_.policy.min_minutes ||
          parsed->duration.minutes() > cfg_.policy.max_minutes) {
        it.reject("estimate", "duration_out_of_range");
        continue;
      }
      it.record.key_event = parsed->key_event;
      it.record.duration = parsed->duration;
    }
  }

  void stage_describe(std::vector<Item>& items) {
    const auto& registry = llm::PromptRegistry::builtin();
    run_llm_stage(items, "describe", [&](Item& it) {
      if (cfg_.source == EventSource::atomic) {
        return llm::render(registry.get("atomic-event-description"),
                           {{"statement", it.record.statement},
                            {"event", it.record.key_event},
                            {"duration", format_duration(it.record.duration, DurationStyle::mixed)}});
      }
      return llm::render(registry.get("mc-taco-event-description"),
                         {{"sentence", it.row.sentence},
                          {"question", it.row.question},
                          {"duration", it.row.answer}});
    });
    for (Item& it : items) {
      if (!it.live()) continue;
      const std::string narrative = std::string(trim(journal_.at({it.id, "describe"})));
      if (narrative.empty()) {
        it.reject("describe", "empty_model_output");
        continue;
      }
      it.record.narrative = narrative;
    }
  }

  void stage_generate(std::vector<Item>& items) {
    const auto& registry = llm::PromptRegistry::builtin();
    run_llm_stage(items, "generate", [&](Item& it) {
      const std::size_t demo_idx =
          static_cast<std::size_t>(Rng(cfg_.seed ^ fnv1a(it.id)).below(cfg_.demos.size()));
      return llm::render(registry.get("dialogue-generation"),
                         {{"dialogue example", cfg_.demos[demo_idx]},
                          {"event description", it.record.narrative},
                          {"duration", format_duration(it.record.duration, DurationStyle::mixed)}});
    });
    for (Item& it : items) {
      if (!it.live()) continue;
      it.generation_reply = journal_.at({it.id, "generate"});
    }
  }

  void stage_parse_filter(std::vector<Item>& items) {
    for (Item& it : items) {
      if (!it.live()) continue;
      DialogueCandidate c = parse_generated_dialogue(it.generation_reply, it.id);

      TurnJudgeFn exclusivity_judge;
      if (cfg_.policy.judge_exclusivity && judge_) {
        exclusivity_judge = [this, &it](const DialogueContext& ctx, TimeInterval interval,
                                        const std::string& response) {
          const std::string key = exclusivity_key(interval, response);
          if (auto cached = journal_lookup(it.id, key)) return std::stod(*cached);
          const double score = judge_(ctx, interval, response);
          journal_commit(it.id, key, std::to_string(score));
          return score;
        };
      }
      filter_candidate(c, cfg_.policy, exclusivity_judge);
      for (const std::string& reason : c.reject_reasons) it.reject("filter", reason);
      it.candidate = std::move(c);
    }
  }

  PipelineOutcome emit(std::vector<Item>& items) {
    PipelineOutcome outcome;
    outcome.total = items.size();
    std::vector<Dialogue> accepted;
    for (Item& it : items) {
      if (it.live() && it.candidate && it.candidate->accepted()) {
        ++outcome.accepted;
        accepted.push_back(*it.candidate->parsed);
      } else {
        ++outcome.rejected;
        for (RejectEntry& r : it.rejections) outcome.rejections.push_back(std::move(r));
      }
    }
    store_corpus(accepted, cfg_.out_corpus);
    std::vector<nlohmann::json> reject_records;
    reject_records.reserve(outcome.rejections.size());
    for (const RejectEntry& r : outcome.rejections)
      reject_records.push_back(
          {{"event_id", r.event_id}, {"stage", r.stage}, {"reason", r.reason}});
    write_jsonl(cfg_.reject_log, reject_records);
    return outcome;
  }

  // Runs one model call per live item that has no journaled reply yet, under
  // the gateway's concurrency cap; results are committed in item order.
  void run_llm_stage(std::vector<Item>& items, const std::string& stage,
                     const std::function<std::string(Item&)>& prompt_of) {
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!items[i].live()) continue;
      if (journal_lookup(items[i].id, stage)) continue;
      todo.push_back(i);
    }
    std::vector<std::string> replies(todo.size());
    std::vector<std::string> failures(todo.size());
    std::exception_ptr fatal;
    std::mutex fatal_mutex;

    const int cap = std::max(1, gateway_.config().max_concurrency);
    const std::size_t workers = std::min<std::size_t>(todo.size(), static_cast<std::size_t>(cap));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      while (true) {
        const std::size_t k = next.fetch_add(1);
        if (k >= todo.size()) return;
        Item& it = items[todo[k]];
        try {
          const std::vector<llm::ChatMessage> messages = {
              llm::user_message(prompt_of(it))};
          replies[k] = gateway_.complete(messages, stage_params(stage)).text;
        } catch (const llm::GatewayError& e) {
          if (e.kind() == llm::GatewayErrorKind::auth ||
              e.kind() == llm::GatewayErrorKind::config) {
            std::lock_guard lock(fatal_mutex);
            if (!fatal) fatal = std::current_exception();
            return;
          }
          failures[k] = e.what();
        } catch (const std::exception& e) {
          failures[k] = e.what();
        }
      }
    };
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
      for (std::thread& t : pool) t.join();
    }
    if (fatal) std::rethrow_exception(fatal);

    for (std::size_t k = 0; k < todo.size(); ++k) {
      Item& it = items[todo[k]];
      if (!failures[k].empty()) {
        it.reject(stage, "gateway_error");  // not journaled; a resume retries it
      } else {
        journal_commit(it.id, stage, replies[k]);
      }
    }
  }

  static llm::SamplingParams stage_params(const std::string& stage) {
    llm::SamplingParams p;  // T = 1.0, top_p = 0.95
    p.max_tokens = stage == "generate" ? 1024 : 256;
    return p;
  }

  static std::string exclusivity_key(TimeInterval interval, const std::string& response) {
    return "exclusivity-" + std::to_string(interval.minutes()) + "-" + fnv1a_hex(response);
  }

  void load_journal() {
    if (cfg_.state_path.empty() || !std::filesystem::exists(cfg_.state_path)) return;
    for_each_jsonl(cfg_.state_path, [this](const nlohmann::json& j, std::size_t) {
      journal_[{j.at("event_id").get<std::string>(), j.at("stage").get<std::string>()}] =
          j.at("payload").get<std::string>();
    });
  }

  std::optional<std::string> journal_lookup(const std::string& event_id,
                                            const std::string& stage) const {
    const auto it = journal_.find({event_id, stage});
    if (it == journal_.end()) return std::nullopt;
    return it->second;
  }

  void journal_commit(const std::string& event_id, const std::string& stage,
                      const std::string& payload) {
    journal_[{event_id, stage}] = payload;
    if (cfg_.state_path.empty()) return;
    if (!writer_) writer_ = std::make_unique<JsonlWriter>(cfg_.state_path, /*append=*/true);
    writer_->write({{"event_id", event_id}, {"stage", stage}, {"payload", payload}});
  }

  PipelineConfig cfg_;
  llm::ChatClient& gateway_;
  TurnJudgeFn judge_;
  std::map<std::pair<std::string, std::string>, std::string> journal_;
  std::unique_ptr<JsonlWriter> writer_;
};

}  // namespace tempo::synth
