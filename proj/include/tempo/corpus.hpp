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

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "tempo/dialogue.hpp"
#include "tempo/jsonl.hpp"

namespace tempo {

// Corpus record schema, one JSON object per line:
//   {"id": str, "event_id": str|null,
//    "turns": [{"speaker": str, "minutes": int, "utterance": str}, ...],
//    "instant_variant": str|null}

inline nlohmann::json turn_to_json(const Turn& t) {
  return {{"speaker", t.speaker}, {"minutes", t.interval_before.minutes()},
          {"utterance", t.utterance}};
}

inline nlohmann::json dialogue_to_json(const Dialogue& d) {
  nlohmann::json turns = nlohmann::json::array();
  for (const Turn& t : d.turns) turns.push_back(turn_to_json(t));
  nlohmann::json j;
  j["id"] = d.id;
  j["event_id"] = d.event_id ? nlohmann::json(*d.event_id) : nlohmann::json(nullptr);
  j["turns"] = std::move(turns);
  j["instant_variant"] =
      d.instant_variant ? nlohmann::json(*d.instant_variant) : nlohmann::json(nullptr);
  return j;
}

inline Dialogue dialogue_from_json(const nlohmann::json& j,
                                   const std::filesystem::path& path = "<memory>",
                                   std::size_t line = 0) {
  Dialogue d;
  d.id = detail::require_field<std::string>(j, "id", path, line);
  if (j.contains("event_id") && !j.at("event_id").is_null())
    d.event_id = detail::require_field<std::string>(j, "event_id", path, line);
  if (!j.contains("turns")) throw JsonlError(path, line, "missing field 'turns'");
  if (!j.at("turns").is_array()) throw JsonlError(path, line, "field 'turns' must be an array");
  for (const nlohmann::json& tj : j.at("turns")) {
    Turn t;
    t.speaker = detail::require_field<std::string>(tj, "speaker", path, line);
    const long long minutes = detail::require_field<long long>(tj, "minutes", path, line);
    if (minutes < 0) throw JsonlError(path, line, "field 'minutes' must be non-negative");
    t.interval_before = TimeInterval(minutes);
    t.utterance = detail::require_field<std::string>(tj, "utterance", path, line);
    d.turns.push_back(std::move(t));
  }
  if (j.contains("instant_variant") && !j.at("instant_variant").is_null())
    d.instant_variant = detail::require_field<std::string>(j, "instant_variant", path, line);
  return d;
}

inline std::vector<Dialogue> load_corpus(const std::filesystem::path& path) {
  std::vector<Dialogue> out;
  for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t line) {
    out.push_back(dialogue_from_json(j, path, line));
  });
  return out;
}

inline void store_corpus(std::span<const Dialogue> dialogues, const std::filesystem::path& path) {
  std::vector<nlohmann::json> records;
  records.reserve(dialogues.size());
  for (const Dialogue& d : dialogues) records.push_back(dialogue_to_json(d));
  write_jsonl(path, records);
}

// Event records, used for synthesis intermediates.
//   {"id": str, "source": "mc-taco"|"atomic"|"other", "statement": str,
//    "key_event": str, "narrative": str, "minutes": int}

inline nlohmann::json event_to_json(const EventRecord& e) {
  return {{"id", e.id},
          {"source", std::string(to_string(e.source))},
          {"statement", e.statement},
          {"key_event", e.key_event},
          {"narrative", e.narrative},
          {"minutes", e.duration.minutes()}};
}

inline EventRecord event_from_json(const nlohmann::json& j,
                                   const std::filesystem::path& path = "<memory>",
                                   std::size_t line = 0) {
  EventRecord e;
  e.id = detail::require_field<std::string>(j, "id", path, line);
  e.source = event_source_from_string(detail::require_field<std::string>(j, "source", path, line));
  e.statement = detail::require_field<std::string>(j, "statement", path, line);
  e.key_event = detail::require_field<std::string>(j, "key_event", path, line);
  e.narrative = detail::require_field<std::string>(j, "narrative", path, line);
  e.duration = TimeInterval(detail::require_field<long long>(j, "minutes", path, line));
  return e;
}

// Synthesis inputs.

/// Tab-separated head/relation/tail, one triplet per line.
inline std::vector<EventTriplet> load_triplets_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JsonlError(path, 0, "cannot open for reading");
  std::vector<EventTriplet> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      throw JsonlError(path, lineno, "expected three tab-separated fields");
    EventTriplet t;
    t.head = std::string(trim(line.substr(0, t1)));
    t.relation = std::string(trim(line.substr(t1 + 1, t2 - t1 - 1)));
    t.tail = std::string(trim(line.substr(t2 + 1)));
    if (t.head.empty() || t.relation.empty() || t.tail.empty())
      throw JsonlError(path, lineno, "triplet fields must be non-empty");
    out.push_back(std::move(t));
  }
  return out;
}

struct DurationQuestionRow {
  std::string sentence;
  std::string question;
  std::string answer;  // ground-truth duration text, e.g. "1 hour"
};

/// Tab-separated sentence/question/answer rows (event-duration pairs).
inline std::vector<DurationQuestionRow> load_duration_rows_tsv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JsonlError(path, 0, "cannot open for reading");
  std::vector<DurationQuestionRow> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      throw JsonlError(path, lineno, "expected three tab-separated fields");
    DurationQuestionRow r;
    r.sentence = std::string(trim(line.substr(0, t1)));
    r.question = std::string(trim(line.substr(t1 + 1, t2 - t1 - 1)));
    r.answer = std::string(trim(line.substr(t2 + 1)));
    if (r.sentence.empty()) throw JsonlError(path, lineno, "sentence must be non-empty");
    out.push_back(std::move(r));
  }
  return out;
}

/// One name per line; blank lines and duplicates dropped.
inline std::vector<std::string> load_name_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JsonlError(path, 0, "cannot open for reading");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string name(trim(line));
    if (name.empty()) continue;
    bool dup = false;
    for (const std::string& n : out)
      if (n == name) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(name));
  }
  return out;
}

}  // namespace tempo
