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
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace tempo {

/// I/O or schema failure in a line-delimited file; line is 1-based (0 when the
/// failure is not tied to a line).
class JsonlError : public std::runtime_error {
 public:
  JsonlError(const std::filesystem::path& path, std::size_t line, const std::string& msg)
      : std::runtime_error(path.string() + (line ? ":" + std::to_string(line) : "") + ": " + msg),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Invokes fn(record, line_number) per non-empty line. Parse failures carry
/// the 1-based line number.
inline void for_each_jsonl(const std::filesystem::path& path,
                           const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw JsonlError(path, 0, "cannot open for reading");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw JsonlError(path, lineno, "invalid JSON");
    fn(j, lineno);
  }
}

inline std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::vector<nlohmann::json> out;
  for_each_jsonl(path, [&out](const nlohmann::json& j, std::size_t) { out.push_back(j); });
  return out;
}

inline void write_jsonl(const std::filesystem::path& path,
                        const std::vector<nlohmann::json>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw JsonlError(path, 0, "cannot open for writing");
  for (const nlohmann::json& j : records) out << j.dump() << '\n';
  if (!out) throw JsonlError(path, 0, "write failure");
}

/// Streaming writer for pipelines that commit records incrementally.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path, bool append = false)
      : path_(path), out_(path, append ? std::ios::app : std::ios::trunc) {
    if (!out_) throw JsonlError(path, 0, "cannot open for writing");
  }

  void write(const nlohmann::json& j) {
    out_ << j.dump() << '\n';
    out_.flush();
    if (!out_) throw JsonlError(path_, 0, "write failure");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

namespace detail {

template <typename T>
T require_field(const nlohmann::json& j, const char* key, const std::filesystem::path& path,
                std::size_t line) {
  if (!j.contains(key)) throw JsonlError(path, line, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw JsonlError(path, line, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace detail

}  // namespace tempo
