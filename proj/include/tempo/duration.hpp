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

#include <optional>
#include <string>
#include <string_view>

#include "tempo/interval.hpp"
#include "tempo/util.hpp"

namespace tempo {

/// Grammar accepted by parse_duration:
///
///   duration := term (" " term){0,2}
///   term     := quantity " " unit
///   quantity := digits | "a" | "an"
///   unit     := second(s) | minute(s) | hour(s) | day(s)
///
/// Units must be strictly decreasing across terms ("1 hour 30 minutes").
/// Case-insensitive, surrounding whitespace ignored. Seconds floor to whole
/// minutes, so "30 seconds" normalizes to 0 minutes. Ranges ("2-6 hours"),
/// fractional quantities and units above days are rejected.
enum class DurationStyle { minutes_only, mixed };

namespace detail {

// rank: 0 seconds, 1 minutes, 2 hours, 3 days. -1 when unknown.
inline int unit_rank(std::string_view unit) {
  std::string u = to_lower(unit);
  if (u == "second" || u == "seconds") return 0;
  if (u == "minute" || u == "minutes") return 1;
  if (u == "hour" || u == "hours") return 2;
  if (u == "day" || u == "days") return 3;
  return -1;
}

inline std::optional<long long> parse_quantity(std::string_view tok) {
  if (iequals(tok, "a") || iequals(tok, "an")) return 1;
  if (tok.empty() || tok.size() > 12) return std::nullopt;
  long long v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

inline std::optional<TimeInterval> parse_duration_impl(std::string_view text, std::string* error) {
  auto fail = [error](std::string msg) -> std::optional<TimeInterval> {
    if (error) *error = std::move(msg);
    return std::nullopt;
  };
  const std::vector<std::string> toks = split_whitespace(text);
  if (toks.empty()) return fail("empty input");
  if (toks.size() % 2 != 0) return fail("dangling token: '" + toks.back() + "'");
  if (toks.size() > 6) return fail("too many terms");
  long long minutes = 0;
  long long seconds = 0;
  int prev_rank = 4;
  for (std::size_t i = 0; i < toks.size(); i += 2) {
    const auto qty = parse_quantity(toks[i]);
    if (!qty) return fail("non-integer quantity: '" + toks[i] + "'");
    const int rank = unit_rank(toks[i + 1]);
    if (rank < 0) return fail("unknown unit: '" + toks[i + 1] + "'");
    if (rank >= prev_rank) return fail("units must strictly decrease: '" + toks[i + 1] + "'");
    prev_rank = rank;
    switch (rank) {
      case 0: seconds += *qty; break;
      case 1: minutes += *qty; break;
      case 2: minutes += *qty * 60; break;
      case 3: minutes += *qty * 1440; break;
    }
  }
  return TimeInterval(minutes + seconds / 60);
}

}  // namespace detail

inline std::optional<TimeInterval> try_parse_duration(std::string_view text) {
  return detail::parse_duration_impl(text, nullptr);
}

inline TimeInterval parse_duration(std::string_view text) {
  std::string error;
  if (auto v = detail::parse_duration_impl(text, &error)) return *v;
  throw std::invalid_argument("parse_duration: " + error);
}

inline std::string format_duration(TimeInterval i, DurationStyle style) {
  if (style == DurationStyle::minutes_only) return i.canonical();
  const long long total = i.minutes();
  if (total == 0) return "0 minutes";
  const long long days = total / 1440;
  const long long hours = (total % 1440) / 60;
  const long long mins = total % 60;
  std::string out;
  auto append = [&out](long long n, const char* unit) {
    if (n == 0) return;
    if (!out.empty()) out += ' ';
    out += std::to_string(n);
    out += ' ';
    out += unit;
    if (n != 1) out += 's';
  };
  append(days, "day");
  append(hours, "hour");
  append(mins, "minute");
  return out;
}

/// Recognizes a whole line of the form "[<duration> later]" (whitespace
/// tolerant) and returns the parsed duration. Returns nullopt when the line is
/// not a delay marker; throws when the marker is present but its duration does
/// not parse.
inline std::optional<TimeInterval> extract_delay_marker(std::string_view line) {
  std::string_view s = trim(line);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
  std::string_view inner = trim(s.substr(1, s.size() - 2));
  static constexpr std::string_view kLater = "later";
  if (inner.size() < kLater.size() || !iequals(inner.substr(inner.size() - kLater.size()), kLater))
    return std::nullopt;
  std::string_view duration_text = trim(inner.substr(0, inner.size() - kLater.size()));
  if (duration_text.empty())
    throw std::invalid_argument("extract_delay_marker: marker without a duration");
  std::string error;
  if (auto v = detail::parse_duration_impl(duration_text, &error)) return v;
  throw std::invalid_argument("extract_delay_marker: " + error);
}

/// Finds the first duration expression inside free text, e.g. a model reply
/// "The estimated time interval is: 2 hours". Greedily extends into compound
/// terms. Returns nullopt when the text contains none.
inline std::optional<TimeInterval> scan_duration(std::string_view text) {
  const std::vector<std::string> toks = split_whitespace(text);
  auto strip = [](std::string_view t) {
    while (!t.empty() && !std::isalnum(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    while (!t.empty() && !std::isalnum(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    return t;
  };
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (!detail::parse_quantity(strip(toks[i]))) continue;
    if (detail::unit_rank(strip(toks[i + 1])) < 0) continue;
    std::string expr = std::string(strip(toks[i])) + " " + std::string(strip(toks[i + 1]));
    std::size_t j = i + 2;
    while (j + 1 < toks.size() && detail::parse_quantity(strip(toks[j])) &&
           detail::unit_rank(strip(toks[j + 1])) >= 0) {
      std::string extended =
          expr + " " + std::string(strip(toks[j])) + " " + std::string(strip(toks[j + 1]));
      if (!try_parse_duration(extended)) break;
      expr = std::move(extended);
      j += 2;
    }
    if (auto v = try_parse_duration(expr)) return v;
  }
  return std::nullopt;
}

}  // namespace tempo
