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

#include <compare>
#include <stdexcept>
#include <string>

namespace tempo {

/// Elapsed whole minutes between two consecutive utterances. 0 means an
/// instant reply. The canonical surface form is "{minutes} minutes".
class TimeInterval {
 public:
  constexpr TimeInterval() = default;

  constexpr explicit TimeInterval(long long minutes) : minutes_(minutes) {
    if (minutes < 0) throw std::invalid_argument("TimeInterval: minutes must be non-negative");
  }

  constexpr long long minutes() const { return minutes_; }

  std::string canonical() const { return std::to_string(minutes_) + " minutes"; }

  friend constexpr auto operator<=>(const TimeInterval&, const TimeInterval&) = default;

 private:
  long long minutes_ = 0;
};

enum class Timing { instant, delayed };

/// Delayed iff the interval exceeds 0 minutes.
constexpr Timing classify_interval(TimeInterval i) {
  return i.minutes() > 0 ? Timing::delayed : Timing::instant;
}

constexpr bool is_delayed(TimeInterval i) { return classify_interval(i) == Timing::delayed; }

}  // namespace tempo
