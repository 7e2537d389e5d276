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

// Crafted corruptions of a well-formed generator output. Each must be
// rejected with exactly one reason code.

#include <string>
#include <vector>

namespace tempo::test {

struct Corruption {
  std::string name;
  std::string raw;             // generator output (empty for estimation-stage cases)
  std::string estimate_reply;  // estimation-stage reply (empty for candidate cases)
  std::string expected_reason;
};

inline std::vector<Corruption> corruption_fixtures() {
  const std::string base_head =
      "A: I finally got home. What a day!\n"
      "B: It's eleven p.m. and you just got back home?\n"
      "A: Whooa Imma take a shower. I'm too tired.\n"
      "B: Wash out all your fatigue with it.\n";
  const std::string base_tail =
      "(delayed response)\n"
      "A: I feel much better now! You didn't go to bed?\n"
      "(instantaneous response)\n"
      "A: How nice of you :) Give me a moment. brb\n";

  std::vector<Corruption> out;

  out.push_back({"non_alternation",
                 "A: I finally got home. What a day!\n"
                 "A: Whooa Imma take a shower. I'm too tired.\n"
                 "B: Wash out all your fatigue with it.\n"
                 "[20 minutes later]\n" +
                     base_tail,
                 "", "non_alternating"});

  out.push_back({"missing_marker", base_head + base_tail, "", "missing_marker"});

  out.push_back({"duration_zero", base_head + "[30 seconds later]\n" + base_tail, "",
                 "duration_out_of_range"});

  out.push_back({"duration_over_cap", base_head + "[2 days later]\n" + base_tail, "",
                 "duration_out_of_range"});

  out.push_back({"empty_utterance",
                 "A: I finally got home. What a day!\n"
                 "B:\n"
                 "A: Whooa Imma take a shower. I'm too tired.\n"
                 "B: Wash out all your fatigue with it.\n"
                 "[20 minutes later]\n" +
                     base_tail,
                 "", "empty_utterance"});

  out.push_back({"reserved_token",
                 "A: I finally got home. What a day!\n"
                 "B: It's eleven p.m. <TIME> and you just got back home?\n"
                 "A: Whooa Imma take a shower. I'm too tired.\n"
                 "B: Wash out all your fatigue with it.\n"
                 "[20 minutes later]\n" +
                     base_tail,
                 "", "reserved_token"});

  out.push_back({"missing_duration_line", "",
                 "Key event: taking a shower\nIt usually does not take long.",
                 "missing_duration"});

  return out;
}

}  // namespace tempo::test
