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
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tempo/duration.hpp"
#include "tempo/gateway.hpp"
#include "tempo/util.hpp"

namespace tempo::llm {

/// Deterministic stand-in for a chat endpoint: replies are a pure function of
/// the request body, keyed on the prompt kind and an FNV hash of its content.
/// Lets the whole pipeline (synthesis, judging, simulation) run offline and
/// byte-reproducibly. Not a language model; the texts are canned.
class OfflineBackend final : public Backend {
 public:
  explicit OfflineBackend(std::string model_name = "offline-mini")
      : model_name_(std::move(model_name)) {}

  BackendResult post_chat(const std::string& request_json) override {
    nlohmann::json req = nlohmann::json::parse(request_json, nullptr, false);
    if (req.is_discarded()) return {400, "", ""};
    std::string prompt;
    if (req.contains("messages")) {
      for (const nlohmann::json& m : req.at("messages")) {
        if (m.value("role", "") == "user") prompt = m.value("content", "");
      }
    }
    const std::string reply = reply_for(prompt);

    nlohmann::json res;
    res["model"] = model_name_;
    res["choices"] = nlohmann::json::array(
        {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", reply}}}}});
    return {200, res.dump(), ""};
  }

 private:
  static std::string last_labeled_line(std::string_view text, std::string_view label) {
    std::string out;
    for (std::string_view line : split_lines(text)) {
      std::string_view t = trim(line);
      if (t.size() > label.size() && t.substr(0, label.size()) == label)
        out = std::string(trim(t.substr(label.size())));
    }
    return out;
  }

  static std::string first_words(std::string_view text, std::size_t n) {
    const auto toks = split_whitespace(text);
    std::string out;
    for (std::size_t i = 0; i < std::min(n, toks.size()); ++i) {
      if (!out.empty()) out += ' ';
      std::string w = to_lower(toks[i]);
      while (!w.empty() && !std::isalnum(static_cast<unsigned char>(w.back()))) w.pop_back();
      out += w;
    }
    return out.empty() ? "the event" : out;
  }

  std::string reply_for(std::string_view prompt) const {
    const std::uint64_t h = fnv1a(prompt);

    if (prompt.find("estimate the typical duration") != std::string_view::npos) {
      static const char* kDurations[] = {"5 minutes", "10 minutes", "20 minutes", "45 minutes",
                                         "1 hour",    "2 hours",    "8 hours",    "12 hours"};
      const std::string statement = last_labeled_line(prompt, "Statement:");
      return "Key event: " + first_words(statement, 4) + "\nDuration: " + kDurations[h % 8];
    }

    if (prompt.find("Write a story regarding the event") != std::string_view::npos) {
      std::string subject = last_labeled_line(prompt, "Statement:");
      if (subject.empty()) subject = last_labeled_line(prompt, "Sentence:");
      if (subject.empty()) subject = "something happened";
      if (!subject.empty() && subject.back() == '.') subject.pop_back();
      return "As the day went on, " + subject + ".";
    }

    if (prompt.find("create an instant message dialogue") != std::string_view::npos)
      return generated_dialogue(prompt, h);

    if (prompt.find("rate the response on one metric") != std::string_view::npos ||
        prompt.find("rate the dialogue agent on one metric") != std::string_view::npos)
      return std::to_string(1 + h % 5);

    if (prompt.find("You are a user simulator") != std::string_view::npos) {
      static const char* kReplies[] = {
          "user: Oh nice, how did it go?",          "user: Glad to hear that! Tell me more.",
          "user: Sounds good, keep me posted.",     "user: That took a while, everything okay?",
          "user: Haha, I was waiting to hear back.", "user: Got it. What are you up to next?"};
      return kReplies[h % 6];
    }

    if (prompt.find("estimate a time interval needed until the next response") !=
        std::string_view::npos) {
      static const char* kIntervals[] = {"0 minutes", "0 minutes", "10 minutes", "30 minutes",
                                         "2 hours",   "8 hours"};
      return kIntervals[h % 6];
    }

    if (prompt.find("generate the next response") != std::string_view::npos) {
      static const char* kResponses[] = {
          "Just finished! That went better than expected.",
          "Okay, done with it. What did I miss?",
          "Back now. It took some effort but it's sorted.",
          "All wrapped up. Thanks for waiting!",
          "On it right now, give me a sec.",
          "Sure thing, starting now."};
      return kResponses[h % 6];
    }

    // Default: echo the prompt.
    return std::string(prompt);
  }

  std::string generated_dialogue(std::string_view prompt, std::uint64_t h) const {
    const std::string narrative = last_labeled_line(prompt, "Narrative:");
    std::string duration_text = last_labeled_line(prompt, "Duration:");
    if (duration_text.empty()) duration_text = "1 hour";

    static const char* kOpeners[] = {"Hey, are you busy right now?", "Guess what I'm about to do!",
                                     "Quick update from my side.", "You there? Something's up."};
    static const char* kAcks[] = {"Oh really? Tell me everything.", "No way, good luck!",
                                  "Sounds like a plan. I'll be around.",
                                  "Okay okay, let me know how it goes."};
    static const char* kFills[] = {"I'll need to focus for a bit, talk soon.",
                                   "Wish me luck, starting now.",
                                   "It might take a moment, don't go anywhere.",
                                   "Here goes nothing."};
    static const char* kCheers[] = {"You've got this!", "Take your time.",
                                    "I'll keep my phone close.", "Rooting for you!"};
    static const char* kDelayed[] = {"Finally done! That took a good chunk of my day.",
                                     "Whew, just wrapped it up. Feels great.",
                                     "Back at last. Everything went smoothly.",
                                     "Done and dusted. Sorry to keep you waiting!"};
    static const char* kInstant[] = {"About to start, I'll message you right after.",
                                     "Starting now, stay tuned!",
                                     "Not yet, just getting ready to begin.",
                                     "Give me a moment, kicking things off now."};

    // 2 or 4 context turns plus the delayed final keeps speakers alternating.
    const int extra_pairs = static_cast<int>(h % 2);
    std::string out;
    out += "A: ";
    out += kOpeners[h % 4];
    out += "\nB: ";
    out += kAcks[(h >> 8) % 4];
    out += "\nA: So, ";
    std::string event = narrative.empty() ? std::string("something is happening") : narrative;
    if (!event.empty() && event.back() == '.') event.pop_back();
    out += to_lower(first_words(event, 6));
    out += ", that's the situation.";
    out += "\nB: ";
    out += kCheers[(h >> 16) % 4];
    if (extra_pairs == 1) {
      out += "\nA: ";
      out += kFills[(h >> 24) % 4];
      out += "\nB: ";
      out += kCheers[(h >> 32) % 4];
    }
    out += "\n[";
    out += duration_text;
    out += " later]";
    out += "\n(delayed response)\nA: ";
    out += kDelayed[(h >> 40) % 4];
    out += "\n(instantaneous response)\nA: ";
    out += kInstant[(h >> 48) % 4];
    return out;
  }

  std::string model_name_;
};

}  // namespace tempo::llm
