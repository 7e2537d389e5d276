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

namespace tempo::synth {

// Hand-written demonstration dialogues (5 to 10 turns) fed one-shot into the
// dialogue generator to keep its output well-formed. Mirrored byte for byte
// under assets/demos/.

namespace demos {

inline constexpr std::string_view kDemo5Turns =
    R"DEMO(Narrative: After dinner, he took a shower before he went to bed.
Duration: 20 minutes

A: I finally got home. What a day!
B: It's eleven p.m. and you just got back home? It must be very tough day today.
A: Whooa Imma take a shower. I'm too tired.
B: Wash out all your fatigue with it.
[20 minutes later]
(delayed response)
A: I feel much better now! You didn't go to bed?
(instantaneous response)
A: How nice of you :) Give me a moment. brb)DEMO";

inline constexpr std::string_view kDemo6Turns =
    R"DEMO(Narrative: She has taken calculus class and she had a final exam.
Duration: 2 hours

A: Hey, what are you up to?
B: I'm gonna take the calculus final exam in 20 minutes. I feel so nervous.
A: You studied really hard, didn't you? I'm 100% sure you'll do well.
B: But the last two chapters were too difficult for me to understand.
A: That means others feel the same. Don't worry too much!
[2 hours later]
(delayed response)
B: It wasn't much harder than I expected. I hope I get a good grade.
(instantaneous response)
B: Thank you for cheering me up. I hope the exam is not that hard.)DEMO";

inline constexpr std::string_view kDemo7Turns =
    R"DEMO(Narrative: He enjoyed working out at the gym.
Duration: 1 hour 30 minutes

A: I'm going to the gym now. Wanna join me?
B: I don't feel like working out today. Sorry.
A: You don't feel good? What happened?
B: I played football so hard yesterday that I can't even walk right.
A: Okay, I understand. Maybe next time!
B: Enjoy your routine! I think I can make it tomorrow.
[2 hours later]
(delayed response)
A: I focused on my lower body today. Chest tomorrow?
(instantaneous response)
A: Gonna work out hard on my lower body. Chest tomorrow?)DEMO";

inline constexpr std::string_view kDemo8Turns =
    R"DEMO(Narrative: She had felt so tired that she went to bed right after the tv show.
Duration: 8 hours

A: Are you watching the saturday night live?
B: I'm watching it now but I'm too tired.
A: I didn't expect today's host is such a comedian lol
B: Yeah almost the end of the show. I feel like going to bed little bit early.
A: What made you so tired? You had any plan?
B: I went to an amusement park with my sister. We had a really good time there.
A: Oh I see. Think I should let you go. Sleep tight!
[8 hours later]
(delayed response)
B: Good morning. Did you sleep tight, too?
(instantaneous response)
B: Good night. I'll text you in the morning.)DEMO";

inline constexpr std::string_view kDemo9Turns =
    R"DEMO(Narrative: He took an intercity bus to get to his hometown.
Duration: 5 hours

A: What are you going to do on these holidays?
B: My parents and I usually have dinner together on the Eve.
A: Me too. So I'm heading to my town right now.
B: How do you get there? By bus or train?
A: I used to take trains, but I take an intercity bus for this time.
B: Why? the tickets' been already sold out?
A: Unfortunately yes... It will take little bit longer.
B: Have a nice trip though. Your family must be waiting for you.
[5 hours later]
(delayed response)
A: Finally I'm back at home! It took almost 5 hours.
(instantaneous response)
A: I'm gonna sleep all along in the bus. See you a few hours later.)DEMO";

inline constexpr std::string_view kDemo10Turns =
    R"DEMO(Narrative: She played the popular online game with her friends.
Duration: 30 minutes

A: Have you heard of the League of Legends?
B: Absolutely! I play it almost everyday with my classmates.
A: I've heard of, but I've never played if before.
B: We have a game soon. Wanna join us?
A: Isn't it a team game? I'm not a good gamer though.
B: It's not a big deal. They will welcome you.
A: Well, maybe next time. I need to play it by myself first.
B: How about getting tutorial with me after this? I'll teach you.
A: Sounds good. Enjoy your game with your teammates.
[30 minutes later]
(delayed response)
B: We won! The game was nip and tuck. We were so close to losing.
(instantaneous response)
B: I'll be back just after the game. Wish me a good luck!)DEMO";

}  // namespace demos

inline std::vector<std::string> builtin_demo_pool() {
  return {std::string(demos::kDemo5Turns), std::string(demos::kDemo6Turns),
          std::string(demos::kDemo7Turns), std::string(demos::kDemo8Turns),
          std::string(demos::kDemo9Turns), std::string(demos::kDemo10Turns)};
}

}  // namespace tempo::synth
