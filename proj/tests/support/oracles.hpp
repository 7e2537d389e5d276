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

// Brute-force re-implementations kept independent of the library code paths
// they check. Do not share helpers with include/tempo.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tempo/metrics.hpp"

namespace tempo::test {

struct BruteTimingReport {
  long long tp = 0, fp = 0, tn = 0, fn = 0;
  long double precision = 0, recall = 0, f1 = 0, fpr = 0, rmsle = 0;
};

/// Counts from first principles (minutes comparisons, no classify helper) and
/// accumulates the squared log error in long double, naive order.
inline BruteTimingReport brute_timing_report(std::span<const metrics::TimingPrediction> preds,
                                             bool delayed_only = false) {
  BruteTimingReport r;
  long double sq_sum = 0.0L;
  long long n = 0;
  for (const metrics::TimingPrediction& p : preds) {
    const bool gold_pos = p.gold.minutes() > 0;
    const bool pred_pos = p.predicted.minutes() > 0;
    r.tp += (gold_pos && pred_pos) ? 1 : 0;
    r.fp += (!gold_pos && pred_pos) ? 1 : 0;
    r.fn += (gold_pos && !pred_pos) ? 1 : 0;
    r.tn += (!gold_pos && !pred_pos) ? 1 : 0;
    if (!delayed_only || gold_pos) {
      const long double d = std::log(1.0L + static_cast<long double>(p.predicted.minutes())) -
                            std::log(1.0L + static_cast<long double>(p.gold.minutes()));
      sq_sum += d * d;
      ++n;
    }
  }
  if (r.tp + r.fp > 0) r.precision = static_cast<long double>(r.tp) / (r.tp + r.fp);
  if (r.tp + r.fn > 0) r.recall = static_cast<long double>(r.tp) / (r.tp + r.fn);
  if (r.precision + r.recall > 0) r.f1 = 2.0L * r.precision * r.recall / (r.precision + r.recall);
  if (r.fp + r.tn > 0) r.fpr = static_cast<long double>(r.fp) / (r.fp + r.tn);
  if (n > 0) r.rmsle = std::sqrt(sq_sum / n);
  return r;
}

/// Recursive LCS with memoization; independent of the DP in metrics.hpp.
inline long long brute_lcs(std::span<const std::string> a, std::span<const std::string> b) {
  std::map<std::pair<std::size_t, std::size_t>, long long> memo;
  std::function<long long(std::size_t, std::size_t)> go = [&](std::size_t i,
                                                              std::size_t j) -> long long {
    if (i == a.size() || j == b.size()) return 0;
    const auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    long long best;
    if (a[i] == b[j]) best = 1 + go(i + 1, j + 1);
    else best = std::max(go(i + 1, j), go(i, j + 1));
    memo[key] = best;
    return best;
  };
  return go(0, 0);
}

/// Bag-overlap measure that bert_score must reduce to under one-hot
/// embeddings: a token scores 1 iff the other side contains it.
inline double brute_onehot_bert_f1(std::span<const std::string> cand,
                                   std::span<const std::string> ref) {
  if (cand.empty() || ref.empty()) return 0.0;
  auto contains = [](std::span<const std::string> side, const std::string& tok) {
    for (const std::string& s : side)
      if (s == tok) return true;
    return false;
  };
  double p = 0.0, r = 0.0;
  for (const std::string& c : cand) p += contains(ref, c) ? 1.0 : 0.0;
  for (const std::string& t : ref) r += contains(cand, t) ? 1.0 : 0.0;
  p /= static_cast<double>(cand.size());
  r /= static_cast<double>(ref.size());
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

}  // namespace tempo::test
