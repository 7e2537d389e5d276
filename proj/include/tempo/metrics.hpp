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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tempo/interval.hpp"
#include "tempo/jsonl.hpp"
#include "tempo/util.hpp"

namespace tempo::metrics {

/// Predicted vs. gold interval for one target turn.
struct TimingPrediction {
  std::string dialogue_id;
  int turn_index = 0;
  TimeInterval predicted;
  TimeInterval gold;

  friend bool operator==(const TimingPrediction&, const TimingPrediction&) = default;
};

/// Classification counts treat "delayed" (interval > 0) as the positive
/// class. Ratios with a zero denominator are reported as 0 with the matching
/// degenerate flag set. rmsle is sqrt(mean((ln(1+pred) - ln(1+gold))^2)) in
/// minutes.
struct TimingReport {
  long long tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double fpr = 0.0;
  double rmsle = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
  bool fpr_degenerate = false;
  bool rmsle_degenerate = false;
};

struct TimingReportOptions {
  // Restrict the regression to pairs whose gold turn is delayed.
  bool rmsle_delayed_only = false;
};

inline TimingReport timing_report(std::span<const TimingPrediction> preds,
                                  const TimingReportOptions& opts = {}) {
  if (preds.empty()) throw std::invalid_argument("timing_report: empty prediction list");

  TimingReport r;
  double sum = 0.0, comp = 0.0;  // Kahan, so aggregation order cannot matter
  long long rmsle_n = 0;
  for (const TimingPrediction& p : preds) {
    const bool gold_delayed = is_delayed(p.gold);
    const bool pred_delayed = is_delayed(p.predicted);
    if (gold_delayed && pred_delayed) ++r.tp;
    else if (!gold_delayed && pred_delayed) ++r.fp;
    else if (gold_delayed && !pred_delayed) ++r.fn;
    else ++r.tn;

    if (!opts.rmsle_delayed_only || gold_delayed) {
      const double diff = std::log1p(static_cast<double>(p.predicted.minutes())) -
                          std::log1p(static_cast<double>(p.gold.minutes()));
      const double y = diff * diff - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      ++rmsle_n;
    }
  }

  if (r.tp + r.fp > 0) r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  else r.precision_degenerate = true;
  if (r.tp + r.fn > 0) r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  else r.recall_degenerate = true;
  if (r.precision + r.recall > 0.0)
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  else r.f1_degenerate = true;
  if (r.fp + r.tn > 0) r.fpr = static_cast<double>(r.fp) / static_cast<double>(r.fp + r.tn);
  else r.fpr_degenerate = true;
  if (rmsle_n > 0) r.rmsle = std::sqrt(sum / static_cast<double>(rmsle_n));
  else r.rmsle_degenerate = true;
  return r;
}

/// Lowercase + whitespace split. All text metrics tokenize this way so the
/// numbers stay comparable across implementations.
inline std::vector<std::string> tokenize(std::string_view text) {
  return split_whitespace(to_lower(text));
}

namespace detail {

inline std::map<std::pair<std::string, std::string>, long long> bigram_counts(
    std::span<const std::string> toks) {
  std::map<std::pair<std::string, std::string>, long long> counts;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) ++counts[{toks[i], toks[i + 1]}];
  return counts;
}

inline std::map<std::string, long long> unigram_counts(std::span<const std::string> toks) {
  std::map<std::string, long long> counts;
  for (const std::string& t : toks) ++counts[t];
  return counts;
}

struct NgramStats {
  long long match1 = 0, total1 = 0;
  long long match2 = 0, total2 = 0;
  long long cand_len = 0, ref_len = 0;
};

inline NgramStats ngram_stats(std::span<const std::string> cand, std::span<const std::string> ref) {
  NgramStats s;
  s.cand_len = static_cast<long long>(cand.size());
  s.ref_len = static_cast<long long>(ref.size());
  s.total1 = static_cast<long long>(cand.size());
  s.total2 = cand.size() >= 2 ? static_cast<long long>(cand.size() - 1) : 0;

  const auto ref1 = unigram_counts(ref);
  for (const auto& [tok, n] : unigram_counts(cand)) {
    auto it = ref1.find(tok);
    if (it != ref1.end()) s.match1 += std::min(n, it->second);
  }
  const auto ref2 = bigram_counts(ref);
  for (const auto& [bg, n] : bigram_counts(cand)) {
    auto it = ref2.find(bg);
    if (it != ref2.end()) s.match2 += std::min(n, it->second);
  }
  return s;
}

inline double bleu2_from_stats(const NgramStats& s) {
  if (s.cand_len == 0) return 0.0;
  const double p1 = static_cast<double>(s.match1) / static_cast<double>(std::max<long long>(1, s.total1));
  const double p2 = static_cast<double>(s.match2) / static_cast<double>(std::max<long long>(1, s.total2));
  if (p1 <= 0.0 || p2 <= 0.0) return 0.0;  // no smoothing
  const double bp = std::exp(std::min(0.0, 1.0 - static_cast<double>(s.ref_len) /
                                               static_cast<double>(s.cand_len)));
  return bp * std::sqrt(p1 * p2);
}

inline long long lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<long long> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace detail

/// Sentence BLEU-2: geometric mean of clipped 1/2-gram precisions times the
/// brevity penalty exp(min(0, 1 - |ref|/|cand|)). A zero n-gram precision
/// yields 0; there is no smoothing.
inline double bleu2(std::span<const std::string> candidate, std::span<const std::string> reference) {
  return detail::bleu2_from_stats(detail::ngram_stats(candidate, reference));
}

/// ROUGE-L F-measure with beta = 1: P = LCS/|cand|, R = LCS/|ref|.
inline double rouge_l(std::span<const std::string> candidate,
                      std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const double lcs = static_cast<double>(detail::lcs_length(candidate, reference));
  const double p = lcs / static_cast<double>(candidate.size());
  const double r = lcs / static_cast<double>(reference.size());
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

struct TextPair {
  std::string candidate;
  std::string reference;
};

inline double mean_sentence_bleu2(std::span<const TextPair> pairs) {
  if (pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const TextPair& p : pairs) {
    const auto c = tokenize(p.candidate), r = tokenize(p.reference);
    sum += bleu2(c, r);
  }
  return sum / static_cast<double>(pairs.size());
}

/// Corpus BLEU-2: n-gram matches and totals pooled across pairs, brevity
/// penalty from pooled lengths.
inline double corpus_bleu2(std::span<const TextPair> pairs) {
  detail::NgramStats pooled;
  for (const TextPair& p : pairs) {
    const auto c = tokenize(p.candidate), r = tokenize(p.reference);
    const auto s = detail::ngram_stats(c, r);
    pooled.match1 += s.match1;
    pooled.total1 += s.total1;
    pooled.match2 += s.match2;
    pooled.total2 += s.total2;
    pooled.cand_len += s.cand_len;
    pooled.ref_len += s.ref_len;
  }
  return detail::bleu2_from_stats(pooled);
}

inline double mean_rouge_l(std::span<const TextPair> pairs) {
  if (pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const TextPair& p : pairs) {
    const auto c = tokenize(p.candidate), r = tokenize(p.reference);
    sum += rouge_l(c, r);
  }
  return sum / static_cast<double>(pairs.size());
}

/// Pluggable token-embedding contract. Implementations must be deterministic:
/// the same token list always embeds to the same vectors for a given provider
/// instance.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  // Returns one dimension()-sized vector per input token.
  virtual std::vector<std::vector<double>> embed(std::span<const std::string> tokens) = 0;
};

struct BertScoreResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

namespace detail {

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double greedy_match(const std::vector<std::vector<double>>& from,
                           const std::vector<std::vector<double>>& to) {
  if (from.empty() || to.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& f : from) {
    double best = -1.0;
    for (const auto& t : to) best = std::max(best, cosine(f, t));
    sum += best;
  }
  return sum / static_cast<double>(from.size());
}

}  // namespace detail

/// Greedy max-cosine matching of candidate tokens onto reference tokens
/// (precision) and the reverse (recall), combined harmonically. No idf
/// weighting, no baseline rescaling.
inline BertScoreResult bert_score(std::span<const std::string> candidate,
                                  std::span<const std::string> reference,
                                  EmbeddingProvider& provider) {
  if (provider.dimension() == 0)
    throw std::invalid_argument("bert_score: provider dimension must be > 0");
  BertScoreResult r;
  if (candidate.empty() || reference.empty()) return r;
  const auto cand_vecs = provider.embed(candidate);
  const auto ref_vecs = provider.embed(reference);
  r.precision = detail::greedy_match(cand_vecs, ref_vecs);
  r.recall = detail::greedy_match(ref_vecs, cand_vecs);
  if (r.precision + r.recall != 0.0) r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

/// One-hot embeddings over an explicit vocabulary; tokens outside it embed to
/// the zero vector. With a vocabulary covering both sides, bert_score reduces
/// to a bag-overlap measure.
class OneHotProvider final : public EmbeddingProvider {
 public:
  explicit OneHotProvider(std::vector<std::string> vocab) {
    for (std::size_t i = 0; i < vocab.size(); ++i) index_.emplace(std::move(vocab[i]), i);
  }

  std::size_t dimension() const override { return index_.empty() ? 1 : index_.size(); }

  std::vector<std::vector<double>> embed(std::span<const std::string> tokens) override {
    std::vector<std::vector<double>> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens) {
      std::vector<double> v(dimension(), 0.0);
      auto it = index_.find(t);
      if (it != index_.end()) v[it->second] = 1.0;
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::map<std::string, std::size_t> index_;
};

// Predictions file, one record per line:
//   {"dialogue_id": str, "turn_index": int, "predicted_minutes": int,
//    "gold_minutes": int, "candidate_text"?: str, "reference_text"?: str}

struct PredictionRecord {
  TimingPrediction timing;
  std::optional<std::string> candidate_text;
  std::optional<std::string> reference_text;
};

inline nlohmann::json prediction_to_json(const PredictionRecord& p) {
  nlohmann::json j;
  j["dialogue_id"] = p.timing.dialogue_id;
  j["turn_index"] = p.timing.turn_index;
  j["predicted_minutes"] = p.timing.predicted.minutes();
  j["gold_minutes"] = p.timing.gold.minutes();
  if (p.candidate_text) j["candidate_text"] = *p.candidate_text;
  if (p.reference_text) j["reference_text"] = *p.reference_text;
  return j;
}

inline std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  std::vector<PredictionRecord> out;
  for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t line) {
    PredictionRecord p;
    p.timing.dialogue_id = tempo::detail::require_field<std::string>(j, "dialogue_id", path, line);
    p.timing.turn_index = tempo::detail::require_field<int>(j, "turn_index", path, line);
    const long long pred =
        tempo::detail::require_field<long long>(j, "predicted_minutes", path, line);
    const long long gold = tempo::detail::require_field<long long>(j, "gold_minutes", path, line);
    if (pred < 0 || gold < 0) throw JsonlError(path, line, "minutes must be non-negative");
    p.timing.predicted = TimeInterval(pred);
    p.timing.gold = TimeInterval(gold);
    if (j.contains("candidate_text") && !j.at("candidate_text").is_null())
      p.candidate_text = tempo::detail::require_field<std::string>(j, "candidate_text", path, line);
    if (j.contains("reference_text") && !j.at("reference_text").is_null())
      p.reference_text = tempo::detail::require_field<std::string>(j, "reference_text", path, line);
    out.push_back(std::move(p));
  });
  return out;
}

inline void store_predictions(std::span<const PredictionRecord> preds,
                              const std::filesystem::path& path) {
  std::vector<nlohmann::json> records;
  records.reserve(preds.size());
  for (const PredictionRecord& p : preds) records.push_back(prediction_to_json(p));
  write_jsonl(path, records);
}

inline nlohmann::json timing_report_to_json(const TimingReport& r) {
  return {{"tp", r.tp},
          {"fp", r.fp},
          {"tn", r.tn},
          {"fn", r.fn},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"fpr", r.fpr},
          {"rmsle", r.rmsle},
          {"precision_degenerate", r.precision_degenerate},
          {"recall_degenerate", r.recall_degenerate},
          {"f1_degenerate", r.f1_degenerate},
          {"fpr_degenerate", r.fpr_degenerate},
          {"rmsle_degenerate", r.rmsle_degenerate}};
}

}  // namespace tempo::metrics
