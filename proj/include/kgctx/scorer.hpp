// Copyright 2026 The kgctx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scoring head over a pluggable encoder. Given per-token embeddings
// (x_0..x_m) for each choice, an attention parameter u pools them into one
// vector per choice:
//
//   a = softmax(u . x_i),   v = sum_i a_i x_i
//
// and a scoring parameter b turns the pooled vectors into per-choice logits
// v . b, normalized by a softmax across the choices. Cross-entropy against
// the answer index gives the training loss; head_gradients carries its exact
// analytic gradients and grad_check verifies them against central finite
// differences. Everything is pure given fixed parameters.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "kgctx/errors.hpp"
#include "kgctx/text.hpp"

namespace kgctx {

// Ordered token embeddings for one rendered input; all vectors share one
// dimension.
struct EmbeddingSequence {
  std::vector<std::vector<double>> vectors;

  std::size_t length() const { return vectors.size(); }
  std::size_t dim() const { return vectors.empty() ? 0 : vectors.front().size(); }
};

// Attention and scoring parameter vectors; both have the encoder dimension.
struct PoolingParams {
  std::vector<double> u;
  std::vector<double> b;
};

namespace detail {

// splitmix64: portable, bit-exact PRNG step.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

// uniform(-0.05, 0.05) init, reproducible bit-for-bit from the seed.
inline PoolingParams init_pooling_params(std::size_t dim, std::uint64_t seed) {
  PoolingParams p;
  p.u.resize(dim);
  p.b.resize(dim);
  std::uint64_t state = seed;
  for (double& x : p.u) x = detail::uniform01(state) * 0.1 - 0.05;
  for (double& x : p.b) x = detail::uniform01(state) * 0.1 - 0.05;
  return p;
}

// Max-subtracted softmax; rows always sum to 1 up to rounding.
inline std::vector<double> stable_softmax(std::span<const double> logits) {
  if (logits.empty()) throw DimError("softmax over an empty row");
  double mx = logits.front();
  for (double x : logits) mx = std::max(mx, x);
  std::vector<double> out(logits.size());
  double denom = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    denom += out[i];
  }
  for (double& x : out) x /= denom;
  return out;
}

struct PoolResult {
  std::vector<double> pooled;     // v, the attention-weighted sum
  std::vector<double> attention;  // a_i, one weight per input vector
};

// Attention pooling of a sequence with parameter u.
inline PoolResult attention_pool(const EmbeddingSequence& seq, std::span<const double> u) {
  if (seq.vectors.empty()) throw DimError("cannot pool an empty sequence");
  const std::size_t d = seq.dim();
  if (u.size() != d) throw DimError("attention parameter dimension mismatch");
  for (const auto& x : seq.vectors)
    if (x.size() != d) throw DimError("ragged embedding sequence");

  std::vector<double> scores(seq.length());
  for (std::size_t i = 0; i < seq.length(); ++i) scores[i] = detail::dot(u, seq.vectors[i]);

  PoolResult out;
  out.attention = stable_softmax(scores);
  out.pooled.assign(d, 0.0);
  for (std::size_t i = 0; i < seq.length(); ++i)
    for (std::size_t j = 0; j < d; ++j) out.pooled[j] += out.attention[i] * seq.vectors[i][j];
  return out;
}

// Per-choice logits v_k . b and their softmax across all choices.
struct ChoiceScores {
  std::vector<double> logits;
  std::vector<double> probabilities;
};

inline ChoiceScores score_choices(std::span<const std::vector<double>> pooled,
                                  std::span<const double> b) {
  if (pooled.size() < 2) throw DimError("need at least two choices to score");
  ChoiceScores out;
  out.logits.reserve(pooled.size());
  for (const auto& v : pooled) {
    if (v.size() != b.size()) throw DimError("scoring parameter dimension mismatch");
    out.logits.push_back(detail::dot(v, b));
  }
  out.probabilities = stable_softmax(out.logits);
  return out;
}

inline double cross_entropy(const ChoiceScores& scores, std::size_t answer_index) {
  if (answer_index >= scores.probabilities.size())
    throw IndexError("answer index out of range");
  return -std::log(scores.probabilities[answer_index]);
}

// Loss for one example: pool every choice sequence with u, score with b,
// cross-entropy at the answer.
inline double head_loss(const PoolingParams& params,
                        std::span<const EmbeddingSequence> choices, std::size_t answer_index) {
  std::vector<std::vector<double>> pooled;
  pooled.reserve(choices.size());
  for (const EmbeddingSequence& seq : choices)
    pooled.push_back(attention_pool(seq, params.u).pooled);
  return cross_entropy(score_choices(pooled, params.b), answer_index);
}

struct HeadGradients {
  std::vector<double> du;
  std::vector<double> db;
};

// Exact gradients of head_loss w.r.t. u and b.
//
// With p the choice softmax and g_k = p_k - [k == answer]:
//   dL/db = sum_k g_k v_k
//   dL/du = sum_k g_k sum_i a_i (b . x_i) (x_i - v_k)
inline HeadGradients head_gradients(const PoolingParams& params,
                                    std::span<const EmbeddingSequence> choices,
                                    std::size_t answer_index) {
  const std::size_t d = params.u.size();
  std::vector<PoolResult> pools;
  pools.reserve(choices.size());
  std::vector<std::vector<double>> pooled;
  pooled.reserve(choices.size());
  for (const EmbeddingSequence& seq : choices) {
    pools.push_back(attention_pool(seq, params.u));
    pooled.push_back(pools.back().pooled);
  }
  ChoiceScores scores = score_choices(pooled, params.b);
  if (answer_index >= scores.probabilities.size())
    throw IndexError("answer index out of range");

  HeadGradients grads;
  grads.du.assign(d, 0.0);
  grads.db.assign(d, 0.0);
  for (std::size_t k = 0; k < choices.size(); ++k) {
    const double g = scores.probabilities[k] - (k == answer_index ? 1.0 : 0.0);
    for (std::size_t j = 0; j < d; ++j) grads.db[j] += g * pools[k].pooled[j];

    const auto& seq = choices[k];
    for (std::size_t i = 0; i < seq.length(); ++i) {
      const double coeff =
          g * pools[k].attention[i] * detail::dot(params.b, seq.vectors[i]);
      for (std::size_t j = 0; j < d; ++j)
        grads.du[j] += coeff * (seq.vectors[i][j] - pools[k].pooled[j]);
    }
  }
  return grads;
}

// Compares head_gradients against central finite differences of head_loss.
// Returns the worst normalized error |analytic - numeric| / (1 + |analytic|
// + |numeric|) over every component of u and b. Deterministic for fixed
// inputs.
inline double grad_check(const PoolingParams& params,
                         std::span<const EmbeddingSequence> choices, std::size_t answer_index,
                         double step = 1e-5) {
  HeadGradients analytic = head_gradients(params, choices, answer_index);

  double worst = 0.0;
  auto probe = [&](std::vector<double> PoolingParams::* member, std::size_t j, double expected) {
    PoolingParams plus = params;
    PoolingParams minus = params;
    (plus.*member)[j] += step;
    (minus.*member)[j] -= step;
    const double numeric =
        (head_loss(plus, choices, answer_index) - head_loss(minus, choices, answer_index)) /
        (2.0 * step);
    const double err =
        std::abs(expected - numeric) / (1.0 + std::abs(expected) + std::abs(numeric));
    worst = std::max(worst, err);
  };
  for (std::size_t j = 0; j < params.u.size(); ++j) probe(&PoolingParams::u, j, analytic.du[j]);
  for (std::size_t j = 0; j < params.b.size(); ++j) probe(&PoolingParams::b, j, analytic.db[j]);
  return worst;
}

// Majority vote across per-model predictions for one example. Ties resolve
// to the lowest choice index; an empty vote set throws EmptyEnsemble.
inline std::size_t ensemble_vote(std::span<const std::size_t> predictions) {
  if (predictions.empty()) throw EmptyEnsemble("no predictions to vote on");
  std::map<std::size_t, std::size_t> tally;
  for (std::size_t p : predictions) ++tally[p];
  std::size_t best = predictions.front();
  std::size_t best_count = 0;
  for (const auto& [index, count] : tally) {
    if (count > best_count) {  // map iterates ascending, so ties keep the lowest index
      best = index;
      best_count = count;
    }
  }
  return best;
}

// Encoder port: rendered text in, one embedding per token out. The stub
// below stands in for a pretrained encoder during tests and desk-scale runs;
// an adapter for a real model implements the same interface.
class EncoderPort {
 public:
  virtual ~EncoderPort() = default;
  virtual EmbeddingSequence encode(std::string_view text) const = 0;
};

// Deterministic pseudorandom embeddings: each component is a pure function
// of (seed, token, position), uniform in [-1, 1). Same text and seed give an
// identical sequence on any platform.
class StubEncoder final : public EncoderPort {
 public:
  StubEncoder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {}

  EmbeddingSequence encode(std::string_view text) const override {
    auto tokens = text::whitespace_tokens(text);
    EmbeddingSequence seq;
    if (tokens.empty()) tokens.emplace_back();  // empty input still yields x_0
    seq.vectors.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::uint64_t state = seed_ ^ (detail::fnv1a(tokens[i]) + 0x9e3779b97f4a7c15ULL * (i + 1));
      std::vector<double> v(dim_);
      for (double& x : v) x = detail::uniform01(state) * 2.0 - 1.0;
      seq.vectors.push_back(std::move(v));
    }
    return seq;
  }

  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

}  // namespace kgctx
