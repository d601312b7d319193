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

// Model-input assembly. One (question, choice) pair renders as
//
//   [CLS] q c [SEP] e_q: d_q [SEP] e_c: d_c [SEP] triple [SEP] facts
//
// with the facts segment only present when the example ships retrieved
// facts, and an empty triple slot (separator retained) when selection found
// nothing. Everything is token-budgeted; the question/choice segment is the
// last thing truncation will touch.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgctx/datasets.hpp"
#include "kgctx/dictionary.hpp"
#include "kgctx/entity_linker.hpp"
#include "kgctx/text.hpp"
#include "kgctx/triple_selector.hpp"

namespace kgctx {

// A triple rendered as plain text, e.g. "bat is capable of fly".
struct TripleText {
  Triple triple;
  std::string text;
};

namespace detail {

// One surface template per whitelisted relation, indexed by RelationType.
inline constexpr std::array<std::string_view, kRelationCount> kRelationTemplates = {
    "causes desire for",   // CausesDesire
    "has property",        // HasProperty
    "is capable of",       // CapableOf
    "is part of",          // PartOf
    "is at location",      // AtLocation
    "desires",             // Desires
    "has prerequisite",    // HasPrerequisite
    "has subevent",        // HasSubevent
    "is the antonym of",   // Antonym
    "causes",              // Causes
};

}  // namespace detail

inline std::string_view relation_template(RelationType r) {
  return detail::kRelationTemplates[static_cast<std::size_t>(r)];
}

// "subject <relation template> object", with underscores restored to spaces.
inline TripleText verbalize_triple(const Triple& t) {
  std::string text = t.subject.surface();
  text += ' ';
  text += relation_template(t.relation);
  text += ' ';
  text += t.object.surface();
  return TripleText{t, std::move(text)};
}

enum class SegmentKind {
  QuestionChoice,
  QDescription,
  CDescription,
  Triple,
  Facts,
};

inline std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::QuestionChoice: return "question_choice";
    case SegmentKind::QDescription: return "q_description";
    case SegmentKind::CDescription: return "c_description";
    case SegmentKind::Triple: return "triple";
    case SegmentKind::Facts: return "facts";
  }
  return "question_choice";
}

inline std::optional<SegmentKind> parse_segment_kind(std::string_view s) {
  if (s == "question_choice") return SegmentKind::QuestionChoice;
  if (s == "q_description") return SegmentKind::QDescription;
  if (s == "c_description") return SegmentKind::CDescription;
  if (s == "triple") return SegmentKind::Triple;
  if (s == "facts") return SegmentKind::Facts;
  return std::nullopt;
}

struct Segment {
  SegmentKind kind = SegmentKind::QuestionChoice;
  std::string text;  // post-truncation content, no separator markers
};

struct AssembledInput {
  std::vector<Segment> segments;
  std::string rendered;
  std::size_t token_count = 0;
};

// Tokenizer hook. The default splits on whitespace; a subword tokenizer can
// be injected for parity with a real encoder, provided its tokens re-join
// with single spaces.
using Tokenizer = std::function<std::vector<std::string>(std::string_view)>;

struct BuildOptions {
  std::size_t max_tokens = 192;
  Tokenizer tokenizer;  // empty = whitespace tokenization
};

namespace detail {

inline std::vector<std::string> run_tokenizer(const Tokenizer& t, std::string_view s) {
  return t ? t(s) : text::whitespace_tokens(s);
}

}  // namespace detail

// Assembles the rendered input for one (example, choice) pair.
//
// Segment order is fixed. Over budget, tokens are dropped from segment tails
// in sacrifice order: facts, the longer description, the shorter one, then
// the triple. The question/choice segment is trimmed only in the degenerate
// case where it alone exceeds the budget (every other segment is already
// empty by then); the budget is a hard cap either way. Output is a pure
// function of the inputs, so repeated builds are byte-identical.
inline AssembledInput build_input(const QAExample& ex, std::size_t choice_index,
                                  const EntityLink& link, const SelectionResult& sel,
                                  const Description& d_q, const Description& d_c,
                                  const BuildOptions& opts = {}) {
  if (choice_index >= ex.choices.size()) throw IndexError("choice index out of range");

  auto tokens_of = [&](std::string_view s) { return detail::run_tokenizer(opts.tokenizer, s); };

  std::vector<std::string> qc_tokens = tokens_of(ex.question);
  {
    auto choice_tokens = tokens_of(ex.choices[choice_index].text);
    qc_tokens.insert(qc_tokens.end(), choice_tokens.begin(), choice_tokens.end());
  }
  std::vector<std::string> qd_tokens =
      tokens_of(link.question_entity.surface() + ": " + d_q.text);
  std::vector<std::string> cd_tokens =
      tokens_of(link.choice_entity.surface() + ": " + d_c.text);
  std::vector<std::string> triple_tokens;
  if (sel.chosen) triple_tokens = tokens_of(verbalize_triple(sel.chosen->triple).text);

  const bool has_facts = ex.facts.has_value() && !ex.facts->empty();
  std::vector<std::string> facts_tokens;
  if (has_facts) facts_tokens = tokens_of(text::join(*ex.facts, " "));

  // [CLS] plus one [SEP] per following segment; the triple separator stays
  // even when the triple slot is empty.
  const std::size_t overhead = 1 + 3 + (has_facts ? 1 : 0);
  std::size_t total = overhead + qc_tokens.size() + qd_tokens.size() + cd_tokens.size() +
                      triple_tokens.size() + facts_tokens.size();

  if (total > opts.max_tokens) {
    std::size_t over = total - opts.max_tokens;
    auto trim_tail = [&over](std::vector<std::string>& tokens) {
      const std::size_t cut = std::min(over, tokens.size());
      tokens.resize(tokens.size() - cut);
      over -= cut;
    };
    std::vector<std::string>* longer = &qd_tokens;
    std::vector<std::string>* shorter = &cd_tokens;
    if (cd_tokens.size() > qd_tokens.size()) std::swap(longer, shorter);
    trim_tail(facts_tokens);
    trim_tail(*longer);
    trim_tail(*shorter);
    trim_tail(triple_tokens);
    if (over > 0) trim_tail(qc_tokens);
  }

  AssembledInput out;
  out.segments.push_back({SegmentKind::QuestionChoice, text::join(qc_tokens, " ")});
  out.segments.push_back({SegmentKind::QDescription, text::join(qd_tokens, " ")});
  out.segments.push_back({SegmentKind::CDescription, text::join(cd_tokens, " ")});
  out.segments.push_back({SegmentKind::Triple, text::join(triple_tokens, " ")});
  if (has_facts) out.segments.push_back({SegmentKind::Facts, text::join(facts_tokens, " ")});

  std::vector<std::string> all;
  all.reserve(opts.max_tokens);
  all.emplace_back("[CLS]");
  auto append_segment = [&all](const std::vector<std::string>& tokens) {
    all.emplace_back("[SEP]");
    all.insert(all.end(), tokens.begin(), tokens.end());
  };
  all.insert(all.end(), qc_tokens.begin(), qc_tokens.end());
  append_segment(qd_tokens);
  append_segment(cd_tokens);
  append_segment(triple_tokens);
  if (has_facts) append_segment(facts_tokens);

  out.rendered = text::join(all, " ");
  out.token_count = all.size();
  return out;
}

}  // namespace kgctx
