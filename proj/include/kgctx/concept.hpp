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

#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

#include "kgctx/errors.hpp"
#include "kgctx/text.hpp"

namespace kgctx {

// Normalized surface form of a knowledge-graph node: lowercase, words joined
// by single underscores, no URI prefix or language tag. Construct through
// normalize_concept(); a default-constructed ConceptId is empty and only
// valid as a placeholder.
class ConceptId {
 public:
  ConceptId() = default;

  const std::string& str() const { return text_; }
  bool empty() const { return text_.empty(); }

  // Surface form for rendering: underscores back to spaces.
  std::string surface() const { return text::replace_char(text_, '_', ' '); }

  friend auto operator<=>(const ConceptId&, const ConceptId&) = default;

 private:
  friend ConceptId normalize_concept(std::string_view raw);
  explicit ConceptId(std::string text) : text_(std::move(text)) {}

  std::string text_;
};

// Turns free text or a ConceptNet node URI into a ConceptId.
//
// "/c/en/take_notes"  -> take_notes
// "/c/en/bat/n"       -> bat          (sense suffix dropped)
// "Mona Lisa"         -> mona_lisa
//
// Rules: strip "/c/<lang>/" prefix and anything after the term segment,
// lowercase, map whitespace and hyphens to underscores, collapse underscore
// runs, trim edge underscores. Idempotent. Throws InvalidConcept when
// nothing remains.
inline ConceptId normalize_concept(std::string_view raw) {
  std::string_view s = text::trim(raw);
  if (s.empty()) throw InvalidConcept("empty concept string");

  std::string_view term = s;
  if (s.starts_with("/c/")) {
    // URI grammar: /c/<lang>/<term>[/<sense>...]
    auto segments = text::split(s, '/');
    // segments[0] is the empty lead, [1]="c", [2]=lang, [3]=term.
    if (segments.size() < 4 || segments[3].empty())
      throw InvalidConcept("concept URI has no term segment: " + std::string(raw));
    term = segments[3];
  }

  std::string out;
  out.reserve(term.size());
  for (char c : term) {
    if (text::is_space(c) || c == '-') c = '_';
    c = text::to_lower(c);
    if (c == '_' && (out.empty() || out.back() == '_')) continue;  // collapse runs
    out.push_back(c);
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (out.empty()) throw InvalidConcept("concept empty after normalization: " + std::string(raw));
  return ConceptId(std::move(out));
}

}  // namespace kgctx

template <>
struct std::hash<kgctx::ConceptId> {
  std::size_t operator()(const kgctx::ConceptId& c) const noexcept {
    return std::hash<std::string>{}(c.str());
  }
};
