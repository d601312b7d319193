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

// Rule-based English lemmatizer. This is a deliberately small approximation
// that a dictionary-lookup cascade needs, not a general-purpose stemmer; any
// heavier lemmatizer can be injected through the Lemmatizer hook where this
// one is used.

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "kgctx/text.hpp"

namespace kgctx {

// Phrase in, phrase out; words are space-separated.
using Lemmatizer = std::function<std::string(std::string_view phrase)>;

namespace detail {

// Stems produced by -ing/-ed stripping that need their silent e back or a
// doubled consonant undone.
inline const std::unordered_map<std::string_view, std::string_view>& stem_restorations() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      {"tak", "take"},   {"mak", "make"},   {"giv", "give"},  {"hav", "have"},
      {"com", "come"},   {"writ", "write"}, {"stor", "store"}, {"liv", "live"},
      {"mov", "move"},   {"bak", "bake"},   {"danc", "dance"}, {"driv", "drive"},
      {"rid", "ride"},   {"ris", "rise"},   {"shar", "share"},
      {"runn", "run"},   {"stopp", "stop"}, {"sitt", "sit"},  {"gett", "get"},
      {"putt", "put"},   {"swimm", "swim"}, {"plann", "plan"}, {"dropp", "drop"},
      {"begg", "beg"},   {"shopp", "shop"}, {"chopp", "chop"}, {"digg", "dig"},
  };
  return table;
}

inline bool has_vowel(std::string_view s) {
  for (char c : s)
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y') return true;
  return false;
}

// Default per-word rules, applied first-match-only:
//   -ies -> -y                       (carries -> carry)          [standalone]
//   -ses/-xes/-zes/-ches/-shes -> -es stripped (boxes -> box)    [standalone]
//   trailing -s stripped, len > 3    (cars -> car)               [standalone]
//   -ing/-ed stripped when the stem keeps a vowel, restoration table applied
//
// Plural rules only fire when the word stands alone: multi-word dictionary
// entries keep their conventional plurals ("taking notes" lemmatizes to
// "take notes", which is how the phrase is listed), while a standalone
// "cars" still reduces to "car".
inline std::string lemmatize_word(std::string_view w, bool standalone) {
  auto ends = [&](std::string_view suffix) { return w.ends_with(suffix); };

  if (standalone) {
    if (w.size() >= 5 && ends("ies")) return std::string(w.substr(0, w.size() - 3)) + "y";
    if (w.size() >= 4 && (ends("ses") || ends("xes") || ends("zes") || ends("ches") || ends("shes")))
      return std::string(w.substr(0, w.size() - 2));
    if (w.size() > 3 && ends("s") && !ends("ss") && !ends("us") && !ends("is"))
      return std::string(w.substr(0, w.size() - 1));
  }

  std::string_view stem;
  if (w.size() >= 6 && ends("ing") && !ends("thing")) {
    stem = w.substr(0, w.size() - 3);
  } else if (w.size() >= 5 && ends("ed") && !ends("eed")) {
    stem = w.substr(0, w.size() - 2);
  } else {
    return std::string(w);
  }
  if (stem.size() < 3 || !has_vowel(stem)) return std::string(w);  // string, speed, ...
  const auto& table = stem_restorations();
  if (auto it = table.find(stem); it != table.end()) return std::string(it->second);
  return std::string(stem);
}

}  // namespace detail

// Maps each word of a space-separated phrase to its lemma under the default
// rule set. Idempotent on its own outputs for regular vocabulary.
inline std::string lemmatize(std::string_view phrase) {
  auto words = text::split(text::trim(phrase), ' ');
  const bool standalone = words.size() == 1;
  std::string out;
  for (std::string_view w : words) {
    if (w.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += detail::lemmatize_word(w, standalone);
  }
  return out;
}

inline Lemmatizer default_lemmatizer() {
  return [](std::string_view phrase) { return lemmatize(phrase); };
}

}  // namespace kgctx
