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

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace kgctx {

// The ten ConceptNet relations kept by the pipeline. Everything else is
// dropped at ingestion as a weak relation.
enum class RelationType : std::uint8_t {
  CausesDesire,
  HasProperty,
  CapableOf,
  PartOf,
  AtLocation,
  Desires,
  HasPrerequisite,
  HasSubevent,
  Antonym,
  Causes,
};

inline constexpr std::size_t kRelationCount = 10;

inline constexpr std::array<std::string_view, kRelationCount> kRelationNames = {
    "CausesDesire", "HasProperty",     "CapableOf",  "PartOf",  "AtLocation",
    "Desires",      "HasPrerequisite", "HasSubevent", "Antonym", "Causes",
};

inline std::string_view to_string(RelationType r) {
  return kRelationNames[static_cast<std::size_t>(r)];
}

// Accepts a bare relation name ("AtLocation") or a ConceptNet relation URI
// ("/r/AtLocation"). Returns nullopt for anything outside the whitelist.
inline std::optional<RelationType> parse_relation(std::string_view name) {
  if (name.starts_with("/r/")) name.remove_prefix(3);
  for (std::size_t i = 0; i < kRelationCount; ++i)
    if (name == kRelationNames[i]) return static_cast<RelationType>(i);
  return std::nullopt;
}

inline bool is_whitelisted(std::string_view name) {
  return parse_relation(name).has_value();
}

}  // namespace kgctx
