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

// Umbrella header.

#pragma once

#include "kgctx/concept.hpp"
#include "kgctx/datasets.hpp"
#include "kgctx/dictionary.hpp"
#include "kgctx/entity_linker.hpp"
#include "kgctx/errors.hpp"
#include "kgctx/example_builder.hpp"
#include "kgctx/io.hpp"
#include "kgctx/kg_store.hpp"
#include "kgctx/lemmatizer.hpp"
#include "kgctx/pipeline.hpp"
#include "kgctx/relation.hpp"
#include "kgctx/scorer.hpp"
#include "kgctx/text.hpp"
#include "kgctx/triple_selector.hpp"
