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

#include <stdexcept>
#include <string>

namespace kgctx {

// Base class for all kgctx errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A concept string is empty after normalization.
class InvalidConcept : public Error {
 public:
  using Error::Error;
};

// A file or stream could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// An index file has an unknown header or version.
class IndexFormatError : public Error {
 public:
  using Error::Error;
};

// score_candidates was called with no candidates.
class EmptyCandidates : public Error {
 public:
  using Error::Error;
};

// A choice text normalizes to nothing.
class InvalidChoice : public Error {
 public:
  using Error::Error;
};

// link_mined found no choice-role entity to work with.
class NoEntityFound : public Error {
 public:
  using Error::Error;
};

// More than 10% of a dataset's records are malformed.
class FatalFormat : public Error {
 public:
  using Error::Error;
};

// Vector dimensions disagree (or a sequence/choice list is too small).
class DimError : public Error {
 public:
  using Error::Error;
};

// An answer index is outside the choice list.
class IndexError : public Error {
 public:
  using Error::Error;
};

// ensemble_vote was called with zero predictions.
class EmptyEnsemble : public Error {
 public:
  using Error::Error;
};

}  // namespace kgctx
