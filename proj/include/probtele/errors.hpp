// Copyright 2026 The probtele Authors
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

namespace probtele {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PROBTELE_DEFINE_ERROR(Name)     \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

PROBTELE_DEFINE_ERROR(InvalidArgument)
PROBTELE_DEFINE_ERROR(InvalidState)
PROBTELE_DEFINE_ERROR(InvalidUnitary)
PROBTELE_DEFINE_ERROR(InvalidBasis)
PROBTELE_DEFINE_ERROR(InvalidKrausSet)
PROBTELE_DEFINE_ERROR(InvalidDensityMatrix)
PROBTELE_DEFINE_ERROR(DegenerateOutcome)
PROBTELE_DEFINE_ERROR(InvalidChannel)
PROBTELE_DEFINE_ERROR(KnowledgeError)
PROBTELE_DEFINE_ERROR(InvalidConfig)
// A protocol run produced a result that contradicts one of its own invariants.
PROBTELE_DEFINE_ERROR(InvariantViolation)

#undef PROBTELE_DEFINE_ERROR

}  // namespace probtele
