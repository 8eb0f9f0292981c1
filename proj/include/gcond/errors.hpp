// Copyright 2026 The gcond Authors
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

namespace gcond {

/// Base of every numerical failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GCOND_DEFINE_ERROR(Name)                 \
  class Name : public Error {                    \
   public:                                       \
    explicit Name(const std::string& what)       \
        : Error(std::string(#Name ": ") + what) {} \
  }

GCOND_DEFINE_ERROR(NonConvergent);
GCOND_DEFINE_ERROR(Overflow);
GCOND_DEFINE_ERROR(DegenerateCondition);
GCOND_DEFINE_ERROR(PoleOnGrid);
GCOND_DEFINE_ERROR(Singular);
GCOND_DEFINE_ERROR(DivisionByZero);
GCOND_DEFINE_ERROR(PoleProximity);
GCOND_DEFINE_ERROR(SingularGram);
GCOND_DEFINE_ERROR(GridTooCoarse);
GCOND_DEFINE_ERROR(OriginNotInWindow);
GCOND_DEFINE_ERROR(ExteriorPointInsideWindow);
GCOND_DEFINE_ERROR(InsufficientSamples);
GCOND_DEFINE_ERROR(ConfigInvalid);

#undef GCOND_DEFINE_ERROR

}  // namespace gcond
