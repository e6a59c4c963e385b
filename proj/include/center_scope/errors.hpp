// Copyright 2026 The center_scope Authors
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

namespace center_scope {

// Bad input shape, mismatched conductors, singular matrices where a
// nonsingular one is required.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An internal consistency check failed. Indicates a bug or corrupted data
// rather than a user error.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input data that is well formed but mathematically inconsistent
// (e.g. global dimensions that disagree between objects).
class InconsistentData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace center_scope
