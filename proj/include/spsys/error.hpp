// Copyright 2026 The spsys Authors
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

namespace spsys {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or alphabet sizes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Mathematically invalid input: non-admissible q, stochastic rows that do
// not sum to one, a kernel that is not summable, ...
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed files or payloads.
class InputError : public Error {
 public:
  using Error::Error;
};

// A requested materialization would exceed the configured memory budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace spsys
