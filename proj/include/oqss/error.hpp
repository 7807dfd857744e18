/*
 * Copyright 2026 The oqss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace oqss {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
  public:
    using Error::Error;
};

/// Input size exceeds what an algorithm supports.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// A value failed a numerical validity check (e.g. non-symplectic transform).
class ValidityError : public Error {
  public:
    using Error::Error;
};

/// Zero vector, or a detection event of (numerically) zero probability.
class DegenerateError : public Error {
  public:
    using Error::Error;
};

class PlanningError : public Error {
  public:
    using Error::Error;
};

class SolverError : public Error {
  public:
    using Error::Error;
};

/// Forward re-simulation disagrees with the recorded backward solution.
class ConsistencyError : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace oqss
