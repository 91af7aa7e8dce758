// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A value failed one of its type invariants (hermiticity, trace, positivity, ...).
class InvariantError : public Error {
   public:
    using Error::Error;
};

/// Operands have incompatible dimensions.
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// An argument lies outside the domain of the operation (theta out of range, N > 4, ...).
class DomainError : public Error {
   public:
    using Error::Error;
};

/// Conditioning on an outcome whose probability is numerically zero.
class NullEventError : public Error {
   public:
    using Error::Error;
};

/// Two independent computational routes for the same quantity disagree beyond tolerance.
class ConsistencyError : public Error {
   public:
    using Error::Error;
};

/// Discretization cannot represent the requested object to the required accuracy.
class GridError : public Error {
   public:
    using Error::Error;
};

}  // namespace qmeas
