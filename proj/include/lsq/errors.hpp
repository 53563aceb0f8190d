// Copyright 2026 The lsq Authors
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

namespace lsq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (range, shape, parity...).
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// A truncated Fock space was too small for the requested operation.
class CutoffInsufficient : public Error {
   public:
    CutoffInsufficient(const std::string& what, double leakage)
        : Error(what + " (measured leakage " + std::to_string(leakage) + ")"), leakage_(leakage) {}

    double leakage() const noexcept { return leakage_; }

   private:
    double leakage_;
};

/// An iteration failed to converge, or a result is numerically meaningless.
class NumericalError : public Error {
   public:
    using Error::Error;
};

/// File-system or parse failure on external data.
class IoError : public Error {
   public:
    using Error::Error;
};

}  // namespace lsq
