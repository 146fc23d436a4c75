// Copyright 2026 The chanmix Authors
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

namespace chanmix {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or register layouts do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument lies outside its valid range, or an input violates a
/// mathematical precondition (non-Hermitian observable, non-CPTP channel...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The noisy basis cannot reproduce the target map to the requested accuracy.
class BasisIncompleteError : public Error {
 public:
  explicit BasisIncompleteError(double residual)
      : Error("noisy basis is incomplete for target: least-squares residual " +
              std::to_string(residual)),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// An enumeration or register size limit would be exceeded.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace chanmix
