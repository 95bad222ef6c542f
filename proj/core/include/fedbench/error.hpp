// Copyright 2026 The FedBench Authors
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

#ifndef FEDBENCH_ERROR_HPP_
#define FEDBENCH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fedbench {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration, bad arguments, schema violations. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input files (CSV, YAML, JSON). Treated as validation failures.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Mathematical domain errors (inversion of zero, zero baseline, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Secure aggregation protocol violations: wrong round, duplicate
// submissions, insufficient or conflicting revealed shares. Exit code 4.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Session abort: too few survivors to unmask. Exit code 4.
class SessionAbortError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

}  // namespace fedbench

#endif  // FEDBENCH_ERROR_HPP_
