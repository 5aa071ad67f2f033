/*
 * Copyright 2026 The tenantsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
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
#include <string_view>
#include <vector>

namespace tenantsim {

enum class ErrorKind {
  ParseError,
  EmptyWorkload,
  DuplicateDnnId,
  NoLayers,
  InvalidField,
  FilterExceedsInput,
  ShapeInconsistent,
  EdgeOutOfRange,
  CycleInPrecedence,
  Overflow,
  OverlappingPartitions,
  PartitionOutOfBounds,
  LoadDuringCompute,
  TileTooLarge,
  FeedContention,
  TooManyTasks,
  MissingTableEntry,
  FunctionalCapExceeded,
  FunctionalMismatch,
  WorkloadMismatch,
  EmptyTrace,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind lets
/// callers (and the CLI exit-code mapping) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ValidationIssue {
  ErrorKind kind;
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

/// Thrown when a workload fails validation. Carries every violation found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);

  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

}  // namespace tenantsim
