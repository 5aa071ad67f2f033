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

#include "tenantsim/error.hpp"

namespace tenantsim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyWorkload: return "EmptyWorkload";
    case ErrorKind::DuplicateDnnId: return "DuplicateDnnId";
    case ErrorKind::NoLayers: return "NoLayers";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::FilterExceedsInput: return "FilterExceedsInput";
    case ErrorKind::ShapeInconsistent: return "ShapeInconsistent";
    case ErrorKind::EdgeOutOfRange: return "EdgeOutOfRange";
    case ErrorKind::CycleInPrecedence: return "CycleInPrecedence";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::OverlappingPartitions: return "OverlappingPartitions";
    case ErrorKind::PartitionOutOfBounds: return "PartitionOutOfBounds";
    case ErrorKind::LoadDuringCompute: return "LoadDuringCompute";
    case ErrorKind::TileTooLarge: return "TileTooLarge";
    case ErrorKind::FeedContention: return "FeedContention";
    case ErrorKind::TooManyTasks: return "TooManyTasks";
    case ErrorKind::MissingTableEntry: return "MissingTableEntry";
    case ErrorKind::FunctionalCapExceeded: return "FunctionalCapExceeded";
    case ErrorKind::FunctionalMismatch: return "FunctionalMismatch";
    case ErrorKind::WorkloadMismatch: return "WorkloadMismatch";
    case ErrorKind::EmptyTrace: return "EmptyTrace";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string summarize(const std::vector<ValidationIssue>& issues) {
  std::string out = "workload validation failed";
  for (const auto& issue : issues) {
    out += "\n  ";
    out += to_string(issue.kind);
    out += ": ";
    out += issue.message;
  }
  return out;
}

ErrorKind first_kind(const std::vector<ValidationIssue>& issues) {
  return issues.empty() ? ErrorKind::InvalidArgument : issues.front().kind;
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(first_kind(issues), summarize(issues)), issues_(std::move(issues)) {}

}  // namespace tenantsim
