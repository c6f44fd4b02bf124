// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hns {

// Error categories. Kept in sync with the hns_status codes of the C API.
enum class Status : int {
  Ok = 0,
  Io = 1,
  Parse = 2,
  Topology = 3,
  Parameterization = 4,
  Training = 5,
  Format = 6,
  Numeric = 7,
  InvalidArgument = 8,
  Internal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(Status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}

  Status status() const { return status_; }

 private:
  Status status_;
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(Status::Io, w) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(Status::Parse, w) {}
};

struct TopologyError : Error {
  explicit TopologyError(const std::string& w) : Error(Status::Topology, w) {}
};

struct ParameterizationError : Error {
  explicit ParameterizationError(const std::string& w)
      : Error(Status::Parameterization, w) {}
};

struct TrainingError : Error {
  explicit TrainingError(const std::string& w) : Error(Status::Training, w) {}
};

struct FormatError : Error {
  explicit FormatError(const std::string& w) : Error(Status::Format, w) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error(Status::Numeric, w) {}
};

struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& w)
      : Error(Status::InvalidArgument, w) {}
};

struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(Status::Internal, w) {}
};

}  // namespace hns
