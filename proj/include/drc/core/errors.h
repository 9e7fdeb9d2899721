// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drc {

// Malformed text input; `offset` is the byte position where parsing stopped.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

// Well-formed input that violates a semantic rule (missing reference, bad range, ...).
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Binary framing violation (bad magic, truncation, inconsistent counts).
class FormatError : public std::runtime_error {
  public:
    FormatError(const std::string &what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

// Caller broke a documented precondition.
class ContractError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace drc
