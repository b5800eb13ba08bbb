// Copyright 2026 The WDC Authors.
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

#ifndef WDC_ERROR_H_
#define WDC_ERROR_H_

#include <stdexcept>
#include <string>

namespace wdc {

// Base class for all errors raised by the library. Each subclass maps to one
// failure category so callers (and the CLI exit-code logic) can tell them
// apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension or channel-count mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents: bad magic, checksum, truncated record.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values or missing configuration inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Invalid argument value for an otherwise well-formed call.
class ValueError : public Error {
 public:
  using Error::Error;
};

// Corrupt or inconsistent bitstream. Carries the byte offset at which the
// problem was detected.
class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, size_t byte_offset)
      : Error(what + " (at byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  size_t byte_offset() const { return byte_offset_; }

 private:
  size_t byte_offset_;
};

}  // namespace wdc

#endif  // WDC_ERROR_H_
