// Copyright 2026 The pinas Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace pinas {

// Exit-code classes used by the command line: config errors map to 2,
// protocol errors to 3, io/format errors to 4.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public std::range_error {
 public:
  using std::range_error::range_error;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FormatError : public IoError {
 public:
  using IoError::IoError;
};

class ChannelError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class DisconnectError : public ChannelError {
 public:
  using ChannelError::ChannelError;
};

class TimeoutError : public ChannelError {
 public:
  using ChannelError::ChannelError;
};

class DesyncError : public ChannelError {
 public:
  using ChannelError::ChannelError;
};

// Correlated-randomness supply ran out before the protocol finished.
class ExhaustedError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// A single-use triple or pair was consumed twice.
class ReuseError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pinas
