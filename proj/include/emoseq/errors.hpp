/*
 * Copyright 2026 The emoseq Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emoseq {

// Base of every error raised by the library. The CLI maps subclasses onto
// process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch between matrix operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Class label, token id or element index outside its valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value, unknown key or violated precondition on a
// user-supplied setting.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed dataset rows, unreadable files, corrupt or incompatible model
// artifacts.
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or gradient.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Raised by load_model when the artifact carries a different format version.
class IncompatibleArtifactError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace emoseq
