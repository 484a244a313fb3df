// Copyright 2026 the dpsynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSYNTH_ERRORS_HPP
#define DPSYNTH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dpsynth {

// Error taxonomy mirrors the CLI exit codes: invalid input -> 2,
// resource limit -> 3, numeric failure -> 4.
class InvalidInputError : public std::runtime_error {
public:
  explicit InvalidInputError(const std::string &what)
      : std::runtime_error(what) {}
};

class NotFoundError : public InvalidInputError {
public:
  explicit NotFoundError(const std::string &what) : InvalidInputError(what) {}
};

class ResourceLimitError : public std::runtime_error {
public:
  explicit ResourceLimitError(const std::string &what)
      : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace dpsynth

#endif // DPSYNTH_ERRORS_HPP
