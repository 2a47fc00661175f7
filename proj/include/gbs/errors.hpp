// Copyright 2026 The gbsim authors
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

#ifndef GBSIM_ERRORS_HPP
#define GBSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gbs {

/// Error categories, mapped one-to-one onto CLI exit codes.
enum class ErrorKind : int {
    InvalidParameter = 2,
    ResourceLimit = 3,
    NumericalDegeneracy = 4,
    Io = 5,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

  private:
    ErrorKind kind_;
};

inline Error invalid_parameter(const std::string &message) {
    return Error(ErrorKind::InvalidParameter, message);
}
inline Error resource_limit(const std::string &message) {
    return Error(ErrorKind::ResourceLimit, message);
}
inline Error numerical_degeneracy(const std::string &message) {
    return Error(ErrorKind::NumericalDegeneracy, message);
}
inline Error io_error(const std::string &message) {
    return Error(ErrorKind::Io, message);
}

}  // namespace gbs

#endif
