// Copyright 2026 The qcrisk developers
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

#pragma once

#include <stdexcept>
#include <string>

namespace qcrisk {

/// Raised when a request would exceed the dense-simulation or enumeration
/// budget. Callers (notably the CLI) map this to a distinct exit code.
class SizeLimitError : public std::runtime_error {
  public:
    explicit SizeLimitError(const std::string &what) : std::runtime_error(what) {}
};

/// Raised on malformed run configurations and input files.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace qcrisk
