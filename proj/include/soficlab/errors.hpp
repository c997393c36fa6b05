// Copyright 2026 The soficlab Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace soficlab {

// Malformed or out-of-contract input. The CLI maps this to exit code 2.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap was exceeded. The CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
 public:
  resource_error(const std::string& what, std::size_t cap)
      : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"),
        cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

// Iterative eigensolver gave up; carries the best Rayleigh quotient seen.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double best_bound)
      : std::runtime_error(what), best_bound_(best_bound) {}

  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_bound_;
};

}  // namespace soficlab
