// Copyright 2026 The qtomo Authors
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

#include <cstdint>

namespace qtomo {

/// Arithmetic in GF(2^m), 1 <= m <= 4, elements stored as bit patterns of
/// polynomial-basis coefficients (bit i <-> x^i).
class GaloisField2 {
 public:
  /// Uses the primitive polynomials x+1, x^2+x+1, x^3+x+1, x^4+x+1.
  explicit GaloisField2(unsigned degree);

  unsigned degree() const { return degree_; }
  std::uint32_t order() const { return 1u << degree_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return a ^ b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  /// Absolute trace a + a^2 + ... + a^(2^(m-1)), which lies in GF(2).
  unsigned trace(std::uint32_t a) const;

 private:
  unsigned degree_;
  std::uint32_t modulus_;
};

}  // namespace qtomo
