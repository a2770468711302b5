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

#include "qtomo/galois.hpp"

#include "qtomo/error.hpp"

namespace qtomo {

GaloisField2::GaloisField2(unsigned degree) : degree_(degree), modulus_(0) {
  switch (degree) {
    case 1: modulus_ = 0b11; break;
    case 2: modulus_ = 0b111; break;
    case 3: modulus_ = 0b1011; break;
    case 4: modulus_ = 0b10011; break;
    default: throw InvalidArgument("GaloisField2: degree must be in 1..4");
  }
}

std::uint32_t GaloisField2::mul(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t product = 0;
  for (unsigned i = 0; i < degree_; ++i) {
    if (b & (1u << i)) product ^= a << i;
  }
  for (int bit = 2 * static_cast<int>(degree_) - 2; bit >= static_cast<int>(degree_); --bit) {
    if (product & (1u << bit)) product ^= modulus_ << (bit - static_cast<int>(degree_));
  }
  return product;
}

unsigned GaloisField2::trace(std::uint32_t a) const {
  std::uint32_t sum = 0;
  std::uint32_t power = a;
  for (unsigned i = 0; i < degree_; ++i) {
    sum ^= power;
    power = mul(power, power);
  }
  // sum is 0 or 1 for a valid field element
  return sum & 1u;
}

}  // namespace qtomo
