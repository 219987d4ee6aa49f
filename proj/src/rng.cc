//
// Copyright 2026 The flexacc Authors.
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
//

#include "flexacc/rng.h"

#include <cmath>

namespace flexacc {

uint64_t Mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t SplitSeed(uint64_t master, std::initializer_list<uint64_t> path) {
  uint64_t h = Mix64(master);
  for (uint64_t v : path) h = Mix64(h ^ v);
  return h;
}

double RngStream::Uniform01() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

int64_t RngStream::UniformInt(int64_t n) {
  // Rejection on the top of the range keeps the draw exactly uniform.
  const uint64_t un = static_cast<uint64_t>(n);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return static_cast<int64_t>(v % un);
}

double RngStream::Laplace(double scale) {
  const double u = Uniform01() - 0.5;
  return u < 0 ? scale * std::log1p(2 * u) : -scale * std::log1p(-2 * u);
}

}  // namespace flexacc
