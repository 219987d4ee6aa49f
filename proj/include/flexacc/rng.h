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

#ifndef FLEXACC_RNG_H_
#define FLEXACC_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace flexacc {

// splitmix64 finalizer.
uint64_t Mix64(uint64_t z);

// Derives a child seed: h = Mix64(master); for each v: h = Mix64(h ^ v).
uint64_t SplitSeed(uint64_t master, std::initializer_list<uint64_t> path);

// A deterministic stream. Not thread-safe; use one stream per task.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform on the open interval (0,1), 53-bit resolution.
  double Uniform01();
  // Uniform integer in [0, n).
  int64_t UniformInt(int64_t n);
  // Laplace with mean 0 and the given scale.
  double Laplace(double scale);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace flexacc

#endif  // FLEXACC_RNG_H_
