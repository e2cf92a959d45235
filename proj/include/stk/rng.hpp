/*
 * Copyright 2026 The stkernels Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */
#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace stk {

/**
 * Philox4x64-10 counter-based generator. With key = (seed, 0) and the
 * counter starting at zero, the stream of 64-bit words is identical to
 * numpy.random.Philox(key=[seed, 0]).random_raw(): the counter is
 * incremented before each block of four words is produced.
 */
class Philox4x64 {
 public:
  static constexpr const char* kName = "philox4x64-10";

  explicit Philox4x64(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform in (0, 1), 53-bit resolution.
  double uniform();
  // Standard normal deviate (Box-Muller, both outputs used).
  double normal();

  // One Philox block for an explicit counter and key.
  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                            std::array<std::uint64_t, 2> key);

 private:
  std::array<std::uint64_t, 4> counter_{};
  std::array<std::uint64_t, 2> key_{};
  std::array<std::uint64_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace stk
