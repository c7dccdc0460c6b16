// Copyright 2026 The mfglq Authors
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

#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace mfglq {

// SplitMix64 output function.
std::uint64_t Mix64(std::uint64_t z);

// Key of the noise stream of one agent in one replicate. Agent 0 is the major
// player; minors are 1..N.
std::uint64_t StreamKey(std::uint64_t master_seed, std::uint64_t agent,
                        std::uint64_t replicate);

// SplitMix64 sequence with Box-Muller normals. Every agent owns one stream,
// so results do not depend on the order in which agents are advanced.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key) : state_(key) {}

  std::uint64_t NextU64();
  // Uniform on (0, 1].
  double NextUniform();
  double NextNormal();
  void Fill(Eigen::Ref<Eigen::VectorXd> out);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mfglq
