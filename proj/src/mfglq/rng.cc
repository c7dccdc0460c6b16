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

#include "mfglq/rng.h"

#include <cmath>
#include <numbers>

namespace mfglq {

std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t StreamKey(std::uint64_t master_seed, std::uint64_t agent,
                        std::uint64_t replicate) {
  std::uint64_t key = Mix64(master_seed + 0x9E3779B97F4A7C15ULL);
  key = Mix64(key ^ ((agent + 1) * 0xD1B54A32D192ED03ULL));
  key = Mix64(key ^ ((replicate + 1) * 0x8CB92BA72F3D8DD7ULL));
  return key;
}

std::uint64_t NormalStream::NextU64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return Mix64(state_);
}

double NormalStream::NextUniform() {
  return static_cast<double>((NextU64() >> 11) + 1) * 0x1.0p-53;
}

double NormalStream::NextNormal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = NextUniform();
  const double u2 = NextUniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

void NormalStream::Fill(Eigen::Ref<Eigen::VectorXd> out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = NextNormal();
}

}  // namespace mfglq
