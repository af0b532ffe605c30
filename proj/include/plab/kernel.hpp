// Copyright 2026 The plab Authors.
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

#ifndef PLAB_KERNEL_HPP
#define PLAB_KERNEL_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "plab/rational.hpp"

namespace plab {

/// Conditional output law Q(h | theta) over finite Theta x H, stored
/// theta-major: coordinate theta * |H| + h.
template <class T>
class BasicKernel {
 public:
  BasicKernel(std::size_t thetas, std::size_t hyps, std::vector<T> q, double tol = 1e-12)
      : thetas_(thetas), hyps_(hyps), q_(std::move(q)) {
    if (q_.size() != thetas_ * hyps_) throw std::invalid_argument("Kernel: wrong coordinate count");
    for (std::size_t t = 0; t < thetas_; ++t) {
      T row = 0;
      for (std::size_t h = 0; h < hyps_; ++h) {
        const T& v = (*this)(t, h);
        if constexpr (std::is_same_v<T, Rational>) {
          if (v < 0) throw std::invalid_argument("Kernel: negative entry");
        } else {
          if (v < -tol) throw std::invalid_argument("Kernel: negative entry");
        }
        row += v;
      }
      if constexpr (std::is_same_v<T, Rational>) {
        if (row != 1) throw std::invalid_argument("Kernel: row does not sum to 1");
      } else {
        if (std::abs(row - 1.0) > tol) throw std::invalid_argument("Kernel: row does not sum to 1");
      }
    }
  }

  std::size_t thetas() const noexcept { return thetas_; }
  std::size_t hyps() const noexcept { return hyps_; }
  const T& operator()(std::size_t theta, std::size_t h) const { return q_[theta * hyps_ + h]; }
  const std::vector<T>& coordinates() const noexcept { return q_; }

 private:
  std::size_t thetas_;
  std::size_t hyps_;
  std::vector<T> q_;
};

using Kernel = BasicKernel<double>;
using RationalKernel = BasicKernel<Rational>;

}  // namespace plab

#endif  // PLAB_KERNEL_HPP
