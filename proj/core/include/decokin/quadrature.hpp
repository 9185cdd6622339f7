// Copyright 2026 the decokin authors
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

#include <vector>

namespace decokin::quad {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre nodes/weights on [-1, 1].
Rule gauss_legendre(int n);

// Gauss-Legendre mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

// Gauss-Hermite nodes/weights for weight exp(-x^2) on (-inf, inf).
Rule gauss_hermite(int n);

// Positive half of a 2n-point Gauss-Hermite rule with doubled weights:
// integrates g(x) exp(-x^2) over [0, inf) exactly for even-polynomial g.
Rule gauss_hermite_half(int n);

// Compensated (Kahan) summation in fixed index order.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace decokin::quad
