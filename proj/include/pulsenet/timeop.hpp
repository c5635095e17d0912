// Copyright 2026 The pulsenet Authors
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

#include <functional>
#include <vector>

#include "pulsenet/qcore.hpp"

namespace pulsenet {

/// Scalar time function; an empty Coefficient means the constant 1.
using Coefficient = std::function<cplx(double)>;

struct OperatorTerm {
  Coefficient coefficient;
  Operator op;

  cplx value(double t) const { return coefficient ? coefficient(t) : cplx(1.0); }
};

/// sum_k c_k(t) A_k with constant operators A_k on one layout.
class TimeDependentOperator {
 public:
  TimeDependentOperator() = default;
  explicit TimeDependentOperator(SpaceLayout layout) : layout_(std::move(layout)) {}
  TimeDependentOperator(const Operator& constant);  // NOLINT: implicit lift is intended

  void add(Coefficient c, Operator op);
  void add(Operator op) { add(Coefficient{}, std::move(op)); }
  /// Adds c A + conj(c) A^dagger.
  void add_with_hc(Coefficient c, const Operator& op);

  Operator at(double t) const;
  TimeDependentOperator adjoint() const;
  TimeDependentOperator restricted_to(const SpaceLayout& target) const;

  const SpaceLayout& layout() const { return layout_; }
  const std::vector<OperatorTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  TimeDependentOperator& operator+=(const TimeDependentOperator& other);
  friend TimeDependentOperator operator+(TimeDependentOperator a, const TimeDependentOperator& b) {
    return a += b;
  }
  friend TimeDependentOperator operator*(cplx s, const TimeDependentOperator& a);
  /// Term-by-term product; coefficients multiply.
  friend TimeDependentOperator operator*(const TimeDependentOperator& a, const TimeDependentOperator& b);

 private:
  SpaceLayout layout_;
  std::vector<OperatorTerm> terms_;
};

/// Coefficient helpers.
Coefficient conj(const Coefficient& c);
Coefficient times(const Coefficient& a, const Coefficient& b);
Coefficient scaled(cplx s, const Coefficient& c);

}  // namespace pulsenet
