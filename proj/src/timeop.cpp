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

#include "pulsenet/timeop.hpp"

#include "pulsenet/errors.hpp"

namespace pulsenet {

Coefficient conj(const Coefficient& c) {
  if (!c) return {};
  return [c](double t) { return std::conj(c(t)); };
}

Coefficient times(const Coefficient& a, const Coefficient& b) {
  if (!a) return b;
  if (!b) return a;
  return [a, b](double t) { return a(t) * b(t); };
}

Coefficient scaled(cplx s, const Coefficient& c) {
  if (!c) return [s](double) { return s; };
  return [s, c](double t) { return s * c(t); };
}

TimeDependentOperator::TimeDependentOperator(const Operator& constant) : layout_(constant.layout()) {
  terms_.push_back({Coefficient{}, constant});
}

void TimeDependentOperator::add(Coefficient c, Operator op) {
  if (terms_.empty() && layout_.size() == 0) layout_ = op.layout();
  if (!(op.layout() == layout_)) throw LayoutMismatch("time-dependent operator terms must share a layout");
  if (op.matrix().nonZeros() == 0) return;
  terms_.push_back({std::move(c), std::move(op)});
}

void TimeDependentOperator::add_with_hc(Coefficient c, const Operator& op) {
  add(c, op);
  add(conj(c), op.adjoint());
}

Operator TimeDependentOperator::at(double t) const {
  Operator out = Operator::zero(layout_);
  for (const auto& term : terms_) out += term.value(t) * term.op;
  return out;
}

TimeDependentOperator TimeDependentOperator::adjoint() const {
  TimeDependentOperator out(layout_);
  for (const auto& term : terms_) out.terms_.push_back({conj(term.coefficient), term.op.adjoint()});
  return out;
}

TimeDependentOperator TimeDependentOperator::restricted_to(const SpaceLayout& target) const {
  TimeDependentOperator out(target);
  for (const auto& term : terms_) out.add(term.coefficient, term.op.restricted_to(target));
  return out;
}

TimeDependentOperator& TimeDependentOperator::operator+=(const TimeDependentOperator& other) {
  for (const auto& term : other.terms_) add(term.coefficient, term.op);
  return *this;
}

TimeDependentOperator operator*(cplx s, const TimeDependentOperator& a) {
  TimeDependentOperator out(a.layout_);
  for (const auto& term : a.terms_) out.terms_.push_back({scaled(s, term.coefficient), term.op});
  return out;
}

TimeDependentOperator operator*(const TimeDependentOperator& a, const TimeDependentOperator& b) {
  if (!(a.layout_ == b.layout_)) throw LayoutMismatch("time-dependent operator product: layouts differ");
  TimeDependentOperator out(a.layout_);
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) out.add(times(x.coefficient, y.coefficient), x.op * y.op);
  }
  return out;
}

}  // namespace pulsenet
