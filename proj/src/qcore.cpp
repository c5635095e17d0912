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

#include "pulsenet/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "pulsenet/errors.hpp"

namespace pulsenet {

// -- SpaceLayout --------------------------------------------------------------

SpaceLayout::SpaceLayout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  std::set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.dim < 1) {
      throw InvalidDimension(fmt::format("subsystem '{}' has dimension {} < 1", s.label, s.dim));
    }
    if (!seen.insert(s.label).second) {
      throw LayoutMismatch(fmt::format("duplicate subsystem label '{}'", s.label));
    }
  }
  strides_.assign(subsystems_.size(), 1);
  product_dim_ = 1;
  for (int k = static_cast<int>(subsystems_.size()) - 1; k >= 0; --k) {
    strides_[k] = product_dim_;
    product_dim_ *= subsystems_[k].dim;
  }
}

SpaceLayout SpaceLayout::masked(const std::function<bool(const Occupation&)>& keep) const {
  auto kept = std::make_shared<std::vector<std::int64_t>>();
  Occupation occ(subsystems_.size(), 0);
  auto decode = [&](std::int64_t p) {
    for (std::size_t k = 0; k < subsystems_.size(); ++k) {
      occ[k] = static_cast<int>((p / strides_[k]) % subsystems_[k].dim);
    }
  };
  if (kept_) {
    for (std::int64_t p : *kept_) {
      decode(p);
      if (keep(occ)) kept->push_back(p);
    }
  } else {
    for (std::int64_t p = 0; p < product_dim_; ++p) {
      decode(p);
      if (keep(occ)) kept->push_back(p);
    }
  }
  SpaceLayout out(subsystems_);
  out.kept_ = std::move(kept);
  return out;
}

SpaceLayout SpaceLayout::with_excitation_cap(int max_excitations) const {
  return masked([max_excitations](const Occupation& occ) {
    return std::accumulate(occ.begin(), occ.end(), 0) <= max_excitations;
  });
}

int SpaceLayout::position(const std::string& label) const {
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    if (subsystems_[k].label == label) return static_cast<int>(k);
  }
  throw UnknownLabel(fmt::format("no subsystem '{}' in layout {}", label, describe()));
}

bool SpaceLayout::has(const std::string& label) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(),
                     [&](const Subsystem& s) { return s.label == label; });
}

std::int64_t SpaceLayout::dimension() const {
  return kept_ ? static_cast<std::int64_t>(kept_->size()) : product_dim_;
}

Occupation SpaceLayout::occupation(std::int64_t index) const {
  std::int64_t p = kept_ ? (*kept_)[index] : index;
  Occupation occ(subsystems_.size());
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    occ[k] = static_cast<int>((p / strides_[k]) % subsystems_[k].dim);
  }
  return occ;
}

std::int64_t SpaceLayout::product_index(const Occupation& occ) const {
  if (occ.size() != subsystems_.size()) return -1;
  std::int64_t p = 0;
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    if (occ[k] < 0 || occ[k] >= subsystems_[k].dim) return -1;
    p += occ[k] * strides_[k];
  }
  return p;
}

std::int64_t SpaceLayout::index_of(const Occupation& occ) const {
  std::int64_t p = product_index(occ);
  if (p < 0 || !kept_) return p;
  auto it = std::lower_bound(kept_->begin(), kept_->end(), p);
  if (it == kept_->end() || *it != p) return -1;
  return it - kept_->begin();
}

std::span<const std::int64_t> SpaceLayout::kept() const {
  if (!kept_) return {};
  return {kept_->data(), kept_->size()};
}

bool SpaceLayout::operator==(const SpaceLayout& other) const {
  if (subsystems_ != other.subsystems_) return false;
  if (kept_ == other.kept_) return true;
  if (!kept_ || !other.kept_) return false;
  return *kept_ == *other.kept_;
}

std::string SpaceLayout::describe() const {
  std::string s = "[";
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    if (k) s += ", ";
    s += fmt::format("{}:{}", subsystems_[k].label, subsystems_[k].dim);
  }
  s += "]";
  if (kept_) s += fmt::format(" masked to {} states", kept_->size());
  return s;
}

SpaceLayout local_layout(int dim, std::string label) {
  return SpaceLayout({Subsystem{std::move(label), dim}});
}

namespace {

// Maps an index of `from` to an index of `to` (both over the same subsystems).
std::int64_t translate(const SpaceLayout& from, const SpaceLayout& to, std::int64_t i) {
  std::int64_t p = from.is_masked() ? from.kept()[i] : i;
  if (!to.is_masked()) return p;
  auto kept = to.kept();
  auto it = std::lower_bound(kept.begin(), kept.end(), p);
  if (it == kept.end() || *it != p) return -1;
  return it - kept.begin();
}

void require_same_layout(const SpaceLayout& a, const SpaceLayout& b, const char* what) {
  if (!(a == b)) {
    throw LayoutMismatch(fmt::format("{}: layouts differ ({} vs {})", what, a.describe(), b.describe()));
  }
}

}  // namespace

// -- Operator -----------------------------------------------------------------

Operator::Operator(SpaceLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != layout_.dimension()) {
    throw InvalidDimension(fmt::format("operator of size {}x{} does not match layout {}",
                                       matrix_.rows(), matrix_.cols(), layout_.describe()));
  }
  matrix_.makeCompressed();
}

Operator Operator::identity(const SpaceLayout& layout) {
  Matrix m(layout.dimension(), layout.dimension());
  m.setIdentity();
  return Operator(layout, std::move(m));
}

Operator Operator::zero(const SpaceLayout& layout) {
  return Operator(layout, Matrix(layout.dimension(), layout.dimension()));
}

Operator Operator::from_dense(const SpaceLayout& layout, const Eigen::MatrixXcd& dense) {
  return Operator(layout, dense.sparseView(cplx(0.0), 0.0));
}

Operator Operator::adjoint() const { return Operator(layout_, Matrix(matrix_.adjoint())); }

Operator& Operator::operator+=(const Operator& other) {
  require_same_layout(layout_, other.layout_, "operator sum");
  matrix_ = Matrix(matrix_ + other.matrix_);
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same_layout(layout_, other.layout_, "operator difference");
  matrix_ = Matrix(matrix_ - other.matrix_);
  return *this;
}

Operator& Operator::operator*=(cplx scale) {
  matrix_ *= scale;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_layout(a.layout_, b.layout_, "operator product");
  Operator::Matrix m = a.matrix_ * b.matrix_;
  m.prune(cplx(0.0), 0.0);
  return Operator(a.layout_, std::move(m));
}

double max_abs_difference(const Operator& a, const Operator& b) {
  require_same_layout(a.layout_, b.layout_, "operator difference");
  Operator::Matrix d = a.matrix_ - b.matrix_;
  double worst = 0.0;
  for (int k = 0; k < d.outerSize(); ++k) {
    for (Operator::Matrix::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

Operator Operator::restricted_to(const SpaceLayout& target) const {
  if (target.subsystems() != layout_.subsystems()) {
    throw LayoutMismatch("restriction target has different subsystems");
  }
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (std::int64_t r = 0; r < target.dimension(); ++r) {
    std::int64_t rs = translate(target, layout_, r);
    if (rs < 0) throw LayoutMismatch("restriction target is not a sub-basis of the operator layout");
    for (Matrix::InnerIterator it(matrix_, rs); it; ++it) {
      std::int64_t c = translate(layout_, target, it.col());
      if (c >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  Matrix m(target.dimension(), target.dimension());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Operator(target, std::move(m));
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

// -- DensityMatrix ------------------------------------------------------------

DensityMatrix::DensityMatrix(SpaceLayout layout, Eigen::MatrixXcd matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != layout_.dimension()) {
    throw InvalidDimension(fmt::format("density matrix of size {}x{} does not match layout {}",
                                       matrix_.rows(), matrix_.cols(), layout_.describe()));
  }
}

DensityMatrix DensityMatrix::pure(const SpaceLayout& layout, const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd v = psi / psi.norm();
  return DensityMatrix(layout, v * v.adjoint());
}

double DensityMatrix::hermiticity_defect() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::MatrixXcd h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::restricted_to(const SpaceLayout& target) const {
  if (target.subsystems() != layout_.subsystems()) {
    throw LayoutMismatch("restriction target has different subsystems");
  }
  const auto n = target.dimension();
  std::vector<std::int64_t> map(n);
  for (std::int64_t i = 0; i < n; ++i) {
    map[i] = translate(target, layout_, i);
    if (map[i] < 0) throw LayoutMismatch("restriction target is not a sub-basis of the state layout");
  }
  Eigen::MatrixXcd m(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t i = 0; i < n; ++i) m(i, j) = matrix_(map[i], map[j]);
  }
  return DensityMatrix(target, std::move(m));
}

// -- operations ---------------------------------------------------------------

Operator annihilation(int dim) {
  if (dim < 2) throw InvalidDimension(fmt::format("annihilation operator needs dim >= 2, got {}", dim));
  std::vector<Eigen::Triplet<cplx>> t;
  for (int k = 1; k < dim; ++k) t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
  Operator::Matrix m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return Operator(local_layout(dim), std::move(m));
}

Operator creation(int dim) { return annihilation(dim).adjoint(); }

Operator number_operator(int dim) { return creation(dim) * annihilation(dim); }

Operator sigma_minus() { return annihilation(2); }

Operator embed(const Operator& local, const SpaceLayout& layout, const std::string& label) {
  const int k = layout.position(label);
  const int d = layout.subsystems()[k].dim;
  if (local.dimension() != d) {
    throw InvalidDimension(fmt::format("cannot embed a {}-dimensional operator on '{}' of dimension {}",
                                       local.dimension(), label, d));
  }
  Eigen::SparseMatrix<cplx, Eigen::ColMajor> cols(local.matrix());
  std::int64_t stride = 1;
  for (std::size_t j = k + 1; j < layout.size(); ++j) stride *= layout.subsystems()[j].dim;

  const SpaceLayout full = layout.unmasked();
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (std::int64_t s = 0; s < layout.dimension(); ++s) {
    std::int64_t p = layout.is_masked() ? layout.kept()[s] : s;
    int j = static_cast<int>((p / stride) % d);
    for (Eigen::SparseMatrix<cplx, Eigen::ColMajor>::InnerIterator it(cols, j); it; ++it) {
      std::int64_t target = p + (static_cast<std::int64_t>(it.row()) - j) * stride;
      std::int64_t t = translate(full, layout, target);
      if (t >= 0) triplets.emplace_back(t, s, it.value());
    }
  }
  Operator::Matrix m(layout.dimension(), layout.dimension());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Operator(layout, std::move(m));
}

Operator mode_superposition(std::span<const std::pair<cplx, Operator>> terms) {
  if (terms.empty()) throw LayoutMismatch("mode_superposition needs at least one term");
  Operator out = Operator::zero(terms.front().second.layout());
  for (const auto& [c, op] : terms) out += c * op;
  return out;
}

Operator mode_superposition(std::initializer_list<std::pair<cplx, Operator>> terms) {
  return mode_superposition(std::span<const std::pair<cplx, Operator>>(terms.begin(), terms.size()));
}

cplx expectation(const DensityMatrix& rho, const Operator& op) {
  require_same_layout(rho.layout(), op.layout(), "expectation");
  const auto& m = op.matrix();
  const auto& r = rho.matrix();
  cplx sum = 0.0;
  for (int i = 0; i < m.outerSize(); ++i) {
    for (Operator::Matrix::InnerIterator it(m, i); it; ++it) sum += it.value() * r(it.col(), i);
  }
  return sum;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  const SpaceLayout& layout = rho.layout();
  std::vector<bool> kept_flag(layout.size(), false);
  std::vector<Subsystem> kept_subs;
  for (const auto& label : keep) kept_flag[layout.position(label)] = true;
  for (std::size_t k = 0; k < layout.size(); ++k) {
    if (kept_flag[k]) kept_subs.push_back(layout.subsystems()[k]);
  }
  SpaceLayout reduced(kept_subs);

  // Group basis states by the occupation of the traced-out subsystems.
  std::map<std::int64_t, std::vector<std::pair<std::int64_t, std::int64_t>>> groups;
  for (std::int64_t s = 0; s < layout.dimension(); ++s) {
    Occupation occ = layout.occupation(s);
    std::int64_t traced_key = 0;
    std::int64_t kept_index = 0;
    for (std::size_t k = 0; k < layout.size(); ++k) {
      const int d = layout.subsystems()[k].dim;
      if (kept_flag[k]) {
        kept_index = kept_index * d + occ[k];
      } else {
        traced_key = traced_key * d + occ[k];
      }
    }
    groups[traced_key].emplace_back(s, kept_index);
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(reduced.dimension(), reduced.dimension());
  for (const auto& [key, members] : groups) {
    for (const auto& [si, ki] : members) {
      for (const auto& [sj, kj] : members) out(ki, kj) += rho.matrix()(si, sj);
    }
  }
  return DensityMatrix(reduced, std::move(out));
}

DensityMatrix prepare_pure(const SpaceLayout& layout,
                           const std::vector<std::pair<Occupation, cplx>>& amplitudes) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(layout.dimension());
  for (const auto& [occ, amp] : amplitudes) {
    std::int64_t i = layout.index_of(occ);
    if (i < 0) throw TruncationError("requested basis state lies outside the truncated basis");
    psi(i) += amp;
  }
  if (psi.norm() == 0.0) throw TruncationError("pure state has zero norm");
  return DensityMatrix::pure(layout, psi);
}

DensityMatrix prepare_fock(const SpaceLayout& layout, const std::string& label, int n) {
  const int k = layout.position(label);
  if (n < 0 || n >= layout.subsystems()[k].dim) {
    throw TruncationError(fmt::format("Fock state |{}> exceeds truncation of '{}' (dim {})", n, label,
                                      layout.subsystems()[k].dim));
  }
  Occupation occ(layout.size(), 0);
  occ[k] = n;
  return prepare_pure(layout, {{occ, 1.0}});
}

DensityMatrix prepare_binomial_split(const SpaceLayout& layout,
                                     const std::vector<std::string>& labels, int n) {
  if (labels.size() != 2) throw LayoutMismatch("binomial split needs exactly two mode labels");
  const int a = layout.position(labels[0]);
  const int b = layout.position(labels[1]);
  if (n < 0 || n >= layout.subsystems()[a].dim || n >= layout.subsystems()[b].dim) {
    throw TruncationError(fmt::format("binomial split of |{}> exceeds mode truncation", n));
  }
  std::vector<std::pair<Occupation, cplx>> amps;
  double log_binom = 0.0;  // log C(n, k)
  for (int k = 0; k <= n; ++k) {
    if (k > 0) log_binom += std::log(static_cast<double>(n - k + 1)) - std::log(static_cast<double>(k));
    Occupation occ(layout.size(), 0);
    occ[a] = k;
    occ[b] = n - k;
    amps.emplace_back(occ, std::exp(0.5 * (log_binom - n * std::log(2.0))));
  }
  return prepare_pure(layout, amps);
}

Operator basis_projector(const SpaceLayout& layout,
                         const std::function<bool(const Occupation&)>& select) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (std::int64_t s = 0; s < layout.dimension(); ++s) {
    if (select(layout.occupation(s))) t.emplace_back(s, s, 1.0);
  }
  Operator::Matrix m(layout.dimension(), layout.dimension());
  m.setFromTriplets(t.begin(), t.end());
  return Operator(layout, std::move(m));
}

}  // namespace pulsenet
