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

// Operator algebra over composite truncated Fock / qubit spaces.
//
// A SpaceLayout is an ordered list of labelled subsystems. The Kronecker
// ordering follows the list: the leftmost subsystem is the slowest index.
// A layout may additionally carry a basis mask, i.e. a sorted subset of the
// product basis; operators and states on a masked layout live on the kept
// states only (P A P). Masks are used for exact excitation caps and for
// photon-number windows.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pulsenet {

using cplx = std::complex<double>;
using Occupation = std::vector<int>;

struct Subsystem {
  std::string label;
  int dim = 1;

  bool operator==(const Subsystem&) const = default;
};

class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<Subsystem> subsystems);

  /// Layout restricted to product-basis states whose occupations satisfy `keep`.
  SpaceLayout masked(const std::function<bool(const Occupation&)>& keep) const;
  /// Keep only states with sum of occupations <= max_excitations.
  SpaceLayout with_excitation_cap(int max_excitations) const;

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  int position(const std::string& label) const;  // throws UnknownLabel
  bool has(const std::string& label) const;
  int local_dim(const std::string& label) const { return subsystems_[position(label)].dim; }

  std::int64_t product_dimension() const { return product_dim_; }
  std::int64_t dimension() const;
  bool is_masked() const { return static_cast<bool>(kept_); }

  Occupation occupation(std::int64_t index) const;
  /// Index of an occupation tuple, or -1 if it is not part of the (masked) basis.
  std::int64_t index_of(const Occupation& occ) const;
  std::int64_t product_index(const Occupation& occ) const;
  /// Product-basis indices of the kept states, ascending (empty span if unmasked).
  std::span<const std::int64_t> kept() const;

  /// Layout without a mask (same subsystems).
  SpaceLayout unmasked() const { return SpaceLayout(subsystems_); }

  bool operator==(const SpaceLayout& other) const;
  std::string describe() const;

 private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::int64_t> strides_;
  std::int64_t product_dim_ = 1;
  std::shared_ptr<const std::vector<std::int64_t>> kept_;
};

/// Single-subsystem layout of the given dimension; used for local operators.
SpaceLayout local_layout(int dim, std::string label = "local");

class Operator {
 public:
  using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  Operator() = default;
  Operator(SpaceLayout layout, Matrix matrix);

  static Operator identity(const SpaceLayout& layout);
  static Operator zero(const SpaceLayout& layout);
  static Operator from_dense(const SpaceLayout& layout, const Eigen::MatrixXcd& dense);

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  std::int64_t dimension() const { return matrix_.rows(); }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }

  Operator adjoint() const;
  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(cplx scale);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b);

  /// Largest absolute entry of A - B.
  friend double max_abs_difference(const Operator& a, const Operator& b);

  /// Restrict rows/columns to the states of `target`, which must be a masked
  /// sub-basis of this operator's layout.
  Operator restricted_to(const SpaceLayout& target) const;

 private:
  SpaceLayout layout_;
  Matrix matrix_;
};

Operator commutator(const Operator& a, const Operator& b);

class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(SpaceLayout layout, Eigen::MatrixXcd matrix);

  static DensityMatrix pure(const SpaceLayout& layout, const Eigen::VectorXcd& psi);

  const SpaceLayout& layout() const { return layout_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::MatrixXcd& matrix() { return matrix_; }
  std::int64_t dimension() const { return matrix_.rows(); }

  cplx trace() const { return matrix_.trace(); }
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  DensityMatrix restricted_to(const SpaceLayout& target) const;

 private:
  SpaceLayout layout_;
  Eigen::MatrixXcd matrix_;
};

// -- operations ---------------------------------------------------------------

/// Ladder operator with sqrt(k) at (k-1, k). Throws InvalidDimension for dim < 2.
Operator annihilation(int dim);
Operator creation(int dim);
Operator number_operator(int dim);
/// Two-level lowering operator |g><e| with |g> = index 0.
Operator sigma_minus();

/// Lift a single-subsystem operator onto `label` of `layout`.
Operator embed(const Operator& local, const SpaceLayout& layout, const std::string& label);

/// Linear combination of operators sharing one layout.
Operator mode_superposition(std::span<const std::pair<cplx, Operator>> terms);
Operator mode_superposition(std::initializer_list<std::pair<cplx, Operator>> terms);

cplx expectation(const DensityMatrix& rho, const Operator& op);

/// Reduced state on the kept labels (in layout order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);

/// |n> in `label`, vacuum / ground in all other subsystems.
DensityMatrix prepare_fock(const SpaceLayout& layout, const std::string& label, int n);

/// sum_k sqrt(C(n,k)/2^n) |k>_{labels[0]} |n-k>_{labels[1]}: a Fock state |n>
/// split on a 50/50 beam splitter, written in the two output modes.
DensityMatrix prepare_binomial_split(const SpaceLayout& layout,
                                     const std::vector<std::string>& labels, int n);

/// Pure state from amplitudes over occupation tuples (unspecified subsystems 0).
DensityMatrix prepare_pure(const SpaceLayout& layout,
                           const std::vector<std::pair<Occupation, cplx>>& amplitudes);

/// Diagonal projector onto the basis states selected by `select`.
Operator basis_projector(const SpaceLayout& layout,
                         const std::function<bool(const Occupation&)>& select);

}  // namespace pulsenet
