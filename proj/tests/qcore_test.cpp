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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pulsenet/errors.hpp"
#include "pulsenet/qcore.hpp"

namespace pulsenet {
namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXcd random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> n;
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m + m.adjoint();
}

DensityMatrix random_state(const SpaceLayout& layout, std::mt19937& rng) {
  std::normal_distribution<double> n;
  const auto dim = layout.dimension();
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cplx(n(rng), n(rng));
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace();
  return DensityMatrix(layout, rho);
}

TEST(Ladder, MatrixElements) {
  const auto a = annihilation(4).dense();
  for (int k = 1; k < 4; ++k) EXPECT_DOUBLE_EQ(a(k - 1, k).real(), std::sqrt(k));
  EXPECT_EQ(annihilation(4).matrix().nonZeros(), 3);
  EXPECT_TRUE((creation(4).dense() - a.adjoint()).norm() == 0.0);
  const auto n = number_operator(4).dense();
  for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(n(k, k).real(), k);
}

TEST(Ladder, CommutatorIsIdentityBelowCutoff) {
  const int d = 6;
  const auto c = commutator(annihilation(d), creation(d)).dense();
  for (int k = 0; k < d - 1; ++k) EXPECT_NEAR(c(k, k).real(), 1.0, 1e-14);
  EXPECT_NEAR(c(d - 1, d - 1).real(), -(d - 1), 1e-14);
}

TEST(Ladder, RejectsTinyDimension) {
  EXPECT_THROW(annihilation(1), InvalidDimension);
  EXPECT_THROW(annihilation(0), InvalidDimension);
}

TEST(Layout, KroneckerOrderLeftmostSlowest) {
  const SpaceLayout layout({{"atom", 2}, {"mode", 3}});
  EXPECT_EQ(layout.dimension(), 6);
  const auto sm = embed(sigma_minus(), layout, "atom").dense();
  const auto a = embed(annihilation(3), layout, "mode").dense();
  EXPECT_NEAR((sm - kron(sigma_minus().dense(), Eigen::MatrixXcd::Identity(3, 3))).norm(), 0.0, 1e-15);
  EXPECT_NEAR((a - kron(Eigen::MatrixXcd::Identity(2, 2), annihilation(3).dense())).norm(), 0.0, 1e-15);
  EXPECT_EQ(layout.occupation(4), (Occupation{1, 1}));
  EXPECT_EQ(layout.index_of({1, 2}), 5);
}

TEST(Layout, UnknownLabelThrows) {
  const SpaceLayout layout({{"atom", 2}});
  EXPECT_THROW(layout.position("mode"), UnknownLabel);
  EXPECT_THROW(embed(annihilation(3), layout, "atom"), InvalidDimension);
}

TEST(Layout, ExcitationCapCountsStates) {
  // three modes of dimension n+1 with at most n excitations: C(n+3, 3) states
  for (int n : {1, 2, 5}) {
    const SpaceLayout capped = SpaceLayout({{"a", n + 1}, {"b", n + 1}, {"c", n + 1}}).with_excitation_cap(n);
    EXPECT_EQ(capped.dimension(), (n + 3) * (n + 2) * (n + 1) / 6);
    for (std::int64_t i = 0; i < capped.dimension(); ++i) {
      const auto occ = capped.occupation(i);
      EXPECT_LE(occ[0] + occ[1] + occ[2], n);
      EXPECT_EQ(capped.index_of(occ), i);
    }
    EXPECT_EQ(capped.index_of({n, n, n}), -1);
  }
}

TEST(Layout, MasksCompose) {
  const SpaceLayout base({{"a", 4}, {"b", 4}});
  const auto m = base.with_excitation_cap(3).masked([](const Occupation& o) { return o[0] >= 1; });
  for (std::int64_t i = 0; i < m.dimension(); ++i) {
    const auto o = m.occupation(i);
    EXPECT_GE(o[0], 1);
    EXPECT_LE(o[0] + o[1], 3);
  }
  EXPECT_EQ(m.dimension(), 6);
}

TEST(Operator, RestrictionIsProjection) {
  const SpaceLayout full({{"a", 3}, {"b", 3}});
  const SpaceLayout capped = full.with_excitation_cap(2);
  const Operator a = embed(annihilation(3), full, "a");
  const Operator b = embed(annihilation(3), full, "b");
  const Operator hop = a.adjoint() * b;
  const Operator r = hop.restricted_to(capped);
  EXPECT_EQ(r.dimension(), capped.dimension());
  // hopping conserves excitations, so restricting commutes with multiplication
  const Operator r2 = (hop * hop.adjoint()).restricted_to(capped);
  EXPECT_LT(max_abs_difference(r2, r * r.adjoint()), 1e-14);
}

TEST(Operator, AlgebraMatchesDense) {
  std::mt19937 rng(7);
  const SpaceLayout layout({{"x", 3}, {"y", 2}});
  const auto da = random_hermitian(6, rng), db = random_hermitian(6, rng);
  const auto a = Operator::from_dense(layout, da), b = Operator::from_dense(layout, db);
  EXPECT_NEAR(((a * b).dense() - da * db).norm(), 0.0, 1e-12);
  EXPECT_NEAR(((a + cplx(0, 2) * b).dense() - (da + cplx(0, 2) * db)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((commutator(a, b).dense() - (da * db - db * da)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((Operator::identity(layout).dense() - Eigen::MatrixXcd::Identity(6, 6)).norm(), 0.0, 0.0);
}

TEST(Operator, LayoutMismatchThrows) {
  const auto a = Operator::identity(SpaceLayout({{"x", 2}}));
  const auto b = Operator::identity(SpaceLayout({{"x", 3}}));
  EXPECT_THROW(a + b, LayoutMismatch);
  EXPECT_THROW(a * b, LayoutMismatch);
}

TEST(Superposition, CombinesModes) {
  const SpaceLayout layout({{"a", 3}, {"b", 3}});
  const Operator a = embed(annihilation(3), layout, "a");
  const Operator b = embed(annihilation(3), layout, "b");
  const double s = 1.0 / std::sqrt(2.0);
  const Operator c = mode_superposition({{s, a}, {s, b}});
  EXPECT_LT(max_abs_difference(c, s * a + s * b), 1e-15);
}

TEST(Expectation, HermitianGivesRealValues) {
  std::mt19937 rng(11);
  const SpaceLayout layout({{"q", 2}, {"m", 3}});
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_state(layout, rng);
    const auto h = Operator::from_dense(layout, random_hermitian(6, rng));
    EXPECT_NEAR(expectation(rho, h).imag(), 0.0, 1e-12);
    EXPECT_NEAR(expectation(rho, Operator::identity(layout)).real(), 1.0, 1e-12);
    EXPECT_GE(rho.min_eigenvalue(), -1e-12);
    EXPECT_LT(rho.hermiticity_defect(), 1e-14);
  }
}

TEST(PartialTrace, ProductStateFactorizes) {
  std::mt19937 rng(3);
  const SpaceLayout la({{"a", 2}}), lb({{"b", 3}});
  const auto ra = random_state(la, rng), rb = random_state(lb, rng);
  const SpaceLayout joint({{"a", 2}, {"b", 3}});
  const DensityMatrix rho(joint, kron(ra.matrix(), rb.matrix()));
  EXPECT_NEAR((partial_trace(rho, {"a"}).matrix() - ra.matrix()).norm(), 0.0, 1e-13);
  EXPECT_NEAR((partial_trace(rho, {"b"}).matrix() - rb.matrix()).norm(), 0.0, 1e-13);
}

TEST(PartialTrace, PreservesTraceOnRandomStates) {
  std::mt19937 rng(5);
  const SpaceLayout layout({{"a", 2}, {"b", 3}, {"c", 2}});
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = random_state(layout, rng);
    for (const auto& keep : std::vector<std::vector<std::string>>{{"a"}, {"b", "c"}, {"a", "c"}}) {
      EXPECT_NEAR(partial_trace(rho, keep).trace().real(), 1.0, 1e-12);
    }
  }
}

TEST(States, FockState) {
  const SpaceLayout layout({{"atom", 2}, {"mode", 5}});
  const auto rho = prepare_fock(layout, "mode", 3);
  EXPECT_NEAR(expectation(rho, embed(number_operator(5), layout, "mode")).real(), 3.0, 1e-14);
  EXPECT_THROW(prepare_fock(layout, "mode", 5), TruncationError);
}

TEST(States, BinomialSplitHasHalfThePhotonsPerMode) {
  const int n = 6;
  const SpaceLayout layout = SpaceLayout({{"x", n + 1}, {"y", n + 1}}).with_excitation_cap(n);
  const auto rho = prepare_binomial_split(layout, {"x", "y"}, n);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
  const Operator nx = embed(number_operator(n + 1), layout.unmasked(), "x").restricted_to(layout);
  const Operator ny = embed(number_operator(n + 1), layout.unmasked(), "y").restricted_to(layout);
  EXPECT_NEAR(expectation(rho, nx).real(), n / 2.0, 1e-13);
  EXPECT_NEAR(expectation(rho, ny).real(), n / 2.0, 1e-13);
  // variance of a binomial(n, 1/2) count
  EXPECT_NEAR(expectation(rho, nx * nx).real() - n * n / 4.0, n / 4.0, 1e-12);
}

TEST(States, BasisProjector) {
  const SpaceLayout layout({{"a", 3}, {"b", 3}});
  const Operator p = basis_projector(layout, [](const Occupation& o) { return o[0] + o[1] == 2; });
  EXPECT_NEAR(p.dense().trace().real(), 3.0, 0.0);
  EXPECT_LT(max_abs_difference(p * p, p), 1e-15);
}

}  // namespace
}  // namespace pulsenet
