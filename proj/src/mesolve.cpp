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

#include "pulsenet/mesolve.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "pulsenet/errors.hpp"

namespace pulsenet {

namespace {

using SparseRM = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Dense = Eigen::MatrixXcd;
const cplx kI(0.0, 1.0);

// Coefficient of a compiled term: scale * v[first] * conj(v[second]).
struct CoefRef {
  int first = -1;   // -1: constant
  int second = -1;  // -1: absent
  cplx scale = 1.0;

  cplx operator()(const std::vector<cplx>& v) const {
    cplx c = scale;
    if (first >= 0) c *= v[first];
    if (second >= 0) c *= std::conj(v[second]);
    return c;
  }
};

struct GlobalTerm {
  CoefRef coef;
  const Operator::Matrix* matrix;
};

class UnionFind {
 public:
  explicit UnionFind(std::int64_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::int64_t find(std::int64_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  bool unite(std::int64_t a, std::int64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::int64_t> parent_;
};

// Sparse block of a time-dependent operator: pattern plus per-term value slots.
struct BlockOperator {
  int row_block = 0;
  int col_block = 0;
  int channel = -1;
  SparseRM matrix;
  struct Entry {
    int term;
    int position;
    cplx value;
  };
  std::vector<Entry> entries;

  void assemble(const std::vector<cplx>& term_values) {
    cplx* values = matrix.valuePtr();
    std::fill(values, values + matrix.nonZeros(), cplx(0.0));
    for (const auto& e : entries) values[e.position] += term_values[e.term] * e.value;
  }
};

struct Partition {
  std::vector<std::vector<std::int64_t>> blocks;
  std::vector<int> block_of;
  std::vector<std::int64_t> local;
};

struct State {
  std::vector<Dense> blocks;
  Eigen::VectorXd flux;
};

void axpy(State& out, const State& base, std::initializer_list<std::pair<double, const State*>> terms) {
  out.blocks.resize(base.blocks.size());
  for (std::size_t b = 0; b < base.blocks.size(); ++b) {
    out.blocks[b] = base.blocks[b];
    for (const auto& [w, k] : terms) {
      if (w != 0.0) out.blocks[b] += w * k->blocks[b];
    }
  }
  out.flux = base.flux;
  for (const auto& [w, k] : terms) {
    if (w != 0.0) out.flux += w * k->flux;
  }
}

class Compiled {
 public:
  Compiled(const TimeDependentSystem& system, const DensityMatrix& rho0) : system_(system) {
    // Base coefficients: Hamiltonian terms, then channel terms.
    for (const auto& t : system.hamiltonian.terms()) add_base(t);
    std::vector<std::vector<int>> channel_refs;
    for (const auto& ch : system.channels) {
      channel_refs.emplace_back();
      for (const auto& t : ch.op.terms()) channel_refs.back().push_back(add_base(t));
    }

    // H_eff = H - (i/2) sum_j sum_ab conj(l_a) l_b A_a^dag A_b
    int k = 0;
    for (const auto& t : system.hamiltonian.terms()) {
      heff_terms_.push_back({CoefRef{k++, -1, 1.0}, &t.op.matrix()});
    }
    for (std::size_t j = 0; j < system.channels.size(); ++j) {
      const auto& terms = system.channels[j].op.terms();
      channel_terms_.emplace_back();
      for (std::size_t b = 0; b < terms.size(); ++b) {
        channel_terms_[j].push_back({CoefRef{channel_refs[j][b], -1, 1.0}, &terms[b].op.matrix()});
        for (std::size_t a = 0; a < terms.size(); ++a) {
          products_.push_back(terms[a].op.adjoint().matrix() * terms[b].op.matrix());
          product_coefs_.push_back(CoefRef{channel_refs[j][b], channel_refs[j][a], cplx(0.0, -0.5)});
        }
      }
    }
    for (std::size_t p = 0; p < products_.size(); ++p) heff_terms_.push_back({product_coefs_[p], &products_[p]});

    partition(rho0);
    compile();
  }

  std::size_t block_count() const { return part_.blocks.size(); }
  std::size_t largest_block() const {
    std::size_t m = 0;
    for (const auto& b : part_.blocks) m = std::max(m, b.size());
    return m;
  }
  std::size_t channels() const { return system_.channels.size(); }
  const Partition& partition_info() const { return part_; }

  State split(const DensityMatrix& rho) const {
    State s;
    for (const auto& idx : part_.blocks) {
      Dense m(idx.size(), idx.size());
      for (std::size_t j = 0; j < idx.size(); ++j) {
        for (std::size_t i = 0; i < idx.size(); ++i) m(i, j) = rho.matrix()(idx[i], idx[j]);
      }
      s.blocks.push_back(std::move(m));
    }
    s.flux = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(channels()));
    return s;
  }

  DensityMatrix join(const State& s) const {
    const auto n = system_.layout.dimension();
    Dense m = Dense::Zero(n, n);
    for (std::size_t b = 0; b < part_.blocks.size(); ++b) {
      const auto& idx = part_.blocks[b];
      for (std::size_t j = 0; j < idx.size(); ++j) {
        for (std::size_t i = 0; i < idx.size(); ++i) m(idx[i], idx[j]) = s.blocks[b](i, j);
      }
    }
    return DensityMatrix(system_.layout, std::move(m));
  }

  void derivative(double t, const State& y, State& dy) {
    evaluate(t);
    dy.blocks.resize(y.blocks.size());
    dy.flux = Eigen::VectorXd::Zero(y.flux.size());
    for (std::size_t b = 0; b < y.blocks.size(); ++b) {
      auto& h = heff_blocks_[b];
      h.assemble(heff_values_);
      Dense x = h.matrix * y.blocks[b];
      x *= -kI;
      dy.blocks[b] = x + x.adjoint();
    }
    for (auto& l : channel_blocks_) {
      l.assemble(channel_values_[l.channel]);
      const Dense m = l.matrix * y.blocks[l.col_block];
      const Dense jump = l.matrix * m.adjoint();  // (L rho L^dag)^dag
      dy.blocks[l.row_block] += jump.adjoint();
      dy.flux[l.channel] += jump.trace().real();
    }
  }

  cplx expectation(const TimeDependentOperator& op, double t, const State& y) const {
    cplx total = 0.0;
    for (const auto& term : op.terms()) {
      const cplx c = term.value(t);
      if (c == 0.0) continue;
      const auto& m = term.op.matrix();
      cplx partial = 0.0;
      for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        const int br = part_.block_of[r];
        for (Operator::Matrix::InnerIterator it(m, r); it; ++it) {
          if (part_.block_of[it.col()] != br) continue;
          partial += it.value() * y.blocks[br](part_.local[it.col()], part_.local[r]);
        }
      }
      total += c * partial;
    }
    return total;
  }

 private:
  int add_base(const OperatorTerm& t) {
    base_.push_back(t.coefficient);
    return static_cast<int>(base_.size()) - 1;
  }

  void evaluate(double t) {
    values_.resize(base_.size());
    for (std::size_t i = 0; i < base_.size(); ++i) values_[i] = base_[i] ? base_[i](t) : cplx(1.0);
    heff_values_.resize(heff_terms_.size());
    for (std::size_t i = 0; i < heff_terms_.size(); ++i) heff_values_[i] = heff_terms_[i].coef(values_);
    channel_values_.resize(channel_terms_.size());
    for (std::size_t j = 0; j < channel_terms_.size(); ++j) {
      channel_values_[j].resize(channel_terms_[j].size());
      for (std::size_t i = 0; i < channel_terms_[j].size(); ++i) {
        channel_values_[j][i] = channel_terms_[j][i].coef(values_);
      }
    }
  }

  void partition(const DensityMatrix& rho0) {
    const auto n = system_.layout.dimension();
    UnionFind uf(n);
    for (const auto& term : heff_terms_) {
      for (Eigen::Index r = 0; r < term.matrix->outerSize(); ++r) {
        for (Operator::Matrix::InnerIterator it(*term.matrix, r); it; ++it) uf.unite(r, it.col());
      }
    }
    const auto& m = rho0.matrix();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (m(i, j) != 0.0) uf.unite(i, j);
      }
    }
    // Each channel must map a block into a single block; merge destinations until it does.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& terms : channel_terms_) {
        std::vector<std::int64_t> dest(n, -1);
        for (const auto& term : terms) {
          for (Eigen::Index r = 0; r < term.matrix->outerSize(); ++r) {
            for (Operator::Matrix::InnerIterator it(*term.matrix, r); it; ++it) {
              const auto src = uf.find(it.col());
              if (dest[src] < 0) {
                dest[src] = uf.find(r);
              } else if (uf.find(dest[src]) != uf.find(r)) {
                changed |= uf.unite(dest[src], r);
                dest[src] = uf.find(r);
              }
            }
          }
        }
      }
    }
    std::vector<int> root_block(n, -1);
    part_.block_of.assign(n, 0);
    part_.local.assign(n, 0);
    for (std::int64_t i = 0; i < n; ++i) {
      const auto root = uf.find(i);
      if (root_block[root] < 0) {
        root_block[root] = static_cast<int>(part_.blocks.size());
        part_.blocks.emplace_back();
      }
      const int b = root_block[root];
      part_.block_of[i] = b;
      part_.local[i] = static_cast<std::int64_t>(part_.blocks[b].size());
      part_.blocks[b].push_back(i);
    }
  }

  static void finish(BlockOperator& op, int rows, int cols, const std::vector<std::array<int, 2>>& coords,
                     const std::vector<std::pair<int, cplx>>& payload) {
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (const auto& c : coords) triplets.emplace_back(c[0], c[1], cplx(1.0));
    op.matrix.resize(rows, cols);
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.matrix.makeCompressed();
    const int* outer = op.matrix.outerIndexPtr();
    const int* inner = op.matrix.innerIndexPtr();
    for (std::size_t k = 0; k < coords.size(); ++k) {
      const int* begin = inner + outer[coords[k][0]];
      const int* end = inner + outer[coords[k][0] + 1];
      const int pos = static_cast<int>(std::lower_bound(begin, end, coords[k][1]) - inner);
      op.entries.push_back({payload[k].first, pos, payload[k].second});
    }
  }

  void compile() {
    const std::size_t nb = part_.blocks.size();
    std::vector<std::vector<std::array<int, 2>>> coords(nb);
    std::vector<std::vector<std::pair<int, cplx>>> payload(nb);
    for (std::size_t k = 0; k < heff_terms_.size(); ++k) {
      const auto& m = *heff_terms_[k].matrix;
      for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (Operator::Matrix::InnerIterator it(m, r); it; ++it) {
          const int b = part_.block_of[r];
          coords[b].push_back({static_cast<int>(part_.local[r]), static_cast<int>(part_.local[it.col()])});
          payload[b].emplace_back(static_cast<int>(k), it.value());
        }
      }
    }
    heff_blocks_.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      heff_blocks_[b].row_block = heff_blocks_[b].col_block = static_cast<int>(b);
      const int size = static_cast<int>(part_.blocks[b].size());
      finish(heff_blocks_[b], size, size, coords[b], payload[b]);
    }

    for (std::size_t j = 0; j < channel_terms_.size(); ++j) {
      std::map<int, int> by_source;
      std::vector<std::vector<std::array<int, 2>>> ccoords;
      std::vector<std::vector<std::pair<int, cplx>>> cpayload;
      std::vector<BlockOperator> ops;
      for (std::size_t k = 0; k < channel_terms_[j].size(); ++k) {
        const auto& m = *channel_terms_[j][k].matrix;
        for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
          for (Operator::Matrix::InnerIterator it(m, r); it; ++it) {
            const int src = part_.block_of[it.col()];
            auto [pos, inserted] = by_source.try_emplace(src, static_cast<int>(ops.size()));
            if (inserted) {
              ops.emplace_back();
              ops.back().row_block = part_.block_of[r];
              ops.back().col_block = src;
              ops.back().channel = static_cast<int>(j);
              ccoords.emplace_back();
              cpayload.emplace_back();
            }
            const int o = pos->second;
            ccoords[o].push_back({static_cast<int>(part_.local[r]), static_cast<int>(part_.local[it.col()])});
            cpayload[o].emplace_back(static_cast<int>(k), it.value());
          }
        }
      }
      for (std::size_t o = 0; o < ops.size(); ++o) {
        finish(ops[o], static_cast<int>(part_.blocks[ops[o].row_block].size()),
               static_cast<int>(part_.blocks[ops[o].col_block].size()), ccoords[o], cpayload[o]);
        channel_blocks_.push_back(std::move(ops[o]));
      }
    }
  }

  const TimeDependentSystem& system_;
  std::vector<Coefficient> base_;
  std::vector<GlobalTerm> heff_terms_;
  std::vector<std::vector<GlobalTerm>> channel_terms_;
  std::vector<Operator::Matrix> products_;
  std::vector<CoefRef> product_coefs_;
  Partition part_;
  std::vector<BlockOperator> heff_blocks_;
  std::vector<BlockOperator> channel_blocks_;
  std::vector<cplx> values_;
  std::vector<cplx> heff_values_;
  std::vector<std::vector<cplx>> channel_values_;
};

double trace_of(const State& s) {
  double tr = 0.0;
  for (const auto& b : s.blocks) tr += b.trace().real();
  return tr;
}

double hermiticity_of(const State& s) {
  double d = 0.0;
  for (const auto& b : s.blocks) d = std::max(d, (b - b.adjoint()).cwiseAbs().maxCoeff());
  return d;
}

bool finite(const State& s) {
  for (const auto& b : s.blocks) {
    if (!b.allFinite()) return false;
  }
  return s.flux.allFinite();
}

double min_eigenvalue_of(const State& s) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : s.blocks) {
    if (b.rows() == 0) continue;
    const Dense h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Dense> solver(h, Eigen::EigenvaluesOnly);
    m = std::min(m, solver.eigenvalues().minCoeff());
  }
  return m;
}

double error_norm(const State& err, const State& y0, const State& y1, double atol, double rtol) {
  double e = 0.0;
  for (std::size_t b = 0; b < err.blocks.size(); ++b) {
    const auto scale = (atol + rtol * y0.blocks[b].cwiseAbs().cwiseMax(y1.blocks[b].cwiseAbs()).array());
    e = std::max(e, (err.blocks[b].cwiseAbs().array() / scale).maxCoeff());
  }
  for (Eigen::Index j = 0; j < err.flux.size(); ++j) {
    e = std::max(e, std::abs(err.flux[j]) / (atol + rtol * std::max(std::abs(y0.flux[j]), std::abs(y1.flux[j]))));
  }
  return e;
}

double default_step(const TimeDependentSystem& system, const TimeSpan& span) {
  const auto it = system.metadata.parameters.find("t_w");
  if (it != system.metadata.parameters.end() && std::isfinite(it->second) && it->second > 0.0) {
    return it->second / 200.0;
  }
  return (span.end - span.start) / 2000.0;
}

class Runner {
 public:
  Runner(const TimeDependentSystem& system, const DensityMatrix& rho0, const TimeSpan& span,
         const std::vector<Observable>& observables, const IntegratorConfig& config)
      : system_(system), compiled_(system, rho0), span_(span), observables_(observables), config_(config) {
    y_ = compiled_.split(rho0);
    trace0_ = trace_of(y_);
    for (const auto& ch : system.channels) result_.channel_names.push_back(ch.name);
    result_.cumulative_flux.resize(system.channels.size());
    result_.diagnostics.blocks = compiled_.block_count();
    result_.diagnostics.largest_block = compiled_.largest_block();
    result_.diagnostics.min_eigenvalue = std::numeric_limits<double>::infinity();
    const int samples = std::max(config.positivity_samples, 0);
    for (int k = 0; k < samples; ++k) {
      sample_times_.push_back(samples == 1 ? span.end
                                           : span.start + (span.end - span.start) * k / (samples - 1.0));
    }
  }

  TrajectoryResult run() {
    std::vector<double> stops;
    for (double c : span_.checkpoints) {
      if (c > span_.start && c < span_.end) stops.push_back(c);
    }
    stops.push_back(span_.end);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    t_ = span_.start;
    record();
    sample_positivity();
    double h = config_.step > 0.0 ? config_.step : default_step(system_, span_);
    for (double stop : stops) {
      if (config_.method == Method::rk4) {
        const double length = stop - t_;
        const long steps = std::max(1L, static_cast<long>(std::ceil(length / h - 1e-9)));
        const double hh = length / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) {
          rk4_step(hh);
          t_ = s + 1 == steps ? stop : t_ + hh;
          after_step(s + 1 == steps);
        }
      } else {
        h = dopri_segment(stop, h);
      }
    }
    result_.final_state = compiled_.join(y_);
    return std::move(result_);
  }

 private:
  void rk4_step(double h) {
    compiled_.derivative(t_, y_, k1_);
    axpy(tmp_, y_, {{0.5 * h, &k1_}});
    compiled_.derivative(t_ + 0.5 * h, tmp_, k2_);
    axpy(tmp_, y_, {{0.5 * h, &k2_}});
    compiled_.derivative(t_ + 0.5 * h, tmp_, k3_);
    axpy(tmp_, y_, {{h, &k3_}});
    compiled_.derivative(t_ + h, tmp_, k4_);
    axpy(tmp_, y_, {{h / 6.0, &k1_}, {h / 3.0, &k2_}, {h / 3.0, &k3_}, {h / 6.0, &k4_}});
    guard(tmp_);
    std::swap(y_, tmp_);
  }

  // Dormand-Prince 5(4) with FSAL; returns the step proposal for the next segment.
  double dopri_segment(double stop, double h) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    const double max_step = config_.max_step > 0.0 ? config_.max_step : stop - span_.start;
    State k5, k6, k7, err;
    while (t_ < stop) {
      h = std::min({h, max_step, stop - t_});
      const bool last = stop - t_ - h <= 1e-12 * std::max(1.0, std::abs(stop));
      if (!have_k1_) {
        compiled_.derivative(t_, y_, k1_);
        have_k1_ = true;
      }
      axpy(tmp_, y_, {{h * a21, &k1_}});
      compiled_.derivative(t_ + c2 * h, tmp_, k2_);
      axpy(tmp_, y_, {{h * a31, &k1_}, {h * a32, &k2_}});
      compiled_.derivative(t_ + c3 * h, tmp_, k3_);
      axpy(tmp_, y_, {{h * a41, &k1_}, {h * a42, &k2_}, {h * a43, &k3_}});
      compiled_.derivative(t_ + c4 * h, tmp_, k4_);
      axpy(tmp_, y_, {{h * a51, &k1_}, {h * a52, &k2_}, {h * a53, &k3_}, {h * a54, &k4_}});
      compiled_.derivative(t_ + c5 * h, tmp_, k5);
      axpy(tmp_, y_, {{h * a61, &k1_}, {h * a62, &k2_}, {h * a63, &k3_}, {h * a64, &k4_}, {h * a65, &k5}});
      compiled_.derivative(t_ + h, tmp_, k6);
      State next;
      next.blocks.resize(y_.blocks.size());
      axpy(next, y_, {{h * b1, &k1_}, {h * b3, &k3_}, {h * b4, &k4_}, {h * b5, &k5}, {h * b6, &k6}});
      compiled_.derivative(t_ + h, next, k7);
      err.blocks.resize(y_.blocks.size());
      State zero = y_;
      for (auto& b : zero.blocks) b.setZero();
      zero.flux.setZero();
      axpy(err, zero, {{h * e1, &k1_}, {h * e3, &k3_}, {h * e4, &k4_}, {h * e5, &k5}, {h * e6, &k6}, {h * e7, &k7}});
      const double e = error_norm(err, y_, next, config_.abs_tol, config_.rel_tol);
      if (!std::isfinite(e)) {
        throw DivergenceError(fmt::format("non-finite error estimate at t = {:.6g}", t_), t_);
      }
      if (e <= 1.0) {
        guard(next);
        y_ = std::move(next);
        t_ = last ? stop : t_ + h;
        k1_ = std::move(k7);
        after_step(last);
        // The state may be modified by symmetrization / renormalization; refresh FSAL.
        if (touched_) {
          have_k1_ = false;
          touched_ = false;
        }
        h *= std::clamp(0.9 * std::pow(std::max(e, 1e-10), -0.2), 0.2, 5.0);
      } else {
        ++result_.diagnostics.rejected_steps;
        h *= std::clamp(0.9 * std::pow(e, -0.25), 0.1, 0.9);
        if (h < 1e-14 * std::max(1.0, std::abs(t_))) {
          throw DivergenceError(fmt::format("step size underflow at t = {:.6g}", t_), t_);
        }
      }
    }
    return h;
  }

  void guard(const State& s) {
    if (!finite(s)) {
      throw DivergenceError(fmt::format("non-finite density matrix after t = {:.6g}", t_), t_);
    }
  }

  void after_step(bool at_stop) {
    ++result_.diagnostics.accepted_steps;
    auto& diag = result_.diagnostics;
    const double defect = hermiticity_of(y_);
    diag.max_hermiticity_defect = std::max(diag.max_hermiticity_defect, defect);
    if (config_.symmetrize && defect > 1e-12) {
      for (auto& b : y_.blocks) b = (0.5 * (b + b.adjoint())).eval();
      if (diag.symmetrizations++ == 0) {
        diag.log.push_back(fmt::format("symmetrized rho (defect {:.3g}) first at t = {:.6g}", defect, t_));
      }
      touched_ = true;
    }
    if (config_.renormalize) {
      const double tr = trace_of(y_);
      for (auto& b : y_.blocks) b /= tr;
      ++diag.renormalizations;
      diag.max_renormalization = std::max(diag.max_renormalization, std::abs(tr - 1.0));
      diag.log.push_back(fmt::format("renormalized trace {:.17g} at t = {:.6g}", tr, t_));
      touched_ = true;
    }
    ++since_record_;
    if (at_stop || since_record_ >= config_.record_stride) record();
    sample_positivity();
  }

  void sample_positivity() {
    while (next_sample_ < sample_times_.size() && t_ >= sample_times_[next_sample_] - 1e-12) {
      result_.diagnostics.min_eigenvalue = std::min(result_.diagnostics.min_eigenvalue, min_eigenvalue_of(y_));
      ++next_sample_;
    }
  }

  void record() {
    since_record_ = 0;
    result_.times.push_back(t_);
    for (const auto& o : observables_) result_.tracks[o.name].push_back(compiled_.expectation(o.op, t_, y_));
    for (std::size_t j = 0; j < result_.cumulative_flux.size(); ++j) {
      result_.cumulative_flux[j].push_back(y_.flux[static_cast<Eigen::Index>(j)]);
    }
    const double drift = std::abs(trace_of(y_) - trace0_);
    result_.trace_drift.push_back(drift);
    result_.diagnostics.max_trace_drift = std::max(result_.diagnostics.max_trace_drift, drift);
    if (config_.trace_tolerance > 0.0 && drift > config_.trace_tolerance) {
      throw AccuracyError(fmt::format(
          "trace drift {:.3g} exceeds {:.3g} at t = {:.6g}; reduce the step size (currently {})", drift,
          config_.trace_tolerance, t_, config_.step > 0.0 ? fmt::format("{:.3g}", config_.step) : "auto"));
    }
  }

  const TimeDependentSystem& system_;
  Compiled compiled_;
  TimeSpan span_;
  const std::vector<Observable>& observables_;
  IntegratorConfig config_;
  State y_, tmp_, k1_, k2_, k3_, k4_;
  bool have_k1_ = false;
  bool touched_ = false;
  double t_ = 0.0;
  double trace0_ = 1.0;
  int since_record_ = 0;
  std::vector<double> sample_times_;
  std::size_t next_sample_ = 0;
  TrajectoryResult result_;
};

}  // namespace

void IntegratorConfig::validate() const {
  if (step < 0.0 || !std::isfinite(step)) throw ConfigError("integrator step must be positive (or 0 for auto)");
  if (max_step < 0.0) throw ConfigError("max_step must be non-negative");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("integrator tolerances must be positive");
  if (record_stride < 1) throw ConfigError("record_stride must be at least 1");
}

double TrajectoryResult::value_at(const std::string& name, double t) const {
  const auto& tr = track(name);
  if (times.empty()) throw Error("empty trajectory");
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  auto it = std::lower_bound(times.begin(), times.end(), t - tol);
  if (it != times.end() && std::abs(*it - t) <= tol) return tr[it - times.begin()].real();
  if (it == times.begin() || it == times.end()) {
    throw Error(fmt::format("time {:.6g} outside the recorded range", t));
  }
  const auto i = static_cast<std::size_t>(it - times.begin());
  const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return (1.0 - w) * tr[i - 1].real() + w * tr[i].real();
}

const std::vector<cplx>& TrajectoryResult::track(const std::string& name) const {
  const auto it = tracks.find(name);
  if (it == tracks.end()) throw UnknownLabel(fmt::format("no observable '{}' was recorded", name));
  return it->second;
}

double TrajectoryResult::total_flux(const std::string& channel) const {
  for (std::size_t j = 0; j < channel_names.size(); ++j) {
    if (channel_names[j] == channel) return cumulative_flux[j].empty() ? 0.0 : cumulative_flux[j].back();
  }
  throw UnknownLabel(fmt::format("no channel '{}'", channel));
}

double TrajectoryResult::total_flux() const {
  double s = 0.0;
  for (const auto& c : cumulative_flux) s += c.empty() ? 0.0 : c.back();
  return s;
}

TrajectoryResult integrate(const TimeDependentSystem& system, const DensityMatrix& rho0, const TimeSpan& span,
                           const std::vector<Observable>& observables, IntegratorConfig config) {
  config.validate();
  if (!(rho0.layout() == system.layout)) {
    throw LayoutMismatch(fmt::format("initial state layout {} does not match system layout {}",
                                     rho0.layout().describe(), system.layout.describe()));
  }
  for (const auto& o : observables) {
    if (!o.op.empty() && !(o.op.layout() == system.layout)) {
      throw LayoutMismatch(fmt::format("observable '{}' lives on a different layout", o.name));
    }
  }
  if (!(span.end > span.start)) throw ConfigError("time span must have end > start");
  Runner runner(system, rho0, span, observables, config);
  return runner.run();
}

double flux(const DensityMatrix& rho, const Operator& l) {
  return expectation(rho, l.adjoint() * l).real();
}

std::vector<ScanRow> scan(const std::vector<double>& grid, const ScanProblem& problem, IntegratorConfig config,
                          unsigned workers, bool keep_trajectories) {
  if (grid.empty()) throw ConfigError("scan grid is empty");
  config.validate();
  std::vector<ScanRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      ScanRow& row = rows[i];
      row.index = i;
      row.parameter = grid[i];
      try {
        const TimeDependentSystem system = problem.system(grid[i]);
        const DensityMatrix rho0 = problem.initial_state(system);
        const TimeSpan span = problem.span(system);
        const std::vector<Observable> obs = problem.observables ? problem.observables(system)
                                                                 : std::vector<Observable>{};
        TrajectoryResult result = integrate(system, rho0, span, obs, config);
        if (problem.summarize) row.summary = problem.summarize(system, result);
        if (keep_trajectories) row.trajectory = std::move(result);
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, grid.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

}  // namespace pulsenet
