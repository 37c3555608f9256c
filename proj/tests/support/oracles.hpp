#pragma once

#include "tn/contract.hpp"
#include "tn/mp_build.hpp"
#include "tn/tensor.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

// Independent reference implementations the library is tested against.
// Everything here walks elements directly and never touches the
// permute/reshape/GEMM path of the code under test.

namespace oracle {

using tn::cplx;
using tn::Tensor;

/// Nested-loop reference contraction: sums conj^a(A) * conj^b(B) over the
/// paired axes for every output element.
inline Tensor contract_reference(const Tensor &a,
                                 const std::vector<std::size_t> &ia,
                                 bool conj_a, const Tensor &b,
                                 const std::vector<std::size_t> &ib,
                                 bool conj_b, cplx alpha = {1.0, 0.0}) {
  const auto free_a = tn::complement_indices(ia, a.rank());
  const auto free_b = tn::complement_indices(ib, b.rank());
  tn::Shape out_shape;
  for (auto ax : free_a)
    out_shape.push_back(a.shape()[ax - 1]);
  for (auto ax : free_b)
    out_shape.push_back(b.shape()[ax - 1]);
  tn::Shape bound_shape;
  for (auto ax : ia)
    bound_shape.push_back(a.shape()[ax - 1]);

  const bool complex_out = a.is_complex() || b.is_complex() ||
                           alpha.imag() != 0.0;
  Tensor out = Tensor::zeros(
      complex_out ? tn::ScalarKind::ComplexF64 : tn::ScalarKind::RealF64,
      out_shape);

  const std::size_t n_out = out.element_count();
  const std::size_t n_bound = tn::shape_elements(bound_shape);
  std::vector<std::size_t> pos_a(a.rank()), pos_b(b.rank());
  for (std::size_t o = 1; o <= n_out; ++o) {
    const auto out_pos = tn::multi_index_of(o, out_shape);
    cplx sum{};
    for (std::size_t q = 1; q <= n_bound; ++q) {
      const auto bound_pos = tn::multi_index_of(q, bound_shape);
      for (std::size_t k = 0; k < free_a.size(); ++k)
        pos_a[free_a[k] - 1] = out_pos[k];
      for (std::size_t k = 0; k < free_b.size(); ++k)
        pos_b[free_b[k] - 1] = out_pos[free_a.size() + k];
      for (std::size_t k = 0; k < ia.size(); ++k) {
        pos_a[ia[k] - 1] = bound_pos[k];
        pos_b[ib[k] - 1] = bound_pos[k];
      }
      cplx x = a.element(pos_a), y = b.element(pos_b);
      if (conj_a)
        x = std::conj(x);
      if (conj_b)
        y = std::conj(y);
      sum += x * y;
    }
    sum *= alpha;
    if (out.is_complex())
      out.set_element(out_pos, sum);
    else
      out.set_element(out_pos, sum.real());
  }
  return out;
}

/// Direct diagonal sum for a partial trace.
inline Tensor trace_reference(
    const Tensor &a,
    const std::vector<std::pair<std::size_t, std::size_t>> &pairs) {
  std::vector<std::size_t> traced;
  for (auto [p, q] : pairs) {
    traced.push_back(p);
    traced.push_back(q);
  }
  const auto keep = tn::complement_indices(traced, a.rank());
  tn::Shape out_shape;
  for (auto ax : keep)
    out_shape.push_back(a.shape()[ax - 1]);
  tn::Shape diag_shape;
  for (auto [p, q] : pairs) {
    (void)q;
    diag_shape.push_back(a.shape()[p - 1]);
  }
  Tensor out = Tensor::zeros(a.kind(), out_shape);
  std::vector<std::size_t> pos(a.rank());
  for (std::size_t o = 1; o <= out.element_count(); ++o) {
    const auto out_pos = tn::multi_index_of(o, out_shape);
    cplx sum{};
    for (std::size_t d = 1; d <= tn::shape_elements(diag_shape); ++d) {
      const auto diag_pos = tn::multi_index_of(d, diag_shape);
      for (std::size_t k = 0; k < keep.size(); ++k)
        pos[keep[k] - 1] = out_pos[k];
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        pos[pairs[k].first - 1] = diag_pos[k];
        pos[pairs[k].second - 1] = diag_pos[k];
      }
      sum += a.element(pos);
    }
    if (out.is_complex())
      out.set_element(out_pos, sum);
    else
      out.set_element(out_pos, sum.real());
  }
  return out;
}

// -- dense many-body helpers ---------------------------------------------------

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

inline MatC to_eigen(const Tensor &t) {
  MatC m(t.dim(1), t.rank() == 2 ? t.dim(2) : 1);
  for (std::size_t r = 1; r <= t.dim(1); ++r)
    for (std::size_t c = 1; c <= (t.rank() == 2 ? t.dim(2) : 1); ++c)
      m(r - 1, c - 1) = t.rank() == 2 ? t.element({r, c}) : t.element({r});
  return m;
}

inline VecC vec_to_eigen(const Tensor &t) {
  VecC v(t.dim(1));
  for (std::size_t i = 1; i <= t.dim(1); ++i)
    v(i - 1) = t.element({i});
  return v;
}

/// op at one site embedded into the full tensor-product space, site-1-fastest
/// index convention (matching tn::full_psi).
inline MatC embed_site_op(const MatC &op, std::size_t site, std::size_t ns,
                          std::size_t d) {
  MatC out = MatC::Identity(1, 1);
  for (std::size_t s = 1; s <= ns; ++s) {
    const MatC &factor =
        s == site ? op : MatC(MatC::Identity(static_cast<long>(d),
                                             static_cast<long>(d)));
    // site-1-fastest: later sites go on the left of the Kronecker product
    MatC next(factor.rows() * out.rows(), factor.cols() * out.cols());
    for (long i = 0; i < factor.rows(); ++i)
      for (long j = 0; j < factor.cols(); ++j)
        next.block(i * out.rows(), j * out.cols(), out.rows(), out.cols()) =
            factor(i, j) * out;
    out = std::move(next);
  }
  return out;
}

/// Product of single-site operators with Jordan-Wigner strings: the operator
/// m acts at sites[m] and carries the parity on every lower site.
inline MatC embed_op_string(const std::vector<MatC> &ops,
                            const std::vector<std::size_t> &sites,
                            std::size_t ns, std::size_t d,
                            const MatC *parity = nullptr) {
  MatC total = MatC::Identity(static_cast<long>(std::pow(d, ns)),
                              static_cast<long>(std::pow(d, ns)));
  for (std::size_t m = 0; m < ops.size(); ++m) {
    MatC factor = embed_site_op(ops[m], sites[m], ns, d);
    if (parity)
      for (std::size_t s = 1; s < sites[m]; ++s)
        factor = factor * embed_site_op(*parity, s, ns, d);
    total = total * factor;
  }
  return total;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

} // namespace oracle
