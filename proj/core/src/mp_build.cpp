#include "tn/mp_build.hpp"

#include "tn/contract.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tn {

namespace {

[[noreturn]] void fail(const std::string &msg) {
  throw std::invalid_argument("tn: " + msg);
}

} // namespace

MpoBlockMatrix::MpoBlockMatrix(std::size_t channels, std::size_t phys_dim)
    : channels_(channels), phys_dim_(phys_dim),
      blocks_(channels * channels,
              Tensor::zeros(ScalarKind::RealF64, {phys_dim, phys_dim})) {
  if (channels == 0 || phys_dim == 0)
    fail("MpoBlockMatrix needs positive dimensions");
}

const Tensor &MpoBlockMatrix::at(std::size_t row, std::size_t col) const {
  if (row < 1 || row > channels_ || col < 1 || col > channels_)
    throw std::out_of_range("tn: MpoBlockMatrix entry out of range");
  return blocks_[(row - 1) * channels_ + (col - 1)];
}

void MpoBlockMatrix::set(std::size_t row, std::size_t col, Tensor op) {
  if (row < 1 || row > channels_ || col < 1 || col > channels_)
    throw std::out_of_range("tn: MpoBlockMatrix entry out of range");
  if (op.rank() != 2 || op.dim(1) != phys_dim_ || op.dim(2) != phys_dim_)
    fail("MpoBlockMatrix operator does not match the physical dimension");
  blocks_[(row - 1) * channels_ + (col - 1)] = std::move(op);
}

namespace {

/// Site tensor from a block matrix, keeping rows [r0, r1] and cols [c0, c1].
Tensor blocks_to_site(const MpoBlockMatrix &bulk, std::size_t r0,
                      std::size_t r1, std::size_t c0, std::size_t c1) {
  const std::size_t d = bulk.phys_dim();
  const std::size_t rows = r1 - r0 + 1, cols = c1 - c0 + 1;
  ScalarKind kind = ScalarKind::RealF64;
  for (std::size_t r = r0; r <= r1; ++r)
    for (std::size_t c = c0; c <= c1; ++c)
      kind = promote(kind, bulk.at(r, c).kind());
  Tensor w = Tensor::zeros(kind, {rows, d, d, cols});
  for (std::size_t r = 1; r <= rows; ++r)
    for (std::size_t c = 1; c <= cols; ++c) {
      const Tensor &block = bulk.at(r0 + r - 1, c0 + c - 1);
      for (std::size_t o = 1; o <= d; ++o)
        for (std::size_t i = 1; i <= d; ++i)
          w.set_element({r, o, i, c}, block.element({o, i}));
    }
  return w;
}

} // namespace

MPO make_mpo(const MpoBlockMatrix &bulk, std::size_t ns, bool lower) {
  return make_mpo([&bulk](std::size_t) { return bulk; }, ns, lower);
}

MPO make_mpo(const MpoBulkGenerator &bulk, std::size_t ns, bool lower) {
  if (ns < 1)
    fail("make_mpo needs at least one site");
  std::vector<Tensor> sites;
  sites.reserve(ns);
  for (std::size_t i = 1; i <= ns; ++i) {
    const MpoBlockMatrix m = bulk(i);
    const std::size_t k = m.channels();
    if (k == 0)
      fail("make_mpo: empty bulk matrix");
    const std::size_t row0 = i == 1 ? (lower ? k : 1) : 1;
    const std::size_t row1 = i == 1 ? row0 : k;
    const std::size_t col0 = i == ns ? (lower ? 1 : k) : 1;
    const std::size_t col1 = i == ns ? col0 : k;
    sites.push_back(blocks_to_site(m, row0, row1, col0, col1));
  }
  return MPO(std::move(sites));
}

MPO make_mpo(const Tensor &flat_bulk, std::span<const std::size_t> phys_dims,
             std::size_t ns, bool lower) {
  if (flat_bulk.rank() != 2 || phys_dims.empty())
    fail("make_mpo: flattened bulk must be a matrix with physical dimensions");
  std::vector<std::size_t> dims(phys_dims.begin(), phys_dims.end());
  auto gen = [flat_bulk, dims](std::size_t site) {
    const std::size_t d = dims[(site - 1) % dims.size()];
    if (flat_bulk.dim(1) % d != 0 || flat_bulk.dim(1) != flat_bulk.dim(2))
      fail("make_mpo: flattened bulk is not square in operator blocks");
    const std::size_t k = flat_bulk.dim(1) / d;
    MpoBlockMatrix m(k, d);
    for (std::size_t r = 1; r <= k; ++r)
      for (std::size_t c = 1; c <= k; ++c) {
        Tensor block = get_slice(
            flat_bulk,
            {IndexSelector::range((r - 1) * d + 1, r * d),
             IndexSelector::range((c - 1) * d + 1, c * d)});
        m.set(r, c, std::move(block));
      }
    return m;
  };
  return make_mpo(gen, ns, lower);
}

MPS make_mps(const Tensor &v, std::size_t phys_dim,
             const TruncationSpec &trunc) {
  if (v.rank() != 1)
    fail("make_mps expects a rank-1 state vector");
  std::size_t len = v.dim(1), ns = 0;
  if (phys_dim < 2) {
    if (phys_dim == 0 || len != 1)
      fail("make_mps: vector length is not a power of the physical dimension");
    ns = 1;
  } else {
    for (std::size_t acc = 1; acc < len; acc *= phys_dim)
      ++ns;
  }
  if (ns == 0)
    ns = 1;
  std::vector<std::size_t> dims(ns, phys_dim);
  if (shape_elements(dims) != len)
    fail("make_mps: vector length is not a power of the physical dimension");
  return make_mps(v, dims, trunc);
}

MPS make_mps(const Tensor &v, std::span<const std::size_t> phys_dims,
             const TruncationSpec &trunc) {
  if (v.rank() != 1)
    fail("make_mps expects a rank-1 state vector");
  if (shape_elements(phys_dims) != v.dim(1))
    fail("make_mps: vector length does not match the physical dimensions");
  const std::size_t ns = phys_dims.size();
  std::vector<Tensor> sites(ns);
  Tensor carry = reshape(v, {std::size_t{1}, v.dim(1)});
  for (std::size_t i = 1; i < ns; ++i) {
    const std::size_t d = phys_dims[i - 1];
    const std::size_t rest = carry.dim(2) / d;
    Tensor m = reshape(carry, {carry.dim(1) * d, rest});
    SvdResult svd = svd_truncated(m, trunc);
    sites[i - 1] =
        reshape(svd.u, {carry.dim(1), d, svd.d.dim(1)});
    carry = contract(diagonal_matrix(svd.d), {2}, svd.vh, {1});
  }
  sites[ns - 1] = reshape(carry, {carry.dim(1), phys_dims[ns - 1], 1});
  return MPS(std::move(sites), ns);
}

MPO penalty_mpo(const MPO &h, double lambda, const MPS &psi0) {
  const std::size_t ns = psi0.length();
  if (h.length() != ns)
    fail("penalty_mpo: chain lengths differ");
  std::vector<Tensor> sites(ns);
  for (std::size_t i = 1; i <= ns; ++i) {
    if (h.phys_dim(i) != psi0.phys_dim(i))
      fail("penalty_mpo: physical dimensions differ at site " +
           std::to_string(i));
    // |psi><psi| site tensor: (a a', s', s, b b')
    const Tensor &a = psi0.site(i);
    Tensor proj = contractc(a, {}, a, {});        // (a, s', b, a', s, b')
    proj = permute(proj, {1, 4, 2, 5, 3, 6});     // (a, a', s', s, b, b')
    proj = reshape(proj, {{1, 2}, {3}, {4}, {5, 6}});
    if (i == 1)
      scale_inplace(proj, lambda);
    const Tensor &w = h.site(i);
    if (i == 1)
      sites[i - 1] = join_index(w, proj, {4});
    else if (i == ns)
      sites[i - 1] = join_index(w, proj, {1});
    else
      sites[i - 1] = join_index(w, proj, {1, 4});
  }
  return MPO(std::move(sites));
}

Tensor full_psi(const MPS &psi, std::size_t max_elements) {
  std::size_t total = 1;
  for (std::size_t i = 1; i <= psi.length(); ++i) {
    total *= psi.phys_dim(i);
    if (total > max_elements)
      fail("full_psi: state dimension exceeds the cap");
  }
  Tensor v = reshape(psi.site(1), {psi.phys_dim(1), psi.site(1).dim(3)});
  for (std::size_t i = 2; i <= psi.length(); ++i)
    v = contract(v, {v.rank()}, psi.site(i), {1});
  return reshape(v, {total});
}

Tensor full_h(const MPO &h, std::size_t max_dim) {
  std::size_t total = 1;
  for (std::size_t i = 1; i <= h.length(); ++i) {
    total *= h.phys_dim(i);
    if (total > max_dim)
      fail("full_h: operator dimension exceeds the cap");
  }
  const std::size_t ns = h.length();
  Tensor t = reshape(h.site(1),
                     {h.site(1).dim(2), h.site(1).dim(3), h.site(1).dim(4)});
  for (std::size_t i = 2; i <= ns; ++i)
    t = contract(t, {t.rank()}, h.site(i), {1});
  // axes now (o1, i1, o2, i2, ..., oN, iN, 1): gather outs then ins
  Shape squeezed(t.shape().begin(), t.shape().end() - 1);
  t = reshape(t, std::move(squeezed));
  AxisList order;
  order.reserve(2 * ns);
  for (std::size_t i = 0; i < ns; ++i)
    order.push_back(2 * i + 1);
  for (std::size_t i = 0; i < ns; ++i)
    order.push_back(2 * i + 2);
  t = permute(t, order);
  return reshape(t, {total, total});
}

} // namespace tn
