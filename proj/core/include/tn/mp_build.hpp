#pragma once

#include "tn/mp.hpp"
#include "tn/site_ops.hpp"

#include <functional>

// MPO/MPS construction and the exact-diagonalization bridges.

namespace tn {

/// Square matrix of on-site operator blocks, all sharing one physical
/// dimension. Entry (row, col) follows the lower-triangular MPO convention
/// by default: the full operator is (last row) W^(Ns-2) (first column).
class MpoBlockMatrix {
public:
  MpoBlockMatrix() = default;
  MpoBlockMatrix(std::size_t channels, std::size_t phys_dim);

  std::size_t channels() const noexcept { return channels_; }
  std::size_t phys_dim() const noexcept { return phys_dim_; }
  const Tensor &at(std::size_t row, std::size_t col) const;
  void set(std::size_t row, std::size_t col, Tensor op);

private:
  std::size_t channels_ = 0;
  std::size_t phys_dim_ = 0;
  std::vector<Tensor> blocks_;
};

using MpoBulkGenerator = std::function<MpoBlockMatrix(std::size_t site)>;

/// Assemble an MPO from an operator-valued bulk matrix: edge sites are
/// sliced to the boundary row (left) and column (right). lower=false uses
/// the transposed (upper-triangular) convention.
MPO make_mpo(const MpoBlockMatrix &bulk, std::size_t ns, bool lower = true);
MPO make_mpo(const MpoBulkGenerator &bulk, std::size_t ns, bool lower = true);
/// Flattened numeric form: a (channels*d) x (channels*d) matrix per chain,
/// with the physical dimension taken from phys_dims cyclically per site.
MPO make_mpo(const Tensor &flat_bulk, std::span<const std::size_t> phys_dims,
             std::size_t ns, bool lower = true);

/// Convert a full state vector into an MPS by successive splittings; exact
/// at the default truncation up to dropped zero Schmidt values.
MPS make_mps(const Tensor &v, std::size_t phys_dim,
             const TruncationSpec &trunc = {});
MPS make_mps(const Tensor &v, std::span<const std::size_t> phys_dims,
             const TruncationSpec &trunc = {});

/// H + lambda |psi0><psi0| as an MPO; the projector's bond dimensions are
/// the squares of psi0's.
MPO penalty_mpo(const MPO &h, double lambda, const MPS &psi0);

/// Dense state vector, site-1-fastest (column-major site ordering).
Tensor full_psi(const MPS &psi, std::size_t max_elements = std::size_t{1} << 20);

/// Dense operator matrix, index ordering consistent with full_psi so that
/// expect(psi, h) == v^dag H v.
Tensor full_h(const MPO &h, std::size_t max_dim = std::size_t{1} << 12);

} // namespace tn
