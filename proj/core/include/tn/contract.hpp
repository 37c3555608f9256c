#pragma once

#include "tn/tensor.hpp"

#include <optional>

// Pairwise tensor contraction by permutation + reshape to matrix form and a
// single matrix multiply. Axis labels are 1-based. Output axes are the
// uncontracted A axes in original order followed by the uncontracted B axes,
// regardless of conjugation, then permuted by `order` when given.

namespace tn {

using AxisList = std::vector<std::size_t>;

/// Ascending complement of `selected` within 1..rank.
AxisList complement_indices(std::span<const std::size_t> selected,
                            std::size_t rank);

/// Matrix equivalent of a tensor: the listed axes become the rows (in the
/// given order), everything else the columns. The permute is skipped when the
/// axes are already in place; conjugation applies only to complex tensors.
Tensor matrix_equivalent(const Tensor &t, std::span<const std::size_t> row_axes,
                         bool conj = false);

struct ContractOptions {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};
  const Tensor *accumulate = nullptr; // Z term: C = alpha*(A.B) + beta*Z
  AxisList order;                     // optional output permutation
};

Tensor contract(const Tensor &a, const AxisList &ia, const Tensor &b,
                const AxisList &ib, const ContractOptions &opts = {});
Tensor ccontract(const Tensor &a, const AxisList &ia, const Tensor &b,
                 const AxisList &ib, const ContractOptions &opts = {});
Tensor contractc(const Tensor &a, const AxisList &ia, const Tensor &b,
                 const AxisList &ib, const ContractOptions &opts = {});
Tensor ccontractc(const Tensor &a, const AxisList &ia, const Tensor &b,
                  const AxisList &ib, const ContractOptions &opts = {});

/// Reorder form: the output permutation leads the argument list.
Tensor contract(const AxisList &order, const Tensor &a, const AxisList &ia,
                const Tensor &b, const AxisList &ib,
                const ContractOptions &opts = {});
Tensor ccontract(const AxisList &order, const Tensor &a, const AxisList &ia,
                 const Tensor &b, const AxisList &ib,
                 const ContractOptions &opts = {});
Tensor contractc(const AxisList &order, const Tensor &a, const AxisList &ia,
                 const Tensor &b, const AxisList &ib,
                 const ContractOptions &opts = {});
Tensor ccontractc(const AxisList &order, const Tensor &a, const AxisList &ia,
                  const Tensor &b, const AxisList &ib,
                  const ContractOptions &opts = {});

/// Scalar output: all axes paired in order; shapes must match elementwise.
cplx contract(const Tensor &a, const Tensor &b);
cplx ccontract(const Tensor &a, const Tensor &b);
cplx contractc(const Tensor &a, const Tensor &b);
cplx ccontractc(const Tensor &a, const Tensor &b);

/// Self contraction; ccontract(a) equals frobenius_norm(a) squared.
cplx contract(const Tensor &a);
cplx ccontract(const Tensor &a);
cplx contractc(const Tensor &a);
cplx ccontractc(const Tensor &a);

/// Partial trace over pairs of axes with equal dimensions; remaining axes
/// keep their original relative order.
Tensor partial_trace(const Tensor &a,
                     std::span<const std::pair<std::size_t, std::size_t>> pairs);
Tensor partial_trace(const Tensor &a,
                     std::initializer_list<std::pair<std::size_t, std::size_t>> pairs);
Tensor partial_trace(const Tensor &a, std::size_t first, std::size_t second);

/// Opt-in validation: silent on success, otherwise throws a diagnostic
/// naming the first offending axis pair. contract itself only performs the
/// cheap dimension checks, never per-element validation.
void check_contract(const Tensor &a, const AxisList &ia, const Tensor &b,
                    const AxisList &ib);

/// Thread count of the inner multiply kernel (a no-op build of the kernel
/// may ignore it). Results stay deterministic within tolerance.
void set_kernel_threads(int n);
int kernel_threads();

} // namespace tn
