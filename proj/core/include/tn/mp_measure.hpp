#pragma once

#include "tn/mp.hpp"

// Measurement algorithms on MPS/MPO chains: operator application,
// expectation values, N-point correlation functions, and transfer matrices.

namespace tn {

/// |H psi>: the MPO is contracted onto the MPS site by site; each step is
/// re-split by a truncated SVD and the weights carried into the next site.
MPS apply_mpo(const MPO &h, const MPS &psi, const TruncationSpec &trunc = {});

/// <dualpsi| mpos[0] ... mpos[p-1] |psi> in a single left-to-right transfer
/// sweep threading all MPOs; p = 0 gives the plain overlap.
cplx expect(const MPS &dualpsi, const MPS &psi,
            std::span<const MPO *const> mpos);
cplx expect(const MPS &dualpsi, const MPS &psi);
cplx expect(const MPS &dualpsi, const MPS &psi, const MPO &h);
cplx expect(const MPS &psi);
cplx expect(const MPS &psi, const MPO &h);
cplx expect(const MPS &psi, std::span<const MPO *const> mpos);

/// M[i][j] = <psi| A_i B_j |psi| for all site pairs, with left/right
/// environment recycling (O(Ns^2) transfer steps). A parity string F, when
/// given, realizes fermionic anticommutation: the leftmost operator absorbs
/// one F on the side facing its partner and every site strictly between
/// carries F. Statistics are never inferred from operator names.
Tensor correlation_matrix(const MPS &psi, const Tensor &op_a,
                          const Tensor &op_b, const Tensor *parity = nullptr);

/// Odometer over nondecreasing site tuples: increments the last position,
/// carrying leftward and resetting trailing entries to the carried value.
void next_operator_positions(std::span<std::size_t> pos, std::size_t ns);

/// All permutations of the input, by Heap's algorithm. Guarded to length 8.
std::vector<std::vector<std::size_t>>
heap_permutations(std::span<const std::size_t> items);

/// T[i_1,...,i_k] = <psi| op_1(i_1) ... op_k(i_k) |psi> for every index
/// tuple, enumerated as ordered placements x operator permutations with the
/// left environments recycled along shared prefixes. No symmetry is assumed
/// in the output. The parity string follows the correlation_matrix rule.
Tensor correlation(const MPS &psi, std::span<const Tensor *const> ops,
                   const Tensor *parity = nullptr);

/// Product of site transfer maps (ket x conjugate ket traced over the
/// physical index) across sites [i, j]. Axes: (bra-left, ket-left,
/// bra-right, ket-right). A prior transfer matrix extends an existing
/// product covering sites up to i-1.
Tensor transfer_matrix(const MPS &psi, std::size_t i, std::size_t j,
                       const Tensor *seed = nullptr);
/// (bra x ket) matrixization of a rank-4 transfer tensor for eigenanalysis.
Tensor transfer_matrix_as_matrix(const Tensor &t);

} // namespace tn
