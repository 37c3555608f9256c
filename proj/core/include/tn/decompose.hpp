#pragma once

#include "tn/tensor.hpp"

#include <optional>

// Truncated SVD and Hermitian eigendecomposition, QR/LQ, and polar
// decomposition. Factor phases are pinned deterministically: the
// largest-magnitude entry of each U column (first on ties) is made real and
// positive, with the compensating phase folded into V (or R / L diagonals for
// QR / LQ).

namespace tn {

struct TruncationSpec {
  std::size_t max_keep = 0;   // m: maximal kept values, 0 = unbounded
  std::size_t min_keep = 0;   // minm: floor on the kept count
  double cutoff = 0.0;        // maximal discarded weight fraction
  double power = 2.0;         // exponent applied to values before weighing
  double eff_zero = 1e-16;    // effective-zero threshold
  bool nozeros = true;        // drop values <= eff_zero first
  bool keepdeg = false;       // never split a degenerate group

  static TruncationSpec for_eigen() {
    TruncationSpec s;
    s.power = 1.0;
    return s;
  }
};

struct TruncationDecision {
  std::size_t keep = 0;
  double trunc_err = 0.0; // discarded weight fraction of magnitude^power
  double magnitude = 0.0; // scale the cutoff was applied against
};

/// Number of values to keep from a nonincreasing nonnegative list.
/// mag == 0 means "compute the magnitude from the values". keepdeg may push
/// the kept count past max_keep to avoid splitting a degenerate group.
TruncationDecision truncation_rank(std::span<const double> values,
                                   const TruncationSpec &spec, double mag = 0.0);

struct SvdResult {
  Tensor u;        // left factor, grouped axes restored
  Tensor d;        // rank-1 singular values, nonincreasing
  Tensor vh;       // right factor (adjoint side), grouped axes restored
  double trunc_err = 0.0;
  double magnitude = 0.0;
};

struct SvdOptions {
  double mag = 0.0;      // externally supplied magnitude, 0 = compute
  bool recursive = false;
};

SvdResult svd_truncated(const Tensor &m, const TruncationSpec &spec = {},
                        const SvdOptions &options = {});
SvdResult svd_truncated(const Tensor &m,
                        std::span<const std::vector<std::size_t>> groups,
                        const TruncationSpec &spec = {},
                        const SvdOptions &options = {});
SvdResult svd_truncated(const Tensor &m,
                        std::initializer_list<std::vector<std::size_t>> groups,
                        const TruncationSpec &spec = {},
                        const SvdOptions &options = {});

/// Refines small singular values by deflating the leading subspace and
/// re-decomposing the residual; depth is capped at 3 with a fixed relative
/// threshold per level. An accuracy tool, not an algorithmic requirement.
SvdResult recursive_svd(const Tensor &m, double level_tolerance = 1e-8);

struct EigResult {
  Tensor u;        // eigenvectors as columns
  Tensor d;        // rank-1 eigenvalues, sorted descending by value
  double trunc_err = 0.0;
  double magnitude = 0.0;
};

/// Hermitian eigendecomposition with the SVD's truncation surface (power 1
/// by default). A positive-definite overlap matrix B switches to the
/// generalized problem M u = lambda B u. Truncation weighs |value|^power;
/// intended for positive-semidefinite inputs when truncating.
EigResult eigen_truncated(const Tensor &m,
                          const TruncationSpec &spec = TruncationSpec::for_eigen(),
                          const Tensor *b = nullptr, double mag = 0.0);
EigResult eigen_truncated(const Tensor &m,
                          std::span<const std::vector<std::size_t>> groups,
                          const TruncationSpec &spec = TruncationSpec::for_eigen(),
                          const Tensor *b = nullptr, double mag = 0.0);

struct QrResult {
  Tensor q;
  Tensor r; // upper triangular (lower for LQ, where it is the first factor)
  double trunc_err = 0.0; // always 0, kept for interface uniformity
  double magnitude = 1.0; // always 1
};

QrResult qr_decompose(const Tensor &m);
QrResult qr_decompose(const Tensor &m,
                      std::span<const std::vector<std::size_t>> groups);
struct LqResult {
  Tensor l;
  Tensor q;
  double trunc_err = 0.0;
  double magnitude = 1.0;
};
LqResult lq_decompose(const Tensor &m);
LqResult lq_decompose(const Tensor &m,
                      std::span<const std::vector<std::size_t>> groups);

/// Polar decomposition as SVD post-processing. right=false returns
/// (U D U^h, U V^h); right=true returns (U V^h, V D V^h). outer_max, when
/// nonzero, additionally caps the kept singular values.
std::pair<Tensor, Tensor>
polar_decompose(const Tensor &a,
                std::span<const std::vector<std::size_t>> groups,
                bool right = true, std::size_t outer_max = 0,
                const TruncationSpec &spec = {});

/// Square diagonal matrix from a rank-1 value list.
Tensor diagonal_matrix(const Tensor &values);

} // namespace tn
