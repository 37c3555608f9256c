#pragma once

#include "tn/decompose.hpp"
#include "tn/tensor.hpp"

#include <cstdint>
#include <optional>

// MPS/MPO/Environment containers and gauge management. Site tensors are
// uniformly rank-3 (left-link, physical, right-link) for states and rank-4
// (left-link, physical-out, physical-in, right-link) for operators, with
// unit links on the chain edges. Sites are addressed 1-based.

namespace tn {

class MPS {
public:
  MPS() = default;
  /// Validates link matching and promotes rank-2 edge tensors to rank-3 with
  /// unit links. Tensors of mixed scalar kind are promoted to a common kind;
  /// an explicit kind coerces every site.
  explicit MPS(std::vector<Tensor> tensors, std::size_t oc = 1,
               std::optional<ScalarKind> kind = std::nullopt);

  std::size_t length() const noexcept { return tensors_.size(); }
  const Tensor &site(std::size_t i) const;
  void set_site(std::size_t i, Tensor t);
  /// Orthogonality center; 0 means "no gauge".
  std::size_t center() const noexcept { return oc_; }
  void set_center(std::size_t oc);
  ScalarKind kind() const noexcept { return kind_; }
  std::size_t phys_dim(std::size_t i) const { return site(i).dim(2); }
  std::size_t bond_dim(std::size_t i) const { return site(i).dim(3); }
  std::size_t max_bond_dim() const;

private:
  std::vector<Tensor> tensors_;
  std::size_t oc_ = 0;
  ScalarKind kind_ = ScalarKind::RealF64;
};

class MPO {
public:
  MPO() = default;
  /// Rank-2 site inputs are lifted to rank-4 with unit links. There is no
  /// gauge field.
  explicit MPO(std::vector<Tensor> tensors,
               std::optional<ScalarKind> kind = std::nullopt);

  std::size_t length() const noexcept { return tensors_.size(); }
  const Tensor &site(std::size_t i) const;
  void set_site(std::size_t i, Tensor t);
  ScalarKind kind() const noexcept { return kind_; }
  std::size_t phys_dim(std::size_t i) const { return site(i).dim(2); }

private:
  std::vector<Tensor> tensors_;
  ScalarKind kind_ = ScalarKind::RealF64;
};

/// One set of boundary tensors, one per site position. Left environments
/// cover everything strictly left of their position, right environments
/// everything strictly right. Env tensor axes: (bra-link, MPO-links..., ket-link).
class Environment {
public:
  Environment() = default;
  explicit Environment(std::size_t ns) : tensors_(ns) {}

  std::size_t length() const noexcept { return tensors_.size(); }
  const Tensor &site(std::size_t i) const;
  void set_site(std::size_t i, Tensor t);

private:
  std::vector<Tensor> tensors_;
};

// -- constructors ------------------------------------------------------------

enum class ProductState { FirstBasis, RandomBasis };

/// Product state of bond dimension 1. FirstBasis selects the first basis
/// state on every site; RandomBasis picks a uniformly random basis state per
/// site from the seeded generator. Norm is 1 either way.
MPS product_mps(std::size_t phys_dim, std::size_t ns,
                ProductState which = ProductState::FirstBasis,
                std::uint64_t seed = 0,
                ScalarKind kind = ScalarKind::RealF64);
MPS product_mps(std::span<const std::size_t> phys_dims, std::size_t ns,
                ProductState which = ProductState::FirstBasis,
                std::uint64_t seed = 0,
                ScalarKind kind = ScalarKind::RealF64);

/// Contract single-site operators onto the listed sites.
MPS apply_site_ops(const MPS &psi, std::span<const std::size_t> sites,
                   std::span<const Tensor *const> ops);
void apply_site_ops_inplace(MPS &psi, std::span<const std::size_t> sites,
                            std::span<const Tensor *const> ops);

// -- gauge management --------------------------------------------------------

enum class Direction { Left, Right };

struct GaugeReport {
  double trunc_err = 0.0;
  std::size_t bond = 0; // dimension of the newly generated link
};

/// Move the orthogonality center one site. QR (LQ) is used when the new link
/// cannot be truncated; otherwise the SVD path contracts the weights into
/// the receiving site.
GaugeReport gauge_move(MPS &psi, Direction dir,
                       const TruncationSpec &trunc = {});
void move_center(MPS &psi, std::size_t target,
                 const TruncationSpec &trunc = {});

/// Norm of the state; O(1) when an orthogonality center is set.
double norm(const MPS &psi);
void normalize(MPS &psi);

struct SideNormalized {
  Tensor weights; // final singular values
  Tensor edge;    // trailing Vh (left form) or leading U (right form)
};

/// Left (right) normalization: every site tensor becomes the U (Vh) factor
/// of a sweep of decompositions; the center is set to 0 afterwards.
SideNormalized normalize_side(MPS &psi, Direction side);

// -- environments ------------------------------------------------------------

/// Edge tensor of an environment chain: rank 2+p, value 1 in the channel
/// selected by the lower-triangular MPO convention (left edge: last row
/// channel; right edge: first column channel).
Tensor make_boundary(ScalarKind kind, std::span<const std::size_t> mpo_link_dims,
                     Direction side);

std::pair<Tensor, Tensor> make_ends(const MPS &dualpsi, const MPS &psi,
                                    std::span<const MPO *const> mpos);
std::pair<Tensor, Tensor> make_ends(const MPS &psi,
                                    std::span<const MPO *const> mpos);

/// Absorb one site column into an environment tensor. The dual defaults to
/// psi itself. Conjugation of the dual happens inside.
Tensor env_update(Direction dir, const Tensor &env, const Tensor &dual_site,
                  const Tensor &psi_site,
                  std::span<const Tensor *const> mpo_sites = {});
Tensor env_update(Direction dir, const Tensor &env, const Tensor &dual_site,
                  const Tensor &psi_site, const Tensor &mpo_site);

/// Left environments for sites up to the center, right environments from the
/// center up; both sized to the full chain.
std::pair<Environment, Environment>
make_env(const MPS &dualpsi, const MPS &psi, std::span<const MPO *const> mpos);
std::pair<Environment, Environment> make_env(const MPS &psi, const MPO &mpo);

/// Move the center and keep the environments synchronized. No consistency
/// validation is performed; tests recompute environments from scratch.
void boundary_move(MPS &psi, std::size_t target, Environment &lenv,
                   Environment &renv, const MPO &mpo,
                   const TruncationSpec &trunc = {});

} // namespace tn
