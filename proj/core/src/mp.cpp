#include "tn/mp.hpp"

#include "chain_ops.hpp"
#include "tn/contract.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tn {

namespace {

[[noreturn]] void fail(const std::string &msg) {
  throw std::invalid_argument("tn: " + msg);
}

} // namespace

// -- MPS ---------------------------------------------------------------------

MPS::MPS(std::vector<Tensor> tensors, std::size_t oc,
         std::optional<ScalarKind> kind) {
  if (tensors.empty())
    fail("MPS needs at least one site");
  const std::size_t ns = tensors.size();
  for (std::size_t i = 0; i < ns; ++i) {
    Tensor &t = tensors[i];
    if (t.rank() == 2) { // edge tensors may arrive without their unit link
      if (i == 0)
        reshape_inplace(t, {1, t.dim(1), t.dim(2)});
      else if (i + 1 == ns)
        reshape_inplace(t, {t.dim(1), t.dim(2), 1});
      else
        fail("rank-2 site tensor in the chain interior");
    }
    if (t.rank() != 3)
      fail("MPS site tensors must be rank 3");
  }
  if (tensors.front().dim(1) != 1 || tensors.back().dim(3) != 1)
    fail("MPS edge links must have dimension 1");
  for (std::size_t i = 0; i + 1 < ns; ++i)
    if (tensors[i].dim(3) != tensors[i + 1].dim(1))
      fail("MPS link dimensions do not match between sites " +
           std::to_string(i + 1) + " and " + std::to_string(i + 2));
  ScalarKind k = kind.value_or(ScalarKind::RealF64);
  if (!kind)
    for (const Tensor &t : tensors)
      k = promote(k, t.kind());
  for (Tensor &t : tensors)
    if (t.kind() != k)
      t = t.to_kind(k);
  if (oc > ns)
    fail("orthogonality center out of range");
  tensors_ = std::move(tensors);
  oc_ = oc;
  kind_ = k;
}

const Tensor &MPS::site(std::size_t i) const {
  if (i < 1 || i > tensors_.size())
    throw std::out_of_range("tn: MPS site index out of range");
  return tensors_[i - 1];
}

void MPS::set_site(std::size_t i, Tensor t) {
  if (i < 1 || i > tensors_.size())
    throw std::out_of_range("tn: MPS site index out of range");
  if (t.rank() != 3)
    fail("MPS site tensors must be rank 3");
  if (t.kind() != kind_) {
    kind_ = promote(kind_, t.kind());
    if (t.kind() != kind_)
      t = t.to_kind(kind_);
    for (Tensor &s : tensors_)
      if (s.kind() != kind_)
        s = s.to_kind(kind_);
  }
  tensors_[i - 1] = std::move(t);
}

void MPS::set_center(std::size_t oc) {
  if (oc > tensors_.size())
    fail("orthogonality center out of range");
  oc_ = oc;
}

std::size_t MPS::max_bond_dim() const {
  std::size_t m = 1;
  for (std::size_t i = 1; i <= length(); ++i)
    m = std::max(m, site(i).dim(3));
  return m;
}

// -- MPO ---------------------------------------------------------------------

MPO::MPO(std::vector<Tensor> tensors, std::optional<ScalarKind> kind) {
  if (tensors.empty())
    fail("MPO needs at least one site");
  for (Tensor &t : tensors) {
    if (t.rank() == 2)
      reshape_inplace(t, {1, t.dim(1), t.dim(2), 1});
    if (t.rank() != 4)
      fail("MPO site tensors must be rank 4");
  }
  if (tensors.front().dim(1) != 1 || tensors.back().dim(4) != 1)
    fail("MPO edge links must have dimension 1");
  for (std::size_t i = 0; i + 1 < tensors.size(); ++i)
    if (tensors[i].dim(4) != tensors[i + 1].dim(1))
      fail("MPO link dimensions do not match between sites " +
           std::to_string(i + 1) + " and " + std::to_string(i + 2));
  ScalarKind k = kind.value_or(ScalarKind::RealF64);
  if (!kind)
    for (const Tensor &t : tensors)
      k = promote(k, t.kind());
  for (Tensor &t : tensors)
    if (t.kind() != k)
      t = t.to_kind(k);
  tensors_ = std::move(tensors);
  kind_ = k;
}

const Tensor &MPO::site(std::size_t i) const {
  if (i < 1 || i > tensors_.size())
    throw std::out_of_range("tn: MPO site index out of range");
  return tensors_[i - 1];
}

void MPO::set_site(std::size_t i, Tensor t) {
  if (i < 1 || i > tensors_.size())
    throw std::out_of_range("tn: MPO site index out of range");
  if (t.rank() != 4)
    fail("MPO site tensors must be rank 4");
  kind_ = promote(kind_, t.kind());
  tensors_[i - 1] = t.kind() == kind_ ? std::move(t) : t.to_kind(kind_);
}

// -- Environment -------------------------------------------------------------

const Tensor &Environment::site(std::size_t i) const {
  if (i < 1 || i > tensors_.size())
    throw std::out_of_range("tn: environment site index out of range");
  return tensors_[i - 1];
}

void Environment::set_site(std::size_t i, Tensor t) {
  if (i < 1 || i > tensors_.size())
    throw std::out_of_range("tn: environment site index out of range");
  tensors_[i - 1] = std::move(t);
}

// -- constructors ------------------------------------------------------------

MPS product_mps(std::size_t phys_dim, std::size_t ns, ProductState which,
                std::uint64_t seed, ScalarKind kind) {
  std::vector<std::size_t> dims{phys_dim};
  return product_mps(dims, ns, which, seed, kind);
}

MPS product_mps(std::span<const std::size_t> phys_dims, std::size_t ns,
                ProductState which, std::uint64_t seed, ScalarKind kind) {
  if (ns < 1 || phys_dims.empty())
    fail("product_mps needs at least one site and one dimension");
  std::mt19937_64 rng(seed);
  std::vector<Tensor> sites;
  sites.reserve(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const std::size_t d = phys_dims[i % phys_dims.size()];
    Tensor t = Tensor::zeros(kind, {1, d, 1});
    std::size_t pick = 1;
    if (which == ProductState::RandomBasis)
      pick = std::uniform_int_distribution<std::size_t>(1, d)(rng);
    t.set_element({1, pick, 1}, 1.0);
    sites.push_back(std::move(t));
  }
  return MPS(std::move(sites), 1);
}

MPS apply_site_ops(const MPS &psi, std::span<const std::size_t> sites,
                   std::span<const Tensor *const> ops) {
  MPS out = psi;
  apply_site_ops_inplace(out, sites, ops);
  return out;
}

void apply_site_ops_inplace(MPS &psi, std::span<const std::size_t> sites,
                            std::span<const Tensor *const> ops) {
  if (sites.size() != ops.size())
    fail("apply_site_ops: site and operator counts differ");
  for (std::size_t j = 0; j < sites.size(); ++j) {
    const std::size_t i = sites[j];
    const Tensor &op = *ops[j];
    if (op.rank() != 2 || op.dim(2) != psi.phys_dim(i))
      fail("apply_site_ops: operator does not match the site dimension");
    psi.set_site(i, contract({1, 3, 2}, psi.site(i), {2}, op, {2}));
  }
}

// -- gauge management --------------------------------------------------------

GaugeReport gauge_move(MPS &psi, Direction dir, const TruncationSpec &trunc) {
  return detail::gauge_move_impl(psi, dir, trunc);
}

void move_center(MPS &psi, std::size_t target, const TruncationSpec &trunc) {
  detail::move_center_impl(psi, target, trunc);
}

double norm(const MPS &psi) {
  const std::size_t oc = psi.center();
  if (oc >= 1)
    return frobenius_norm(psi.site(oc));
  Tensor env = make_boundary(psi.kind(), {}, Direction::Left);
  for (std::size_t i = 1; i <= psi.length(); ++i)
    env = env_update(Direction::Left, env, psi.site(i), psi.site(i));
  return std::sqrt(std::abs(env.scalar_value().real()));
}

void normalize(MPS &psi) {
  const double n = norm(psi);
  if (n == 0.0)
    throw std::invalid_argument("tn: cannot normalize a zero state");
  if (psi.center() >= 1) {
    psi.set_site(psi.center(), psi.site(psi.center()) / n);
    return;
  }
  psi.set_site(1, psi.site(1) / n);
}

SideNormalized normalize_side(MPS &psi, Direction side) {
  const std::size_t ns = psi.length();
  SideNormalized out;
  if (side == Direction::Left) {
    Tensor carry;
    for (std::size_t i = 1; i <= ns; ++i) {
      Tensor theta =
          i == 1 ? psi.site(1) : contract(carry, {2}, psi.site(i), {1});
      SvdResult svd = svd_truncated(theta, {{1, 2}, {3}});
      psi.set_site(i, std::move(svd.u));
      carry = contract(diagonal_matrix(svd.d), {2}, svd.vh, {1});
      if (i == ns) {
        out.weights = std::move(svd.d);
        out.edge = std::move(svd.vh);
      }
    }
  } else {
    Tensor carry;
    for (std::size_t i = ns; i >= 1; --i) {
      Tensor theta =
          i == ns ? psi.site(ns) : contract(psi.site(i), {3}, carry, {1});
      SvdResult svd = svd_truncated(theta, {{1}, {2, 3}});
      psi.set_site(i, std::move(svd.vh));
      carry = contract(svd.u, {2}, diagonal_matrix(svd.d), {1});
      if (i == 1) {
        out.weights = std::move(svd.d);
        out.edge = std::move(svd.u);
      }
    }
  }
  psi.set_center(0);
  return out;
}

// -- environments ------------------------------------------------------------

Tensor make_boundary(ScalarKind kind, std::span<const std::size_t> mpo_link_dims,
                     Direction side) {
  Shape shape{1};
  shape.insert(shape.end(), mpo_link_dims.begin(), mpo_link_dims.end());
  shape.push_back(1);
  Tensor t = Tensor::zeros(kind, shape);
  std::vector<std::size_t> pos(shape.size(), 1);
  for (std::size_t j = 0; j < mpo_link_dims.size(); ++j)
    pos[1 + j] = side == Direction::Left ? mpo_link_dims[j] : 1;
  t.set_element(pos, 1.0);
  return t;
}

std::pair<Tensor, Tensor> make_ends(const MPS &dualpsi, const MPS &psi,
                                    std::span<const MPO *const> mpos) {
  if (dualpsi.length() != psi.length())
    fail("make_ends: chain lengths differ");
  for (const MPO *h : mpos)
    if (h->length() != psi.length())
      fail("make_ends: MPO length differs from the state");
  const ScalarKind kind = promote(dualpsi.kind(), psi.kind());
  return {make_boundary(kind, detail::edge_link_dims(mpos, Direction::Left),
                        Direction::Left),
          make_boundary(kind, detail::edge_link_dims(mpos, Direction::Right),
                        Direction::Right)};
}

std::pair<Tensor, Tensor> make_ends(const MPS &psi,
                                    std::span<const MPO *const> mpos) {
  return make_ends(psi, psi, mpos);
}

Tensor env_update(Direction dir, const Tensor &env, const Tensor &dual_site,
                  const Tensor &psi_site,
                  std::span<const Tensor *const> mpo_sites) {
  const std::size_t p = mpo_sites.size();
  if (env.rank() != p + 2)
    fail("env_update: environment rank does not match the MPO count");
  AxisList reverse(p + 2);
  for (std::size_t k = 0; k < p + 2; ++k)
    reverse[k] = p + 2 - k;
  if (dir == Direction::Left) {
    Tensor t = contract(env, {p + 2}, psi_site, {1});
    // axes: (bra, w_1..w_p, s, k'); each thread keeps s at rank-1
    for (std::size_t j = p; j >= 1; --j) {
      const std::size_t rank = t.rank();
      t = contract(t, {1 + j, rank - 1}, *mpo_sites[j - 1], {1, 3});
    }
    const std::size_t rank = t.rank();
    return contractc(reverse, t, {1, rank - 1}, dual_site, {1, 2});
  }
  Tensor t = contract(psi_site, {3}, env, {p + 2});
  // axes: (k, s, bra, w_1..w_p); threading appends s at the last position
  for (std::size_t j = p; j >= 1; --j) {
    const std::size_t rank = t.rank();
    const std::size_t s_pos = j == p ? 2 : rank;
    const std::size_t w_pos = j == p ? 3 + j : 2 + j;
    t = contract(t, {s_pos, w_pos}, *mpo_sites[j - 1], {3, 4});
  }
  const std::size_t rank = t.rank();
  const std::size_t s_pos = p == 0 ? 2 : rank;
  const std::size_t bra_pos = p == 0 ? rank : 2;
  return contractc(reverse, t, {s_pos, bra_pos}, dual_site, {2, 3});
}

Tensor env_update(Direction dir, const Tensor &env, const Tensor &dual_site,
                  const Tensor &psi_site, const Tensor &mpo_site) {
  const Tensor *ws[] = {&mpo_site};
  return env_update(dir, env, dual_site, psi_site, ws);
}

std::pair<Environment, Environment>
make_env(const MPS &dualpsi, const MPS &psi,
         std::span<const MPO *const> mpos) {
  Environment lenv(psi.length()), renv(psi.length());
  detail::make_env_impl(dualpsi, psi, mpos, lenv, renv);
  return {std::move(lenv), std::move(renv)};
}

std::pair<Environment, Environment> make_env(const MPS &psi, const MPO &mpo) {
  const MPO *ws[] = {&mpo};
  return make_env(psi, psi, ws);
}

void boundary_move(MPS &psi, std::size_t target, Environment &lenv,
                   Environment &renv, const MPO &mpo,
                   const TruncationSpec &trunc) {
  detail::boundary_move_impl(psi, target, lenv, renv, mpo, trunc);
}

} // namespace tn
