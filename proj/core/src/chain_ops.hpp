#pragma once

#include "tn/contract.hpp"
#include "tn/decompose.hpp"
#include "tn/mp.hpp"

#include <stdexcept>

// Gauge and environment sweeps shared by the in-memory and disk-backed
// chains. A chain type provides length(), site(i), set_site(i, t); state
// chains add center()/set_center(). Not installed.

namespace tn::detail {

template <class State>
GaugeReport gauge_move_impl(State &psi, Direction dir,
                            const TruncationSpec &trunc) {
  const std::size_t ns = psi.length();
  const std::size_t oc = psi.center();
  if (oc < 1 || oc > ns)
    throw std::invalid_argument("tn: gauge_move needs a valid center");
  GaugeReport report;
  if (dir == Direction::Right) {
    if (oc == ns)
      throw std::invalid_argument("tn: gauge_move past the right chain end");
    Tensor a = psi.site(oc);
    const std::size_t full = std::min(a.dim(1) * a.dim(2), a.dim(3));
    const bool truncating =
        trunc.cutoff > 0.0 || (trunc.max_keep > 0 && trunc.max_keep < full);
    const std::vector<std::vector<std::size_t>> groups{{1, 2}, {3}};
    if (!truncating) {
      QrResult qr = qr_decompose(a, groups);
      report.bond = qr.q.dim(3);
      psi.set_site(oc, std::move(qr.q));
      psi.set_site(oc + 1, contract(qr.r, {2}, psi.site(oc + 1), {1}));
    } else {
      SvdResult svd = svd_truncated(a, groups, trunc);
      report.bond = svd.d.dim(1);
      report.trunc_err = svd.trunc_err;
      Tensor dv = contract(diagonal_matrix(svd.d), {2}, svd.vh, {1});
      psi.set_site(oc, std::move(svd.u));
      psi.set_site(oc + 1, contract(dv, {2}, psi.site(oc + 1), {1}));
    }
    psi.set_center(oc + 1);
  } else {
    if (oc == 1)
      throw std::invalid_argument("tn: gauge_move past the left chain end");
    Tensor a = psi.site(oc);
    const std::size_t full = std::min(a.dim(1), a.dim(2) * a.dim(3));
    const bool truncating =
        trunc.cutoff > 0.0 || (trunc.max_keep > 0 && trunc.max_keep < full);
    const std::vector<std::vector<std::size_t>> groups{{1}, {2, 3}};
    if (!truncating) {
      LqResult lq = lq_decompose(a, groups);
      report.bond = lq.q.dim(1);
      psi.set_site(oc, std::move(lq.q));
      psi.set_site(oc - 1, contract(psi.site(oc - 1), {3}, lq.l, {1}));
    } else {
      SvdResult svd = svd_truncated(a, groups, trunc);
      report.bond = svd.d.dim(1);
      report.trunc_err = svd.trunc_err;
      Tensor ud = contract(svd.u, {2}, diagonal_matrix(svd.d), {1});
      psi.set_site(oc, std::move(svd.vh));
      psi.set_site(oc - 1, contract(psi.site(oc - 1), {3}, ud, {1}));
    }
    psi.set_center(oc - 1);
  }
  return report;
}

template <class State>
void move_center_impl(State &psi, std::size_t target,
                      const TruncationSpec &trunc) {
  if (target < 1 || target > psi.length())
    throw std::invalid_argument("tn: move_center target out of range");
  while (psi.center() < target)
    gauge_move_impl(psi, Direction::Right, trunc);
  while (psi.center() > target)
    gauge_move_impl(psi, Direction::Left, trunc);
}

template <class Oper>
std::vector<std::size_t> edge_link_dims(std::span<const Oper *const> mpos,
                                        Direction side) {
  std::vector<std::size_t> dims;
  dims.reserve(mpos.size());
  for (const Oper *h : mpos) {
    const Tensor &w =
        side == Direction::Left ? h->site(1) : h->site(h->length());
    dims.push_back(side == Direction::Left ? w.dim(1) : w.dim(4));
  }
  return dims;
}

/// Fill lenv for positions 1..oc and renv for positions oc..ns.
template <class State, class Oper, class EnvL, class EnvR>
void make_env_impl(const State &dual, const State &psi,
                   std::span<const Oper *const> mpos, EnvL &lenv, EnvR &renv) {
  const std::size_t ns = psi.length();
  const std::size_t oc = psi.center();
  if (oc < 1 || oc > ns)
    throw std::invalid_argument("tn: make_env needs a valid center");
  const ScalarKind kind = promote(dual.kind(), psi.kind());
  lenv.set_site(1, make_boundary(kind, edge_link_dims(mpos, Direction::Left),
                                 Direction::Left));
  renv.set_site(ns, make_boundary(kind, edge_link_dims(mpos, Direction::Right),
                                  Direction::Right));
  std::vector<const Tensor *> ws(mpos.size());
  std::vector<Tensor> hold(mpos.size());
  for (std::size_t i = 2; i <= oc; ++i) {
    for (std::size_t j = 0; j < mpos.size(); ++j) {
      hold[j] = mpos[j]->site(i - 1);
      ws[j] = &hold[j];
    }
    lenv.set_site(i, env_update(Direction::Left, lenv.site(i - 1),
                                dual.site(i - 1), psi.site(i - 1), ws));
  }
  for (std::size_t i = ns; i-- > oc;) {
    for (std::size_t j = 0; j < mpos.size(); ++j) {
      hold[j] = mpos[j]->site(i + 1);
      ws[j] = &hold[j];
    }
    renv.set_site(i, env_update(Direction::Right, renv.site(i + 1),
                                dual.site(i + 1), psi.site(i + 1), ws));
  }
}

template <class State, class Oper, class EnvL, class EnvR>
void boundary_move_impl(State &psi, std::size_t target, EnvL &lenv, EnvR &renv,
                        const Oper &mpo, const TruncationSpec &trunc) {
  if (target < 1 || target > psi.length())
    throw std::invalid_argument("tn: boundary_move target out of range");
  while (psi.center() < target) {
    const std::size_t i = psi.center();
    gauge_move_impl(psi, Direction::Right, trunc);
    Tensor w = mpo.site(i);
    const Tensor *ws[] = {&w};
    Tensor s = psi.site(i);
    lenv.set_site(i + 1, env_update(Direction::Left, lenv.site(i), s, s, ws));
  }
  while (psi.center() > target) {
    const std::size_t i = psi.center();
    gauge_move_impl(psi, Direction::Left, trunc);
    Tensor w = mpo.site(i);
    const Tensor *ws[] = {&w};
    Tensor s = psi.site(i);
    renv.set_site(i - 1, env_update(Direction::Right, renv.site(i), s, s, ws));
  }
}

} // namespace tn::detail
