#include "tn/mp_measure.hpp"

#include "tn/contract.hpp"

#include <algorithm>
#include <stdexcept>

namespace tn {

namespace {

[[noreturn]] void fail(const std::string &msg) {
  throw std::invalid_argument("tn: " + msg);
}

Tensor matmul(const Tensor &a, const Tensor &b) {
  return contract(a, {2}, b, {1});
}

/// Contract an on-site operator onto the ket's physical axis.
Tensor apply_op(const Tensor &op, const Tensor &site) {
  return contract({1, 3, 2}, site, {2}, op, {2});
}

/// p=0 left-environment step with an optional on-site operator.
Tensor extend_left(const Tensor &env, const Tensor &site, const Tensor *op) {
  if (!op)
    return env_update(Direction::Left, env, site, site);
  return env_update(Direction::Left, env, site, apply_op(*op, site));
}

cplx close_left(const Tensor &lenv, const Tensor &renv) {
  return contract(lenv, renv);
}

} // namespace

MPS apply_mpo(const MPO &h, const MPS &psi, const TruncationSpec &trunc) {
  const std::size_t ns = psi.length();
  if (h.length() != ns)
    fail("apply_mpo: chain lengths differ");
  std::vector<Tensor> sites(ns);
  // carry has axes (new-left, psi-link, mpo-link)
  Tensor carry = Tensor::zeros(promote(psi.kind(), h.kind()), {1, 1, 1});
  carry.set_element({1, 1, 1}, 1.0);
  for (std::size_t i = 1; i <= ns; ++i) {
    if (h.phys_dim(i) != psi.phys_dim(i))
      fail("apply_mpo: physical dimensions differ at site " + std::to_string(i));
    Tensor x = contract(carry, {2}, psi.site(i), {1}); // (chi, wl, s, r)
    // pair (wl, s) with the MPO's (left, phys-in): (chi, r, s', wr)
    x = contract(x, {2, 3}, h.site(i), {1, 3});
    x = permute(x, {1, 3, 2, 4}); // (chi, s', r, wr)
    if (i == ns) {
      sites[i - 1] = reshape(x, {x.dim(1), x.dim(2), 1});
      break;
    }
    SvdResult svd = svd_truncated(x, {{1, 2}, {3, 4}}, trunc);
    sites[i - 1] = svd.u;
    carry = contract(diagonal_matrix(svd.d), {2}, svd.vh, {1});
  }
  return MPS(std::move(sites), ns);
}

cplx expect(const MPS &dualpsi, const MPS &psi,
            std::span<const MPO *const> mpos) {
  const std::size_t ns = psi.length();
  if (dualpsi.length() != ns)
    fail("expect: chain lengths differ");
  for (const MPO *h : mpos)
    if (h->length() != ns)
      fail("expect: MPO length differs from the state");
  auto [left, right] = make_ends(dualpsi, psi, mpos);
  Tensor env = std::move(left);
  std::vector<const Tensor *> ws(mpos.size());
  for (std::size_t i = 1; i <= ns; ++i) {
    for (std::size_t j = 0; j < mpos.size(); ++j)
      ws[j] = &mpos[j]->site(i);
    env = env_update(Direction::Left, env, dualpsi.site(i), psi.site(i), ws);
  }
  return contract(env, right);
}

cplx expect(const MPS &dualpsi, const MPS &psi) {
  return expect(dualpsi, psi, std::span<const MPO *const>{});
}

cplx expect(const MPS &dualpsi, const MPS &psi, const MPO &h) {
  const MPO *ws[] = {&h};
  return expect(dualpsi, psi, ws);
}

cplx expect(const MPS &psi) {
  return expect(psi, psi, std::span<const MPO *const>{});
}

cplx expect(const MPS &psi, const MPO &h) {
  const MPO *ws[] = {&h};
  return expect(psi, psi, ws);
}

cplx expect(const MPS &psi, std::span<const MPO *const> mpos) {
  return expect(psi, psi, mpos);
}

Tensor correlation_matrix(const MPS &psi, const Tensor &op_a,
                          const Tensor &op_b, const Tensor *parity) {
  const std::size_t ns = psi.length();
  for (std::size_t i = 1; i <= ns; ++i)
    if (op_a.dim(2) != psi.phys_dim(i) || op_b.dim(2) != psi.phys_dim(i))
      fail("correlation_matrix: operator does not match the site dimension");

  ScalarKind kind = promote(psi.kind(), promote(op_a.kind(), op_b.kind()));
  if (parity)
    kind = promote(kind, parity->kind());
  Tensor m = Tensor::zeros(kind, {ns, ns});

  // Pure right environments: renv[i] covers sites i..Ns (renv[ns+1] = edge).
  std::vector<Tensor> renv(ns + 2);
  renv[ns + 1] = make_boundary(psi.kind(), {}, Direction::Right);
  for (std::size_t i = ns; i >= 1; --i)
    renv[i] =
        env_update(Direction::Right, renv[i + 1], psi.site(i), psi.site(i));

  const Tensor diag_op = matmul(op_a, op_b);
  const Tensor left_a = parity ? matmul(op_a, *parity) : op_a;
  const Tensor left_b = parity ? matmul(*parity, op_b) : op_b;

  Tensor lpure = make_boundary(psi.kind(), {}, Direction::Left);
  for (std::size_t a = 1; a <= ns; ++a) {
    m.set_element({a, a},
                  close_left(extend_left(lpure, psi.site(a), &diag_op),
                             renv[a + 1]));
    Tensor ea = extend_left(lpure, psi.site(a), &left_a); // A at a, B later
    Tensor eb = extend_left(lpure, psi.site(a), &left_b); // B at a, A later
    for (std::size_t b = a + 1; b <= ns; ++b) {
      m.set_element({a, b}, close_left(extend_left(ea, psi.site(b), &op_b),
                                       renv[b + 1]));
      m.set_element({b, a}, close_left(extend_left(eb, psi.site(b), &op_a),
                                       renv[b + 1]));
      if (b < ns) {
        ea = extend_left(ea, psi.site(b), parity);
        eb = extend_left(eb, psi.site(b), parity);
      }
    }
    lpure = extend_left(lpure, psi.site(a), nullptr);
  }
  return m;
}

void next_operator_positions(std::span<std::size_t> pos, std::size_t ns) {
  if (pos.empty())
    return;
  std::size_t i = pos.size();
  while (i > 0 && pos[i - 1] == ns)
    --i;
  if (i == 0) { // wrapped; restart the enumeration
    std::fill(pos.begin(), pos.end(), std::size_t{1});
    return;
  }
  ++pos[i - 1];
  for (std::size_t j = i; j < pos.size(); ++j)
    pos[j] = pos[i - 1];
}

std::vector<std::vector<std::size_t>>
heap_permutations(std::span<const std::size_t> items) {
  if (items.size() > 8)
    fail("heap_permutations is guarded to 8 items");
  std::vector<std::size_t> work(items.begin(), items.end());
  std::vector<std::vector<std::size_t>> out;
  // Heap's algorithm, iterative form.
  const std::size_t n = work.size();
  std::vector<std::size_t> c(n, 0);
  out.push_back(work);
  std::size_t i = 1;
  while (i < n) {
    if (c[i] < i) {
      std::swap(work[i % 2 == 0 ? 0 : c[i]], work[i]);
      out.push_back(work);
      ++c[i];
      i = 1;
    } else {
      c[i] = 0;
      ++i;
    }
  }
  return out;
}

namespace {

struct CorrelationSweep {
  const MPS &psi;
  std::span<const Tensor *const> ops;
  const Tensor *parity;
  const std::vector<Tensor> &renv;
  Tensor &result;
  const std::vector<std::size_t> &perm; // op index per sorted slot, 0-based
  std::vector<std::size_t> site_of_op;  // 1-based placement per op

  /// On-site matrix at `site` when slots [s, s+t) land there: the ops are
  /// multiplied in original order, interleaved with one parity factor for
  /// every op still to the right.
  Tensor slot_matrix(std::size_t s, std::size_t t, std::size_t site) const {
    const std::size_t k = ops.size();
    std::vector<int> role(k, 0); // 0 = placed/identity, 1 = here, 2 = future
    for (std::size_t q = s; q < s + t; ++q)
      role[perm[q]] = 1;
    for (std::size_t q = s + t; q < k; ++q)
      role[perm[q]] = 2;
    Tensor m = identity_tensor(psi.phys_dim(site));
    for (std::size_t op = 0; op < k; ++op) {
      if (role[op] == 1)
        m = matmul(m, *ops[op]);
      else if (role[op] == 2 && parity)
        m = matmul(m, *parity);
    }
    return m;
  }

  /// Parity power for pass-through sites with `remaining` unplaced ops.
  const Tensor *string_matrix(std::size_t remaining) const {
    return (parity && remaining % 2 == 1) ? parity : nullptr;
  }

  void record(const Tensor &lenv, std::size_t next_site) {
    const cplx value = close_left(lenv, renv[next_site]);
    result.set_element(site_of_op, value);
  }

  void recurse(std::size_t s, std::size_t first_site, const Tensor &lenv) {
    const std::size_t k = ops.size();
    const std::size_t ns = psi.length();
    if (s == k) {
      record(lenv, first_site);
      return;
    }
    Tensor through = lenv;
    for (std::size_t p = first_site; p <= ns; ++p) {
      for (std::size_t t = 1; t <= k - s; ++t) {
        if (t < k - s && p == ns)
          continue; // remaining slots cannot fit past the chain end
        const Tensor m = slot_matrix(s, t, p);
        Tensor next = extend_left(through, psi.site(p), &m);
        for (std::size_t q = s; q < s + t; ++q)
          site_of_op[perm[q]] = p;
        recurse(s + t, p + 1, next);
      }
      if (p < ns)
        through =
            extend_left(through, psi.site(p), string_matrix(k - s));
    }
  }
};

} // namespace

Tensor correlation(const MPS &psi, std::span<const Tensor *const> ops,
                   const Tensor *parity) {
  const std::size_t k = ops.size();
  if (k < 1)
    fail("correlation needs at least one operator");
  const std::size_t ns = psi.length();
  for (const Tensor *op : ops)
    for (std::size_t i = 1; i <= ns; ++i)
      if (op->dim(2) != psi.phys_dim(i))
        fail("correlation: operator does not match the site dimension");

  ScalarKind kind = psi.kind();
  for (const Tensor *op : ops)
    kind = promote(kind, op->kind());
  if (parity)
    kind = promote(kind, parity->kind());
  Tensor result = Tensor::zeros(kind, Shape(k, ns));

  std::vector<Tensor> renv(ns + 2);
  renv[ns + 1] = make_boundary(psi.kind(), {}, Direction::Right);
  for (std::size_t i = ns; i >= 1; --i)
    renv[i] =
        env_update(Direction::Right, renv[i + 1], psi.site(i), psi.site(i));

  std::vector<std::size_t> op_ids(k);
  for (std::size_t i = 0; i < k; ++i)
    op_ids[i] = i;
  const Tensor edge = make_boundary(psi.kind(), {}, Direction::Left);
  for (const auto &perm : heap_permutations(op_ids)) {
    CorrelationSweep sweep{psi,  ops,  parity, renv,
                           result, perm, std::vector<std::size_t>(k, 1)};
    sweep.recurse(0, 1, edge);
  }
  return result;
}

Tensor transfer_matrix(const MPS &psi, std::size_t i, std::size_t j,
                       const Tensor *seed) {
  const std::size_t ns = psi.length();
  if (i < 1 || j > ns || i > j)
    fail("transfer_matrix: site range out of order");
  auto site_map = [&](std::size_t s) {
    // (bra-left, bra-right, ket-left, ket-right) -> pinned axis order
    return permute(ccontract(psi.site(s), {2}, psi.site(s), {2}), {1, 3, 2, 4});
  };
  Tensor t;
  std::size_t start;
  if (seed) {
    t = *seed;
    start = i;
  } else {
    t = site_map(i);
    start = i + 1;
  }
  for (std::size_t s = start; s <= j; ++s)
    t = contract(t, {3, 4}, site_map(s), {1, 2});
  return t;
}

Tensor transfer_matrix_as_matrix(const Tensor &t) {
  if (t.rank() != 4)
    fail("transfer_matrix_as_matrix expects a rank-4 tensor");
  return reshape(t, {{1, 2}, {3, 4}});
}

} // namespace tn
