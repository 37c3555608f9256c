#include "tn/contract.hpp"

#include "kernels.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tn {

namespace {

[[noreturn]] void fail(const std::string &msg) {
  throw std::invalid_argument("tn: " + msg);
}

void validate_axes(std::span<const std::size_t> axes, std::size_t rank,
                   const char *what) {
  std::vector<bool> seen(rank, false);
  for (std::size_t a : axes) {
    if (a < 1 || a > rank)
      fail(std::string(what) + ": axis out of range");
    if (seen[a - 1])
      fail(std::string(what) + ": duplicate axis");
    seen[a - 1] = true;
  }
}

// Matrix view of an operand with the contracted axes gathered on one side.
// Shares the source buffer whenever no permute and no conjugation is needed.
struct PreparedOperand {
  const Tensor *tensor = nullptr; // source or owned storage
  Tensor storage;
  std::size_t rows = 0, cols = 0;
  Shape free_shape; // uncontracted dims in original order

  const Tensor &get() const { return tensor ? *tensor : storage; }
};

enum class Side { ContractedTrailing, ContractedLeading };

PreparedOperand prepare_operand(const Tensor &t,
                                std::span<const std::size_t> contracted,
                                Side side, bool conj) {
  PreparedOperand out;
  const std::size_t rank = t.rank();
  const auto free_axes = complement_indices(contracted, rank);
  std::size_t free_elems = 1, bound_elems = 1;
  out.free_shape.reserve(free_axes.size());
  for (std::size_t a : free_axes) {
    out.free_shape.push_back(t.shape()[a - 1]);
    free_elems *= t.shape()[a - 1];
  }
  for (std::size_t a : contracted)
    bound_elems *= t.shape()[a - 1];
  if (side == Side::ContractedTrailing) {
    out.rows = free_elems;
    out.cols = bound_elems;
  } else {
    out.rows = bound_elems;
    out.cols = free_elems;
  }

  // 0-based gather order placing the contracted axes on the requested side.
  std::vector<std::size_t> order;
  order.reserve(rank);
  if (side == Side::ContractedLeading)
    for (std::size_t a : contracted)
      order.push_back(a - 1);
  for (std::size_t a : free_axes)
    order.push_back(a - 1);
  if (side == Side::ContractedTrailing)
    for (std::size_t a : contracted)
      order.push_back(a - 1);

  bool in_place = true;
  for (std::size_t k = 0; k < rank; ++k)
    in_place = in_place && order[k] == k;
  const bool needs_conj = conj && t.is_complex();
  if (in_place && !needs_conj) {
    out.tensor = &t;
  } else if (in_place) {
    out.storage = conjugate(t);
  } else {
    out.storage = detail::permute_copy(t, order, needs_conj);
  }
  return out;
}

Tensor gemm(const PreparedOperand &a, const PreparedOperand &b, cplx alpha,
            ScalarKind kind, Shape out_shape) {
  if (kind == ScalarKind::RealF64) {
    detail::MatR c = alpha.real() * (detail::map_real(a.get(), a.rows, a.cols) *
                                     detail::map_real(b.get(), b.rows, b.cols));
    return detail::from_eigen(c, std::move(out_shape));
  }
  const Tensor ac = a.get().is_complex()
                        ? Tensor()
                        : a.get().to_kind(ScalarKind::ComplexF64);
  const Tensor bc = b.get().is_complex()
                        ? Tensor()
                        : b.get().to_kind(ScalarKind::ComplexF64);
  auto ma = a.get().is_complex() ? detail::map_complex(a.get(), a.rows, a.cols)
                                 : detail::map_complex(ac, a.rows, a.cols);
  auto mb = b.get().is_complex() ? detail::map_complex(b.get(), b.rows, b.cols)
                                 : detail::map_complex(bc, b.rows, b.cols);
  detail::MatC c = alpha * (ma * mb);
  return detail::from_eigen(c, std::move(out_shape));
}

Tensor contract_impl(const Tensor &a, AxisList ia, bool conj_a,
                     const Tensor &b, AxisList ib, bool conj_b,
                     const ContractOptions &opts) {
  if (ia.size() != ib.size())
    fail("contract: contracted axis lists differ in length");
  validate_axes(ia, a.rank(), "contract (A)");
  validate_axes(ib, b.rank(), "contract (B)");
  for (std::size_t k = 0; k < ia.size(); ++k)
    if (a.shape()[ia[k] - 1] != b.shape()[ib[k] - 1])
      fail("contract: contracted dimensions do not match");

  // The pair order is free; pick one that lets an operand whose contracted
  // axes already sit as a trailing (A) or leading (B) run skip its permute.
  const std::size_t n = ia.size();
  auto is_trailing_run = [&](const AxisList &axes, std::size_t rank) {
    AxisList sorted(axes);
    std::sort(sorted.begin(), sorted.end());
    return !sorted.empty() && sorted.front() == rank - sorted.size() + 1;
  };
  auto is_leading_run = [&](const AxisList &axes) {
    AxisList sorted(axes);
    std::sort(sorted.begin(), sorted.end());
    return !sorted.empty() && sorted.back() == sorted.size();
  };
  if (n > 1) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    if (is_trailing_run(ia, a.rank())) {
      std::sort(perm.begin(), perm.end(),
                [&](std::size_t x, std::size_t y) { return ia[x] < ia[y]; });
    } else if (is_leading_run(ib)) {
      std::sort(perm.begin(), perm.end(),
                [&](std::size_t x, std::size_t y) { return ib[x] < ib[y]; });
    }
    AxisList ia2(n), ib2(n);
    for (std::size_t k = 0; k < n; ++k) {
      ia2[k] = ia[perm[k]];
      ib2[k] = ib[perm[k]];
    }
    ia = std::move(ia2);
    ib = std::move(ib2);
  }

  auto pa = prepare_operand(a, ia, Side::ContractedTrailing, conj_a);
  auto pb = prepare_operand(b, ib, Side::ContractedLeading, conj_b);

  Shape out_shape = pa.free_shape;
  out_shape.insert(out_shape.end(), pb.free_shape.begin(),
                   pb.free_shape.end());

  ScalarKind kind = promote(a.kind(), b.kind());
  if (opts.alpha.imag() != 0.0 || opts.beta.imag() != 0.0)
    kind = ScalarKind::ComplexF64;
  if (opts.accumulate)
    kind = promote(kind, opts.accumulate->kind());

  Tensor c = gemm(pa, pb, opts.alpha, kind, std::move(out_shape));
  if (!opts.order.empty())
    c = permute(c, opts.order);
  if (opts.accumulate && opts.beta != cplx{}) {
    if (opts.accumulate->shape() != c.shape())
      fail("contract: accumulator shape does not match the output");
    add_inplace(c, *opts.accumulate, opts.beta);
  }
  return c;
}

cplx scalar_contract_impl(const Tensor &a, bool conj_a, const Tensor &b,
                          bool conj_b) {
  if (a.shape() != b.shape())
    fail("scalar contract: shapes must match elementwise");
  const std::size_t n = a.element_count();
  cplx s{};
  if (!a.is_complex() && !b.is_complex()) {
    auto x = a.real_data();
    auto y = b.real_data();
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      r += x[i] * y[i];
    return {r, 0.0};
  }
  for (std::size_t i = 0; i < n; ++i) {
    cplx x = a.flat(i), y = b.flat(i);
    if (conj_a)
      x = std::conj(x);
    if (conj_b)
      y = std::conj(y);
    s += x * y;
  }
  return s;
}

ContractOptions with_order(const ContractOptions &opts, const AxisList &order) {
  ContractOptions o = opts;
  o.order = order;
  return o;
}

} // namespace

AxisList complement_indices(std::span<const std::size_t> selected,
                            std::size_t rank) {
  validate_axes(selected, rank, "complement_indices");
  std::vector<bool> drop(rank, false);
  for (std::size_t a : selected)
    drop[a - 1] = true;
  AxisList out;
  out.reserve(rank - selected.size());
  for (std::size_t k = 1; k <= rank; ++k)
    if (!drop[k - 1])
      out.push_back(k);
  return out;
}

Tensor matrix_equivalent(const Tensor &t, std::span<const std::size_t> row_axes,
                         bool conj) {
  validate_axes(row_axes, t.rank(), "matrix_equivalent");
  auto p = prepare_operand(t, row_axes, Side::ContractedLeading, conj);
  Tensor out = p.get();
  reshape_inplace(out, {p.rows, p.cols});
  return out;
}

Tensor contract(const Tensor &a, const AxisList &ia, const Tensor &b,
                const AxisList &ib, const ContractOptions &opts) {
  return contract_impl(a, ia, false, b, ib, false, opts);
}
Tensor ccontract(const Tensor &a, const AxisList &ia, const Tensor &b,
                 const AxisList &ib, const ContractOptions &opts) {
  return contract_impl(a, ia, true, b, ib, false, opts);
}
Tensor contractc(const Tensor &a, const AxisList &ia, const Tensor &b,
                 const AxisList &ib, const ContractOptions &opts) {
  return contract_impl(a, ia, false, b, ib, true, opts);
}
Tensor ccontractc(const Tensor &a, const AxisList &ia, const Tensor &b,
                  const AxisList &ib, const ContractOptions &opts) {
  return contract_impl(a, ia, true, b, ib, true, opts);
}

Tensor contract(const AxisList &order, const Tensor &a, const AxisList &ia,
                const Tensor &b, const AxisList &ib,
                const ContractOptions &opts) {
  return contract_impl(a, ia, false, b, ib, false, with_order(opts, order));
}
Tensor ccontract(const AxisList &order, const Tensor &a, const AxisList &ia,
                 const Tensor &b, const AxisList &ib,
                 const ContractOptions &opts) {
  return contract_impl(a, ia, true, b, ib, false, with_order(opts, order));
}
Tensor contractc(const AxisList &order, const Tensor &a, const AxisList &ia,
                 const Tensor &b, const AxisList &ib,
                 const ContractOptions &opts) {
  return contract_impl(a, ia, false, b, ib, true, with_order(opts, order));
}
Tensor ccontractc(const AxisList &order, const Tensor &a, const AxisList &ia,
                  const Tensor &b, const AxisList &ib,
                  const ContractOptions &opts) {
  return contract_impl(a, ia, true, b, ib, true, with_order(opts, order));
}

cplx contract(const Tensor &a, const Tensor &b) {
  return scalar_contract_impl(a, false, b, false);
}
cplx ccontract(const Tensor &a, const Tensor &b) {
  return scalar_contract_impl(a, true, b, false);
}
cplx contractc(const Tensor &a, const Tensor &b) {
  return scalar_contract_impl(a, false, b, true);
}
cplx ccontractc(const Tensor &a, const Tensor &b) {
  return scalar_contract_impl(a, true, b, true);
}

cplx contract(const Tensor &a) { return scalar_contract_impl(a, false, a, false); }
cplx ccontract(const Tensor &a) { return scalar_contract_impl(a, true, a, false); }
cplx contractc(const Tensor &a) { return scalar_contract_impl(a, false, a, true); }
cplx ccontractc(const Tensor &a) { return scalar_contract_impl(a, true, a, true); }

Tensor partial_trace(
    const Tensor &a,
    std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (pairs.empty())
    fail("partial_trace needs at least one axis pair");
  AxisList traced;
  Shape dims;
  for (auto [p, q] : pairs) {
    traced.push_back(p);
    traced.push_back(q);
    if (p < 1 || p > a.rank() || q < 1 || q > a.rank())
      fail("partial_trace axis out of range");
    if (a.shape()[p - 1] != a.shape()[q - 1])
      fail("partial_trace pair dimensions differ");
    dims.push_back(a.shape()[p - 1]);
  }
  validate_axes(traced, a.rank(), "partial_trace"); // also rejects overlaps
  // The identity tensor pairs axes (2k-1, 2k); contracting it onto the traced
  // axes performs the diagonal sums in one call.
  Tensor id = identity_tensor(dims);
  AxisList id_axes(id.rank());
  std::iota(id_axes.begin(), id_axes.end(), std::size_t{1});
  return contract(a, traced, id, id_axes);
}

Tensor partial_trace(
    const Tensor &a,
    std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
  return partial_trace(
      a, std::span<const std::pair<std::size_t, std::size_t>>(pairs.begin(),
                                                              pairs.size()));
}

Tensor partial_trace(const Tensor &a, std::size_t first, std::size_t second) {
  const std::pair<std::size_t, std::size_t> p{first, second};
  return partial_trace(a, std::span<const std::pair<std::size_t, std::size_t>>(
                              &p, 1));
}

void set_kernel_threads(int n) { Eigen::setNbThreads(n); }

int kernel_threads() { return Eigen::nbThreads(); }

void check_contract(const Tensor &a, const AxisList &ia, const Tensor &b,
                    const AxisList &ib) {
  if (ia.size() != ib.size())
    fail("check_contract: contracted axis lists differ in length");
  validate_axes(ia, a.rank(), "check_contract (A)");
  validate_axes(ib, b.rank(), "check_contract (B)");
  for (std::size_t k = 0; k < ia.size(); ++k) {
    const std::size_t da = a.shape()[ia[k] - 1];
    const std::size_t db = b.shape()[ib[k] - 1];
    if (da != db)
      fail("check_contract: axis pair (" + std::to_string(ia[k]) + ", " +
           std::to_string(ib[k]) + ") has mismatched dimensions " +
           std::to_string(da) + " vs " + std::to_string(db));
  }
}

} // namespace tn
