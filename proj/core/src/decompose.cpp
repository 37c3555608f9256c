#include "tn/decompose.hpp"

#include "kernels.hpp"
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

[[noreturn]] void kernel_fail(const std::string &msg) {
  throw std::runtime_error("tn: " + msg);
}

void require_matrix(const Tensor &m, const char *what) {
  if (m.rank() != 2)
    fail(std::string(what) + " needs a rank-2 tensor (use the grouped form)");
}

double max_abs(const Tensor &t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.element_count(); ++i)
    s = std::max(s, std::abs(t.flat(i)));
  return s;
}

void require_hermitian(const Tensor &m, double tol, const char *what) {
  require_matrix(m, what);
  if (m.dim(1) != m.dim(2))
    fail(std::string(what) + " needs a square matrix");
  const double bound = tol * std::max(1.0, max_abs(m));
  for (std::size_t r = 1; r <= m.dim(1); ++r)
    for (std::size_t c = r; c <= m.dim(2); ++c)
      if (std::abs(m.element({r, c}) - std::conj(m.element({c, r}))) > bound)
        fail(std::string(what) + ": input is not Hermitian within tolerance");
}

// Make the largest-magnitude entry (first on ties) of each column of U real
// and positive; fold the compensating phase into the matching row of Vh.
template <typename MatU, typename MatV>
void fix_column_phases(MatU &u, MatV *vh) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double a = std::abs(u(i, j));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    if (best <= 0.0)
      continue;
    const auto p = u(pivot, j);
    if constexpr (std::is_same_v<typename MatU::Scalar, double>) {
      if (p < 0.0) {
        u.col(j) = -u.col(j);
        if (vh && j < vh->rows())
          vh->row(j) = -vh->row(j);
      }
    } else {
      const cplx phase = p / std::abs(p);
      u.col(j) *= std::conj(phase);
      if (vh && j < vh->rows())
        vh->row(j) *= phase;
    }
  }
}

struct RawSvd {
  detail::MatC uc, vhc;
  detail::MatR ur, vhr;
  Eigen::VectorXd d;
  bool complex = false;

  std::size_t count() const { return static_cast<std::size_t>(d.size()); }
};

RawSvd svd_core(const Tensor &m) {
  RawSvd out;
  const std::size_t rows = m.dim(1), cols = m.dim(2);
  if (m.is_complex()) {
    out.complex = true;
    Eigen::BDCSVD<detail::MatC> svd(detail::map_complex(m, rows, cols),
                                    Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
      kernel_fail("SVD kernel failed to converge");
    out.uc = svd.matrixU();
    out.vhc = svd.matrixV().adjoint();
    out.d = svd.singularValues();
    fix_column_phases(out.uc, &out.vhc);
  } else {
    Eigen::BDCSVD<detail::MatR> svd(detail::map_real(m, rows, cols),
                                    Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
      kernel_fail("SVD kernel failed to converge");
    out.ur = svd.matrixU();
    out.vhr = svd.matrixV().transpose();
    out.d = svd.singularValues();
    fix_column_phases(out.ur, &out.vhr);
  }
  return out;
}

SvdResult raw_to_result(const RawSvd &raw, std::size_t keep, double trunc_err,
                        double magnitude) {
  SvdResult res;
  const auto k = static_cast<Eigen::Index>(keep);
  if (raw.complex) {
    detail::MatC u = raw.uc.leftCols(k);
    detail::MatC vh = raw.vhc.topRows(k);
    res.u = detail::from_eigen(u, {static_cast<std::size_t>(u.rows()), keep});
    res.vh =
        detail::from_eigen(vh, {keep, static_cast<std::size_t>(vh.cols())});
  } else {
    detail::MatR u = raw.ur.leftCols(k);
    detail::MatR vh = raw.vhr.topRows(k);
    res.u = detail::from_eigen(u, {static_cast<std::size_t>(u.rows()), keep});
    res.vh =
        detail::from_eigen(vh, {keep, static_cast<std::size_t>(vh.cols())});
  }
  std::vector<double> d(raw.d.data(), raw.d.data() + keep);
  res.d = Tensor::from_data({keep}, std::move(d));
  res.trunc_err = trunc_err;
  res.magnitude = magnitude;
  return res;
}

} // namespace

TruncationDecision truncation_rank(std::span<const double> values,
                                   const TruncationSpec &spec, double mag) {
  const std::size_t n = values.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (values[i] < values[i + 1])
      fail("truncation_rank: values must be nonincreasing");
  for (double v : values)
    if (v < 0.0)
      fail("truncation_rank: values must be nonnegative");

  double sum_all = 0.0;
  for (double v : values)
    sum_all += std::pow(v, spec.power);
  const double mag_eff =
      mag > 0.0 ? mag : (sum_all > 0.0 ? std::pow(sum_all, 1.0 / spec.power) : 0.0);
  const double total = std::pow(mag_eff, spec.power);

  std::size_t avail = n;
  if (spec.nozeros)
    while (avail > 0 && values[avail - 1] <= spec.eff_zero)
      --avail;

  std::size_t keep = avail;
  if (spec.cutoff > 0.0 && total > 0.0) {
    const double budget = spec.cutoff * total;
    double discarded = 0.0;
    while (keep > 0) {
      const double add = std::pow(values[keep - 1], spec.power);
      if (discarded + add >= budget)
        break;
      discarded += add;
      --keep;
    }
  }
  if (spec.max_keep > 0)
    keep = std::min(keep, spec.max_keep);
  if (spec.keepdeg && keep > 0) {
    const double boundary = values[keep - 1];
    const double gap = spec.eff_zero * std::max(mag_eff, 1.0);
    while (keep < avail && boundary - values[keep] <= gap)
      ++keep;
  }
  if (spec.min_keep > 0)
    keep = std::max(keep, std::min(spec.min_keep, n));
  if (keep == 0 && n > 0)
    keep = 1; // factors always carry at least one value

  double kept_weight = 0.0;
  for (std::size_t i = 0; i < keep; ++i)
    kept_weight += std::pow(values[i], spec.power);

  TruncationDecision out;
  out.keep = keep;
  out.magnitude = mag_eff;
  out.trunc_err = total > 0.0 ? std::max(0.0, 1.0 - kept_weight / total) : 0.0;
  return out;
}

SvdResult svd_truncated(const Tensor &m, const TruncationSpec &spec,
                        const SvdOptions &options) {
  require_matrix(m, "svd");
  if (options.recursive) {
    SvdResult full = recursive_svd(m);
    auto dspan = full.d.real_data();
    auto decision = truncation_rank(dspan, spec, options.mag);
    SvdResult res;
    res.u = get_slice(full.u, {IndexSelector::all(),
                               IndexSelector::range(1, decision.keep)});
    res.vh = get_slice(full.vh, {IndexSelector::range(1, decision.keep),
                                 IndexSelector::all()});
    res.d = get_slice(full.d, {IndexSelector::range(1, decision.keep)});
    res.trunc_err = decision.trunc_err;
    res.magnitude = decision.magnitude;
    return res;
  }
  RawSvd raw = svd_core(m);
  std::span<const double> dspan(raw.d.data(), raw.count());
  auto decision = truncation_rank(dspan, spec, options.mag);
  return raw_to_result(raw, decision.keep, decision.trunc_err,
                       decision.magnitude);
}

SvdResult svd_truncated(const Tensor &m,
                        std::span<const std::vector<std::size_t>> groups,
                        const TruncationSpec &spec, const SvdOptions &options) {
  if (groups.size() != 2)
    fail("grouped svd expects exactly two index groups");
  Shape row_shape, col_shape;
  for (std::size_t a : groups[0])
    row_shape.push_back(m.dim(a));
  for (std::size_t a : groups[1])
    col_shape.push_back(m.dim(a));
  SvdResult res = svd_truncated(reshape(m, groups), spec, options);
  const std::size_t k = res.d.dim(1);
  Shape u_shape = row_shape;
  u_shape.push_back(k);
  Shape vh_shape{k};
  vh_shape.insert(vh_shape.end(), col_shape.begin(), col_shape.end());
  reshape_inplace(res.u, std::move(u_shape));
  reshape_inplace(res.vh, std::move(vh_shape));
  return res;
}

SvdResult svd_truncated(const Tensor &m,
                        std::initializer_list<std::vector<std::size_t>> groups,
                        const TruncationSpec &spec, const SvdOptions &options) {
  return svd_truncated(
      m, std::span<const std::vector<std::size_t>>(groups.begin(), groups.size()),
      spec, options);
}

namespace {

SvdResult recursive_svd_impl(const Tensor &m, double tol, int depth) {
  RawSvd raw = svd_core(m);
  const std::size_t total = raw.count();
  SvdResult full = raw_to_result(raw, total, 0.0, frobenius_norm(m));
  if (depth >= 3 || total == 0)
    return full;
  const double sigma_max = raw.d.size() ? raw.d(0) : 0.0;
  if (sigma_max <= 0.0)
    return full;
  std::size_t keep = 0;
  while (keep < total && raw.d(static_cast<Eigen::Index>(keep)) >= tol * sigma_max)
    ++keep;
  if (keep == total)
    return full;

  // Deflate the resolved subspace and re-decompose the residual, whose own
  // largest value now sets the kernel's precision scale.
  Tensor u_keep = get_slice(full.u, {IndexSelector::all(),
                                     IndexSelector::range(1, keep)});
  Tensor vh_keep = get_slice(full.vh, {IndexSelector::range(1, keep),
                                       IndexSelector::all()});
  Tensor d_keep = get_slice(full.d, {IndexSelector::range(1, keep)});
  Tensor rebuilt = contract(contract(u_keep, {2}, diagonal_matrix(d_keep), {1}),
                            {2}, vh_keep, {1});
  Tensor residual = m - rebuilt;
  SvdResult sub = recursive_svd_impl(residual, tol, depth + 1);

  const std::size_t extra = std::min(total - keep, sub.d.dim(1));
  Tensor u_sub = get_slice(sub.u, {IndexSelector::all(),
                                   IndexSelector::range(1, extra)});
  Tensor vh_sub = get_slice(sub.vh, {IndexSelector::range(1, extra),
                                     IndexSelector::all()});
  Tensor d_sub = get_slice(sub.d, {IndexSelector::range(1, extra)});

  // One Gram-Schmidt pass against the kept subspace; the residual is already
  // orthogonal to it up to roundoff.
  Tensor overlap = ccontract(u_keep, {1}, u_sub, {1}); // (keep, extra)
  ContractOptions axpy;
  axpy.alpha = -1.0;
  axpy.beta = 1.0;
  axpy.accumulate = &u_sub;
  u_sub = contract(u_keep, {2}, overlap, {1}, axpy);

  Tensor u = join_index(u_keep, u_sub, {2});
  Tensor vh = join_index(vh_keep, vh_sub, {1});
  Tensor d = join_index(d_keep, d_sub, {1});

  SvdResult out;
  out.u = std::move(u);
  out.vh = std::move(vh);
  out.d = std::move(d);
  out.trunc_err = 0.0;
  out.magnitude = full.magnitude;
  return out;
}

} // namespace

SvdResult recursive_svd(const Tensor &m, double level_tolerance) {
  require_matrix(m, "recursive_svd");
  return recursive_svd_impl(m, level_tolerance, 0);
}

namespace {

struct RawEig {
  detail::MatC uc;
  detail::MatR ur;
  Eigen::VectorXd d;
  bool complex = false;
};

RawEig eigen_core(const Tensor &m, const Tensor *b) {
  RawEig out;
  const std::size_t n = m.dim(1);
  const bool cx = m.is_complex() || (b && b->is_complex());
  if (cx) {
    const Tensor mc = m.to_kind(ScalarKind::ComplexF64);
    out.complex = true;
    if (b) {
      const Tensor bc = b->to_kind(ScalarKind::ComplexF64);
      Eigen::GeneralizedSelfAdjointEigenSolver<detail::MatC> es(
          detail::map_complex(mc, n, n), detail::map_complex(bc, n, n));
      if (es.info() != Eigen::Success)
        kernel_fail("generalized eigenvalue kernel failed (singular overlap?)");
      out.uc = es.eigenvectors();
      out.d = es.eigenvalues();
    } else {
      Eigen::SelfAdjointEigenSolver<detail::MatC> es(
          detail::map_complex(mc, n, n));
      if (es.info() != Eigen::Success)
        kernel_fail("eigenvalue kernel failed to converge");
      out.uc = es.eigenvectors();
      out.d = es.eigenvalues();
    }
    out.uc.rowwise().reverseInPlace();
    out.d.reverseInPlace();
    fix_column_phases<detail::MatC, detail::MatC>(out.uc, nullptr);
  } else {
    if (b) {
      Eigen::GeneralizedSelfAdjointEigenSolver<detail::MatR> es(
          detail::map_real(m, n, n), detail::map_real(*b, n, n));
      if (es.info() != Eigen::Success)
        kernel_fail("generalized eigenvalue kernel failed (singular overlap?)");
      out.ur = es.eigenvectors();
      out.d = es.eigenvalues();
    } else {
      Eigen::SelfAdjointEigenSolver<detail::MatR> es(detail::map_real(m, n, n));
      if (es.info() != Eigen::Success)
        kernel_fail("eigenvalue kernel failed to converge");
      out.ur = es.eigenvectors();
      out.d = es.eigenvalues();
    }
    out.ur.rowwise().reverseInPlace();
    out.d.reverseInPlace();
    fix_column_phases<detail::MatR, detail::MatR>(out.ur, nullptr);
  }
  return out;
}

} // namespace

EigResult eigen_truncated(const Tensor &m, const TruncationSpec &spec,
                          const Tensor *b, double mag) {
  require_hermitian(m, 1e-10, "eigen");
  if (b)
    require_hermitian(*b, 1e-10, "eigen (overlap)");
  RawEig raw = eigen_core(m, b);
  const std::size_t n = static_cast<std::size_t>(raw.d.size());

  // Truncation acts on |value|^power counted from the bottom of the
  // descending sort; meaningful for positive-semidefinite inputs.
  std::size_t keep = n;
  if (spec.nozeros)
    while (keep > 0 &&
           std::abs(raw.d(static_cast<Eigen::Index>(keep - 1))) <= spec.eff_zero)
      --keep;
  double sum_all = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    sum_all += std::pow(std::abs(raw.d(static_cast<Eigen::Index>(i))), spec.power);
  const double mag_eff =
      mag > 0.0 ? mag : (sum_all > 0.0 ? std::pow(sum_all, 1.0 / spec.power) : 0.0);
  const double total = std::pow(mag_eff, spec.power);
  if (spec.cutoff > 0.0 && total > 0.0) {
    const double budget = spec.cutoff * total;
    double discarded = 0.0;
    while (keep > 0) {
      const double add =
          std::pow(std::abs(raw.d(static_cast<Eigen::Index>(keep - 1))), spec.power);
      if (discarded + add >= budget)
        break;
      discarded += add;
      --keep;
    }
  }
  if (spec.max_keep > 0)
    keep = std::min(keep, spec.max_keep);
  if (spec.keepdeg && keep > 0) {
    const double boundary = raw.d(static_cast<Eigen::Index>(keep - 1));
    const double gap = spec.eff_zero * std::max(mag_eff, 1.0);
    while (keep < n &&
           std::abs(boundary - raw.d(static_cast<Eigen::Index>(keep))) <= gap)
      ++keep;
  }
  if (spec.min_keep > 0)
    keep = std::max(keep, std::min(spec.min_keep, n));
  if (keep == 0 && n > 0)
    keep = 1;

  double kept_weight = 0.0;
  for (std::size_t i = 0; i < keep; ++i)
    kept_weight += std::pow(std::abs(raw.d(static_cast<Eigen::Index>(i))), spec.power);

  EigResult res;
  const auto k = static_cast<Eigen::Index>(keep);
  if (raw.complex) {
    detail::MatC u = raw.uc.leftCols(k);
    res.u = detail::from_eigen(u, {static_cast<std::size_t>(u.rows()), keep});
  } else {
    detail::MatR u = raw.ur.leftCols(k);
    res.u = detail::from_eigen(u, {static_cast<std::size_t>(u.rows()), keep});
  }
  std::vector<double> d(raw.d.data(), raw.d.data() + keep);
  res.d = Tensor::from_data({keep}, std::move(d));
  res.trunc_err = total > 0.0 ? std::max(0.0, 1.0 - kept_weight / total) : 0.0;
  res.magnitude = mag_eff;
  return res;
}

EigResult eigen_truncated(const Tensor &m,
                          std::span<const std::vector<std::size_t>> groups,
                          const TruncationSpec &spec, const Tensor *b,
                          double mag) {
  if (groups.size() != 2)
    fail("grouped eigen expects exactly two index groups");
  Shape row_shape;
  for (std::size_t a : groups[0])
    row_shape.push_back(m.dim(a));
  EigResult res = eigen_truncated(reshape(m, groups), spec, b, mag);
  const std::size_t k = res.d.dim(1);
  Shape u_shape = row_shape;
  u_shape.push_back(k);
  reshape_inplace(res.u, std::move(u_shape));
  return res;
}

QrResult qr_decompose(const Tensor &m) {
  require_matrix(m, "qr");
  const std::size_t rows = m.dim(1), cols = m.dim(2);
  const std::size_t k = std::min(rows, cols);
  QrResult res;
  if (m.is_complex()) {
    Eigen::HouseholderQR<detail::MatC> qr(detail::map_complex(m, rows, cols));
    detail::MatC q = qr.householderQ() *
                     detail::MatC::Identity(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(k));
    detail::MatC r = qr.matrixQR()
                         .topRows(static_cast<Eigen::Index>(k))
                         .triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k); ++j) {
      const cplx d = r(j, j);
      if (std::abs(d) > 0.0) {
        const cplx phase = d / std::abs(d);
        q.col(j) *= phase;
        r.row(j) *= std::conj(phase);
      }
    }
    res.q = detail::from_eigen(q, {rows, k});
    res.r = detail::from_eigen(r, {k, cols});
  } else {
    Eigen::HouseholderQR<detail::MatR> qr(detail::map_real(m, rows, cols));
    detail::MatR q = qr.householderQ() *
                     detail::MatR::Identity(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(k));
    detail::MatR r = qr.matrixQR()
                         .topRows(static_cast<Eigen::Index>(k))
                         .triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k); ++j) {
      if (r(j, j) < 0.0) {
        q.col(j) = -q.col(j);
        r.row(j) = -r.row(j);
      }
    }
    res.q = detail::from_eigen(q, {rows, k});
    res.r = detail::from_eigen(r, {k, cols});
  }
  return res;
}

QrResult qr_decompose(const Tensor &m,
                      std::span<const std::vector<std::size_t>> groups) {
  if (groups.size() != 2)
    fail("grouped qr expects exactly two index groups");
  Shape row_shape, col_shape;
  for (std::size_t a : groups[0])
    row_shape.push_back(m.dim(a));
  for (std::size_t a : groups[1])
    col_shape.push_back(m.dim(a));
  QrResult res = qr_decompose(reshape(m, groups));
  const std::size_t k = res.q.dim(2);
  Shape q_shape = row_shape;
  q_shape.push_back(k);
  Shape r_shape{k};
  r_shape.insert(r_shape.end(), col_shape.begin(), col_shape.end());
  reshape_inplace(res.q, std::move(q_shape));
  reshape_inplace(res.r, std::move(r_shape));
  return res;
}

LqResult lq_decompose(const Tensor &m) {
  require_matrix(m, "lq");
  // M = L Q from the QR of the adjoint; the adjoint's phase fix leaves the
  // diagonal of L real and positive.
  Tensor mh = permute(conjugate(m), {2, 1});
  QrResult qr = qr_decompose(mh);
  LqResult res;
  res.l = permute(conjugate(qr.r), {2, 1});
  res.q = permute(conjugate(qr.q), {2, 1});
  return res;
}

LqResult lq_decompose(const Tensor &m,
                      std::span<const std::vector<std::size_t>> groups) {
  if (groups.size() != 2)
    fail("grouped lq expects exactly two index groups");
  Shape row_shape, col_shape;
  for (std::size_t a : groups[0])
    row_shape.push_back(m.dim(a));
  for (std::size_t a : groups[1])
    col_shape.push_back(m.dim(a));
  LqResult res = lq_decompose(reshape(m, groups));
  const std::size_t k = res.l.dim(2);
  Shape l_shape = row_shape;
  l_shape.push_back(k);
  Shape q_shape{k};
  q_shape.insert(q_shape.end(), col_shape.begin(), col_shape.end());
  reshape_inplace(res.l, std::move(l_shape));
  reshape_inplace(res.q, std::move(q_shape));
  return res;
}

std::pair<Tensor, Tensor>
polar_decompose(const Tensor &a,
                std::span<const std::vector<std::size_t>> groups, bool right,
                std::size_t outer_max, const TruncationSpec &spec) {
  TruncationSpec s = spec;
  if (outer_max > 0)
    s.max_keep = s.max_keep > 0 ? std::min(s.max_keep, outer_max) : outer_max;
  SvdResult svd = svd_truncated(reshape(a, groups), s);
  const Tensor dm = diagonal_matrix(svd.d);
  Tensor isometry = contract(svd.u, {2}, svd.vh, {1});
  reshape_inplace(isometry, a.shape());
  if (right) {
    Tensor weight =
        ccontract(svd.vh, {1}, contract(dm, {2}, svd.vh, {1}), {1});
    return {std::move(isometry), std::move(weight)};
  }
  Tensor weight = contractc(contract(svd.u, {2}, dm, {1}), {2}, svd.u, {2});
  return {std::move(weight), std::move(isometry)};
}

Tensor diagonal_matrix(const Tensor &values) {
  if (values.rank() != 1)
    fail("diagonal_matrix expects a rank-1 tensor");
  const std::size_t n = values.dim(1);
  Tensor out = Tensor::zeros(values.kind(), {n, n});
  for (std::size_t i = 1; i <= n; ++i)
    out.set_element({i, i}, values.element({i}));
  return out;
}

} // namespace tn
