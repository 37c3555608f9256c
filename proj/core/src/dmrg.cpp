#include "tn/dmrg.hpp"

#include "chain_ops.hpp"
#include "kernels.hpp"
#include "tn/contract.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace tn {

Tensor effective_h_apply(const Tensor &lenv, const Tensor &w_left,
                         const Tensor &w_right, const Tensor &renv,
                         const Tensor &theta) {
  // lenv (b, w, k), theta (k, s1, s2, k')
  Tensor t = contract(lenv, {3}, theta, {1});        // (b, w, s1, s2, r)
  t = contract(t, {2, 3}, w_left, {1, 3});           // (b, s2, r, s1', w')
  t = contract(t, {5, 2}, w_right, {1, 3});          // (b, r, s1', s2', w'')
  return contract(t, {2, 5}, renv, {3, 2});          // (b, s1', s2', b')
}

namespace {

cplx inner(const Tensor &a, const Tensor &b) { return ccontract(a, b); }

void reorthogonalize(Tensor &w, const std::vector<Tensor> &basis) {
  for (const Tensor &v : basis)
    add_inplace(w, v, -inner(v, w));
}

struct RitzPair {
  double value = 0.0;
  Eigen::VectorXd coeffs;
  double norm_estimate = 0.0;
};

RitzPair lowest_ritz(const std::vector<double> &alphas,
                     const std::vector<double> &betas) {
  const auto n = static_cast<Eigen::Index>(alphas.size());
  detail::MatR t = detail::MatR::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t(i, i) = alphas[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      t(i, i + 1) = betas[static_cast<std::size_t>(i)];
      t(i + 1, i) = betas[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<detail::MatR> es(t);
  RitzPair out;
  out.value = es.eigenvalues()(0);
  out.coeffs = es.eigenvectors().col(0);
  out.norm_estimate = std::max(std::abs(es.eigenvalues()(0)),
                               std::abs(es.eigenvalues()(n - 1)));
  return out;
}

Tensor assemble(const std::vector<Tensor> &basis, const Eigen::VectorXd &y) {
  Tensor x = basis[0] * y(0);
  for (std::size_t j = 1; j < basis.size(); ++j)
    add_inplace(x, basis[j], y(static_cast<Eigen::Index>(j)));
  const double n = frobenius_norm(x);
  if (n > 0.0)
    scale_inplace(x, 1.0 / n);
  return x;
}

} // namespace

LanczosResult lanczos_ground(const std::function<Tensor(const Tensor &)> &apply,
                             const Tensor &guess, const LanczosOptions &opts) {
  const double guess_norm = frobenius_norm(guess);
  if (guess_norm == 0.0)
    throw std::invalid_argument("tn: lanczos_ground needs a nonzero guess");
  if (opts.max_iter == 0)
    throw std::invalid_argument("tn: lanczos_ground needs at least one iteration");
  const std::size_t dim = guess.element_count();
  std::mt19937_64 rng(opts.seed);

  std::vector<Tensor> basis;
  basis.push_back(guess / guess_norm);
  std::vector<double> alphas, betas;

  LanczosResult result;
  RitzPair ritz;
  std::size_t it = 0;
  for (; it < opts.max_iter; ++it) {
    Tensor w = apply(basis.back());
    const double alpha = inner(basis.back(), w).real();
    alphas.push_back(alpha);
    reorthogonalize(w, basis);
    reorthogonalize(w, basis); // second pass keeps the basis orthonormal
    double beta = frobenius_norm(w);

    ritz = lowest_ritz(alphas, betas);
    result.value = ritz.value;
    result.residual = beta * std::abs(ritz.coeffs(ritz.coeffs.size() - 1));
    const double scale = std::max(ritz.norm_estimate, 1.0);
    if (result.residual <= opts.tol * scale && it > 0)
      break;
    if (basis.size() >= dim)
      break; // the Krylov space is the full space
    if (beta <= 1e-13 * scale) {
      // Invariant-subspace breakdown (the guess may be an excited
      // eigenvector); escape through a random orthogonal direction.
      Tensor probe = Tensor::random(guess.kind(), guess.shape(), rng);
      reorthogonalize(probe, basis);
      const double pn = frobenius_norm(probe);
      if (pn <= 1e-10)
        break;
      scale_inplace(probe, 1.0 / pn);
      betas.push_back(0.0);
      basis.push_back(std::move(probe));
      continue;
    }
    betas.push_back(beta);
    scale_inplace(w, 1.0 / beta);
    basis.push_back(std::move(w));
  }
  result.vector = assemble(basis, ritz.coeffs);
  result.iterations = it;
  return result;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::size_t sweep, std::size_t bond) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
  h = (h ^ (sweep * 0xbf58476d1ce4e5b9ull)) * 0x94d049bb133111ebull;
  h ^= bond + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

template <class State, class Oper, class EnvT>
DmrgResult dmrg_impl(State &psi, const Oper &h, const DmrgOptions &opts,
                     EnvT &lenv, EnvT &renv) {
  if (opts.method != "twosite")
    throw std::invalid_argument(
        "tn: dmrg method '" + opts.method +
        "' is not supported; only \"twosite\" is implemented (single-site/3S "
        "updates are intentionally unavailable)");
  if (opts.sweeps < 1)
    throw std::invalid_argument("tn: dmrg needs at least one sweep");
  const std::size_t ns = psi.length();
  if (h.length() != ns)
    throw std::invalid_argument("tn: dmrg chain lengths differ");
  if (ns < 2)
    throw std::invalid_argument("tn: two-site dmrg needs at least two sites");
  if (psi.center() < 1)
    throw std::invalid_argument("tn: dmrg needs a gauged state (center >= 1)");

  detail::move_center_impl(psi, 1, TruncationSpec{});
  {
    Tensor first = psi.site(1);
    const double n = frobenius_norm(first);
    if (!(n > 0.0) || !std::isfinite(n))
      throw std::invalid_argument("tn: dmrg input state is not normalizable");
    scale_inplace(first, 1.0 / n);
    psi.set_site(1, std::move(first));
  }
  const Oper *hs[] = {&h};
  detail::make_env_impl(psi, psi, std::span<const Oper *const>(hs), lenv,
                        renv);

  DmrgResult result;
  double prev_energy = 0.0;
  std::size_t stall = 0;

  for (std::size_t sweep = 1; sweep <= opts.sweeps; ++sweep) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepReport report;

    auto solve_bond = [&](std::size_t i, Direction dir) {
      Tensor wl = h.site(i);
      Tensor wr = h.site(i + 1);
      Tensor le = lenv.site(i);
      Tensor re = renv.site(i + 1);
      Tensor theta = contract(psi.site(i), {3}, psi.site(i + 1), {1});
      LanczosOptions lopts;
      lopts.max_iter = opts.solver_max_iter;
      lopts.tol = opts.solver_tol;
      lopts.seed = mix_seed(opts.seed, sweep, i);
      LanczosResult local = lanczos_ground(
          [&](const Tensor &x) {
            return effective_h_apply(le, wl, wr, re, x);
          },
          theta, lopts);

      SvdResult svd = svd_truncated(local.vector, {{1, 2}, {3, 4}}, opts.trunc);
      report.max_bond = std::max(report.max_bond, svd.d.dim(1));
      report.max_trunc_err = std::max(report.max_trunc_err, svd.trunc_err);
      if (dir == Direction::Right) {
        Tensor dv =
            contract(diagonal_matrix(svd.d), {2}, svd.vh, {1});
        psi.set_site(i, std::move(svd.u));
        psi.set_site(i + 1, std::move(dv));
        psi.set_center(i + 1);
        Tensor s = psi.site(i);
        lenv.set_site(i + 1,
                      env_update(Direction::Left, lenv.site(i), s, s, wl));
      } else {
        Tensor ud = contract(svd.u, {3}, diagonal_matrix(svd.d), {1});
        psi.set_site(i + 1, std::move(svd.vh));
        psi.set_site(i, std::move(ud));
        psi.set_center(i);
        Tensor s = psi.site(i + 1);
        renv.set_site(i, env_update(Direction::Right, renv.site(i + 1), s, s,
                                    wr));
      }
      return local.value;
    };

    double energy = 0.0;
    for (std::size_t i = 1; i + 1 <= ns; ++i)
      energy = solve_bond(i, Direction::Right);
    for (std::size_t i = ns; i-- > 1;)
      energy = solve_bond(i, Direction::Left);

    report.energy = energy;
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    result.sweeps.push_back(report);
    result.energy = energy;

    if (sweep > 1 && std::abs(energy - prev_energy) < opts.convergence)
      ++stall;
    else
      stall = 0;
    prev_energy = energy;
    if (opts.early_stop && stall >= 2)
      break;
  }
  return result;
}

} // namespace

DmrgResult dmrg(MPS &psi, const MPO &h, const DmrgOptions &opts) {
  Environment lenv(psi.length()), renv(psi.length());
  return dmrg_impl(psi, h, opts, lenv, renv);
}

DmrgResult dmrg(LargeMPS &psi, const LargeMPO &h, const DmrgOptions &opts) {
  std::filesystem::path scratch = opts.scratch_dir;
  if (scratch.empty())
    scratch = psi.file(1).parent_path() / "dmrg_env";
  LargeEnv lenv = large_env_slots(psi.length(), psi.kind(), scratch, "L_");
  LargeEnv renv = large_env_slots(psi.length(), psi.kind(), scratch, "R_");
  return dmrg_impl(psi, h, opts, lenv, renv);
}

} // namespace tn
