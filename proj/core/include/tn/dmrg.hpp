#pragma once

#include "tn/mp.hpp"
#include "tn/storage.hpp"

#include <functional>
#include <string>

// Two-site DMRG ground-state sweeps with a Lanczos local eigensolver.
// Hermitian MPOs are assumed. One sweep = right half-sweep over bonds
// 1..Ns-1 followed by the left half-sweep back.

namespace tn {

struct DmrgOptions {
  std::size_t sweeps = 20;
  std::string method = "twosite"; // the single-site "3S" variant is rejected
  TruncationSpec trunc = default_trunc();
  double convergence = 1e-10; // |dE| below this for two consecutive sweeps stops
  bool early_stop = true;
  std::size_t solver_max_iter = 100;
  double solver_tol = 1e-10;
  std::uint64_t seed = 0;
  std::string scratch_dir; // env files for disk-backed runs; "" derives from psi

  static TruncationSpec default_trunc() {
    TruncationSpec t;
    t.min_keep = 2; // entangled ground states need at least bond dimension 2
    return t;
  }
};

struct SweepReport {
  double energy = 0.0;
  std::size_t max_bond = 0;
  double max_trunc_err = 0.0;
  double seconds = 0.0;
};

struct DmrgResult {
  std::vector<SweepReport> sweeps;
  double energy = 0.0;
};

/// Reduced two-site Hamiltonian applied to a (left, phys, phys, right)
/// tensor through the fixed four-contraction sequence
/// left-env -> W_i -> W_{i+1} -> right-env. Linear in theta; Hermitian as an
/// operator for Hermitian inputs.
Tensor effective_h_apply(const Tensor &lenv, const Tensor &w_left,
                         const Tensor &w_right, const Tensor &renv,
                         const Tensor &theta);

struct LanczosOptions {
  std::size_t max_iter = 100;
  double tol = 1e-10; // on the residual, relative to the operator-norm estimate
  std::uint64_t seed = 1;
};

struct LanczosResult {
  double value = 0.0;
  Tensor vector;
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Lowest Ritz pair of a Hermitian operator by Lanczos iteration with full
/// reorthogonalization. Invariant-subspace breakdowns are escaped by
/// injecting a seeded random direction, so an eigenvector guess still finds
/// the ground state.
LanczosResult lanczos_ground(const std::function<Tensor(const Tensor &)> &apply,
                             const Tensor &guess,
                             const LanczosOptions &opts = {});

DmrgResult dmrg(MPS &psi, const MPO &h, const DmrgOptions &opts = {});
DmrgResult dmrg(LargeMPS &psi, const LargeMPO &h, const DmrgOptions &opts = {});

} // namespace tn
