#include "tn/dmrg.hpp"

#include "builders.hpp"
#include "oracles.hpp"
#include "tn/contract.hpp"
#include "tn/mp_build.hpp"
#include "tn/mp_measure.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>
#include <unistd.h>

using namespace tn;

namespace {

double max_abs_diff(const Tensor &a, const Tensor &b) {
  REQUIRE(a.shape() == b.shape());
  double m = 0.0;
  for (std::size_t i = 0; i < a.element_count(); ++i)
    m = std::max(m, std::abs(a.flat(i) - b.flat(i)));
  return m;
}

double dense_ground_energy(const MPO &h) {
  oracle::MatC hd = oracle::to_eigen(full_h(h));
  Eigen::SelfAdjointEigenSolver<oracle::MatC> es(hd);
  return es.eigenvalues()(0);
}

DmrgOptions quick_options(std::size_t m, std::uint64_t seed = 1) {
  DmrgOptions opts;
  opts.sweeps = 10;
  opts.trunc.max_keep = m;
  opts.trunc.cutoff = 1e-12;
  opts.seed = seed;
  return opts;
}

} // namespace

TEST_SUITE("dmrg_engine") {

TEST_CASE("effective_h_apply equals the dense action for N=2") {
  MPO h = builders::heisenberg_mpo(2);
  std::mt19937_64 rng(7);
  MPS psi = builders::random_mps(2, 2, 2, ScalarKind::RealF64, rng);
  auto [lenv, renv] = make_env(psi, h);

  Tensor theta = contract(psi.site(1), {3}, psi.site(2), {1});
  Tensor ht = effective_h_apply(lenv.site(1), h.site(1), h.site(2),
                                renv.site(2), theta);

  oracle::MatC hd = oracle::to_eigen(full_h(h));
  oracle::VecC v = oracle::vec_to_eigen(reshape(theta, {4}));
  oracle::VecC ref = hd * v;
  Tensor flat = reshape(ht, {4});
  for (std::size_t i = 1; i <= 4; ++i)
    CHECK(std::abs(flat.element({i}) - ref(static_cast<long>(i) - 1)) < 1e-12);

  // Linearity: zero maps to zero.
  Tensor zero = Tensor::zeros(theta.kind(), theta.shape());
  CHECK(frobenius_norm(effective_h_apply(lenv.site(1), h.site(1), h.site(2),
                                         renv.site(2), zero)) == 0.0);
}

TEST_CASE("effective Hamiltonian is Hermitian in the inner product") {
  std::mt19937_64 rng(11);
  MPS psi = builders::random_mps(6, 2, 4, ScalarKind::ComplexF64, rng);
  move_center(psi, 3);
  MPO h = builders::heisenberg_mpo(6);
  auto [lenv, renv] = make_env(psi, h);

  Tensor theta = contract(psi.site(3), {3}, psi.site(4), {1});
  for (int trial = 0; trial < 5; ++trial) {
    Tensor x = Tensor::random(ScalarKind::ComplexF64, theta.shape(), rng);
    Tensor hx = effective_h_apply(lenv.site(3), h.site(3), h.site(4),
                                  renv.site(4), x);
    const cplx xhx = ccontract(x, hx);
    CHECK(std::abs(xhx.imag()) < 1e-10);
  }
}

TEST_CASE("lanczos_ground on small operators") {
  // 2x2 diagonal.
  Tensor d = Tensor::zeros(ScalarKind::RealF64, {2, 2});
  d.set_element({1, 1}, 1.0);
  d.set_element({2, 2}, 2.0);
  std::mt19937_64 rng(13);
  Tensor guess = Tensor::random(ScalarKind::RealF64, {2}, rng);
  auto apply = [&](const Tensor &x) { return contract(d, {2}, x, {1}); };
  LanczosResult res = lanczos_ground(apply, guess);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-12));

  // Two-site Heisenberg: the singlet energy is -3/4.
  MPO h = builders::heisenberg_mpo(2);
  Tensor hd = full_h(h);
  Tensor guess4 = Tensor::random(ScalarKind::RealF64, {4}, rng);
  auto apply4 = [&](const Tensor &x) { return contract(hd, {2}, x, {1}); };
  LanczosResult res4 = lanczos_ground(apply4, guess4);
  CHECK(res4.value == doctest::Approx(-0.75).epsilon(1e-12));

  // An eigenvector guess escapes through the breakdown path.
  Tensor up = Tensor::zeros(ScalarKind::RealF64, {4});
  up.set_element({1}, 1.0); // |up up>, eigenvalue +1/4
  LanczosResult esc = lanczos_ground(apply4, up);
  CHECK(esc.value == doctest::Approx(-0.75).epsilon(1e-10));

  CHECK_THROWS_AS(lanczos_ground(apply4, Tensor::zeros(ScalarKind::RealF64,
                                                       {4})),
                  std::invalid_argument);
}

TEST_CASE("lanczos Ritz values never undershoot the true minimum") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial) % 28;
    Tensor r = Tensor::random(ScalarKind::ComplexF64,
                              {n, n}, rng);
    Tensor herm = (r + permute(conjugate(r), {2, 1})) * 0.5;
    oracle::MatC hd = oracle::to_eigen(herm);
    Eigen::SelfAdjointEigenSolver<oracle::MatC> es(hd);
    const double exact = es.eigenvalues()(0);

    Tensor guess = Tensor::random(ScalarKind::ComplexF64, {n}, rng);
    LanczosOptions opts;
    opts.max_iter = 8; // deliberately unconverged
    auto apply = [&](const Tensor &x) { return contract(herm, {2}, x, {1}); };
    LanczosResult res = lanczos_ground(apply, guess, opts);
    CHECK(res.value >= exact - 1e-9);
  }
}

TEST_CASE("dmrg solves the two-site Heisenberg chain in one sweep") {
  MPO h = builders::heisenberg_mpo(2);
  MPS psi = product_mps(2, 2, ProductState::RandomBasis, 3);
  DmrgOptions opts = quick_options(4);
  opts.sweeps = 1;
  DmrgResult res = dmrg(psi, h, opts);
  CHECK(res.energy == doctest::Approx(-0.75).epsilon(1e-10));
  CHECK(expect(psi, h).real() == doctest::Approx(-0.75).epsilon(1e-8));
}

TEST_CASE("dmrg matches exact diagonalization for small chains") {
  for (std::size_t n : {std::size_t{4}, std::size_t{6}}) {
    MPO h = builders::heisenberg_mpo(n);
    MPS psi = product_mps(2, n, ProductState::RandomBasis, 5);
    DmrgResult res = dmrg(psi, h, quick_options(64, 5));
    CHECK(res.energy ==
          doctest::Approx(dense_ground_energy(h)).epsilon(1e-8));
  }
}

TEST_CASE("identity MPO has ground energy 1 on the unit sphere") {
  MPO id = builders::identity_mpo(4, 2);
  MPS psi = product_mps(2, 4, ProductState::RandomBasis, 7);
  DmrgResult res = dmrg(psi, id, quick_options(4));
  CHECK(res.energy == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sweep reports are monotone and the gauge stays healthy") {
  const std::size_t n = 8;
  MPO h = builders::heisenberg_mpo(n);
  MPS psi = product_mps(2, n, ProductState::RandomBasis, 11);
  DmrgOptions opts = quick_options(32, 11);
  opts.early_stop = false;
  opts.sweeps = 6;
  DmrgResult res = dmrg(psi, h, opts);

  REQUIRE(res.sweeps.size() == 6);
  for (std::size_t s = 1; s < res.sweeps.size(); ++s)
    CHECK(res.sweeps[s].energy <= res.sweeps[s - 1].energy + 1e-9);
  for (const SweepReport &r : res.sweeps) {
    CHECK(r.max_bond >= 2);
    CHECK(r.max_trunc_err >= 0.0);
    CHECK(r.seconds >= 0.0);
  }

  // Variational: every sweep energy sits above the dense ground energy.
  const double exact = dense_ground_energy(h);
  for (const SweepReport &r : res.sweeps)
    CHECK(r.energy >= exact - 1e-9);

  // Gauge health after the run: center at 1, all other sites isometric.
  CHECK(psi.center() == 1);
  for (std::size_t i = 2; i <= n; ++i) {
    Tensor gram = ccontract(psi.site(i), {2, 3}, psi.site(i), {2, 3});
    CHECK(max_abs_diff(gram, identity_tensor(gram.dim(1)).to_kind(
                                 gram.kind())) < 1e-12);
  }
}

TEST_CASE("identical options and seed give identical reports") {
  MPO h = builders::heisenberg_mpo(6);
  MPS a = product_mps(2, 6, ProductState::RandomBasis, 13);
  MPS b = product_mps(2, 6, ProductState::RandomBasis, 13);
  DmrgOptions opts = quick_options(16, 13);
  DmrgResult ra = dmrg(a, h, opts);
  DmrgResult rb = dmrg(b, h, opts);
  REQUIRE(ra.sweeps.size() == rb.sweeps.size());
  for (std::size_t s = 0; s < ra.sweeps.size(); ++s) {
    CHECK(ra.sweeps[s].energy == rb.sweeps[s].energy);
    CHECK(ra.sweeps[s].max_bond == rb.sweeps[s].max_bond);
    CHECK(ra.sweeps[s].max_trunc_err == rb.sweeps[s].max_trunc_err);
  }
}

TEST_CASE("the 3S method is rejected, never silently replaced") {
  MPO h = builders::heisenberg_mpo(2);
  MPS psi = product_mps(2, 2);
  DmrgOptions opts;
  opts.method = "3S";
  try {
    dmrg(psi, h, opts);
    FAIL("expected a method rejection");
  } catch (const std::invalid_argument &e) {
    CHECK(std::string(e.what()).find("twosite") != std::string::npos);
  }
}

TEST_CASE("dmrg runs identically on disk-backed chains") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("tn_dmrg_disk_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::size_t n = 6;
  MPO h = builders::heisenberg_mpo(n);
  MPS mem = product_mps(2, n, ProductState::RandomBasis, 17);
  LargeMPS disk = large_mps(mem, dir);
  LargeMPO hdisk = large_mpo(h, dir);

  DmrgOptions opts = quick_options(16, 17);
  DmrgResult mem_res = dmrg(mem, h, opts);
  DmrgResult disk_res = dmrg(disk, hdisk, opts);

  REQUIRE(mem_res.sweeps.size() == disk_res.sweeps.size());
  for (std::size_t s = 0; s < mem_res.sweeps.size(); ++s)
    CHECK(std::abs(mem_res.sweeps[s].energy - disk_res.sweeps[s].energy) <
          1e-10);

  MPS back = to_memory(disk);
  CHECK(std::abs(expect(back, h).real() - mem_res.energy) < 1e-8);
  fs::remove_all(dir);
}

} // TEST_SUITE
