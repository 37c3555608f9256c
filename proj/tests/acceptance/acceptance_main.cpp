// Acceptance suite: every criterion prints one pass/fail line; the binary
// exits nonzero if any criterion fails or overruns its time budget.

#include "builders.hpp"
#include "oracles.hpp"
#include "tn/contract.hpp"
#include "tn/decompose.hpp"
#include "tn/dmrg.hpp"
#include "tn/mp_build.hpp"
#include "tn/mp_measure.hpp"
#include "tn/run.hpp"
#include "tn/site_ops.hpp"
#include "tn/storage.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace tn;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string &what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double max_abs_diff(const Tensor &a, const Tensor &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.element_count(); ++i)
    m = std::max(m, std::abs(a.flat(i) - b.flat(i)));
  return m;
}

double rel_diff(const Tensor &a, const Tensor &b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.element_count(); ++i) {
    diff = std::max(diff, std::abs(a.flat(i) - b.flat(i)));
    scale = std::max(scale, std::abs(b.flat(i)));
  }
  return diff / std::max(scale, 1.0);
}

Tensor matmul(const Tensor &a, const Tensor &b) {
  return contract(a, {2}, b, {1});
}

// -- criterion 1 ---------------------------------------------------------------

void contraction_oracle(Check &c) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> rank_dist(1, 5), dim_dist(1, 4);
  std::uniform_int_distribution<int> coin(0, 1), variant(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    Shape sa(rank_dist(rng));
    for (auto &d : sa)
      d = dim_dist(rng);
    std::uniform_int_distribution<std::size_t> na_dist(0, sa.size());
    const std::size_t n = na_dist(rng);
    std::vector<std::size_t> ia(sa.size());
    std::iota(ia.begin(), ia.end(), std::size_t{1});
    std::shuffle(ia.begin(), ia.end(), rng);
    ia.resize(n);

    std::uniform_int_distribution<std::size_t> extra_dist(0, 5 - n);
    const std::size_t extra = extra_dist(rng);
    if (n + extra == 0)
      continue;
    Shape sb(n + extra);
    for (auto &d : sb)
      d = dim_dist(rng);
    std::vector<std::size_t> ib(n + extra);
    std::iota(ib.begin(), ib.end(), std::size_t{1});
    std::shuffle(ib.begin(), ib.end(), rng);
    ib.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      sb[ib[k] - 1] = sa[ia[k] - 1];

    const ScalarKind ka = coin(rng) ? ScalarKind::ComplexF64
                                    : ScalarKind::RealF64;
    const ScalarKind kb = coin(rng) ? ScalarKind::ComplexF64
                                    : ScalarKind::RealF64;
    Tensor a = Tensor::random(ka, sa, rng);
    Tensor b = Tensor::random(kb, sb, rng);

    const int v = variant(rng);
    const bool conj_a = v == 1 || v == 3;
    const bool conj_b = v == 2 || v == 3;

    ContractOptions opts;
    if (coin(rng))
      opts.alpha = cplx{0.5 + 0.5 * coin(rng), conj_a ? 0.25 : 0.0};
    Tensor ref = oracle::contract_reference(a, ia, conj_a, b, ib, conj_b,
                                            opts.alpha);

    // Optional output reordering.
    std::vector<std::size_t> order(ref.rank());
    std::iota(order.begin(), order.end(), std::size_t{1});
    if (coin(rng) && ref.rank() > 1) {
      std::shuffle(order.begin(), order.end(), rng);
      opts.order = order;
      ref = permute(ref, order);
    }

    // Optional accumulator.
    Tensor z;
    if (coin(rng)) {
      z = Tensor::random(promote(ka, kb), ref.shape(), rng);
      opts.beta = cplx{0.75, 0.0};
      opts.accumulate = &z;
      Tensor scaled = z * opts.beta;
      ref = ref.kind() == scaled.kind() ? ref + scaled
                                        : ref.to_kind(scaled.kind()) + scaled;
    }

    Tensor got;
    if (conj_a && conj_b)
      got = ccontractc(a, ia, b, ib, opts);
    else if (conj_a)
      got = ccontract(a, ia, b, ib, opts);
    else if (conj_b)
      got = contractc(a, ia, b, ib, opts);
    else
      got = contract(a, ia, b, ib, opts);

    if (got.kind() != ref.kind())
      got = got.to_kind(ref.kind());
    c.require(rel_diff(got, ref) < 1e-12,
              "contraction " + std::to_string(trial) + " deviates");
    if (!c.ok)
      return;
  }
}

// -- criterion 2 ---------------------------------------------------------------

void decomposition_suite(Check &c) {
  std::mt19937_64 rng(20240602);
  std::uniform_int_distribution<std::size_t> dim_dist(1, 8);

  for (int trial = 0; trial < 100; ++trial) {
    const ScalarKind kind =
        trial % 2 ? ScalarKind::ComplexF64 : ScalarKind::RealF64;
    const std::size_t rows = dim_dist(rng), cols = dim_dist(rng);
    Tensor m = Tensor::random(kind, {rows, cols}, rng);

    SvdResult svd = svd_truncated(m);
    Tensor rebuilt = contract(
        contract(svd.u, {2}, diagonal_matrix(svd.d), {1}), {2}, svd.vh, {1});
    c.require(max_abs_diff(rebuilt, m) < 1e-12, "svd reconstruction");
    Tensor gram = ccontract(svd.u, {1}, svd.u, {1});
    c.require(max_abs_diff(gram, identity_tensor(svd.d.dim(1))
                                     .to_kind(gram.kind())) < 1e-10,
              "svd orthogonality");
    for (std::size_t i = 1; i + 1 <= svd.d.dim(1); ++i)
      c.require(svd.d.element({i}).real() >=
                    svd.d.element({i + 1}).real() - 1e-15,
                "singular values sorted");

    TruncationSpec cut;
    cut.cutoff = 0.1;
    SvdResult tr = svd_truncated(m, cut);
    double kept = 0.0;
    for (std::size_t i = 1; i <= tr.d.dim(1); ++i)
      kept += std::pow(tr.d.element({i}).real(), 2.0);
    c.require(std::abs(1.0 - kept / std::pow(tr.magnitude, 2.0) -
                       tr.trunc_err) < 1e-12,
              "truncation accounting");

    // Hermitian eigen reconstruction.
    Tensor r = Tensor::random(kind, {rows, rows}, rng);
    Tensor herm = (r + permute(conjugate(r), {2, 1})) * 0.5;
    EigResult eig = eigen_truncated(herm);
    Tensor erebuilt = contractc(
        contract(eig.u, {2}, diagonal_matrix(eig.d), {1}), {2}, eig.u, {2});
    c.require(max_abs_diff(erebuilt, herm) < 1e-12, "eigen reconstruction");

    // QR / LQ structure.
    QrResult qr = qr_decompose(m);
    c.require(max_abs_diff(contract(qr.q, {2}, qr.r, {1}), m) < 1e-12,
              "qr rebuild");
    Tensor qgram = ccontract(qr.q, {1}, qr.q, {1});
    c.require(max_abs_diff(qgram, identity_tensor(qr.q.dim(2))
                                      .to_kind(qgram.kind())) < 1e-12,
              "qr isometry");
    for (std::size_t rr = 1; rr <= qr.r.dim(1); ++rr)
      for (std::size_t cc = 1; cc < rr && cc <= qr.r.dim(2); ++cc)
        c.require(std::abs(qr.r.element({rr, cc})) < 1e-12,
                  "qr triangularity");

    LqResult lq = lq_decompose(m);
    c.require(max_abs_diff(contract(lq.l, {2}, lq.q, {1}), m) < 1e-12,
              "lq rebuild");
    for (std::size_t rr = 1; rr <= lq.l.dim(1); ++rr)
      for (std::size_t cc = rr + 1; cc <= lq.l.dim(2); ++cc)
        c.require(std::abs(lq.l.element({rr, cc})) < 1e-12,
                  "lq triangularity");

    // Polar rebuild in both forms.
    const std::vector<std::vector<std::size_t>> groups{{1}, {2}};
    auto [iso, weight] = polar_decompose(m, groups, true);
    c.require(max_abs_diff(contract(iso, {2}, weight, {1}), m) < 1e-12,
              "right polar rebuild");
    auto [weight_l, iso_l] = polar_decompose(m, groups, false);
    c.require(max_abs_diff(contract(weight_l, {2}, iso_l, {1}), m) < 1e-12,
              "left polar rebuild");
    if (!c.ok)
      return;
  }

  // Hand cases for the truncation rank, including the degenerate group.
  {
    TruncationSpec spec;
    spec.max_keep = 1;
    spec.cutoff = 1.0;
    const double values[] = {4.0, 3.0};
    auto d = truncation_rank(values, spec, 5.0);
    c.require(d.keep == 1 && std::abs(d.trunc_err - 9.0 / 25.0) < 1e-15,
              "truncation_rank hand case");
  }
  {
    TruncationSpec spec;
    spec.max_keep = 2;
    spec.keepdeg = true;
    const double values[] = {2.0, 1.0, 1.0, 0.5};
    c.require(truncation_rank(values, spec).keep == 3,
              "keepdeg degenerate group");
  }
  {
    TruncationSpec spec;
    const double values[] = {2.0, 1.0, 0.5};
    c.require(truncation_rank(values, spec).keep == 3,
              "cutoff=0, m=0 keeps all");
  }
}

// -- criterion 3 ---------------------------------------------------------------

void gauge_invariance(Check &c) {
  std::mt19937_64 rng(20240603);
  for (int trial = 0; trial < 20; ++trial) {
    MPS psi = builders::random_mps(8, 2, 6,
                                   trial % 2 ? ScalarKind::ComplexF64
                                             : ScalarKind::RealF64,
                                   rng);
    const Tensor before = full_psi(psi);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int step = 0; step < 50; ++step) {
      const bool can_left = psi.center() > 1;
      const bool can_right = psi.center() < 8;
      const bool go_right = can_right && (!can_left || coin(rng) == 1);
      gauge_move(psi, go_right ? Direction::Right : Direction::Left);
    }
    c.require(max_abs_diff(full_psi(psi), before) < 1e-10,
              "full_psi drifted in trial " + std::to_string(trial));
    for (std::size_t i = 1; i <= 8; ++i) {
      if (i < psi.center()) {
        Tensor gram = ccontract(psi.site(i), {1, 2}, psi.site(i), {1, 2});
        c.require(max_abs_diff(gram, identity_tensor(gram.dim(1))
                                         .to_kind(gram.kind())) < 1e-12,
                  "left isometry");
      } else if (i > psi.center()) {
        Tensor gram = ccontract(psi.site(i), {2, 3}, psi.site(i), {2, 3});
        c.require(max_abs_diff(gram, identity_tensor(gram.dim(1))
                                         .to_kind(gram.kind())) < 1e-12,
                  "right isometry");
      }
    }
    if (!c.ok)
      return;
  }
}

// -- criterion 4 ---------------------------------------------------------------

void measurement_oracle(Check &c) {
  std::mt19937_64 rng(20240604);

  // Spin chain: expect for p in {0,1,2} and the correlation matrix.
  for (std::size_t n : {std::size_t{4}, std::size_t{6}}) {
    MPS psi = builders::random_mps(n, 2, 4, ScalarKind::ComplexF64, rng);
    MPO h = builders::heisenberg_mpo(n);
    oracle::MatC hd = oracle::to_eigen(full_h(h));
    oracle::VecC v = oracle::vec_to_eigen(full_psi(psi));

    c.require(std::abs(expect(psi) - cplx((v.adjoint() * v)(0))) < 1e-8,
              "expect p=0");
    c.require(std::abs(expect(psi, h) - cplx((v.adjoint() * hd * v)(0))) <
                  1e-8,
              "expect p=1");
    const MPO *two[] = {&h, &h};
    c.require(std::abs(expect(psi, two) -
                       cplx((v.adjoint() * hd * hd * v)(0))) < 1e-8,
              "expect p=2");

    SiteOperatorSet ops = spin_ops(0.5);
    Tensor m = correlation_matrix(psi, ops.at("Sp"), ops.at("Sm"));
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j) {
        oracle::MatC big = oracle::embed_op_string(
            {oracle::to_eigen(ops.at("Sp")), oracle::to_eigen(ops.at("Sm"))},
            {i, j}, n, 2);
        c.require(std::abs(m.element({i, j}) - cplx((v.adjoint() * big * v)(0))) <
                      1e-8,
                  "correlation matrix entry");
      }
    if (!c.ok)
      return;
  }

  // Fermionic 4-point correlation with parity strings.
  MPS fpsi = builders::random_mps(4, 4, 4, ScalarKind::RealF64, rng);
  SiteOperatorSet fops = fermion_ops();
  const Tensor cdag_up = permute(fops.at("Cup"), {2, 1});
  const Tensor cdag_dn = permute(fops.at("Cdn"), {2, 1});
  const Tensor &f = fops.at("F");
  const Tensor cup = fops.at("Cup");
  const Tensor cdn = fops.at("Cdn");
  const Tensor *four[] = {&cdag_up, &cdag_dn, &cdn, &cup};
  Tensor t = correlation(fpsi, four, &f);

  oracle::VecC v = oracle::vec_to_eigen(full_psi(fpsi));
  const oracle::MatC fd = oracle::to_eigen(f);
  const std::vector<oracle::MatC> dense{
      oracle::to_eigen(cdag_up), oracle::to_eigen(cdag_dn),
      oracle::to_eigen(cdn), oracle::to_eigen(cup)};
  for (std::size_t i = 1; i <= 4 && c.ok; ++i)
    for (std::size_t j = 1; j <= 4; ++j)
      for (std::size_t k = 1; k <= 4; ++k)
        for (std::size_t l = 1; l <= 4; ++l) {
          oracle::MatC big =
              oracle::embed_op_string(dense, {i, j, k, l}, 4, 4, &fd);
          const cplx ref = (v.adjoint() * big * v)(0);
          if (std::abs(t.element({i, j, k, l}) - ref) >= 1e-8) {
            c.require(false, "4-point correlation entry");
            break;
          }
        }

  // Two-point fermionic correlation matrix against the same oracle.
  Tensor m2 = correlation_matrix(fpsi, cdag_up, cup, &f);
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t j = 1; j <= 4; ++j) {
      oracle::MatC big = oracle::embed_op_string(
          {oracle::to_eigen(cdag_up), oracle::to_eigen(cup)}, {i, j}, 4, 4,
          &fd);
      c.require(std::abs(m2.element({i, j}) - cplx((v.adjoint() * big * v)(0))) <
                    1e-8,
                "fermionic correlation matrix");
    }
}

// -- criterion 5 ---------------------------------------------------------------

void dmrg_vs_ed(Check &c) {
  for (std::size_t n : {std::size_t{2}, std::size_t{4}, std::size_t{6},
                        std::size_t{8}, std::size_t{10}}) {
    MPO h = builders::heisenberg_mpo(n);
    MPS psi = product_mps(2, n, ProductState::RandomBasis, 100 + n);
    DmrgOptions opts;
    opts.sweeps = 10;
    opts.trunc.max_keep = 64;
    opts.trunc.cutoff = 1e-12;
    opts.seed = n;
    DmrgResult res = dmrg(psi, h, opts);

    oracle::MatC hd = oracle::to_eigen(full_h(h, std::size_t{1} << 11));
    Eigen::SelfAdjointEigenSolver<oracle::MatC> es(hd);
    const double exact = es.eigenvalues()(0);
    c.require(std::abs(res.energy - exact) < 1e-8,
              "N=" + std::to_string(n) + " energy " +
                  std::to_string(res.energy) + " vs " + std::to_string(exact));
    if (n == 2)
      c.require(std::abs(res.energy - (-0.75)) < 1e-10, "N=2 singlet");
  }
}

// -- criterion 6 ---------------------------------------------------------------

void excited_state(Check &c) {
  const std::size_t n = 4;
  MPO h = builders::heisenberg_mpo(n);

  oracle::MatC hd = oracle::to_eigen(full_h(h));
  Eigen::SelfAdjointEigenSolver<oracle::MatC> es(hd);
  const double e0 = es.eigenvalues()(0);
  const double e1 = es.eigenvalues()(1);

  MPS psi0 = product_mps(2, n, ProductState::RandomBasis, 7);
  DmrgOptions opts;
  opts.sweeps = 12;
  opts.trunc.max_keep = 32;
  opts.trunc.cutoff = 1e-14;
  opts.seed = 7;
  DmrgResult ground = dmrg(psi0, h, opts);
  c.require(std::abs(ground.energy - e0) < 1e-9, "ground state for penalty");

  const double lambda = 10.0 * (e1 - e0);
  MPO penalized = penalty_mpo(h, lambda, psi0);
  MPS psi1 = product_mps(2, n, ProductState::RandomBasis, 8);
  opts.seed = 8;
  DmrgResult excited = dmrg(psi1, penalized, opts);
  c.require(std::abs(excited.energy - e1) < 1e-6,
            "excited energy " + std::to_string(excited.energy) + " vs " +
                std::to_string(e1));
}

// -- criterion 7 ---------------------------------------------------------------

void disk_parity(Check &c) {
  const fs::path dir = fs::temp_directory_path() /
                       ("tn_acceptance_disk_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::size_t n = 8;
  MPO h = builders::heisenberg_mpo(n);
  MPS mem = product_mps(2, n, ProductState::RandomBasis, 21);
  LargeMPS disk = large_mps(mem, dir);
  LargeMPO hdisk = large_mpo(h, dir);

  DmrgOptions opts;
  opts.sweeps = 6;
  opts.trunc.max_keep = 32;
  opts.trunc.cutoff = 1e-12;
  opts.seed = 21;
  DmrgResult mem_res = dmrg(mem, h, opts);
  DmrgResult disk_res = dmrg(disk, hdisk, opts);

  c.require(mem_res.sweeps.size() == disk_res.sweeps.size(), "sweep counts");
  for (std::size_t s = 0; s < mem_res.sweeps.size() && c.ok; ++s)
    c.require(std::abs(mem_res.sweeps[s].energy - disk_res.sweeps[s].energy) <
                  1e-10,
              "per-sweep energy parity at sweep " + std::to_string(s + 1));

  // Bit-exact round trips of the final site tensors.
  std::mt19937_64 rng(23);
  for (std::size_t i = 1; i <= n && c.ok; ++i) {
    Tensor t = disk.site(i);
    const fs::path file = dir / ("probe" + std::string(kTensorFileExtension));
    tensor_to_disk(t, file);
    Tensor back = tensor_from_disk(file);
    bool same = t.kind() == back.kind() && t.shape() == back.shape();
    for (std::size_t e = 0; same && e < t.element_count(); ++e) {
      const cplx x = t.flat(e), y = back.flat(e);
      same = std::memcmp(&x, &y, sizeof(cplx)) == 0;
    }
    c.require(same, "bit-exact round trip of site " + std::to_string(i));
  }
  fs::remove_all(dir);
}

// -- criterion 8 ---------------------------------------------------------------

void cli_golden(Check &c) {
  const fs::path out = fs::temp_directory_path() /
                       ("tn_acceptance_cli_" + std::to_string(::getpid()));
  fs::remove_all(out);
  const std::string cmd = std::string(TN_TOOL_PATH) + " run " +
                          (fs::path(TN_CONFIG_DIR) / "heisenberg_n2.cfg").string() +
                          " --output " + out.string();
  const int status = std::system(cmd.c_str());
  c.require(status != -1 && WEXITSTATUS(status) == 0, "tool exit code");
  if (!c.ok)
    return;

  std::ifstream summary(out / "summary.txt");
  std::stringstream sbuf;
  sbuf << summary.rdbuf();
  c.require(sbuf.str().find("energy = -0.750000000") != std::string::npos,
            "summary energy line");

  std::ifstream csv(out / "results.csv");
  std::stringstream cbuf;
  cbuf << csv.rdbuf();
  std::ifstream golden(fs::path(TN_GOLDEN_DIR) / "heisenberg_n2_results.csv");
  c.require(bool(golden), "golden file present");
  if (golden) {
    std::stringstream gbuf;
    gbuf << golden.rdbuf();
    c.require(cbuf.str() == gbuf.str(), "CSV matches the golden file");
  }
  fs::remove_all(out);
}

// -- criterion 9 ---------------------------------------------------------------

void operator_algebra(Check &c) {
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    SiteOperatorSet ops = spin_ops(s);
    Tensor comm = matmul(ops.at("Sp"), ops.at("Sm")) -
                  matmul(ops.at("Sm"), ops.at("Sp"));
    c.require(max_abs_diff(comm, ops.at("Sz") * 2.0) < 1e-12, "[Sp,Sm]=2Sz");
    Tensor commz = matmul(ops.at("Sz"), ops.at("Sp")) -
                   matmul(ops.at("Sp"), ops.at("Sz"));
    c.require(max_abs_diff(commz, ops.at("Sp")) < 1e-12, "[Sz,Sp]=Sp");
    Tensor casimir = matmul(ops.at("Sx"), ops.at("Sx")) +
                     matmul(ops.at("Sy"), ops.at("Sy")) +
                     matmul(ops.at("Sz"), ops.at("Sz"));
    Tensor expected = (ops.at("Id") * (s * (s + 1.0))).to_kind(casimir.kind());
    c.require(max_abs_diff(casimir, expected) < 1e-12, "Casimir identity");
  }

  SiteOperatorSet f = fermion_ops();
  const Tensor cdag_up = permute(f.at("Cup"), {2, 1});
  c.require(frobenius_norm(matmul(f.at("Cup"), f.at("Cup"))) == 0.0,
            "Cup nilpotent");
  Tensor anti = matmul(f.at("Cup"), cdag_up) + matmul(cdag_up, f.at("Cup"));
  c.require(max_abs_diff(anti, f.at("Id")) < 1e-12, "{Cup, Cup^dag} = Id");
  Tensor cross = matmul(f.at("Cup"), f.at("Cdn")) +
                 matmul(f.at("Cdn"), f.at("Cup"));
  c.require(frobenius_norm(cross) < 1e-12, "{Cup, Cdn} = 0");

  SiteOperatorSet tj = tj_ops();
  for (const char *name : {"Cup", "Cdn", "F", "Nup", "Ndn"}) {
    Tensor projected = get_slice(
        f.at(name), {IndexSelector::range(1, 3), IndexSelector::range(1, 3)});
    c.require(max_abs_diff(tj.at(name), projected) == 0.0,
              std::string("t-J projection of ") + name);
  }
  for (std::size_t i = 1; i <= 3; ++i)
    c.require(tj.at("Ndens").element({i, i}).real() < 2.0 - 1e-12,
              "no double occupancy");
}

struct Criterion {
  const char *name;
  double budget_seconds;
  std::function<void(Check &)> body;
};

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1. contraction oracle (200 randomized cases, 1e-12)", 10.0,
       contraction_oracle},
      {"2. decomposition suite (100 matrices each, accounting)", 10.0,
       decomposition_suite},
      {"3. gauge invariance (20 walks x 50 moves)", 30.0, gauge_invariance},
      {"4. measurement oracle (dense cross-checks, 1e-8)", 30.0,
       measurement_oracle},
      {"5. DMRG vs ED (Heisenberg N=2..10, 1e-8)", 60.0, dmrg_vs_ed},
      {"6. excited state via penalty (N=4, 1e-6)", 10.0, excited_state},
      {"7. disk parity (N=8, 1e-10, bit-exact files)", 30.0, disk_parity},
      {"8. CLI golden run (byte-stable CSV)", 5.0, cli_golden},
      {"9. operator algebra (1e-12)", 5.0, operator_algebra},
  };

  int failures = 0;
  for (const Criterion &criterion : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criterion.body(check);
    } catch (const std::exception &e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (seconds > criterion.budget_seconds) {
      check.ok = false;
      check.detail = "time budget exceeded (" + std::to_string(seconds) + "s)";
    }
    std::printf("[%s] %s (%.2fs)%s%s\n", check.ok ? "PASS" : "FAIL",
                criterion.name, seconds, check.ok ? "" : " - ",
                check.detail.c_str());
    if (!check.ok)
      ++failures;
  }
  return failures == 0 ? 0 : 1;
}
