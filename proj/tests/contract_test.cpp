#include "tn/contract.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace tn;

namespace {

double rel_diff(const Tensor &a, const Tensor &b) {
  REQUIRE(a.shape() == b.shape());
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.element_count(); ++i) {
    diff = std::max(diff, std::abs(a.flat(i) - b.flat(i)));
    scale = std::max(scale, std::abs(b.flat(i)));
  }
  return diff / std::max(scale, 1.0);
}

Shape random_shape(std::mt19937_64 &rng, std::size_t max_rank,
                   std::size_t max_dim) {
  std::uniform_int_distribution<std::size_t> rank_dist(1, max_rank);
  std::uniform_int_distribution<std::size_t> dim_dist(1, max_dim);
  Shape s(rank_dist(rng));
  for (auto &d : s)
    d = dim_dist(rng);
  return s;
}

} // namespace

TEST_SUITE("contraction") {

TEST_CASE("complement_indices") {
  CHECK(complement_indices(std::vector<std::size_t>{1, 2, 6}, 10) ==
        AxisList{3, 4, 5, 7, 8, 9, 10});
  CHECK(complement_indices(std::vector<std::size_t>{}, 3) == AxisList{1, 2, 3});
  CHECK(complement_indices(std::vector<std::size_t>{1, 2, 3}, 3) == AxisList{});
  CHECK_THROWS_AS(complement_indices(std::vector<std::size_t>{1, 1}, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(complement_indices(std::vector<std::size_t>{4}, 3),
                  std::invalid_argument);
}

TEST_CASE("matrix_equivalent") {
  std::mt19937_64 rng(31);
  Tensor t = Tensor::random(ScalarKind::RealF64, {2, 3, 4}, rng);

  Tensor lead = matrix_equivalent(t, std::vector<std::size_t>{1});
  CHECK(lead.shape() == Shape{2, 12});
  // Leading axes are already contiguous: the buffer is untouched.
  for (std::size_t i = 0; i < t.element_count(); ++i)
    CHECK(lead.flat(i) == t.flat(i));

  Tensor trail = matrix_equivalent(t, std::vector<std::size_t>{3});
  CHECK(trail.shape() == Shape{4, 6});
  Tensor expected = reshape(permute(t, {3, 1, 2}), Shape{4, 6});
  CHECK(rel_diff(trail, expected) == 0.0);

  Tensor conj_real = matrix_equivalent(t, std::vector<std::size_t>{1}, true);
  for (std::size_t i = 0; i < t.element_count(); ++i)
    CHECK(conj_real.flat(i) == t.flat(i));
}

TEST_CASE("contract reproduces the documented shapes") {
  std::mt19937_64 rng(37);
  Tensor a = Tensor::random(ScalarKind::RealF64, {15, 20, 5}, rng);
  Tensor b = Tensor::random(ScalarKind::RealF64, {5, 10, 20}, rng);

  Tensor c = contract(a, {3, 2}, b, {1, 3});
  CHECK(c.shape() == Shape{15, 10});

  Tensor d = contract({2, 1}, a, {3, 2}, b, {1, 3});
  CHECK(d.shape() == Shape{10, 15});
  CHECK(rel_diff(d, permute(c, {2, 1})) == 0.0);

  Tensor ref = oracle::contract_reference(a, {3, 2}, false, b, {1, 3}, false);
  CHECK(rel_diff(c, ref) < 1e-12);
}

TEST_CASE("identity contraction and axpy") {
  Tensor eye = identity_tensor(2);
  Tensor v = Tensor::from_data({2}, std::vector<double>{0.6, -0.8});
  Tensor ev = contract(eye, {2}, v, {1});
  CHECK(rel_diff(ev, v) == 0.0);

  ContractOptions scale3;
  scale3.alpha = 3.0;
  Tensor three = contract(eye, {2}, v, {1}, scale3);
  CHECK(three.element({1}).real() == doctest::Approx(1.8));

  Tensor z = Tensor::from_data({2}, std::vector<double>{1.0, 1.0});
  ContractOptions axpy;
  axpy.alpha = 1.0;
  axpy.beta = 1.0;
  axpy.accumulate = &z;
  Tensor sum = contract(eye, {2}, v, {1}, axpy);
  CHECK(sum.element({1}).real() == doctest::Approx(1.6));
  CHECK(sum.element({2}).real() == doctest::Approx(0.2));

  // beta = 0 ignores Z entirely.
  ContractOptions beta0;
  beta0.accumulate = &z;
  CHECK(rel_diff(contract(eye, {2}, v, {1}, beta0), v) == 0.0);
}

TEST_CASE("scalar and self contractions") {
  Tensor v = Tensor::from_data({2}, std::vector<double>{3.0, 4.0});
  CHECK(ccontract(v, v).real() == doctest::Approx(25.0));
  CHECK(ccontract(v).real() == doctest::Approx(25.0));

  Tensor e1 = Tensor::from_data({2}, std::vector<double>{1.0, 0.0});
  Tensor e2 = Tensor::from_data({2}, std::vector<double>{0.0, 1.0});
  CHECK(contract(e1, e2) == cplx{0.0, 0.0});

  std::mt19937_64 rng(41);
  Tensor a = Tensor::random(ScalarKind::ComplexF64, {2, 3}, rng);
  Tensor b = Tensor::random(ScalarKind::ComplexF64, {2, 3}, rng);
  const cplx full = contract(a, {1, 2}, b, {1, 2}).scalar_value();
  CHECK(std::abs(contract(a, b) - full) < 1e-12);
  CHECK(std::abs(ccontract(a) - cplx{std::pow(frobenius_norm(a), 2.0), 0.0}) <
        1e-12);

  Tensor mismatch = Tensor::zeros(ScalarKind::RealF64, {3, 2});
  CHECK_THROWS_AS(contract(a, mismatch), std::invalid_argument);
}

TEST_CASE("partial_trace") {
  std::mt19937_64 rng(43);
  Tensor a = Tensor::random(ScalarKind::RealF64, {3, 2, 4, 2, 3}, rng);
  Tensor traced = partial_trace(a, {{1, 5}, {2, 4}});
  CHECK(traced.shape() == Shape{4});
  Tensor ref = oracle::trace_reference(a, {{1, 5}, {2, 4}});
  CHECK(rel_diff(traced, ref) < 1e-12);

  Tensor eye = identity_tensor(6);
  Tensor tr = partial_trace(eye, 1, 2);
  CHECK(tr.rank() == 0);
  CHECK(tr.scalar_value() == cplx{6.0, 0.0});

  Tensor m = Tensor::random(ScalarKind::RealF64, {3, 3}, rng);
  cplx diag{};
  for (std::size_t i = 1; i <= 3; ++i)
    diag += m.element({i, i});
  CHECK(std::abs(partial_trace(m, 1, 2).scalar_value() - diag) < 1e-14);

  CHECK_THROWS_AS(partial_trace(a, {{1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(a, {{1, 5}, {5, 2}}), std::invalid_argument);
}

TEST_CASE("paper listing: trace over two index pairs") {
  // shape (10,20,40,30,10,5,20), pairs [[1,5],[2,7]] -> shape (40,30,5)
  std::mt19937_64 rng(47);
  Tensor a =
      Tensor::random(ScalarKind::RealF64, {10, 20, 40, 30, 10, 5, 20}, rng);
  Tensor traced = partial_trace(a, {{1, 5}, {2, 7}});
  CHECK(traced.shape() == Shape{40, 30, 5});
}

TEST_CASE("check_contract is silent on success and diagnostic on failure") {
  Tensor a = Tensor::zeros(ScalarKind::RealF64, {2, 3});
  Tensor b = Tensor::zeros(ScalarKind::RealF64, {3, 2});
  CHECK_NOTHROW(check_contract(a, {2}, b, {1}));

  Tensor bad = Tensor::zeros(ScalarKind::RealF64, {4, 2});
  try {
    check_contract(a, {2}, bad, {1});
    FAIL("expected a diagnostic");
  } catch (const std::invalid_argument &e) {
    const std::string msg = e.what();
    CHECK(msg.find("3") != std::string::npos);
    CHECK(msg.find("4") != std::string::npos);
  }
}

TEST_CASE("fuzz: check_contract acceptance implies contract success") {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<std::size_t> dim_dist(1, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    Shape sa = random_shape(rng, 4, 4);
    std::uniform_int_distribution<std::size_t> na_dist(0, sa.size());
    const std::size_t n = na_dist(rng);
    std::vector<std::size_t> axes_a(sa.size());
    std::iota(axes_a.begin(), axes_a.end(), std::size_t{1});
    std::shuffle(axes_a.begin(), axes_a.end(), rng);
    axes_a.resize(n);

    // Build B with matching dimensions on the paired axes.
    std::uniform_int_distribution<std::size_t> extra_dist(0, 2);
    const std::size_t extra = extra_dist(rng);
    Shape sb(n + extra);
    std::vector<std::size_t> axes_b(n + extra);
    std::iota(axes_b.begin(), axes_b.end(), std::size_t{1});
    std::shuffle(axes_b.begin(), axes_b.end(), rng);
    axes_b.resize(n);
    for (auto &d : sb)
      d = dim_dist(rng);
    for (std::size_t k = 0; k < n; ++k)
      sb[axes_b[k] - 1] = sa[axes_a[k] - 1];

    Tensor a = Tensor::random(coin(rng) ? ScalarKind::ComplexF64
                                        : ScalarKind::RealF64,
                              sa, rng);
    Tensor b = Tensor::random(coin(rng) ? ScalarKind::ComplexF64
                                        : ScalarKind::RealF64,
                              sb, rng);
    CHECK_NOTHROW(check_contract(a, axes_a, b, axes_b));
    Tensor c = contract(a, axes_a, b, axes_b);
    Tensor ref = oracle::contract_reference(a, axes_a, false, b, axes_b, false);
    CHECK(rel_diff(c, ref) < 1e-12);
  }
}

TEST_CASE("bilinearity") {
  std::mt19937_64 rng(59);
  Tensor a = Tensor::random(ScalarKind::ComplexF64, {3, 4}, rng);
  Tensor a2 = Tensor::random(ScalarKind::ComplexF64, {3, 4}, rng);
  Tensor b = Tensor::random(ScalarKind::ComplexF64, {4, 2}, rng);

  ContractOptions alpha;
  alpha.alpha = cplx{1.5, -0.5};
  Tensor lhs = contract(a, {2}, b, {1}, alpha);
  Tensor rhs = contract(a * alpha.alpha, {2}, b, {1});
  CHECK(rel_diff(lhs, rhs) < 1e-12);

  Tensor sum = contract(a + a2, {2}, b, {1});
  Tensor parts = contract(a, {2}, b, {1}) + contract(a2, {2}, b, {1});
  CHECK(rel_diff(sum, parts) < 1e-12);
}

TEST_CASE("outer products and full contractions through the tensor form") {
  std::mt19937_64 rng(61);
  Tensor a = Tensor::random(ScalarKind::RealF64, {2, 2}, rng);
  Tensor b = Tensor::random(ScalarKind::RealF64, {3}, rng);
  Tensor outer = contract(a, {}, b, {});
  CHECK(outer.shape() == Shape{2, 2, 3});
  CHECK(outer.element({2, 1, 3}) ==
        cplx{a.element({2, 1}).real() * b.element({3}).real(), 0.0});

  Tensor full = contract(a, {1, 2}, a, {1, 2});
  CHECK(full.rank() == 0);
  CHECK(std::abs(full.scalar_value() - contract(a, a)) < 1e-13);
}

} // TEST_SUITE
