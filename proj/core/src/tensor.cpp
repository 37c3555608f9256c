#include "tn/tensor.hpp"

#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tn {

namespace {

[[noreturn]] void fail(const std::string &msg) {
  throw std::invalid_argument("tn: " + msg);
}

[[noreturn]] void fail_bounds(const std::string &msg) {
  throw std::out_of_range("tn: " + msg);
}

void check_shape(std::span<const std::size_t> shape) {
  for (std::size_t d : shape)
    if (d == 0)
      fail("shape entries must be >= 1");
}

std::vector<std::size_t> strides_of(std::span<const std::size_t> shape) {
  std::vector<std::size_t> st(shape.size());
  std::size_t s = 1;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    st[k] = s;
    s *= shape[k];
  }
  return st;
}

} // namespace

std::size_t shape_elements(std::span<const std::size_t> shape) noexcept {
  std::size_t n = 1;
  for (std::size_t d : shape)
    n *= d;
  return n;
}

std::size_t linear_index_of(std::span<const std::size_t> position,
                            std::span<const std::size_t> shape) {
  if (position.size() != shape.size())
    fail("position rank does not match shape rank");
  std::size_t linear = 0, stride = 1;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (position[k] < 1 || position[k] > shape[k])
      fail_bounds("position component " + std::to_string(k + 1) +
                  " out of range");
    linear += (position[k] - 1) * stride;
    stride *= shape[k];
  }
  return linear + 1;
}

void multi_index_of(std::size_t linear, std::span<const std::size_t> shape,
                    std::span<std::size_t> out) {
  if (out.size() != shape.size())
    fail("output rank does not match shape rank");
  if (linear < 1 || linear > shape_elements(shape))
    fail_bounds("linear index out of range");
  std::size_t rem = linear - 1;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    out[k] = rem % shape[k] + 1;
    rem /= shape[k];
  }
}

std::vector<std::size_t> multi_index_of(std::size_t linear,
                                        std::span<const std::size_t> shape) {
  std::vector<std::size_t> pos(shape.size());
  multi_index_of(linear, shape, pos);
  return pos;
}

std::vector<std::int64_t> make_position(std::size_t rank, IndexBase base) {
  const std::int64_t lo = base == IndexBase::One ? 1 : 0;
  std::vector<std::int64_t> pos(rank, lo);
  if (rank > 0)
    pos[0] = lo - 1; // pre-first sentinel
  return pos;
}

void next_position(std::span<std::int64_t> position,
                   std::span<const std::size_t> shape, IndexBase base) {
  if (position.size() != shape.size())
    fail("position rank does not match shape rank");
  const std::int64_t lo = base == IndexBase::One ? 1 : 0;
  for (std::size_t k = 0; k < position.size(); ++k) {
    if (++position[k] < lo + static_cast<std::int64_t>(shape[k]))
      return;
    position[k] = lo;
  }
  // Completed a full cycle; leave the position at the first element.
}

// -- Tensor ------------------------------------------------------------------

Tensor::Tensor() : shape_{}, data_{std::vector<double>{0.0}} {}

Tensor Tensor::zeros(ScalarKind kind, Shape shape) {
  check_shape(shape);
  Tensor t;
  const std::size_t n = shape_elements(shape);
  t.shape_ = std::move(shape);
  if (kind == ScalarKind::RealF64)
    t.data_ = std::vector<double>(n, 0.0);
  else
    t.data_ = std::vector<cplx>(n, cplx{});
  return t;
}

Tensor Tensor::scalar(double value) {
  Tensor t;
  t.data_ = std::vector<double>{value};
  return t;
}

Tensor Tensor::scalar(cplx value) {
  Tensor t;
  t.data_ = std::vector<cplx>{value};
  return t;
}

Tensor Tensor::from_data(Shape shape, std::vector<double> data) {
  check_shape(shape);
  if (data.size() != shape_elements(shape))
    fail("element count does not match the shape product");
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = std::move(data);
  return t;
}

Tensor Tensor::from_data(Shape shape, std::vector<cplx> data) {
  check_shape(shape);
  if (data.size() != shape_elements(shape))
    fail("element count does not match the shape product");
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = std::move(data);
  return t;
}

Tensor Tensor::random(ScalarKind kind, Shape shape, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const std::size_t n = shape_elements(shape);
  if (kind == ScalarKind::RealF64) {
    std::vector<double> d(n);
    for (auto &x : d)
      x = dist(rng);
    return from_data(std::move(shape), std::move(d));
  }
  std::vector<cplx> d(n);
  for (auto &x : d)
    x = cplx(dist(rng), dist(rng));
  return from_data(std::move(shape), std::move(d));
}

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis < 1 || axis > shape_.size())
    fail_bounds("axis out of range");
  return shape_[axis - 1];
}

std::size_t Tensor::element_count() const noexcept {
  return std::holds_alternative<std::vector<double>>(data_)
             ? std::get<std::vector<double>>(data_).size()
             : std::get<std::vector<cplx>>(data_).size();
}

ScalarKind Tensor::kind() const noexcept {
  return std::holds_alternative<std::vector<double>>(data_)
             ? ScalarKind::RealF64
             : ScalarKind::ComplexF64;
}

std::span<const double> Tensor::real_data() const {
  if (is_complex())
    fail("real_data() on a complex tensor");
  return std::get<std::vector<double>>(data_);
}

std::span<double> Tensor::real_data() {
  if (is_complex())
    fail("real_data() on a complex tensor");
  return std::get<std::vector<double>>(data_);
}

std::span<const cplx> Tensor::complex_data() const {
  if (!is_complex())
    fail("complex_data() on a real tensor");
  return std::get<std::vector<cplx>>(data_);
}

std::span<cplx> Tensor::complex_data() {
  if (!is_complex())
    fail("complex_data() on a real tensor");
  return std::get<std::vector<cplx>>(data_);
}

cplx Tensor::flat(std::size_t i) const {
  if (i >= element_count())
    fail_bounds("flat index out of range");
  if (is_complex())
    return std::get<std::vector<cplx>>(data_)[i];
  return {std::get<std::vector<double>>(data_)[i], 0.0};
}

cplx Tensor::element(std::span<const std::size_t> position) const {
  return flat(linear_index_of(position, shape_) - 1);
}

cplx Tensor::element(std::initializer_list<std::size_t> position) const {
  return element(std::span<const std::size_t>(position.begin(), position.size()));
}

void Tensor::set_element(std::span<const std::size_t> position, cplx value) {
  const std::size_t i = linear_index_of(position, shape_) - 1;
  if (is_complex()) {
    std::get<std::vector<cplx>>(data_)[i] = value;
    return;
  }
  if (value.imag() != 0.0)
    fail("cannot store a complex value in a real tensor");
  std::get<std::vector<double>>(data_)[i] = value.real();
}

void Tensor::set_element(std::initializer_list<std::size_t> position,
                         cplx value) {
  set_element(std::span<const std::size_t>(position.begin(), position.size()),
              value);
}

Tensor Tensor::to_kind(ScalarKind k) const {
  if (k == kind())
    return *this;
  if (k == ScalarKind::ComplexF64) {
    auto src = real_data();
    std::vector<cplx> d(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
      d[i] = {src[i], 0.0};
    return from_data(shape_, std::move(d));
  }
  auto src = complex_data();
  std::vector<double> d(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i].imag() != 0.0)
      fail("cannot narrow a tensor with nonzero imaginary parts");
    d[i] = src[i].real();
  }
  return from_data(shape_, std::move(d));
}

cplx Tensor::scalar_value() const {
  if (element_count() != 1)
    fail("scalar_value() on a tensor with more than one element");
  return flat(0);
}

void Tensor::swap_shape(Shape s) {
  check_shape(s);
  if (shape_elements(s) != element_count())
    fail("reshape must conserve the element count");
  shape_ = std::move(s);
}

// -- reshape / permute -------------------------------------------------------

Tensor reshape(const Tensor &t, Shape new_shape) {
  Tensor out = t;
  out.swap_shape(std::move(new_shape));
  return out;
}

void reshape_inplace(Tensor &t, Shape new_shape) {
  t.swap_shape(std::move(new_shape));
}

Tensor reshape(const Tensor &t,
               std::span<const std::vector<std::size_t>> groups) {
  Shape merged;
  std::size_t next = 1;
  for (const auto &g : groups) {
    if (g.empty())
      fail("empty reshape group");
    std::size_t d = 1;
    for (std::size_t axis : g) {
      if (axis != next)
        fail("reshape groups must partition 1..rank in order");
      d *= t.dim(axis);
      ++next;
    }
    merged.push_back(d);
  }
  if (next != t.rank() + 1)
    fail("reshape groups must cover every axis");
  return reshape(t, std::move(merged));
}

Tensor reshape(const Tensor &t,
               std::initializer_list<std::vector<std::size_t>> groups) {
  return reshape(t, std::span<const std::vector<std::size_t>>(groups.begin(),
                                                              groups.size()));
}

Tensor unreshape(const Tensor &t, Shape original_shape) {
  return reshape(t, std::move(original_shape));
}

void unreshape_inplace(Tensor &t, Shape original_shape) {
  reshape_inplace(t, std::move(original_shape));
}

namespace detail {

template <typename T>
void permute_kernel(const T *src, T *dst, std::span<const std::size_t> out_shape,
                    std::span<const std::size_t> jump, bool conj) {
  const std::size_t rank = out_shape.size();
  const std::size_t n = shape_elements(out_shape);
  std::vector<std::size_t> counter(rank, 0);
  std::size_t off = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<T, cplx>) {
      dst[i] = conj ? std::conj(src[off]) : src[off];
    } else {
      (void)conj;
      dst[i] = src[off];
    }
    for (std::size_t k = 0; k < rank; ++k) {
      off += jump[k];
      if (++counter[k] < out_shape[k])
        break;
      off -= jump[k] * out_shape[k];
      counter[k] = 0;
    }
  }
}

Tensor permute_copy(const Tensor &t, std::span<const std::size_t> order0,
                    bool conj) {
  const std::size_t rank = t.rank();
  Shape out_shape(rank);
  for (std::size_t k = 0; k < rank; ++k)
    out_shape[k] = t.shape()[order0[k]];
  auto in_strides = strides_of(t.shape());
  std::vector<std::size_t> jump(rank);
  for (std::size_t k = 0; k < rank; ++k)
    jump[k] = in_strides[order0[k]];
  Tensor out = Tensor::zeros(t.kind(), out_shape);
  if (t.is_complex())
    permute_kernel(t.complex_data().data(), out.complex_data().data(),
                   out_shape, jump, conj);
  else
    permute_kernel(t.real_data().data(), out.real_data().data(), out_shape,
                   jump, false);
  return out;
}

Tensor from_eigen(const MatR &m, Shape shape) {
  std::vector<double> d(m.data(), m.data() + m.size());
  return Tensor::from_data(std::move(shape), std::move(d));
}

Tensor from_eigen(const MatC &m, Shape shape) {
  std::vector<cplx> d(m.data(), m.data() + m.size());
  return Tensor::from_data(std::move(shape), std::move(d));
}

} // namespace detail

namespace {

std::vector<std::size_t> to_zero_based_order(std::span<const std::size_t> order,
                                             std::size_t rank) {
  if (order.size() != rank)
    fail("permutation length does not match the tensor rank");
  std::vector<bool> seen(rank, false);
  std::vector<std::size_t> o(rank);
  for (std::size_t k = 0; k < rank; ++k) {
    if (order[k] < 1 || order[k] > rank || seen[order[k] - 1])
      fail("order is not a permutation of 1..rank");
    seen[order[k] - 1] = true;
    o[k] = order[k] - 1;
  }
  return o;
}

} // namespace

Tensor permute(const Tensor &t, std::span<const std::size_t> order) {
  auto o = to_zero_based_order(order, t.rank());
  bool identity = true;
  for (std::size_t k = 0; k < o.size(); ++k)
    identity = identity && o[k] == k;
  if (identity)
    return t;
  return detail::permute_copy(t, o, false);
}

Tensor permute(const Tensor &t, std::initializer_list<std::size_t> order) {
  return permute(t, std::span<const std::size_t>(order.begin(), order.size()));
}

void permute_inplace(Tensor &t, std::span<const std::size_t> order) {
  t = permute(t, order);
}

void permute_inplace(Tensor &t, std::initializer_list<std::size_t> order) {
  permute_inplace(t,
                  std::span<const std::size_t>(order.begin(), order.size()));
}

std::vector<std::size_t>
compose_permutations(std::span<const std::size_t> sigma,
                     std::span<const std::size_t> tau) {
  if (sigma.size() != tau.size())
    fail("permutations must have equal length");
  std::vector<std::size_t> out(tau.size());
  for (std::size_t k = 0; k < tau.size(); ++k) {
    if (tau[k] < 1 || tau[k] > sigma.size())
      fail("order is not a permutation of 1..rank");
    out[k] = sigma[tau[k] - 1];
  }
  return out;
}

// -- slicing -----------------------------------------------------------------

IndexSelector IndexSelector::single(std::size_t i) {
  IndexSelector s;
  s.kind_ = Kind::Single;
  s.first_ = s.last_ = i;
  return s;
}

IndexSelector IndexSelector::range(std::size_t first, std::size_t last) {
  if (last < first)
    fail("empty selector range");
  IndexSelector s;
  s.kind_ = Kind::Range;
  s.first_ = first;
  s.last_ = last;
  return s;
}

IndexSelector IndexSelector::all() { return IndexSelector{}; }

IndexSelector IndexSelector::list(std::vector<std::size_t> entries) {
  if (entries.empty())
    fail("empty selector list");
  IndexSelector s;
  s.kind_ = Kind::List;
  s.list_ = std::move(entries);
  return s;
}

std::vector<std::size_t> IndexSelector::indices(std::size_t dim) const {
  std::vector<std::size_t> out;
  switch (kind_) {
  case Kind::Single:
  case Kind::Range:
    if (first_ < 1 || last_ > dim)
      fail_bounds("selector out of range");
    out.resize(last_ - first_ + 1);
    std::iota(out.begin(), out.end(), first_);
    break;
  case Kind::All:
    out.resize(dim);
    std::iota(out.begin(), out.end(), std::size_t{1});
    break;
  case Kind::List:
    for (std::size_t i : list_)
      if (i < 1 || i > dim)
        fail_bounds("selector out of range");
    out = list_;
    break;
  }
  return out;
}

namespace {

struct SlicePlan {
  Shape out_shape;                             // axes that survive
  std::vector<std::vector<std::size_t>> keep;  // 0-based indices per axis
};

SlicePlan plan_slice(const Tensor &t, std::span<const IndexSelector> sel) {
  if (sel.size() != t.rank())
    fail("selector count does not match the tensor rank");
  SlicePlan plan;
  plan.keep.resize(t.rank());
  for (std::size_t k = 0; k < t.rank(); ++k) {
    auto idx = sel[k].indices(t.shape()[k]);
    for (auto &i : idx)
      --i;
    plan.keep[k] = std::move(idx);
    if (!sel[k].drops_axis())
      plan.out_shape.push_back(plan.keep[k].size());
  }
  return plan;
}

template <typename T, typename Fn>
void for_each_selected(const Tensor &t, const SlicePlan &plan, Fn &&fn) {
  const auto strides = strides_of(t.shape());
  const std::size_t rank = t.rank();
  std::size_t n = 1;
  for (const auto &k : plan.keep)
    n *= k.size();
  std::vector<std::size_t> counter(rank, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < rank; ++k)
      off += plan.keep[k][counter[k]] * strides[k];
    fn(i, off);
    for (std::size_t k = 0; k < rank; ++k) {
      if (++counter[k] < plan.keep[k].size())
        break;
      counter[k] = 0;
    }
  }
}

} // namespace

Tensor get_slice(const Tensor &t, std::span<const IndexSelector> selectors) {
  Tensor out;
  auto plan = plan_slice(t, selectors);
  out = Tensor::zeros(t.kind(), plan.out_shape);
  get_slice_into(t, selectors, out);
  return out;
}

Tensor get_slice(const Tensor &t,
                 std::initializer_list<IndexSelector> selectors) {
  return get_slice(
      t, std::span<const IndexSelector>(selectors.begin(), selectors.size()));
}

void get_slice_into(const Tensor &t, std::span<const IndexSelector> selectors,
                    Tensor &out) {
  auto plan = plan_slice(t, selectors);
  if (out.kind() != t.kind() || out.shape() != plan.out_shape)
    fail("destination tensor does not match the selected region");
  if (t.is_complex()) {
    auto src = t.complex_data();
    auto dst = out.complex_data();
    for_each_selected<cplx>(t, plan,
                            [&](std::size_t i, std::size_t off) { dst[i] = src[off]; });
  } else {
    auto src = t.real_data();
    auto dst = out.real_data();
    for_each_selected<double>(
        t, plan, [&](std::size_t i, std::size_t off) { dst[i] = src[off]; });
  }
}

void set_slice(Tensor &t, std::span<const IndexSelector> selectors,
               const Tensor &source) {
  auto plan = plan_slice(t, selectors);
  if (source.shape() != plan.out_shape)
    fail("source tensor does not match the selected region");
  const Tensor src_conv =
      source.kind() == t.kind() ? source : source.to_kind(t.kind());
  if (t.is_complex()) {
    auto dst = t.complex_data();
    auto src = src_conv.complex_data();
    for_each_selected<cplx>(t, plan,
                            [&](std::size_t i, std::size_t off) { dst[off] = src[i]; });
  } else {
    auto dst = t.real_data();
    auto src = src_conv.real_data();
    for_each_selected<double>(
        t, plan, [&](std::size_t i, std::size_t off) { dst[off] = src[i]; });
  }
}

void set_slice(Tensor &t, std::initializer_list<IndexSelector> selectors,
               const Tensor &source) {
  set_slice(t, std::span<const IndexSelector>(selectors.begin(), selectors.size()),
            source);
}

void set_slice(Tensor &t, std::span<const IndexSelector> selectors,
               cplx value) {
  auto plan = plan_slice(t, selectors);
  if (t.is_complex()) {
    auto dst = t.complex_data();
    for_each_selected<cplx>(t, plan,
                            [&](std::size_t, std::size_t off) { dst[off] = value; });
  } else {
    if (value.imag() != 0.0)
      fail("cannot store a complex value in a real tensor");
    auto dst = t.real_data();
    for_each_selected<double>(
        t, plan, [&](std::size_t, std::size_t off) { dst[off] = value.real(); });
  }
}

void set_slice(Tensor &t, std::initializer_list<IndexSelector> selectors,
               cplx value) {
  set_slice(t, std::span<const IndexSelector>(selectors.begin(), selectors.size()),
            value);
}

// -- elementwise algebra -----------------------------------------------------

namespace {

ScalarKind combined_kind(std::span<const cplx> coeffs,
                         std::span<const Tensor *const> tensors) {
  ScalarKind k = ScalarKind::RealF64;
  for (const Tensor *t : tensors)
    k = promote(k, t->kind());
  for (cplx c : coeffs)
    if (c.imag() != 0.0)
      k = ScalarKind::ComplexF64;
  return k;
}

void check_combination_args(std::span<const cplx> coeffs,
                            std::span<const Tensor *const> tensors) {
  if (tensors.empty())
    fail("tensor_combination needs at least one tensor");
  if (coeffs.size() != tensors.size())
    fail("coefficient and tensor counts differ");
  for (const Tensor *t : tensors)
    if (t->shape() != tensors[0]->shape())
      fail("tensor_combination inputs must share one shape");
}

} // namespace

Tensor tensor_combination(std::span<const cplx> coeffs,
                          std::span<const Tensor *const> tensors,
                          const Combiner &combiner) {
  check_combination_args(coeffs, tensors);
  const ScalarKind kind = combined_kind(coeffs, tensors);
  const std::size_t n = tensors[0]->element_count();
  if (!combiner && kind == ScalarKind::RealF64) {
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < tensors.size(); ++j) {
      const double a = coeffs[j].real();
      auto src = tensors[j]->real_data();
      for (std::size_t i = 0; i < n; ++i)
        out[i] += a * src[i];
    }
    return Tensor::from_data(tensors[0]->shape(), std::move(out));
  }
  std::vector<cplx> out(n, cplx{});
  for (std::size_t j = 0; j < tensors.size(); ++j) {
    const Tensor &t = *tensors[j];
    for (std::size_t i = 0; i < n; ++i) {
      const cplx x = t.flat(i);
      out[i] += combiner ? combiner(coeffs[j], x) : coeffs[j] * x;
    }
  }
  if (kind == ScalarKind::RealF64) {
    std::vector<double> re(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (out[i].imag() != 0.0)
        throw std::domain_error(
            "tn: combiner produced complex values on real tensors");
      re[i] = out[i].real();
    }
    return Tensor::from_data(tensors[0]->shape(), std::move(re));
  }
  return Tensor::from_data(tensors[0]->shape(), std::move(out));
}

void tensor_combination_inplace(std::span<const cplx> coeffs,
                                std::span<Tensor *const> tensors,
                                const Combiner &combiner) {
  std::vector<const Tensor *> view(tensors.begin(), tensors.end());
  *tensors[0] = tensor_combination(coeffs, view, combiner);
}

void scale_inplace(Tensor &t, cplx factor) {
  if (!t.is_complex() && factor.imag() == 0.0) {
    const double a = factor.real();
    for (auto &x : t.real_data())
      x *= a;
    return;
  }
  if (!t.is_complex())
    t = t.to_kind(ScalarKind::ComplexF64);
  for (auto &x : t.complex_data())
    x *= factor;
}

void add_inplace(Tensor &a, const Tensor &b, cplx factor) {
  const Tensor *operands[] = {&a, &b};
  const cplx coeffs[] = {cplx{1.0, 0.0}, factor};
  a = tensor_combination(coeffs, operands);
}

void sub_inplace(Tensor &a, const Tensor &b, cplx factor) {
  add_inplace(a, b, -factor);
}

void div_inplace(Tensor &t, cplx divisor) { scale_inplace(t, 1.0 / divisor); }

Tensor operator+(const Tensor &a, const Tensor &b) {
  const Tensor *operands[] = {&a, &b};
  const cplx coeffs[] = {cplx{1.0, 0.0}, cplx{1.0, 0.0}};
  return tensor_combination(coeffs, operands);
}

Tensor operator-(const Tensor &a, const Tensor &b) {
  const Tensor *operands[] = {&a, &b};
  const cplx coeffs[] = {cplx{1.0, 0.0}, cplx{-1.0, 0.0}};
  return tensor_combination(coeffs, operands);
}

Tensor operator-(const Tensor &a) {
  Tensor out = a;
  scale_inplace(out, -1.0);
  return out;
}

Tensor operator*(const Tensor &a, cplx factor) {
  Tensor out = a;
  scale_inplace(out, factor);
  return out;
}

Tensor operator*(cplx factor, const Tensor &a) { return a * factor; }
Tensor operator*(const Tensor &a, double factor) { return a * cplx{factor, 0.0}; }
Tensor operator*(double factor, const Tensor &a) { return a * cplx{factor, 0.0}; }
Tensor operator/(const Tensor &a, cplx divisor) { return a * (1.0 / divisor); }
Tensor operator/(const Tensor &a, double divisor) {
  return a * cplx{1.0 / divisor, 0.0};
}

Tensor elementwise_sqrt(const Tensor &t) {
  if (!t.is_complex())
    for (double x : t.real_data())
      if (x < 0.0)
        throw std::domain_error("tn: sqrt of a negative real element");
  const Tensor *operands[] = {&t};
  const cplx coeffs[] = {cplx{1.0, 0.0}};
  return tensor_combination(coeffs, operands,
                            [](cplx, cplx x) { return std::sqrt(x); });
}

void elementwise_sqrt_inplace(Tensor &t) { t = elementwise_sqrt(t); }

Tensor identity_tensor(std::size_t d) {
  return identity_tensor(std::span<const std::size_t>(&d, 1));
}

Tensor identity_tensor(std::span<const std::size_t> dims) {
  if (dims.empty())
    fail("identity_tensor needs at least one dimension");
  check_shape(dims);
  Shape shape;
  for (std::size_t d : dims) {
    shape.push_back(d);
    shape.push_back(d);
  }
  Tensor out = Tensor::zeros(ScalarKind::RealF64, shape);
  auto data = out.real_data();
  const auto strides = strides_of(shape);
  std::size_t total = 1;
  for (std::size_t d : dims)
    total *= d;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat, off = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const std::size_t i = rem % dims[k];
      rem /= dims[k];
      off += i * strides[2 * k] + i * strides[2 * k + 1];
    }
    data[off] = 1.0;
  }
  return out;
}

Tensor identity_tensor(std::initializer_list<std::size_t> dims) {
  return identity_tensor(
      std::span<const std::size_t>(dims.begin(), dims.size()));
}

Tensor join_index(const Tensor &a, const Tensor &b,
                  std::span<const std::size_t> axes) {
  if (a.rank() != b.rank())
    fail("join_index inputs must share rank");
  const std::size_t rank = a.rank();
  std::vector<bool> grow(rank, false);
  for (std::size_t axis : axes) {
    if (axis < 1 || axis > rank)
      fail_bounds("join_index axis out of range");
    grow[axis - 1] = true;
  }
  Shape out_shape(rank);
  for (std::size_t k = 0; k < rank; ++k) {
    if (grow[k]) {
      out_shape[k] = a.shape()[k] + b.shape()[k];
    } else {
      if (a.shape()[k] != b.shape()[k])
        fail("join_index shape conflict on an unlisted axis");
      out_shape[k] = a.shape()[k];
    }
  }
  Tensor out = Tensor::zeros(promote(a.kind(), b.kind()), out_shape);
  std::vector<IndexSelector> sel_a, sel_b;
  for (std::size_t k = 0; k < rank; ++k) {
    if (grow[k]) {
      sel_a.push_back(IndexSelector::range(1, a.shape()[k]));
      sel_b.push_back(
          IndexSelector::range(a.shape()[k] + 1, out_shape[k]));
    } else {
      sel_a.push_back(IndexSelector::all());
      sel_b.push_back(IndexSelector::all());
    }
  }
  set_slice(out, sel_a, a);
  set_slice(out, sel_b, b);
  return out;
}

Tensor join_index(const Tensor &a, const Tensor &b,
                  std::initializer_list<std::size_t> axes) {
  return join_index(a, b,
                    std::span<const std::size_t>(axes.begin(), axes.size()));
}

Tensor exp_hermitian(const Tensor &m, double hermiticity_tol) {
  if (m.rank() != 2 || m.dim(1) != m.dim(2))
    fail("exp_hermitian needs a square rank-2 tensor");
  const std::size_t n = m.dim(1);
  double scale = 0.0;
  for (std::size_t i = 0; i < m.element_count(); ++i)
    scale = std::max(scale, std::abs(m.flat(i)));
  const double tol = hermiticity_tol * std::max(1.0, scale);
  for (std::size_t r = 1; r <= n; ++r)
    for (std::size_t c = r; c <= n; ++c)
      if (std::abs(m.element({r, c}) - std::conj(m.element({c, r}))) > tol)
        fail("exp_hermitian input is not Hermitian within tolerance");
  if (m.is_complex()) {
    auto map = detail::map_complex(m, n, n);
    Eigen::SelfAdjointEigenSolver<detail::MatC> es(map);
    detail::MatC out = es.eigenvectors() *
                       es.eigenvalues().array().exp().matrix().asDiagonal() *
                       es.eigenvectors().adjoint();
    return detail::from_eigen(out, {n, n});
  }
  auto map = detail::map_real(m, n, n);
  Eigen::SelfAdjointEigenSolver<detail::MatR> es(map);
  detail::MatR out = es.eigenvectors() *
                     es.eigenvalues().array().exp().matrix().asDiagonal() *
                     es.eigenvectors().transpose();
  return detail::from_eigen(out, {n, n});
}

Tensor invert_diagonal(const Tensor &m, double eff_zero) {
  if (m.rank() != 2 || m.dim(1) != m.dim(2))
    fail("invert_diagonal needs a square rank-2 tensor");
  const std::size_t n = m.dim(1);
  Tensor out = Tensor::zeros(m.kind(), {n, n});
  for (std::size_t i = 1; i <= n; ++i) {
    const cplx d = m.element({i, i});
    const cplx inv = std::abs(d) <= eff_zero ? cplx{} : 1.0 / d;
    out.set_element({i, i}, inv);
  }
  return out;
}

double frobenius_norm(const Tensor &t) {
  double s = 0.0;
  if (t.is_complex()) {
    for (cplx x : t.complex_data())
      s += std::norm(x);
  } else {
    for (double x : t.real_data())
      s += x * x;
  }
  return std::sqrt(s);
}

cplx element_sum(const Tensor &t) {
  cplx s{};
  if (t.is_complex()) {
    for (cplx x : t.complex_data())
      s += x;
  } else {
    double r = 0.0;
    for (double x : t.real_data())
      r += x;
    s = {r, 0.0};
  }
  return s;
}

Tensor conjugate(const Tensor &t) {
  Tensor out = t;
  conjugate_inplace(out);
  return out;
}

void conjugate_inplace(Tensor &t) {
  if (!t.is_complex())
    return;
  for (auto &x : t.complex_data())
    x = std::conj(x);
}

// -- display -----------------------------------------------------------------

namespace {

std::string format_value(cplx v, bool complex_kind, int digits) {
  char buf[64];
  if (!complex_kind) {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v.real());
    return buf;
  }
  std::string out;
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v.real());
  out = buf;
  std::snprintf(buf, sizeof(buf), "%+.*g", digits, v.imag());
  out += buf;
  out += "i";
  return out;
}

} // namespace

std::string format_tensor(const Tensor &t, int digits) {
  std::ostringstream os;
  os << "tensor(";
  for (std::size_t k = 0; k < t.rank(); ++k)
    os << (k ? "x" : "") << t.shape()[k];
  if (t.rank() == 0)
    os << "scalar";
  os << ", " << (t.is_complex() ? "complex" : "real") << ")";
  const std::size_t n = t.element_count();
  constexpr std::size_t kMaxShown = 256;
  if (t.rank() == 2 && n <= kMaxShown) {
    for (std::size_t r = 1; r <= t.dim(1); ++r) {
      os << "\n  ";
      for (std::size_t c = 1; c <= t.dim(2); ++c)
        os << (c > 1 ? "  " : "")
           << format_value(t.element({r, c}), t.is_complex(), digits);
    }
    return os.str();
  }
  os << "\n  [";
  for (std::size_t i = 0; i < std::min(n, kMaxShown); ++i)
    os << (i ? ", " : "") << format_value(t.flat(i), t.is_complex(), digits);
  if (n > kMaxShown)
    os << ", ...";
  os << "]";
  return os.str();
}

std::ostream &operator<<(std::ostream &os, const Tensor &t) {
  return os << format_tensor(t);
}

} // namespace tn
