#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

// Dense tensors with flat column-major storage (first index fastest).
// All public axis labels and positions are 1-based.

namespace tn {

using cplx = std::complex<double>;

enum class ScalarKind : std::uint8_t { RealF64 = 0, ComplexF64 = 1 };

constexpr ScalarKind promote(ScalarKind a, ScalarKind b) noexcept {
  return (a == ScalarKind::ComplexF64 || b == ScalarKind::ComplexF64)
             ? ScalarKind::ComplexF64
             : ScalarKind::RealF64;
}

using Shape = std::vector<std::size_t>;

/// Number of elements a shape addresses; 1 for rank 0.
std::size_t shape_elements(std::span<const std::size_t> shape) noexcept;

/// Column-major linear index (1-based) of a 1-based position vector.
std::size_t linear_index_of(std::span<const std::size_t> position,
                            std::span<const std::size_t> shape);

/// Inverse of linear_index_of.
std::vector<std::size_t> multi_index_of(std::size_t linear,
                                        std::span<const std::size_t> shape);
void multi_index_of(std::size_t linear, std::span<const std::size_t> shape,
                    std::span<std::size_t> out);

enum class IndexBase { Zero, One };

/// Pre-first odometer position: (0,1,1,...) for 1-based, (-1,0,0,...) for
/// 0-based, so that the first next_position lands on the first element.
std::vector<std::int64_t> make_position(std::size_t rank,
                                        IndexBase base = IndexBase::One);

/// Advance a position vector one step in column-major order. Starting from
/// the make_position sentinel, shape_elements(shape) steps enumerate every
/// position exactly once. Wrap-around past the end is the caller's concern.
void next_position(std::span<std::int64_t> position,
                   std::span<const std::size_t> shape,
                   IndexBase base = IndexBase::One);

class Tensor {
public:
  /// Rank-0 real scalar holding 0.
  Tensor();

  static Tensor zeros(ScalarKind kind, Shape shape);
  static Tensor scalar(double value);
  static Tensor scalar(cplx value);
  static Tensor from_data(Shape shape, std::vector<double> data);
  static Tensor from_data(Shape shape, std::vector<cplx> data);
  /// Entries uniform in [-1,1] (complex: both components).
  static Tensor random(ScalarKind kind, Shape shape, std::mt19937_64 &rng);

  std::size_t rank() const noexcept { return shape_.size(); }
  const Shape &shape() const noexcept { return shape_; }
  /// Dimension of a 1-based axis.
  std::size_t dim(std::size_t axis) const;
  std::size_t element_count() const noexcept;
  ScalarKind kind() const noexcept;
  bool is_complex() const noexcept { return kind() == ScalarKind::ComplexF64; }

  std::span<const double> real_data() const;
  std::span<double> real_data();
  std::span<const cplx> complex_data() const;
  std::span<cplx> complex_data();

  /// Single element at a full 1-based position, without building any
  /// intermediate tensor. Real tensors report a zero imaginary part.
  cplx element(std::span<const std::size_t> position) const;
  cplx element(std::initializer_list<std::size_t> position) const;
  /// 0-based flat buffer access.
  cplx flat(std::size_t i) const;

  void set_element(std::span<const std::size_t> position, cplx value);
  void set_element(std::initializer_list<std::size_t> position, cplx value);

  /// Copy with the storage kind changed. Narrowing a complex tensor throws
  /// unless every imaginary part is exactly zero; widening embeds.
  Tensor to_kind(ScalarKind k) const;

  /// Value of a rank-0 or single-element tensor.
  cplx scalar_value() const;

  void swap_shape(Shape s); // metadata-only reshape, product must match

private:
  Shape shape_;
  std::variant<std::vector<double>, std::vector<cplx>> data_;
};

// -- shape manipulation ------------------------------------------------------

/// Reshape never reorders data; only the shape list changes.
Tensor reshape(const Tensor &t, Shape new_shape);
void reshape_inplace(Tensor &t, Shape new_shape);
/// Grouped form: groups partition 1..rank in order; each merged dimension is
/// the product of its group, e.g. {{1,2},{3}} on (2,3,4) gives (6,4).
Tensor reshape(const Tensor &t,
               std::span<const std::vector<std::size_t>> groups);
Tensor reshape(const Tensor &t,
               std::initializer_list<std::vector<std::size_t>> groups);

/// reshape under the name used when restoring a previous shape.
Tensor unreshape(const Tensor &t, Shape original_shape);
void unreshape_inplace(Tensor &t, Shape original_shape);

/// Output axis k is input axis order[k]; shape(out)[k] == shape(in)[order[k]].
Tensor permute(const Tensor &t, std::span<const std::size_t> order);
Tensor permute(const Tensor &t, std::initializer_list<std::size_t> order);
void permute_inplace(Tensor &t, std::span<const std::size_t> order);
void permute_inplace(Tensor &t, std::initializer_list<std::size_t> order);
/// compose(sigma, tau)[k] = sigma[tau[k]]: permute(permute(t, sigma), tau)
/// equals permute(t, compose(sigma, tau)).
std::vector<std::size_t> compose_permutations(std::span<const std::size_t> sigma,
                                              std::span<const std::size_t> tau);

// -- slicing -----------------------------------------------------------------

/// One selector per axis. Integer selectors drop the axis; range/list/all
/// selectors keep it even when they address a single entry.
class IndexSelector {
public:
  enum class Kind { Single, Range, All, List };

  static IndexSelector single(std::size_t i);
  static IndexSelector range(std::size_t first, std::size_t last); // inclusive
  static IndexSelector all();
  static IndexSelector list(std::vector<std::size_t> entries);

  Kind kind() const noexcept { return kind_; }
  bool drops_axis() const noexcept { return kind_ == Kind::Single; }
  /// Materialized 1-based indices along an axis of the given dimension.
  std::vector<std::size_t> indices(std::size_t dim) const;

private:
  IndexSelector() = default;
  Kind kind_ = Kind::All;
  std::size_t first_ = 0, last_ = 0;
  std::vector<std::size_t> list_;
};

/// Slices copy. An all-integer selection yields a rank-0 tensor; use
/// Tensor::element for plain scalar access.
Tensor get_slice(const Tensor &t, std::span<const IndexSelector> selectors);
Tensor get_slice(const Tensor &t,
                 std::initializer_list<IndexSelector> selectors);
/// In-place variant writing into a caller-supplied destination of the right
/// shape and kind.
void get_slice_into(const Tensor &t, std::span<const IndexSelector> selectors,
                    Tensor &out);

void set_slice(Tensor &t, std::span<const IndexSelector> selectors,
               const Tensor &source);
void set_slice(Tensor &t, std::initializer_list<IndexSelector> selectors,
               const Tensor &source);
void set_slice(Tensor &t, std::span<const IndexSelector> selectors, cplx value);
void set_slice(Tensor &t, std::initializer_list<IndexSelector> selectors,
               cplx value);

// -- elementwise algebra -----------------------------------------------------

using Combiner = std::function<cplx(cplx alpha, cplx x)>;

/// K = sum_i combiner(alpha_i, M_i) elementwise; the default combiner
/// multiplies, giving the plain linear combination. All tensors must share
/// one shape.
Tensor tensor_combination(std::span<const cplx> coeffs,
                          std::span<const Tensor *const> tensors,
                          const Combiner &combiner = {});
/// Overwrites the first tensor.
void tensor_combination_inplace(std::span<const cplx> coeffs,
                                std::span<Tensor *const> tensors,
                                const Combiner &combiner = {});

void scale_inplace(Tensor &t, cplx factor);
void add_inplace(Tensor &a, const Tensor &b, cplx factor = 1.0);
void sub_inplace(Tensor &a, const Tensor &b, cplx factor = 1.0);
void div_inplace(Tensor &t, cplx divisor);

Tensor operator+(const Tensor &a, const Tensor &b);
Tensor operator-(const Tensor &a, const Tensor &b);
Tensor operator-(const Tensor &a);
Tensor operator*(const Tensor &a, cplx factor);
Tensor operator*(cplx factor, const Tensor &a);
Tensor operator*(const Tensor &a, double factor);
Tensor operator*(double factor, const Tensor &a);
Tensor operator/(const Tensor &a, cplx divisor);
Tensor operator/(const Tensor &a, double divisor);

/// Principal square root of each element. Negative entries of a real tensor
/// raise a domain error.
Tensor elementwise_sqrt(const Tensor &t);
void elementwise_sqrt_inplace(Tensor &t);

/// Kronecker-delta tensor: one dimension d gives the d x d identity, a list
/// (d1,...,dn) gives the rank-2n tensor pairing axes (2k-1, 2k).
Tensor identity_tensor(std::size_t d);
Tensor identity_tensor(std::span<const std::size_t> dims);
Tensor identity_tensor(std::initializer_list<std::size_t> dims);

/// Direct sum of A and B along the listed axes: A occupies the leading
/// block, B the trailing block, zeros elsewhere. Unlisted axes must agree.
Tensor join_index(const Tensor &a, const Tensor &b,
                  std::span<const std::size_t> axes);
Tensor join_index(const Tensor &a, const Tensor &b,
                  std::initializer_list<std::size_t> axes);

/// exp(M) for Hermitian M via eigendecomposition.
Tensor exp_hermitian(const Tensor &m, double hermiticity_tol = 1e-12);

/// Reciprocal of a diagonal matrix with pseudo-inverse semantics: entries of
/// magnitude <= eff_zero map to 0.
Tensor invert_diagonal(const Tensor &m, double eff_zero = 1e-16);

double frobenius_norm(const Tensor &t);
cplx element_sum(const Tensor &t);
Tensor conjugate(const Tensor &t);
void conjugate_inplace(Tensor &t);

// -- display -----------------------------------------------------------------

/// Human-readable formatter; not a stability surface.
std::string format_tensor(const Tensor &t, int digits = 4);
std::ostream &operator<<(std::ostream &os, const Tensor &t);

} // namespace tn
