#pragma once

#include "tn/tensor.hpp"

#include <Eigen/Dense>

// Internal kernels shared by the core translation units. Not installed.

namespace tn::detail {

using MatR = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;
using MatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

inline Eigen::Map<const MatR> map_real(const Tensor &t, std::size_t rows,
                                       std::size_t cols) {
  return {t.real_data().data(), static_cast<Eigen::Index>(rows),
          static_cast<Eigen::Index>(cols)};
}
inline Eigen::Map<const MatC> map_complex(const Tensor &t, std::size_t rows,
                                          std::size_t cols) {
  return {t.complex_data().data(), static_cast<Eigen::Index>(rows),
          static_cast<Eigen::Index>(cols)};
}
inline Eigen::Map<MatR> map_real_mut(Tensor &t, std::size_t rows,
                                     std::size_t cols) {
  return {t.real_data().data(), static_cast<Eigen::Index>(rows),
          static_cast<Eigen::Index>(cols)};
}
inline Eigen::Map<MatC> map_complex_mut(Tensor &t, std::size_t rows,
                                        std::size_t cols) {
  return {t.complex_data().data(), static_cast<Eigen::Index>(rows),
          static_cast<Eigen::Index>(cols)};
}

Tensor from_eigen(const MatR &m, Shape shape);
Tensor from_eigen(const MatC &m, Shape shape);

/// Permute with 0-based gather order, optionally conjugating on the fly.
Tensor permute_copy(const Tensor &t, std::span<const std::size_t> order0,
                    bool conj);

} // namespace tn::detail
