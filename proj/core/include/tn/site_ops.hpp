#pragma once

#include "tn/tensor.hpp"

#include <map>
#include <string>

// Standard on-site operator sets, as dense matrices ready for MPO assembly.
// Every set carries Id (identity) and O (the zero element). Operator names
// are the stable identifiers used by the CLI config grammar.

namespace tn {

class SiteOperatorSet {
public:
  SiteOperatorSet() = default;
  explicit SiteOperatorSet(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  bool contains(const std::string &name) const;
  const Tensor &at(const std::string &name) const;
  void insert(std::string name, Tensor op);
  std::vector<std::string> names() const;

private:
  std::size_t dim_ = 0;
  std::map<std::string, Tensor> ops_;
};

/// Spin operators {Sx, Sy, Sz, Sp, Sm, O, Id} for integer or half-integer
/// spin s; dimension 2s+1. Ladder normalization is the standard
/// <m+1|S+|m> = sqrt(s(s+1) - m(m+1)).
SiteOperatorSet spin_ops(double s);

/// Hubbard-fermion operators {Cup, Cdn, F, Nup, Ndn, Ndens, O, Id} over the
/// basis (|0>, |up>, |dn>, |updn>). Cdn carries the on-site fermionic sign;
/// cross-site anticommutation is realized with F strings at the MPO level.
SiteOperatorSet fermion_ops();

/// t-J operators {Cup, Cdn, F, Nup, Ndn, Ndens, Sz, Sp, Sm, O, Id}: the
/// fermion set projected onto the first three states plus the spin bilinears.
SiteOperatorSet tj_ops();

} // namespace tn
