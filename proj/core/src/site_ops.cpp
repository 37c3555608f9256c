#include "tn/site_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace tn {

bool SiteOperatorSet::contains(const std::string &name) const {
  return ops_.count(name) > 0;
}

const Tensor &SiteOperatorSet::at(const std::string &name) const {
  auto it = ops_.find(name);
  if (it == ops_.end())
    throw std::invalid_argument("tn: unknown operator '" + name + "'");
  return it->second;
}

void SiteOperatorSet::insert(std::string name, Tensor op) {
  if (op.rank() != 2 || op.dim(1) != dim_ || op.dim(2) != dim_)
    throw std::invalid_argument("tn: operator '" + name +
                                "' does not match the set dimension");
  ops_[std::move(name)] = std::move(op);
}

std::vector<std::string> SiteOperatorSet::names() const {
  std::vector<std::string> out;
  out.reserve(ops_.size());
  for (const auto &[name, op] : ops_)
    out.push_back(name);
  return out;
}

SiteOperatorSet spin_ops(double s) {
  const double two_s = 2.0 * s;
  if (s <= 0.0 || std::abs(two_s - std::round(two_s)) > 1e-12)
    throw std::invalid_argument("tn: spin must be a positive half-integer");
  const std::size_t d = static_cast<std::size_t>(std::lround(two_s)) + 1;
  SiteOperatorSet set(d);

  Tensor sz = Tensor::zeros(ScalarKind::RealF64, {d, d});
  for (std::size_t a = 1; a <= d; ++a)
    sz.set_element({a, a}, s + 1.0 - static_cast<double>(a));

  // Row a holds m = s+1-a, so the raising operator connects column a+1
  // (m) to row a (m+1).
  Tensor sp = Tensor::zeros(ScalarKind::RealF64, {d, d});
  for (std::size_t a = 1; a + 1 <= d; ++a) {
    const double m = s - static_cast<double>(a);
    sp.set_element({a, a + 1}, std::sqrt(s * (s + 1.0) - m * (m + 1.0)));
  }
  Tensor sm = permute(sp, {2, 1}); // real, so the adjoint is the transpose

  Tensor sx = (sp + sm) * 0.5;
  Tensor sy = (sp - sm) * cplx{0.0, -0.5};

  set.insert("Sz", std::move(sz));
  set.insert("Sp", std::move(sp));
  set.insert("Sm", std::move(sm));
  set.insert("Sx", std::move(sx));
  set.insert("Sy", std::move(sy));
  set.insert("O", Tensor::zeros(ScalarKind::RealF64, {d, d}));
  set.insert("Id", identity_tensor(d));
  return set;
}

SiteOperatorSet fermion_ops() {
  const std::size_t d = 4; // (|0>, |up>, |dn>, |updn>)
  SiteOperatorSet set(d);

  Tensor cup = Tensor::zeros(ScalarKind::RealF64, {d, d});
  cup.set_element({1, 2}, 1.0);
  cup.set_element({3, 4}, 1.0);

  Tensor cdn = Tensor::zeros(ScalarKind::RealF64, {d, d});
  cdn.set_element({1, 3}, 1.0);
  cdn.set_element({2, 4}, -1.0); // sign from passing the up electron

  Tensor f = Tensor::zeros(ScalarKind::RealF64, {d, d});
  f.set_element({1, 1}, 1.0);
  f.set_element({2, 2}, -1.0);
  f.set_element({3, 3}, -1.0);
  f.set_element({4, 4}, 1.0);

  Tensor nup = Tensor::zeros(ScalarKind::RealF64, {d, d});
  nup.set_element({2, 2}, 1.0);
  nup.set_element({4, 4}, 1.0);

  Tensor ndn = Tensor::zeros(ScalarKind::RealF64, {d, d});
  ndn.set_element({3, 3}, 1.0);
  ndn.set_element({4, 4}, 1.0);

  set.insert("Ndens", nup + ndn);
  set.insert("Cup", std::move(cup));
  set.insert("Cdn", std::move(cdn));
  set.insert("F", std::move(f));
  set.insert("Nup", std::move(nup));
  set.insert("Ndn", std::move(ndn));
  set.insert("O", Tensor::zeros(ScalarKind::RealF64, {d, d}));
  set.insert("Id", identity_tensor(d));
  return set;
}

SiteOperatorSet tj_ops() {
  const SiteOperatorSet fermi = fermion_ops();
  const std::size_t d = 3; // double occupancy projected out
  SiteOperatorSet set(d);

  auto project = [&](const std::string &name) {
    return get_slice(fermi.at(name), {IndexSelector::range(1, d),
                                      IndexSelector::range(1, d)});
  };
  for (const char *name : {"Cup", "Cdn", "F", "Nup", "Ndn", "Ndens"})
    set.insert(name, project(name));

  // Spin bilinears c^dag_sigma sigma_vec c_sigma' / 2 over (|0>,|up>,|dn>).
  Tensor sz = Tensor::zeros(ScalarKind::RealF64, {d, d});
  sz.set_element({2, 2}, 0.5);
  sz.set_element({3, 3}, -0.5);
  Tensor sp = Tensor::zeros(ScalarKind::RealF64, {d, d});
  sp.set_element({2, 3}, 1.0); // S+ = c^dag_up c_dn
  Tensor sm = permute(sp, {2, 1});

  set.insert("Sz", std::move(sz));
  set.insert("Sp", std::move(sp));
  set.insert("Sm", std::move(sm));
  set.insert("O", Tensor::zeros(ScalarKind::RealF64, {d, d}));
  set.insert("Id", identity_tensor(d));
  return set;
}

} // namespace tn
