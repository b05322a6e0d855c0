#include "lptrans/group.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lpt {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
  strides_.assign(factors_.size(), 1);
  order_ = 1;
  for (std::size_t i = factors_.size(); i-- > 0;) {
    if (factors_[i] == 0) throw std::invalid_argument("FiniteAbelianGroup: factor orders must be >= 1");
    strides_[i] = order_;
    order_ *= factors_[i];
  }
}

std::size_t FiniteAbelianGroup::index(const Residues& r) const {
  if (r.size() != factors_.size()) throw std::invalid_argument("FiniteAbelianGroup: rank mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < r.size(); ++i) idx += (r[i] % factors_[i]) * strides_[i];
  return idx;
}

Residues FiniteAbelianGroup::element(std::size_t index) const {
  Residues r(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    r[i] = (index / strides_[i]) % factors_[i];
  }
  return r;
}

std::size_t FiniteAbelianGroup::add(std::size_t a, std::size_t b) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::size_t ai = (a / strides_[i]) % factors_[i];
    const std::size_t bi = (b / strides_[i]) % factors_[i];
    idx += ((ai + bi) % factors_[i]) * strides_[i];
  }
  return idx;
}

std::size_t FiniteAbelianGroup::sub(std::size_t a, std::size_t b) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::size_t ai = (a / strides_[i]) % factors_[i];
    const std::size_t bi = (b / strides_[i]) % factors_[i];
    idx += ((ai + factors_[i] - bi) % factors_[i]) * strides_[i];
  }
  return idx;
}

cplx FiniteAbelianGroup::character(std::size_t chi, std::size_t t) const {
  // Accumulate the phase as an exact fraction of a turn per factor, reduced
  // mod 1, so large products do not lose precision.
  double turns = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::size_t a = (chi / strides_[i]) % factors_[i];
    const std::size_t ti = (t / strides_[i]) % factors_[i];
    turns += static_cast<double>((a * ti) % factors_[i]) / static_cast<double>(factors_[i]);
  }
  turns -= std::floor(turns);
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

std::string FiniteAbelianGroup::name() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << 'x';
    os << 'Z' << factors_[i];
  }
  return os.str();
}

GroupFunction::GroupFunction(FiniteAbelianGroup g) : group_(std::move(g)), values_(group_.order()) {}

GroupFunction::GroupFunction(FiniteAbelianGroup g, std::vector<cplx> values)
    : group_(std::move(g)), values_(std::move(values)) {
  if (values_.size() != group_.order()) throw std::invalid_argument("GroupFunction: size != |G|");
}

GroupFunction GroupFunction::delta(const FiniteAbelianGroup& g, std::size_t at) {
  GroupFunction f(g);
  f.values_.at(at) = 1.0;
  return f;
}

GroupFunction GroupFunction::constant(const FiniteAbelianGroup& g, cplx value) {
  return GroupFunction(g, std::vector<cplx>(g.order(), value));
}

double GroupFunction::l1_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::abs(v);
  return s;
}

GroupFunction& GroupFunction::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

GroupFunction operator+(const GroupFunction& a, const GroupFunction& b) {
  if (!(a.group() == b.group())) throw std::invalid_argument("GroupFunction: group mismatch");
  GroupFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

GroupFunction operator-(const GroupFunction& a, const GroupFunction& b) { return a + (-1.0) * b; }

std::vector<cplx> dft(const GroupFunction& f) {
  const auto& g = f.group();
  const std::size_t n = g.order();
  std::vector<cplx> out(n);
  for (std::size_t chi = 0; chi < n; ++chi) {
    cplx acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) acc += f[t] * std::conj(g.character(chi, t));
    out[chi] = acc;
  }
  return out;
}

GroupFunction inverse_dft(const FiniteAbelianGroup& g, std::span<const cplx> coefficients) {
  const std::size_t n = g.order();
  if (coefficients.size() != n) throw std::invalid_argument("inverse_dft: size != |G|");
  GroupFunction f(g);
  for (std::size_t t = 0; t < n; ++t) {
    cplx acc = 0.0;
    for (std::size_t chi = 0; chi < n; ++chi) acc += coefficients[chi] * g.character(chi, t);
    f[t] = acc / static_cast<double>(n);
  }
  return f;
}

GroupFunction convolve(const GroupFunction& f, const GroupFunction& g) {
  if (!(f.group() == g.group())) throw std::invalid_argument("convolve: group mismatch");
  const auto& grp = f.group();
  GroupFunction out(grp);
  for (std::size_t t = 0; t < grp.order(); ++t) {
    cplx acc = 0.0;
    for (std::size_t s = 0; s < grp.order(); ++s) acc += f[s] * g[grp.sub(t, s)];
    out[t] = acc;
  }
  return out;
}

GroupFunction idempotent(const FiniteAbelianGroup& g, std::size_t chi) {
  GroupFunction e(g);
  const double inv = 1.0 / static_cast<double>(g.order());
  for (std::size_t t = 0; t < g.order(); ++t) e[t] = g.character(chi, t) * inv;
  return e;
}

}  // namespace lpt
