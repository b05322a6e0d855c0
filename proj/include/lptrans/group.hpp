#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lpt {

using cplx = std::complex<double>;

/// Residue tuple. Used both for group elements and, through self-duality,
/// for characters: a character with residues (a_i) evaluates to
/// exp(2 pi i sum a_i t_i / N_i).
using Residues = std::vector<std::size_t>;

/// Finite abelian group Z_{N_1} x ... x Z_{N_k} with counting Haar measure.
///
/// Elements are enumerated lexicographically over residue tuples (last factor
/// fastest); `index`/`element` convert between the two views.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<std::size_t> factors);

  static FiniteAbelianGroup cyclic(std::size_t n) { return FiniteAbelianGroup({n}); }

  std::span<const std::size_t> factors() const { return factors_; }
  std::size_t order() const { return order_; }
  std::size_t rank() const { return factors_.size(); }

  std::size_t index(const Residues& r) const;
  Residues element(std::size_t index) const;

  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t sub(std::size_t a, std::size_t b) const;
  std::size_t neg(std::size_t a) const { return sub(0, a); }

  /// chi(t) for character index `chi` and element index `t`.
  cplx character(std::size_t chi, std::size_t t) const;

  std::string name() const;

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<std::size_t> factors_;
  std::vector<std::size_t> strides_;
  std::size_t order_ = 1;
};

/// Complex function on a finite group; the Haar measure is counting measure,
/// so these double as measures in M(G).
class GroupFunction {
 public:
  GroupFunction() = default;
  explicit GroupFunction(FiniteAbelianGroup g);
  GroupFunction(FiniteAbelianGroup g, std::vector<cplx> values);

  static GroupFunction delta(const FiniteAbelianGroup& g, std::size_t at);
  static GroupFunction constant(const FiniteAbelianGroup& g, cplx value);

  const FiniteAbelianGroup& group() const { return group_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  cplx operator[](std::size_t t) const { return values_[t]; }
  cplx& operator[](std::size_t t) { return values_[t]; }
  std::size_t size() const { return values_.size(); }

  double l1_norm() const;

  GroupFunction& operator*=(cplx s);
  friend GroupFunction operator*(cplx s, GroupFunction f) { return f *= s; }
  friend GroupFunction operator+(const GroupFunction& a, const GroupFunction& b);
  friend GroupFunction operator-(const GroupFunction& a, const GroupFunction& b);

 private:
  FiniteAbelianGroup group_;
  std::vector<cplx> values_;
};

/// f^(chi) = sum_t f(t) conj(chi(t)), indexed by character index.
std::vector<cplx> dft(const GroupFunction& f);

/// Inverse: f(t) = |G|^-1 sum_chi f^(chi) chi(t).
GroupFunction inverse_dft(const FiniteAbelianGroup& g, std::span<const cplx> coefficients);

/// (f*g)(t) = sum_s f(s) g(t-s). Throws std::invalid_argument on group mismatch.
GroupFunction convolve(const GroupFunction& f, const GroupFunction& g);

/// e_chi(t) = chi(t)/|G|, the minimal idempotent supported at chi.
GroupFunction idempotent(const FiniteAbelianGroup& g, std::size_t chi);

}  // namespace lpt
