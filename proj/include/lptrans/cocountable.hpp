#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lptrans/errors.hpp"

namespace lpt {

/// Member of the countable/co-countable sigma algebra on R, represented by a
/// finite list: the points themselves, or the points left out.
class SymbolicSet {
 public:
  enum class Kind { countable, cocountable };

  /// Throws PreconditionError on non-finite points. Points are sorted and
  /// deduplicated.
  static SymbolicSet countable(std::vector<double> points);
  static SymbolicSet cocountable(std::vector<double> excluded);
  /// "Countable(0,1.5)" or "CoCountable()"; throws PreconditionError when
  /// malformed.
  static SymbolicSet parse(const std::string& text);

  Kind kind() const { return kind_; }
  const std::vector<double>& points() const { return points_; }
  bool contains(double x) const;
  std::string str() const;

 private:
  SymbolicSet(Kind k, std::vector<double> p);
  Kind kind_ = Kind::countable;
  std::vector<double> points_;
};

/// c nu + sum of atoms, where nu is 0 on countable and 1 on co-countable sets.
struct SymbolicCoCountMeasure {
  std::complex<double> diffuse = 0.0;
  std::map<double, std::complex<double>> atoms;

  double norm() const;
  std::complex<double> operator()(const SymbolicSet& A) const;
  /// T_t mu(A) = mu(A + t): atoms move from p to p - t, nu is invariant.
  SymbolicCoCountMeasure translated(double t) const;
};

struct SetTrajectory {
  std::string set;
  std::complex<double> generic = 0.0;   ///< value off the exceptional set
  std::vector<double> exceptional;      ///< t where the value may differ
  std::size_t samples = 0;
  std::size_t nonzero = 0;
  bool nonzero_inside_exceptional = false;
  bool vanishes_ae = false;             ///< generic == 0
};

struct CocountableReport {
  double norm = 0.0;
  double alpha = 0.0;
  std::vector<SetTrajectory> sets;
  /// Same evaluation for t -> exp(i alpha t) T_t.
  std::vector<SetTrajectory> phased;
  bool all_vanish_ae = false;
  /// Every trajectory vanishes almost everywhere although mu != 0.
  bool not_sup_path_attaining = false;
};

/// Evaluates t -> T_t mu(A) at the samples (plus each set's exceptional points).
CocountableReport cocountable_demo(const SymbolicCoCountMeasure& mu, const std::vector<SymbolicSet>& sets,
                                   const std::vector<double>& t_samples, double alpha = 1.0);

/// Random sets with up to `max_points` integer points in [-5, 5].
std::vector<SymbolicSet> random_symbolic_sets(std::size_t count, std::size_t max_points, std::uint64_t seed);

/// mu = first (x) nu_2 on R x R with d nu_2 = exp(-y^2) dy, acted on by the
/// diagonal translation T_t mu(A) = mu(A + (t, t)).
struct ProductModel {
  SymbolicCoCountMeasure first;

  /// T_t mu(A x [a, b]); the interval factor is integrated by Gauss quadrature.
  std::complex<double> trajectory(const SymbolicSet& A, double a, double b, double t) const;
  /// Lebesgue parts against nu_1 (x) nu_2: the diffuse and atomic factors.
  ProductModel absolutely_continuous_part() const;
  ProductModel singular_part() const;
};

/// int_a^b exp(-y^2) dy.
double gaussian_interval_mass(double a, double b);

}  // namespace lpt
