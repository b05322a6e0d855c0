#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lptrans/errors.hpp"
#include "lptrans/group.hpp"

namespace lpt {

/// Complex measure on d atoms; the total variation norm is the l1 mass.
struct FiniteMeasure {
  Eigen::VectorXcd mass;

  FiniteMeasure() = default;
  explicit FiniteMeasure(Eigen::VectorXcd m) : mass(std::move(m)) {}
  static FiniteMeasure zero(std::size_t d) { return FiniteMeasure(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d))); }
  static FiniteMeasure atom(std::size_t d, std::size_t i, cplx w = 1.0);

  std::size_t dim() const { return static_cast<std::size_t>(mass.size()); }
  double norm() const { return mass.cwiseAbs().sum(); }
  /// mu(A) for a set of atom indices.
  cplx operator()(std::span<const std::size_t> atoms) const;
};

/// Rejected generator set; `generator` is the offending index.
class RepresentationError : public PreconditionError {
 public:
  RepresentationError(std::size_t generator, const std::string& what)
      : PreconditionError(what), generator_(generator) {}
  std::size_t generator() const { return generator_; }

 private:
  std::size_t generator_;
};

/// Spectrum hypothesis of the transference theorem fails; lists the
/// characters of spec(mu) outside S.
class SpectrumPreconditionError : public PreconditionError {
 public:
  SpectrumPreconditionError(std::vector<std::size_t> offending, const std::string& what)
      : PreconditionError(what), offending_(std::move(offending)) {}
  const std::vector<std::size_t>& offending() const { return offending_; }

 private:
  std::vector<std::size_t> offending_;
};

/// Representation t -> T_t = prod_i M_i^{t_i} of a finite abelian group by
/// invertible d x d matrices acting on atom-mass vectors.
class RepresentationModel {
 public:
  /// Validates square shape, invertibility, M_i^{N_i} = I and pairwise
  /// commutation (1e-9, scaled by the generator norms). Throws
  /// RepresentationError naming the failing generator.
  static RepresentationModel build(FiniteAbelianGroup g, std::vector<Eigen::MatrixXcd> generators);

  static RepresentationModel identity(FiniteAbelianGroup g, std::size_t d);
  /// Translation on measures over Z_n: T_t mu(A) = mu(A + t), so
  /// T_t delta_p = delta_{p - t}.
  static RepresentationModel regular(std::size_t n);
  /// M_i = S D_i S^-1 with D_i diagonal roots of unity of order N_i and
  /// S = I + spread * (Gaussian matrix)/sqrt(d). Reproducible in (seed, stream).
  static RepresentationModel random_similarity(FiniteAbelianGroup g, std::size_t d, std::uint64_t seed,
                                               std::uint64_t stream, double spread = 0.3);

  const FiniteAbelianGroup& group() const { return group_; }
  std::size_t dim() const { return dim_; }
  std::span<const Eigen::MatrixXcd> generators() const { return generators_; }
  const Eigen::MatrixXcd& op(std::size_t t) const { return ops_[t]; }
  FiniteMeasure apply(std::size_t t, const FiniteMeasure& mu) const;

 private:
  FiniteAbelianGroup group_;
  std::size_t dim_ = 0;
  std::vector<Eigen::MatrixXcd> generators_;
  std::vector<Eigen::MatrixXcd> ops_;
};

/// Operator norm of a matrix on (C^d, l1): max column absolute sum.
double l1_operator_norm(const Eigen::MatrixXcd& m);

/// c = max_t ||T_t||.
double uniform_bound_c(const RepresentationModel& T);

struct ConstantsReport {
  double c = 0.0;
  double C_upper = 0.0;  ///< certified: c
  double C_lower = 0.0;  ///< max over samples of ||mu|| / max_t ||T_t mu||
  std::vector<double> per_t_norms;
  std::size_t samples = 0;
};

/// Atoms are always sampled first, then `samples` random measures.
ConstantsReport sup_path_C(const RepresentationModel& T, std::size_t samples, std::uint64_t seed);

/// nu *_T mu = sum_t nu(t) T_{-t} mu.
FiniteMeasure t_convolve(const GroupFunction& nu, const FiniteMeasure& mu, const RepresentationModel& T);

struct AlgebraResiduals {
  double commutation = 0.0;    ///< max_t ||T_t(nu *_T mu) - nu *_T (T_t mu)||
  double associativity = 0.0;  ///< ||sigma *_T (nu *_T mu) - (sigma * nu) *_T mu||
  double scale = 0.0;          ///< c^2 ||sigma|| ||nu|| ||mu||, the natural size of the terms
  bool pass = false;           ///< both residuals <= 1e-10 * max(1, scale)
};

AlgebraResiduals check_algebra(const GroupFunction& sigma, const GroupFunction& nu, const FiniteMeasure& mu,
                               const RepresentationModel& T);

/// Set of characters (indices into the group's self-dual enumeration).
struct SpectrumSet {
  std::vector<std::size_t> characters;  ///< sorted
  std::vector<std::size_t> borderline;  ///< decided within the guard band
  double tol = 0.0;

  bool contains(std::size_t chi) const;
  std::size_t size() const { return characters.size(); }
  friend bool operator==(const SpectrumSet& a, const SpectrumSet& b) { return a.characters == b.characters; }
};

/// Fourier coefficient of the trajectory, (1/|G|) sum_t conj(chi(t)) T_t mu,
/// for every character; column chi of the result.
Eigen::MatrixXcd trajectory_coefficients(const FiniteMeasure& mu, const RepresentationModel& T);

/// {chi : ||coefficient(chi)|| > tol ||mu||}; coefficients within a factor 10
/// of the threshold are listed as borderline.
SpectrumSet spec_fourier(const FiniteMeasure& mu, const RepresentationModel& T, double tol = 1e-9);

/// Zero set of the ideal {f : f *_T mu = 0}. The null space of f -> f *_T mu
/// is found by SVD (rank threshold 1e-9 sigma_max); chi is in the zero set
/// when every null vector's transform vanishes at chi. Singular values within
/// a factor 10 of the threshold mark every undecided character borderline.
SpectrumSet spec_ideal(const FiniteMeasure& mu, const RepresentationModel& T);

/// {chi : |f^(chi)| > tol ||f||_1}.
SpectrumSet fourier_support(const GroupFunction& f, double tol = 1e-9);

struct LemmaRef1Report {
  // (a) sum_t g(t) T_t mu(E) conj(chi(t)) vanishes off supp g^ + spec(mu)
  double a_max_excluded = 0.0;
  std::size_t a_excluded_count = 0;
  bool a_pass = false;
  // (b) spec(nu *_T mu) within supp nu^ and spec(mu)
  std::vector<std::size_t> b_violations;
  bool b_pass = false;
  // (c) approximate identity: (alpha, max_t ||k_alpha *_T T_t mu||); alpha = 0
  // stands for delta_0, the sharpest member, where the bound is asserted
  std::vector<std::pair<double, double>> c_family;
  double c_lhs = 0.0;  ///< ||mu|| / C_upper
  double c_rhs = 0.0;  ///< max_t ||T_t mu||
  bool c_pass = false;
  bool pass() const { return a_pass && b_pass && c_pass; }
};

LemmaRef1Report lemma_ref1_checks(const FiniteMeasure& mu, const RepresentationModel& T, const GroupFunction& nu,
                                  const GroupFunction& g, std::span<const std::size_t> E);

/// Fejér-type kernel on G: k^(a) = prod_i (1 - |a_i|_circ / alpha)^+, with
/// |a_i|_circ the circular distance of the residue to 0. Tends to delta_0 as
/// alpha grows.
GroupFunction fejer_on_group(const FiniteAbelianGroup& g, double alpha);

struct ContractionEstimate {
  double estimate = 0.0;
  GroupFunction best;  ///< maximizing f found
};

/// Lower estimate of sup ||nu * f||_1 / ||f||_1 over nonzero f with f^ inside
/// S: single characters and the projection of delta_0 onto S, then `samples`
/// random S-supported f, then a hill-climb from the best one. Throws
/// PreconditionError for empty S.
ContractionEstimate subspace_contraction_estimate(const GroupFunction& nu, const SpectrumSet& S,
                                                  std::size_t samples, std::uint64_t seed,
                                                  std::size_t ascent_steps = 200);

struct TransferReport {
  std::string group;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  double c = 0.0;
  double C_upper = 0.0;
  double C_lower = 0.0;
  std::size_t spec_size = 0;
  std::size_t S_size = 0;
  double hypothesis_estimate = 0.0;  ///< before rescaling
  double nu_scale = 1.0;             ///< factor applied to nu
  double ratio = 0.0;                ///< ||nu *_T mu|| / ||mu||
  double bound = 0.0;                ///< c^3 C_upper
  bool pass = false;
};

/// Checks ||nu *_T mu|| <= c^3 C ||mu|| after rescaling nu so that its
/// estimated norm on L1_S is at most 1. Every subset of a finite dual is a
/// T-set, so only spec(mu) within S is checked; a violation throws
/// SpectrumPreconditionError.
TransferReport verify_main_theorem(const RepresentationModel& T, const SpectrumSet& S, const GroupFunction& nu,
                                   const FiniteMeasure& mu, std::uint64_t seed, std::size_t samples = 64);

struct VectorContraction {
  double lhs = 0.0;  ///< sum_t ||(nu * F)(t)||
  double rhs = 0.0;  ///< sum_t ||F(t)||
  bool pass = false;
};

/// F maps group element index to a measure. (nu * F)(t) = sum_s F(t - s) nu(s).
/// Throws PreconditionError if some atom trajectory has Fourier support
/// outside S (relative tolerance 1e-9).
VectorContraction vector_valued_contraction_check(const FiniteAbelianGroup& g, std::span<const FiniteMeasure> F,
                                                  const GroupFunction& nu, const SpectrumSet& S);

struct VanishingCheck {
  double max_abs = 0.0;  ///< max_t max_atom |T_t mu(atom)|
  double norm = 0.0;
  bool consistent = false;  ///< max_abs == 0 implies norm == 0
};

/// If every T_t mu vanishes on every atom then mu = 0.
VanishingCheck vanishing_trajectory_check(const FiniteMeasure& mu, const RepresentationModel& T);

struct TSetWitness {
  bool found = false;
  std::vector<double> center;
  double radius = 0.0;
  std::size_t points_checked = 0;
};

/// One-sided search for an open ball W = B(w, delta) with W + K inside S.
/// Centers run over the lattice of the given resolution with |w| + delta < eps,
/// those with |w| nearest eps/2 first; radii are eps/2^j for j = 1..max_halvings.
/// Each ball is probed on a sub-lattice of spacing delta/4 plus its axis
/// extremes. Not finding a witness is inconclusive, not a refutation.
TSetWitness t_set_witness(const std::function<bool(std::span<const double>)>& S,
                          std::span<const std::vector<double>> K, double eps, double resolution,
                          int max_halvings = 10);

}  // namespace lpt
