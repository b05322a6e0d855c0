#include <gtest/gtest.h>

#include <random>

#include "lptrans/transference.hpp"

using namespace lpt;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

FiniteMeasure random_measure(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  VectorXcd v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = {n(rng), n(rng)};
  return FiniteMeasure(v);
}

GroupFunction random_function(const FiniteAbelianGroup& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  GroupFunction f(g);
  for (std::size_t t = 0; t < g.order(); ++t) f[t] = {n(rng), n(rng)};
  return f;
}

// Brute-force Fourier coefficient scan of a trajectory.
std::vector<std::size_t> brute_spectrum(const FiniteMeasure& mu, const RepresentationModel& T) {
  const auto& g = T.group();
  std::vector<std::size_t> out;
  for (std::size_t chi = 0; chi < g.order(); ++chi) {
    VectorXcd acc = VectorXcd::Zero(static_cast<Eigen::Index>(T.dim()));
    for (std::size_t t = 0; t < g.order(); ++t) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((chi * t) % g.order()) / g.order();
      acc += std::polar(1.0, -phase) * (T.op(t) * mu.mass);
    }
    if (acc.cwiseAbs().sum() / g.order() > 1e-9 * mu.norm()) out.push_back(chi);
  }
  return out;
}

}  // namespace

TEST(Representation, IdentityAndRegular) {
  const auto id = RepresentationModel::identity(FiniteAbelianGroup({2, 3}), 3);
  for (std::size_t t = 0; t < 6; ++t) EXPECT_TRUE(id.op(t).isApprox(MatrixXcd::Identity(3, 3)));
  const auto reg = RepresentationModel::regular(5);
  for (std::size_t t = 0; t < 5; ++t) {
    for (std::size_t p = 0; p < 5; ++p) {
      const auto moved = reg.apply(t, FiniteMeasure::atom(5, p));
      EXPECT_EQ(moved.mass((p + 5 - t) % 5), cplx(1.0));
      EXPECT_DOUBLE_EQ(moved.norm(), 1.0);
    }
  }
}

TEST(Representation, DiagonalPhasesHaveUnitBound) {
  MatrixXcd m = MatrixXcd::Zero(3, 3);
  for (int k = 0; k < 3; ++k) m(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * (k + 1) / 6.0);
  const auto T = RepresentationModel::build(FiniteAbelianGroup::cyclic(6), {m});
  EXPECT_NEAR(uniform_bound_c(T), 1.0, 1e-12);
}

TEST(Representation, Rejections) {
  MatrixXcd bad(2, 2);
  bad << 2.0, 0.0, 0.0, 0.5;
  try {
    RepresentationModel::build(FiniteAbelianGroup::cyclic(2), {bad});
    FAIL();
  } catch (const RepresentationError& e) {
    EXPECT_EQ(e.generator(), 0u);
  }
  MatrixXcd flip(2, 2), sign(2, 2);
  flip << 0.0, 1.0, 1.0, 0.0;
  sign << 1.0, 0.0, 0.0, -1.0;
  try {
    RepresentationModel::build(FiniteAbelianGroup({2, 2}), {sign, flip});
    FAIL();
  } catch (const RepresentationError& e) {
    EXPECT_EQ(e.generator(), 1u);
  }
  MatrixXcd singular = MatrixXcd::Zero(2, 2);
  singular(0, 0) = 1.0;
  EXPECT_THROW(RepresentationModel::build(FiniteAbelianGroup({2, 2}), {flip, singular}), RepresentationError);
  EXPECT_THROW(RepresentationModel::build(FiniteAbelianGroup({2, 2}), {flip}), RepresentationError);
}

TEST(Representation, AntidiagonalHasBoundTwo) {
  MatrixXcd m(2, 2);
  m << 0.0, 2.0, 0.5, 0.0;
  // order 2 by brute multiplication
  EXPECT_TRUE((m * m).isApprox(MatrixXcd::Identity(2, 2)));
  const auto T = RepresentationModel::build(FiniteAbelianGroup::cyclic(2), {m});
  // column sums of m: 0.5 and 2
  EXPECT_DOUBLE_EQ(uniform_bound_c(T), 2.0);
  const auto rep = sup_path_C(T, 50, 3);
  EXPECT_GE(rep.C_lower, 1.0 - 1e-15);
  EXPECT_LE(rep.C_lower, rep.C_upper);
  EXPECT_DOUBLE_EQ(rep.C_upper, 2.0);
}

TEST(Representation, PermutationWithPhases) {
  MatrixXcd m = MatrixXcd::Zero(4, 4);
  const cplx w = std::polar(1.0, std::numbers::pi / 2.0);
  m(1, 0) = w;
  m(2, 1) = w;
  m(3, 2) = w;
  m(0, 3) = w;
  // m^4 = w^4 I = I
  const auto T = RepresentationModel::build(FiniteAbelianGroup::cyclic(4), {m});
  EXPECT_NEAR(uniform_bound_c(T), 1.0, 1e-12);
  const auto rep = sup_path_C(T, 20, 1);
  EXPECT_NEAR(rep.C_lower, 1.0, 1e-12);
}

TEST(SupPathC, Identity) {
  const auto rep = sup_path_C(RepresentationModel::identity(FiniteAbelianGroup::cyclic(3), 2), 10, 0);
  EXPECT_DOUBLE_EQ(rep.C_upper, 1.0);
  EXPECT_DOUBLE_EQ(rep.C_lower, 1.0);
  EXPECT_THROW(sup_path_C(RepresentationModel::identity(FiniteAbelianGroup::cyclic(3), 2), 0, 0), PreconditionError);
}

TEST(Representation, HomomorphismOnRandomModels) {
  const FiniteAbelianGroup g({3, 4});
  const auto T = RepresentationModel::random_similarity(g, 3, 5, 0);
  const auto mu = random_measure(3, 1);
  for (std::size_t s = 0; s < g.order(); ++s) {
    for (std::size_t t = 0; t < g.order(); ++t) {
      const auto lhs = T.apply(g.add(s, t), mu);
      const auto rhs = T.apply(s, T.apply(t, mu));
      ASSERT_LE((lhs.mass - rhs.mass).cwiseAbs().sum(), 1e-10);
    }
  }
}

TEST(TConvolve, DeltasAndBruteForce) {
  const auto g = FiniteAbelianGroup::cyclic(6);
  const auto T = RepresentationModel::random_similarity(g, 3, 9, 0);
  const auto mu = random_measure(3, 2);
  EXPECT_LE((t_convolve(GroupFunction::delta(g, 0), mu, T).mass - mu.mass).cwiseAbs().sum(), 1e-14);
  for (std::size_t t = 0; t < 6; ++t) {
    const auto got = t_convolve(GroupFunction::delta(g, t), mu, T);
    EXPECT_LE((got.mass - T.op((6 - t) % 6) * mu.mass).cwiseAbs().sum(), 1e-14);
  }
  const auto nu = random_function(g, 4);
  // term-by-term with explicit matrix powers of the generator
  const MatrixXcd m = T.generators()[0];
  VectorXcd ref = VectorXcd::Zero(3);
  for (std::size_t t = 0; t < 6; ++t) {
    MatrixXcd p = MatrixXcd::Identity(3, 3);
    for (std::size_t k = 0; k < (6 - t) % 6; ++k) p = p * m;
    ref += nu[t] * (p * mu.mass);
  }
  EXPECT_LE((t_convolve(nu, mu, T).mass - ref).cwiseAbs().sum(), 1e-12);
  EXPECT_THROW(t_convolve(GroupFunction(FiniteAbelianGroup::cyclic(4)), mu, T), PreconditionError);
}

TEST(TConvolve, NormBound) {
  const FiniteAbelianGroup g({2, 4});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto T = RepresentationModel::random_similarity(g, 3, s, 1);
    const auto nu = random_function(g, s + 100);
    const auto mu = random_measure(3, s + 200);
    EXPECT_LE(t_convolve(nu, mu, T).norm(), uniform_bound_c(T) * nu.l1_norm() * mu.norm() * (1 + 1e-9));
  }
}

TEST(CheckAlgebra, Cases) {
  const auto g = FiniteAbelianGroup::cyclic(8);
  const auto id = RepresentationModel::identity(g, 4);
  const auto mu = random_measure(4, 5);
  const auto r0 = check_algebra(random_function(g, 1), random_function(g, 2), mu, id);
  EXPECT_TRUE(r0.pass);
  EXPECT_LE(r0.commutation, 1e-13);
  const auto T = RepresentationModel::random_similarity(g, 4, 12, 0);
  const auto r1 = check_algebra(random_function(g, 3), random_function(g, 4), mu, T);
  EXPECT_TRUE(r1.pass);
  EXPECT_LE(r1.commutation, 1e-10 * std::max(1.0, r1.scale));
  const auto d0 = GroupFunction::delta(g, 0);
  const auto r2 = check_algebra(d0, d0, mu, T);
  EXPECT_LE(r2.associativity, 1e-14);
}

TEST(Spectrum, RegularAction) {
  const std::size_t n = 7;
  const auto T = RepresentationModel::regular(n);
  const FiniteMeasure uniform(VectorXcd::Constant(n, 1.0 / n));
  EXPECT_EQ(spec_fourier(uniform, T).characters, (std::vector<std::size_t>{0}));
  EXPECT_EQ(spec_fourier(uniform, T).characters, brute_spectrum(uniform, T));
  const auto delta = FiniteMeasure::atom(n, 0);
  EXPECT_EQ(spec_fourier(delta, T).size(), n);
  EXPECT_EQ(spec_fourier(delta, T).characters, brute_spectrum(delta, T));
  EXPECT_TRUE(spec_fourier(FiniteMeasure::zero(n), T).characters.empty());

  EXPECT_TRUE(spec_ideal(FiniteMeasure::zero(n), T).characters.empty());
  EXPECT_EQ(spec_ideal(uniform, T).characters, (std::vector<std::size_t>{0}));
  EXPECT_EQ(spec_ideal(delta, T).size(), n);
}

TEST(Spectrum, DualMethodsAgreeOn100Instances) {
  const auto g = FiniteAbelianGroup::cyclic(6);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::size_t d = 1 + i % 4;
    const auto T = RepresentationModel::random_similarity(g, d, 31, i);
    auto mu = random_measure(d, i);
    if (i % 3 == 0 && d > 1) mu.mass(0) = 0.0;  // sparser spectra
    const auto a = spec_fourier(mu, T);
    const auto b = spec_ideal(mu, T);
    EXPECT_EQ(a.characters, b.characters) << i;
    EXPECT_TRUE(a.borderline.empty()) << i;
    EXPECT_TRUE(b.borderline.empty()) << i;
    EXPECT_EQ(a.characters, brute_spectrum(mu, T)) << i;
  }
}

TEST(Spectrum, InvariantUnderTranslation) {
  const FiniteAbelianGroup g({2, 3});
  const auto T = RepresentationModel::random_similarity(g, 4, 2, 0);
  const auto mu = random_measure(4, 8);
  const auto ref = spec_fourier(mu, T);
  for (std::size_t t = 0; t < g.order(); ++t) EXPECT_EQ(spec_fourier(T.apply(t, mu), T), ref);
}

TEST(LemmaRef1, RegularUniform) {
  const std::size_t n = 8;
  const auto g = FiniteAbelianGroup::cyclic(n);
  const auto T = RepresentationModel::regular(n);
  const FiniteMeasure uniform(VectorXcd::Constant(n, 1.0 / n));
  const std::vector<std::size_t> E{0, 3, 4};
  for (std::size_t chi0 = 0; chi0 < n; ++chi0) {
    const auto rep = lemma_ref1_checks(uniform, T, GroupFunction::delta(g, 0), idempotent(g, chi0), E);
    EXPECT_TRUE(rep.pass()) << chi0;
    EXPECT_EQ(rep.a_excluded_count, n - 1);
    EXPECT_GE(rep.c_rhs, rep.c_lhs);
  }
}

TEST(LemmaRef1, RandomModels) {
  const FiniteAbelianGroup g({2, 4});
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto T = RepresentationModel::random_similarity(g, 3, 77, i);
    GroupFunction gf(g);
    gf[1] = 1.0;
    gf[2] = cplx(0.0, 0.5);
    const auto rep = lemma_ref1_checks(random_measure(3, i), T, random_function(g, i), gf, std::vector<std::size_t>{0, 2});
    EXPECT_TRUE(rep.pass()) << i;
    ASSERT_FALSE(rep.c_family.empty());
    EXPECT_EQ(rep.c_family.back().first, 0.0);
  }
}

TEST(FejerOnGroup, ApproximateIdentity) {
  const FiniteAbelianGroup g({8});
  const auto k = fejer_on_group(g, 1.0);
  // alpha = 1 keeps only the trivial character: the uniform average
  for (std::size_t t = 0; t < 8; ++t) EXPECT_NEAR(std::abs(k[t] - 0.125), 0.0, 1e-14);
  const auto wide = dft(fejer_on_group(g, 64.0));
  for (const auto& v : wide) EXPECT_GT(v.real(), 0.9);
  EXPECT_THROW(fejer_on_group(g, 0.0), PreconditionError);
}

TEST(SubspaceContraction, Cases) {
  const auto g = FiniteAbelianGroup::cyclic(8);
  SpectrumSet S;
  S.characters = {0, 1, 2, 3, 4};
  EXPECT_EQ(subspace_contraction_estimate(GroupFunction::delta(g, 0), S, 20, 1).estimate, 1.0);
  const auto e = subspace_contraction_estimate(idempotent(g, 2), S, 50, 2);
  EXPECT_LE(e.estimate, 1.0 + 1e-12);
  SpectrumSet full;
  for (std::size_t i = 0; i < 8; ++i) full.characters.push_back(i);
  const auto nu = random_function(g, 3);
  const auto est = subspace_contraction_estimate(nu, full, 50, 3).estimate;
  // l1 convolution operator norm = max column sum of the circulant = ||nu||_1
  double colmax = 0.0;
  for (std::size_t j = 0; j < 8; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < 8; ++i) s += std::abs(nu[(i + 8 - j) % 8]);
    colmax = std::max(colmax, s);
  }
  EXPECT_NEAR(est, colmax, 1e-12 * colmax);
  EXPECT_THROW(subspace_contraction_estimate(nu, SpectrumSet{}, 5, 0), PreconditionError);
}

TEST(MainTheorem, IdentityRepresentation) {
  const auto g = FiniteAbelianGroup::cyclic(5);
  const auto T = RepresentationModel::identity(g, 3);
  SpectrumSet S;
  S.characters = {0};
  auto nu = random_function(g, 4);
  const auto hat = dft(nu);
  nu *= 0.9 / std::abs(hat[0]);
  const auto mu = random_measure(3, 1);
  const auto rep = verify_main_theorem(T, S, nu, mu, 7);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.ratio, 0.9, 1e-12);
  EXPECT_DOUBLE_EQ(rep.bound, 1.0);
}

TEST(MainTheorem, RegularActionUpperHalf) {
  const std::size_t n = 8;
  const auto g = FiniteAbelianGroup::cyclic(n);
  const auto T = RepresentationModel::regular(n);
  SpectrumSet S;
  S.characters = {0, 1, 2, 3, 4};
  // mu with spectrum in S: inverse transform of random coefficients on S
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::vector<cplx> coef(n);
  for (auto chi : S.characters) coef[chi] = {nd(rng), nd(rng)};
  const auto f = inverse_dft(g, coef);
  // the coefficient of j -> mu(j + t) at chi is chi(j) mu^(chi) / n, so
  // spec(mu) is the Fourier support of mu itself
  VectorXcd m(n);
  for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(j)) = f[j];
  const FiniteMeasure mu(m);
  const auto spec = spec_fourier(mu, T);
  for (auto chi : spec.characters) ASSERT_TRUE(S.contains(chi)) << chi;
  for (std::uint64_t s = 0; s < 10; ++s) {
    std::vector<cplx> nc(n);
    for (auto chi : S.characters) nc[chi] = {nd(rng), nd(rng)};
    const auto nu = inverse_dft(g, nc);
    const auto rep = verify_main_theorem(T, S, nu, mu, s);
    EXPECT_TRUE(rep.pass) << s;
    EXPECT_LE(rep.ratio, 1.0 + 1e-9);
  }
}

TEST(MainTheorem, SpectrumViolationListsCharacters) {
  const auto T = RepresentationModel::regular(4);
  SpectrumSet S;
  S.characters = {0, 1};
  try {
    verify_main_theorem(T, S, GroupFunction::delta(T.group(), 0), FiniteMeasure::atom(4, 0), 1);
    FAIL();
  } catch (const SpectrumPreconditionError& e) {
    EXPECT_EQ(e.offending(), (std::vector<std::size_t>{2, 3}));
  }
}

TEST(VectorContraction, Cases) {
  const auto g = FiniteAbelianGroup::cyclic(6);
  SpectrumSet S;
  S.characters = {1, 2, 5};
  const auto mu0 = random_measure(3, 1);
  std::vector<FiniteMeasure> F;
  for (std::size_t t = 0; t < 6; ++t) F.emplace_back(g.character(2, t) * mu0.mass);
  const auto id = vector_valued_contraction_check(g, F, GroupFunction::delta(g, 0), S);
  EXPECT_NEAR(id.lhs, id.rhs, 1e-12);
  EXPECT_TRUE(id.pass);

  auto nu = random_function(g, 2);
  nu *= 0.8 / std::abs(dft(nu)[2]);
  const auto r = vector_valued_contraction_check(g, F, nu, S);
  EXPECT_NEAR(r.lhs, 0.8 * r.rhs, 1e-12);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FiniteMeasure> G(6, FiniteMeasure::zero(3));
    for (auto chi : S.characters) {
      const auto v = random_measure(3, rng());
      for (std::size_t t = 0; t < 6; ++t) G[t].mass += g.character(chi, t) * v.mass;
    }
    auto w = random_function(g, rng());
    w *= 1.0 / w.l1_norm();
    EXPECT_TRUE(vector_valued_contraction_check(g, G, w, S).pass);
  }
  std::vector<FiniteMeasure> bad(6, FiniteMeasure::atom(3, 0));
  EXPECT_THROW(vector_valued_contraction_check(g, bad, nu, S), PreconditionError);
}

TEST(Vanishing, FiniteFace) {
  const auto T = RepresentationModel::random_similarity(FiniteAbelianGroup::cyclic(5), 3, 1, 0);
  const auto z = vanishing_trajectory_check(FiniteMeasure::zero(3), T);
  EXPECT_EQ(z.max_abs, 0.0);
  EXPECT_TRUE(z.consistent);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto r = vanishing_trajectory_check(random_measure(3, s), T);
    EXPECT_GT(r.max_abs, 0.0);
    EXPECT_TRUE(r.consistent);
  }
}

TEST(TSet, HalfLine) {
  auto S = [](std::span<const double> p) { return p[0] >= 0.0; };
  const std::vector<std::vector<double>> K{{0.0}, {1.0}, {5.0}};
  const auto w = t_set_witness(S, K, 0.1, 0.005);
  ASSERT_TRUE(w.found);
  EXPECT_NEAR(w.center[0], 0.05, 1e-12);
  EXPECT_NEAR(w.radius, 0.025, 1e-15);
}

TEST(TSet, Parabola) {
  auto S = [](std::span<const double> p) { return p[1] * p[1] <= p[0]; };
  std::vector<std::vector<double>> K;
  for (int i = -20; i <= 20; ++i) {
    const double y = i / 10.0;
    K.push_back({y * y, y});
    K.push_back({4.0, y});
  }
  const auto w = t_set_witness(S, K, 0.1, 0.005);
  ASSERT_TRUE(w.found);
  EXPECT_GT(w.center[0], 0.0);
}

TEST(TSet, OpenDiskNearBoundary) {
  auto S = [](std::span<const double> p) { return p[0] * p[0] + p[1] * p[1] < 1.0; };
  const std::vector<std::vector<double>> K{{0.999, 0.0}, {0.0, 0.99}};
  const auto w = t_set_witness(S, K, 0.004, 0.0005);
  EXPECT_TRUE(w.found);
  // a point of K outside S violates the precondition
  EXPECT_THROW(t_set_witness(S, std::vector<std::vector<double>>{{1.0, 0.0}}, 0.01, 0.001), PreconditionError);
}

TEST(TSet, InconclusiveWhenNoRoom) {
  // a single point set admits no open ball
  auto S = [](std::span<const double> p) { return p[0] == 0.0; };
  const auto w = t_set_witness(S, std::vector<std::vector<double>>{{0.0}}, 0.1, 0.01, 4);
  EXPECT_FALSE(w.found);
  EXPECT_GT(w.points_checked, 0u);
}
