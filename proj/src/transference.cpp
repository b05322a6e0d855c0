#include "lptrans/transference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lptrans/rng.hpp"

namespace lpt {

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_group(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b, const char* who) {
  if (!(a == b)) throw PreconditionError(std::string(who) + ": group mismatch");
}

void require_dim(const FiniteMeasure& mu, const RepresentationModel& T, const char* who) {
  if (mu.dim() != T.dim()) throw PreconditionError(std::string(who) + ": measure dimension mismatch");
}

// conj(chi(t)) / |G| for all (t, chi).
Eigen::MatrixXcd analysis_matrix(const FiniteAbelianGroup& g, double scale) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXcd w(n, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index chi = 0; chi < n; ++chi) {
      w(t, chi) = std::conj(g.character(static_cast<std::size_t>(chi), static_cast<std::size_t>(t))) * scale;
    }
  }
  return w;
}

Eigen::MatrixXcd trajectory(const FiniteMeasure& mu, const RepresentationModel& T, bool inverse) {
  const auto& g = T.group();
  Eigen::MatrixXcd y(static_cast<Eigen::Index>(T.dim()), static_cast<Eigen::Index>(g.order()));
  for (std::size_t t = 0; t < g.order(); ++t) {
    y.col(static_cast<Eigen::Index>(t)) = T.op(inverse ? g.neg(t) : t) * mu.mass;
  }
  return y;
}

SpectrumSet threshold_norms(const std::vector<double>& norms, double thr, double tol) {
  SpectrumSet s;
  s.tol = tol;
  if (!(thr > 0.0)) return s;
  for (std::size_t chi = 0; chi < norms.size(); ++chi) {
    if (norms[chi] > thr) s.characters.push_back(chi);
    if (norms[chi] > thr / 10.0 && norms[chi] <= thr * 10.0) s.borderline.push_back(chi);
  }
  return s;
}

Eigen::VectorXcd complex_normal(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {nd(rng), nd(rng)};
  return v;
}

}  // namespace

FiniteMeasure FiniteMeasure::atom(std::size_t d, std::size_t i, cplx w) {
  auto m = zero(d);
  m.mass(static_cast<Eigen::Index>(i)) = w;
  return m;
}

cplx FiniteMeasure::operator()(std::span<const std::size_t> atoms) const {
  cplx acc = 0.0;
  for (auto i : atoms) acc += mass(static_cast<Eigen::Index>(i));
  return acc;
}

RepresentationModel RepresentationModel::build(FiniteAbelianGroup g, std::vector<Eigen::MatrixXcd> generators) {
  if (generators.size() != g.rank()) {
    throw RepresentationError(generators.size(), "expected one generator per cyclic factor (" +
                                                     std::to_string(g.rank()) + "), got " +
                                                     std::to_string(generators.size()));
  }
  const Eigen::Index d = generators.empty() ? 0 : generators.front().rows();
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const auto& m = generators[i];
    if (m.rows() != m.cols() || m.rows() != d || d == 0) {
      throw RepresentationError(i, "generator " + std::to_string(i) + " is not a square matrix of the common size");
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) {
      throw RepresentationError(i, "generator " + std::to_string(i) + " is singular");
    }
    const std::size_t order = g.factors()[i];
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(d, d);
    double growth = 1.0;
    for (std::size_t k = 0; k < order; ++k) {
      p = p * m;
      growth = std::max(growth, max_abs(p));
    }
    if (max_abs(p - Eigen::MatrixXcd::Identity(d, d)) > 1e-9 * growth) {
      throw RepresentationError(i, "generator " + std::to_string(i) + " does not satisfy M^" +
                                       std::to_string(order) + " = I");
    }
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      const auto& a = generators[i];
      const auto& b = generators[j];
      const double scale = std::max(1.0, max_abs(a) * max_abs(b) * static_cast<double>(d));
      if (max_abs(a * b - b * a) > 1e-9 * scale) {
        throw RepresentationError(j, "generators " + std::to_string(i) + " and " + std::to_string(j) +
                                         " do not commute");
      }
    }
  }

  RepresentationModel model;
  model.group_ = std::move(g);
  model.dim_ = static_cast<std::size_t>(d);
  model.generators_ = std::move(generators);

  const auto& grp = model.group_;
  std::vector<std::vector<Eigen::MatrixXcd>> powers(grp.rank());
  for (std::size_t i = 0; i < grp.rank(); ++i) {
    powers[i].push_back(Eigen::MatrixXcd::Identity(d, d));
    for (std::size_t k = 1; k < grp.factors()[i]; ++k) powers[i].push_back(powers[i].back() * model.generators_[i]);
  }
  model.ops_.reserve(grp.order());
  for (std::size_t t = 0; t < grp.order(); ++t) {
    const auto r = grp.element(t);
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(d, d);
    for (std::size_t i = 0; i < r.size(); ++i) op = op * powers[i][r[i]];
    model.ops_.push_back(std::move(op));
  }
  return model;
}

RepresentationModel RepresentationModel::identity(FiniteAbelianGroup g, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Eigen::MatrixXcd> gens(g.rank(), Eigen::MatrixXcd::Identity(n, n));
  return build(std::move(g), std::move(gens));
}

RepresentationModel RepresentationModel::regular(std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(nn, nn);
  for (Eigen::Index j = 0; j < nn; ++j) m(j, (j + 1) % nn) = 1.0;
  return build(FiniteAbelianGroup::cyclic(n), {m});
}

RepresentationModel RepresentationModel::random_similarity(FiniteAbelianGroup g, std::size_t d, std::uint64_t seed,
                                                           std::uint64_t stream, double spread) {
  auto rng = stream_rng(seed, stream);
  std::normal_distribution<double> nd(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd s;
  for (;;) {
    s = Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) s(i, j) += spread * cplx(nd(rng), nd(rng)) / std::sqrt(double(d));
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
    const auto& sv = svd.singularValues();
    if (sv(n - 1) > 1e-3 * sv(0)) break;
  }
  const Eigen::MatrixXcd s_inv = s.inverse();
  std::vector<Eigen::MatrixXcd> gens;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    const std::size_t order = g.factors()[i];
    std::uniform_int_distribution<std::size_t> pick(0, order - 1);
    Eigen::VectorXcd diag(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      diag(k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(pick(rng)) / static_cast<double>(order));
    }
    gens.push_back(s * diag.asDiagonal() * s_inv);
  }
  return build(std::move(g), std::move(gens));
}

FiniteMeasure RepresentationModel::apply(std::size_t t, const FiniteMeasure& mu) const {
  require_dim(mu, *this, "RepresentationModel::apply");
  return FiniteMeasure(ops_.at(t) * mu.mass);
}

double l1_operator_norm(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff();
}

double uniform_bound_c(const RepresentationModel& T) {
  double c = 0.0;
  for (std::size_t t = 0; t < T.group().order(); ++t) c = std::max(c, l1_operator_norm(T.op(t)));
  return c;
}

ConstantsReport sup_path_C(const RepresentationModel& T, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw PreconditionError("sup_path_C: need at least one sample");
  ConstantsReport rep;
  rep.samples = samples;
  for (std::size_t t = 0; t < T.group().order(); ++t) rep.per_t_norms.push_back(l1_operator_norm(T.op(t)));
  rep.c = *std::max_element(rep.per_t_norms.begin(), rep.per_t_norms.end());
  rep.C_upper = rep.c;

  auto ratio = [&](const FiniteMeasure& mu) {
    double best = 0.0;
    for (std::size_t t = 0; t < T.group().order(); ++t) best = std::max(best, T.apply(t, mu).norm());
    return mu.norm() / best;
  };
  for (std::size_t i = 0; i < T.dim(); ++i) rep.C_lower = std::max(rep.C_lower, ratio(FiniteMeasure::atom(T.dim(), i)));
  auto rng = stream_rng(seed, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    rep.C_lower = std::max(rep.C_lower, ratio(FiniteMeasure(complex_normal(rng, static_cast<Eigen::Index>(T.dim())))));
  }
  return rep;
}

FiniteMeasure t_convolve(const GroupFunction& nu, const FiniteMeasure& mu, const RepresentationModel& T) {
  require_group(nu.group(), T.group(), "t_convolve");
  require_dim(mu, T, "t_convolve");
  const auto& g = T.group();
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(T.dim()));
  for (std::size_t t = 0; t < g.order(); ++t) {
    if (nu[t] != cplx{}) acc += nu[t] * (T.op(g.neg(t)) * mu.mass);
  }
  return FiniteMeasure(std::move(acc));
}

AlgebraResiduals check_algebra(const GroupFunction& sigma, const GroupFunction& nu, const FiniteMeasure& mu,
                               const RepresentationModel& T) {
  AlgebraResiduals r;
  const auto conv = t_convolve(nu, mu, T);
  for (std::size_t t = 0; t < T.group().order(); ++t) {
    const auto lhs = T.apply(t, conv);
    const auto rhs = t_convolve(nu, T.apply(t, mu), T);
    r.commutation = std::max(r.commutation, (lhs.mass - rhs.mass).cwiseAbs().sum());
  }
  const auto lhs = t_convolve(sigma, conv, T);
  const auto rhs = t_convolve(convolve(sigma, nu), mu, T);
  r.associativity = (lhs.mass - rhs.mass).cwiseAbs().sum();
  const double c = uniform_bound_c(T);
  r.scale = c * c * sigma.l1_norm() * nu.l1_norm() * mu.norm();
  const double thr = 1e-10 * std::max(1.0, r.scale);
  r.pass = r.commutation <= thr && r.associativity <= thr;
  return r;
}

bool SpectrumSet::contains(std::size_t chi) const {
  return std::binary_search(characters.begin(), characters.end(), chi);
}

Eigen::MatrixXcd trajectory_coefficients(const FiniteMeasure& mu, const RepresentationModel& T) {
  require_dim(mu, T, "trajectory_coefficients");
  const auto& g = T.group();
  return trajectory(mu, T, false) * analysis_matrix(g, 1.0 / static_cast<double>(g.order()));
}

SpectrumSet spec_fourier(const FiniteMeasure& mu, const RepresentationModel& T, double tol) {
  const auto coef = trajectory_coefficients(mu, T);
  std::vector<double> norms(static_cast<std::size_t>(coef.cols()));
  for (Eigen::Index chi = 0; chi < coef.cols(); ++chi) norms[static_cast<std::size_t>(chi)] = coef.col(chi).cwiseAbs().sum();
  return threshold_norms(norms, tol * mu.norm(), tol);
}

SpectrumSet spec_ideal(const FiniteMeasure& mu, const RepresentationModel& T) {
  require_dim(mu, T, "spec_ideal");
  const auto& g = T.group();
  const auto n = static_cast<Eigen::Index>(g.order());
  SpectrumSet out;
  out.tol = 1e-9;
  // column t of A is T_{-t} mu, so A f = f *_T mu
  const Eigen::MatrixXcd a = trajectory(mu, T, true);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return out;  // mu = 0: the ideal is everything
  const double thr = 1e-9 * sv(0);
  Eigen::Index rank = 0;
  bool near_threshold = false;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thr) ++rank;
    if (sv(i) > thr / 10.0 && sv(i) <= thr * 10.0) near_threshold = true;
  }
  const Eigen::MatrixXcd null = svd.matrixV().rightCols(n - rank);
  // g^(chi) for every null vector g; orthonormal basis, so the row norm
  // squared over |G| is the fraction of chi lying in the null space.
  const Eigen::MatrixXcd ghat = analysis_matrix(g, 1.0).transpose() * null;
  for (Eigen::Index chi = 0; chi < n; ++chi) {
    const double rho = ghat.row(chi).squaredNorm() / static_cast<double>(n);
    const auto c = static_cast<std::size_t>(chi);
    if (rho < 0.5) out.characters.push_back(c);
    if (near_threshold || (rho > 1e-6 && rho < 1.0 - 1e-6)) out.borderline.push_back(c);
  }
  return out;
}

SpectrumSet fourier_support(const GroupFunction& f, double tol) {
  const auto hat = dft(f);
  std::vector<double> norms(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) norms[i] = std::abs(hat[i]);
  return threshold_norms(norms, tol * f.l1_norm(), tol);
}

GroupFunction fejer_on_group(const FiniteAbelianGroup& g, double alpha) {
  if (!(alpha > 0.0)) throw PreconditionError("fejer_on_group: alpha must be positive");
  std::vector<cplx> coef(g.order());
  for (std::size_t chi = 0; chi < g.order(); ++chi) {
    const auto r = g.element(chi);
    double v = 1.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double dist = static_cast<double>(std::min(r[i], g.factors()[i] - r[i]));
      v *= std::max(0.0, 1.0 - dist / alpha);
    }
    coef[chi] = v;
  }
  return inverse_dft(g, coef);
}

LemmaRef1Report lemma_ref1_checks(const FiniteMeasure& mu, const RepresentationModel& T, const GroupFunction& nu,
                                  const GroupFunction& g, std::span<const std::size_t> E) {
  require_group(nu.group(), T.group(), "lemma_ref1_checks");
  require_group(g.group(), T.group(), "lemma_ref1_checks");
  require_dim(mu, T, "lemma_ref1_checks");
  const auto& grp = T.group();
  const std::size_t n = grp.order();
  LemmaRef1Report rep;
  const double c = uniform_bound_c(T);

  // (a)
  const auto spec = spec_fourier(mu, T);
  const auto supp = fourier_support(g);
  std::vector<bool> allowed(n, false);
  for (auto a : supp.characters) {
    for (auto b : spec.characters) allowed[grp.add(a, b)] = true;
  }
  std::vector<cplx> path(n);
  for (std::size_t t = 0; t < n; ++t) path[t] = g[t] * T.apply(t, mu)(E);
  for (std::size_t chi = 0; chi < n; ++chi) {
    if (allowed[chi]) continue;
    cplx acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) acc += path[t] * std::conj(grp.character(chi, t));
    rep.a_max_excluded = std::max(rep.a_max_excluded, std::abs(acc));
    ++rep.a_excluded_count;
  }
  rep.a_pass = rep.a_max_excluded <= 1e-10 * std::max(1.0, g.l1_norm() * c * mu.norm());

  // (b)
  const auto conv_spec = spec_fourier(t_convolve(nu, mu, T), T);
  const auto nu_supp = fourier_support(nu);
  for (auto chi : conv_spec.characters) {
    if (!nu_supp.contains(chi) || !spec.contains(chi)) rep.b_violations.push_back(chi);
  }
  rep.b_pass = rep.b_violations.empty();

  // (c)
  auto sup_over_t = [&](const GroupFunction& k) {
    double best = 0.0;
    for (std::size_t t = 0; t < n; ++t) best = std::max(best, t_convolve(k, T.apply(t, mu), T).norm());
    return best;
  };
  std::size_t widest = 1;
  for (auto f : grp.factors()) widest = std::max(widest, f);
  for (double alpha = 1.0; alpha <= 2.0 * static_cast<double>(widest); alpha *= 2.0) {
    rep.c_family.emplace_back(alpha, sup_over_t(fejer_on_group(grp, alpha)));
  }
  rep.c_rhs = sup_over_t(GroupFunction::delta(grp, 0));
  rep.c_family.emplace_back(0.0, rep.c_rhs);
  rep.c_lhs = mu.norm() / c;
  rep.c_pass = rep.c_lhs <= rep.c_rhs + 1e-9 * std::max(1.0, mu.norm());
  return rep;
}

ContractionEstimate subspace_contraction_estimate(const GroupFunction& nu, const SpectrumSet& S, std::size_t samples,
                                                  std::uint64_t seed, std::size_t ascent_steps) {
  if (S.characters.empty()) throw PreconditionError("subspace_contraction_estimate: S is empty");
  const auto& g = nu.group();
  const std::size_t n = g.order();
  const auto m = static_cast<Eigen::Index>(S.characters.size());
  const auto nu_hat = dft(nu);

  // synthesis on S: f = B c with B(t, j) = chi_j(t) / |G|
  Eigen::MatrixXcd b(static_cast<Eigen::Index>(n), m);
  Eigen::VectorXcd nu_s(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto chi = S.characters[static_cast<std::size_t>(j)];
    nu_s(j) = nu_hat[chi];
    for (std::size_t t = 0; t < n; ++t) b(static_cast<Eigen::Index>(t), j) = g.character(chi, t) / static_cast<double>(n);
  }
  auto ratio = [&](const Eigen::VectorXcd& c) {
    const double den = (b * c).cwiseAbs().sum();
    return den > 0.0 ? (b * nu_s.cwiseProduct(c)).cwiseAbs().sum() / den : 0.0;
  };

  Eigen::VectorXcd best = Eigen::VectorXcd::Ones(m);  // projection of delta_0 onto S
  double best_r = ratio(best);
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m);
    e(j) = 1.0;
    const double r = ratio(e);
    if (r > best_r) best_r = r, best = e;
  }
  auto rng = stream_rng(seed, 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const Eigen::VectorXcd c = complex_normal(rng, m);
    const double r = ratio(c);
    if (r > best_r) best_r = r, best = c;
  }
  double step = 0.5 * best.norm() / std::sqrt(static_cast<double>(m));
  std::size_t rejects = 0;
  for (std::size_t k = 0; k < ascent_steps && step > 1e-12; ++k) {
    const Eigen::VectorXcd c = best + step * complex_normal(rng, m);
    const double r = ratio(c);
    if (r > best_r) {
      best_r = r;
      best = c;
      rejects = 0;
    } else if (++rejects >= 20) {
      step *= 0.5;
      rejects = 0;
    }
  }

  ContractionEstimate out;
  out.estimate = best_r;
  const Eigen::VectorXcd f = b * best;
  out.best = GroupFunction(g, std::vector<cplx>(f.data(), f.data() + f.size()));
  return out;
}

TransferReport verify_main_theorem(const RepresentationModel& T, const SpectrumSet& S, const GroupFunction& nu,
                                   const FiniteMeasure& mu, std::uint64_t seed, std::size_t samples) {
  require_group(nu.group(), T.group(), "verify_main_theorem");
  require_dim(mu, T, "verify_main_theorem");
  const auto spec = spec_fourier(mu, T);
  std::vector<std::size_t> offending;
  for (auto chi : spec.characters) {
    if (!S.contains(chi)) offending.push_back(chi);
  }
  if (!offending.empty()) {
    std::string list;
    for (auto chi : offending) list += (list.empty() ? "" : ",") + std::to_string(chi);
    throw SpectrumPreconditionError(offending, "verify_main_theorem: spec(mu) not inside S; offending characters " + list);
  }

  TransferReport rep;
  rep.group = T.group().name();
  rep.d = T.dim();
  rep.seed = seed;
  const auto consts = sup_path_C(T, samples, seed);
  rep.c = consts.c;
  rep.C_upper = consts.C_upper;
  rep.C_lower = consts.C_lower;
  rep.spec_size = spec.size();
  rep.S_size = S.size();

  GroupFunction scaled = nu;
  if (!S.characters.empty()) {
    rep.hypothesis_estimate = subspace_contraction_estimate(nu, S, samples, seed).estimate;
    if (rep.hypothesis_estimate > 1.0) {
      rep.nu_scale = 1.0 / rep.hypothesis_estimate;
      scaled *= rep.nu_scale;
    }
  }
  const double norm = mu.norm();
  rep.ratio = norm > 0.0 ? t_convolve(scaled, mu, T).norm() / norm : 0.0;
  rep.bound = rep.c * rep.c * rep.c * rep.C_upper;
  rep.pass = rep.ratio <= rep.bound * (1.0 + 1e-9);
  return rep;
}

VectorContraction vector_valued_contraction_check(const FiniteAbelianGroup& g, std::span<const FiniteMeasure> F,
                                                  const GroupFunction& nu, const SpectrumSet& S) {
  require_group(nu.group(), g, "vector_valued_contraction_check");
  if (F.size() != g.order()) throw PreconditionError("vector_valued_contraction_check: need one measure per element");
  const std::size_t d = F.empty() ? 0 : F.front().dim();
  VectorContraction out;
  for (const auto& f : F) {
    if (f.dim() != d) throw PreconditionError("vector_valued_contraction_check: measures differ in dimension");
    out.rhs += f.norm();
  }
  for (std::size_t i = 0; i < d; ++i) {
    GroupFunction path(g);
    for (std::size_t t = 0; t < g.order(); ++t) path[t] = F[t].mass(static_cast<Eigen::Index>(i));
    const auto hat = dft(path);
    for (std::size_t chi = 0; chi < hat.size(); ++chi) {
      if (!S.contains(chi) && std::abs(hat[chi]) > 1e-9 * std::max(out.rhs, 1e-300)) {
        throw PreconditionError("vector_valued_contraction_check: atom " + std::to_string(i) +
                                " has Fourier mass at character " + std::to_string(chi) + " outside S");
      }
    }
  }
  for (std::size_t t = 0; t < g.order(); ++t) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t s = 0; s < g.order(); ++s) {
      if (nu[s] != cplx{}) acc += nu[s] * F[g.sub(t, s)].mass;
    }
    out.lhs += acc.cwiseAbs().sum();
  }
  out.pass = out.lhs <= out.rhs * (1.0 + 1e-9);
  return out;
}

VanishingCheck vanishing_trajectory_check(const FiniteMeasure& mu, const RepresentationModel& T) {
  VanishingCheck out;
  for (std::size_t t = 0; t < T.group().order(); ++t) {
    const auto m = T.apply(t, mu);
    if (m.dim() > 0) out.max_abs = std::max(out.max_abs, m.mass.cwiseAbs().maxCoeff());
  }
  out.norm = mu.norm();
  out.consistent = out.max_abs != 0.0 || out.norm == 0.0;
  return out;
}

TSetWitness t_set_witness(const std::function<bool(std::span<const double>)>& S,
                          std::span<const std::vector<double>> K, double eps, double resolution, int max_halvings) {
  if (K.empty()) throw PreconditionError("t_set_witness: K must be nonempty");
  if (!(eps > 0.0) || !(resolution > 0.0)) throw PreconditionError("t_set_witness: eps and resolution must be positive");
  const std::size_t m = K.front().size();
  for (const auto& k : K) {
    if (k.size() != m) throw PreconditionError("t_set_witness: points of K differ in dimension");
    if (!S(k)) throw PreconditionError("t_set_witness: a point of K is not in S");
  }

  // lattice centers with |w| < eps
  const auto reach = static_cast<long>(std::floor(eps / resolution));
  std::vector<std::vector<double>> centers;
  std::vector<long> idx(m, -reach);
  for (;;) {
    std::vector<double> w(m);
    double r2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = static_cast<double>(idx[i]) * resolution;
      r2 += w[i] * w[i];
    }
    if (std::sqrt(r2) < eps) centers.push_back(std::move(w));
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == reach) idx[--i] = -reach;
    if (i == 0) break;
    ++idx[i - 1];
  }
  auto radius = [](const std::vector<double>& w) { return std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0)); };
  std::stable_sort(centers.begin(), centers.end(), [&](const auto& a, const auto& b) {
    return std::abs(radius(a) - eps / 2) < std::abs(radius(b) - eps / 2) - 1e-15 * eps;
  });

  // probe offsets: sub-lattice q/4 inside the closed unit ball
  std::vector<std::vector<double>> offsets;
  std::vector<int> q(m, -4);
  for (;;) {
    double r2 = 0.0;
    for (int v : q) r2 += v * v;
    if (r2 <= 16.0) {
      std::vector<double> o(m);
      for (std::size_t i = 0; i < m; ++i) o[i] = q[i] / 4.0;
      offsets.push_back(std::move(o));
    }
    std::size_t i = m;
    while (i > 0 && q[i - 1] == 4) q[--i] = -4;
    if (i == 0) break;
    ++q[i - 1];
  }

  TSetWitness out;
  std::vector<double> p(m);
  for (int j = 1; j <= max_halvings; ++j) {
    const double delta = std::ldexp(eps, -j);
    for (const auto& w : centers) {
      if (!(radius(w) + delta < eps)) continue;
      bool ok = true;
      for (const auto& o : offsets) {
        for (const auto& k : K) {
          for (std::size_t i = 0; i < m; ++i) p[i] = w[i] + delta * o[i] + k[i];
          ++out.points_checked;
          if (!S(p)) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (ok) {
        out.found = true;
        out.center = w;
        out.radius = delta;
        return out;
      }
    }
  }
  return out;
}

}  // namespace lpt
