#include "lptrans/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "lptrans/fft.hpp"
#include "lptrans/kernels.hpp"
#include "lptrans/parallel.hpp"
#include "lptrans/rng.hpp"

namespace lpt {

namespace {

std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

std::vector<Atom> canonical(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.index < b.index; });
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    if (!out.empty() && out.back().index == a.index) {
      out.back().mass += a.mass;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

void require_same(const LineMeasure& a, const LineMeasure& b) {
  if (!(a.grid() == b.grid())) throw GridMismatchError("line measures on different grids");
}

std::ptrdiff_t samples_of(const GridSpec& grid, double t, const char* who) {
  const double k = t / grid.spacing;
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9) throw PreconditionError(std::string(who) + ": shift is not a whole number of samples");
  return static_cast<std::ptrdiff_t>(r);
}

std::vector<bool> support_flags(const LineMeasure& mu) {
  std::vector<bool> in(mu.grid().length, false);
  for (std::size_t j = 0; j < in.size(); ++j) in[j] = mu.density[j] != cplx(0.0);
  for (const auto& a : mu.atoms) {
    if (a.mass != cplx(0.0)) in[a.index] = true;
  }
  return in;
}

}  // namespace

LineMeasure::LineMeasure(GridSignal d, std::vector<Atom> a) : density(std::move(d)), atoms(canonical(std::move(a))) {
  for (const auto& at : atoms) {
    if (at.index >= density.size()) throw PreconditionError("atom outside the grid");
  }
}

LineMeasure LineMeasure::zero(const GridSpec& grid) { return LineMeasure(GridSignal(grid)); }

LineMeasure LineMeasure::atom(const GridSpec& grid, std::size_t index, cplx mass) {
  return LineMeasure(GridSignal(grid), {Atom{index, mass}});
}

double LineMeasure::norm() const {
  double s = density.l1_norm();
  for (const auto& a : atoms) s += std::abs(a.mass);
  return s;
}

GridSignal LineMeasure::as_density() const {
  GridSignal out = density;
  const double dx = grid().spacing;
  for (const auto& a : atoms) out[a.index] += a.mass / dx;
  return out;
}

std::vector<cplx> LineMeasure::sample_masses() const {
  std::vector<cplx> w(density.size());
  const double dx = grid().spacing;
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = dx * density[j];
  for (const auto& a : atoms) w[a.index] += a.mass;
  return w;
}

LineMeasure& LineMeasure::operator+=(const LineMeasure& o) {
  require_same(*this, o);
  density += o.density;
  atoms.insert(atoms.end(), o.atoms.begin(), o.atoms.end());
  atoms = canonical(std::move(atoms));
  return *this;
}

LineMeasure& LineMeasure::operator-=(const LineMeasure& o) {
  require_same(*this, o);
  density -= o.density;
  for (const auto& a : o.atoms) atoms.push_back(Atom{a.index, -a.mass});
  atoms = canonical(std::move(atoms));
  return *this;
}

LineMeasure& LineMeasure::operator*=(cplx s) {
  density *= s;
  for (auto& a : atoms) a.mass *= s;
  return *this;
}

LineMeasure translate_by_samples(const LineMeasure& mu, std::ptrdiff_t k) {
  const std::size_t n = mu.density.size();
  GridSignal d(mu.grid());
  for (std::size_t j = 0; j < n; ++j) d[j] = mu.density[wrap(static_cast<std::ptrdiff_t>(j) + k, n)];
  std::vector<Atom> atoms;
  atoms.reserve(mu.atoms.size());
  for (const auto& a : mu.atoms) atoms.push_back(Atom{wrap(static_cast<std::ptrdiff_t>(a.index) - k, n), a.mass});
  return LineMeasure(std::move(d), std::move(atoms));
}

LineMeasure translate_measure(const LineMeasure& mu, double t) {
  return translate_by_samples(mu, samples_of(mu.grid(), t, "translate_measure"));
}

std::vector<GridInterval> random_intervals(const GridSpec& grid, std::size_t count, std::uint64_t seed) {
  auto rng = stream_rng(seed, 0);
  std::uniform_int_distribution<std::size_t> begin(0, grid.length - 1);
  std::uniform_int_distribution<std::size_t> length(1, std::max<std::size_t>(1, grid.length / 4));
  std::vector<GridInterval> out(count);
  for (auto& A : out) {
    A.begin = begin(rng);
    A.length = length(rng);
  }
  return out;
}

std::vector<cplx> trajectory(const LineMeasure& mu, const GridInterval& A, std::size_t stride) {
  const std::size_t n = mu.density.size();
  if (stride == 0 || n % stride != 0) throw PreconditionError("trajectory: stride must divide the grid length");
  if (A.length > n) throw PreconditionError("trajectory: interval longer than the window");
  const auto w = mu.sample_masses();
  std::vector<cplx> prefix(2 * n + 1, 0.0);
  for (std::size_t j = 0; j < 2 * n; ++j) prefix[j + 1] = prefix[j] + w[j % n];
  std::vector<cplx> g(n / stride);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const std::size_t b = (A.begin + k * stride) % n;
    g[k] = prefix[b + A.length] - prefix[b];
  }
  return g;
}

double periodic_defect(std::span<const cplx> g, double scale) {
  const std::size_t n = g.size();
  double power = 0.0;
  for (const auto& v : g) power += std::norm(v);
  const double floor = 1e-14 * scale;
  if (n == 0 || power <= static_cast<double>(n) * floor * floor) return -1.0;
  std::vector<cplx> G(g.begin(), g.end());
  fft::forward(G);
  double total = 0.0;
  double negative = 0.0;
  const std::size_t half = (n + 1) / 2;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = std::norm(G[k]);
    total += e;
    const auto signed_k = k < half ? static_cast<std::ptrdiff_t>(k) : static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(n);
    if (signed_k <= -2) negative += e;
  }
  return negative / total;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

AnalyticReport weakly_analytic_check(const LineMeasure& mu, std::span<const GridInterval> sets, double tol,
                                     std::size_t stride) {
  if (sets.empty()) throw PreconditionError("weakly_analytic_check: no test sets");
  AnalyticReport r;
  r.tol = tol;
  r.defects.assign(sets.size(), -1.0);
  const double scale = mu.norm();
  parallel_for(sets.size(), [&](std::size_t i) {
    const auto g = trajectory(mu, sets[i], stride);
    r.defects[i] = periodic_defect(g, scale);
  });
  r.indeterminate.resize(sets.size());
  bool any = false;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    r.indeterminate[i] = r.defects[i] < 0.0;
    if (!r.indeterminate[i]) {
      any = true;
      r.max_defect = std::max(r.max_defect, r.defects[i]);
    }
  }
  if (!any) {
    r.verdict = Verdict::indeterminate;
  } else {
    r.verdict = r.max_defect <= tol ? Verdict::pass : Verdict::fail;
  }
  return r;
}

double measure_defect(const LineMeasure& mu) {
  const auto F = spectrum(mu.as_density());
  const auto& grid = mu.grid();
  double total = 0.0;
  double negative = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    const double e = std::norm(F[k]);
    total += e;
    if (grid.signed_bin(k) <= -2) negative += e;
  }
  if (total == 0.0) return -1.0;
  return negative / total;
}

MeasureDecomposition lp_decompose_measure(const LineMeasure& mu, int N, const SignPattern& eps, double tol) {
  const auto& grid = mu.grid();
  if (N < 0) throw PreconditionError("lp_decompose_measure: N must be >= 0");
  if (std::ldexp(1.0, N + 1) >= grid.nyquist()) throw NyquistError("lp_decompose_measure: 2^(N+1) reaches Nyquist");
  if (!eps.covers(0, N)) throw PreconditionError("lp_decompose_measure: sign pattern does not cover 0..N");
  const double norm = mu.norm();
  if (norm == 0.0) throw PreconditionError("lp_decompose_measure: zero measure");

  MeasureDecomposition d;
  d.N = N;
  d.defect = measure_defect(mu);
  if (d.defect > tol) {
    throw AnalyticityError("lp_decompose_measure: measure is not analytic (defect " + std::to_string(d.defect) + ")");
  }

  const GridSignal f = mu.as_density();
  std::vector<FrequencyProfile> profiles;
  profiles.push_back(h_profile());
  for (int n = 0; n <= N; ++n) profiles.push_back(mn_profile(n));
  d.pieces.resize(profiles.size());
  parallel_for(profiles.size(), [&](std::size_t i) {
    const auto& p = profiles[i];
    d.pieces[i] = LineMeasure(apply_multiplier(f, [&p](double s) { return cplx(p(s)); }));
  });

  LineMeasure sum = LineMeasure::zero(grid);
  for (const auto& p : d.pieces) {
    d.piece_norms.push_back(p.norm());
    sum += p;
    for (const auto& a : p.atoms) d.atom_mass += std::abs(a.mass);
  }
  d.reconstruction = (sum - mu).norm() / norm;
  d.partial_norm = partial_sum_norm(d, eps);

  d.tail_norms.assign(static_cast<std::size_t>(N) + 1, 0.0);
  LineMeasure tail = LineMeasure::zero(grid);
  for (int N0 = N - 1; N0 >= 0; --N0) {
    tail += d.pieces[static_cast<std::size_t>(N0) + 2];
    d.tail_norms[static_cast<std::size_t>(N0)] = tail.norm();
  }
  return d;
}

double partial_sum_norm(const MeasureDecomposition& d, const SignPattern& eps) {
  if (d.pieces.empty()) return 0.0;
  if (!eps.covers(0, d.N)) throw PreconditionError("partial_sum_norm: sign pattern does not cover 0..N");
  LineMeasure s = d.pieces[0];
  for (int n = 0; n <= d.N; ++n) {
    LineMeasure p = d.pieces[static_cast<std::size_t>(n) + 1];
    p *= static_cast<double>(eps[n]);
    s += p;
  }
  return s.norm();
}

std::vector<double> orbit_continuity_modulus(const LineMeasure& mu, std::span<const double> deltas) {
  std::vector<double> out;
  out.reserve(deltas.size());
  for (double delta : deltas) out.push_back((translate_measure(mu, delta) - mu).norm());
  return out;
}

bool modulus_decreasing(std::span<const double> omega, double factor) {
  if (omega.size() < 2 || !(omega[0] > 0.0)) return false;
  for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
    if (omega[i] < factor * omega[i + 1]) return false;
  }
  return true;
}

MeasureOperator identity_operator() {
  return [](const LineMeasure& mu) { return mu; };
}

MeasureOperator convolution_operator(std::function<cplx(double)> multiplier) {
  return [m = std::move(multiplier)](const LineMeasure& mu) { return LineMeasure(apply_multiplier(mu.as_density(), m)); };
}

MeasureOperator reflection_operator() {
  return [](const LineMeasure& mu) {
    const auto& grid = mu.grid();
    const std::size_t n = grid.length;
    // -x_j = x_{c - j} with c = -2 origin / dx
    const double c = -2.0 * grid.origin / grid.spacing;
    if (std::abs(c - std::round(c)) > 1e-9) throw PreconditionError("reflection: grid not symmetric about a sample");
    const auto ci = static_cast<std::ptrdiff_t>(std::round(c));
    GridSignal d(grid);
    for (std::size_t j = 0; j < n; ++j) d[j] = mu.density[wrap(ci - static_cast<std::ptrdiff_t>(j), n)];
    std::vector<Atom> atoms;
    for (const auto& a : mu.atoms) atoms.push_back(Atom{wrap(ci - static_cast<std::ptrdiff_t>(a.index), n), a.mass});
    return LineMeasure(std::move(d), std::move(atoms));
  };
}

CommutingReport commuting_operator_check(const MeasureOperator& P, const LineMeasure& mu,
                                         std::span<const GridInterval> sets) {
  const auto& grid = mu.grid();
  const std::size_t n = grid.length;
  std::vector<LineMeasure> probes;
  probes.push_back(LineMeasure::atom(grid, 0));
  probes.push_back(LineMeasure::atom(grid, n / 3, cplx(0.6, -0.8)));
  {
    auto rng = stream_rng(0x636f6d6dULL, 0);
    std::normal_distribution<double> nd(0.0, 1.0);
    GridSignal d(grid);
    for (std::size_t j = 0; j < n; ++j) d[j] = cplx(nd(rng), nd(rng));
    probes.emplace_back(std::move(d));
  }
  const std::ptrdiff_t shifts[] = {1, 7, static_cast<std::ptrdiff_t>(n / 5) + 1};

  CommutingReport r;
  for (const auto& nu : probes) {
    const LineMeasure Pnu = P(nu);
    for (auto k : shifts) {
      const LineMeasure lhs = P(translate_by_samples(nu, k));
      const LineMeasure rhs = translate_by_samples(Pnu, k);
      const double size = std::max(lhs.norm(), rhs.norm());
      if (size == 0.0) continue;
      r.probe_residual = std::max(r.probe_residual, (lhs - rhs).norm() / size);
    }
  }
  if (r.probe_residual > 1e-9) {
    throw CommutationError(r.probe_residual, "operator does not commute with translation (residual " +
                                                 std::to_string(r.probe_residual) + ")");
  }

  const auto in = weakly_analytic_check(mu, sets, 1.0);
  r.defect_in = in.max_defect;
  r.tol = 10.0 * std::max(r.defect_in, 1e-15);
  const auto out = weakly_analytic_check(P(mu), sets, r.tol);
  r.defect_out = out.max_defect;
  r.verdict = out.verdict;
  return r;
}

std::pair<FiniteMeasure, FiniteMeasure> lebesgue_decompose(const FiniteMeasure& mu, const FiniteMeasure& sigma) {
  if (mu.dim() != sigma.dim()) throw PreconditionError("lebesgue_decompose: different carriers");
  auto a = FiniteMeasure::zero(mu.dim());
  auto s = FiniteMeasure::zero(mu.dim());
  for (Eigen::Index i = 0; i < mu.mass.size(); ++i) {
    (sigma.mass(i) != cplx(0.0) ? a : s).mass(i) = mu.mass(i);
  }
  return {a, s};
}

std::pair<LineMeasure, LineMeasure> lebesgue_decompose(const LineMeasure& mu, const LineMeasure& sigma) {
  require_same(mu, sigma);
  const auto& grid = mu.grid();
  GridSignal da(grid), ds(grid);
  for (std::size_t j = 0; j < grid.length; ++j) {
    (sigma.density[j] != cplx(0.0) ? da : ds)[j] = mu.density[j];
  }
  std::vector<bool> sigma_atom(grid.length, false);
  for (const auto& a : sigma.atoms) {
    if (a.mass != cplx(0.0)) sigma_atom[a.index] = true;
  }
  std::vector<Atom> aa, as;
  for (const auto& a : mu.atoms) (sigma_atom[a.index] ? aa : as).push_back(a);
  return {LineMeasure(std::move(da), std::move(aa)), LineMeasure(std::move(ds), std::move(as))};
}

double singularity_residual(const FiniteMeasure& a, const FiniteMeasure& b) {
  const double sum = a.norm() + b.norm();
  const double plus = FiniteMeasure(a.mass + b.mass).norm();
  const double minus = FiniteMeasure(a.mass - b.mass).norm();
  return std::max(std::abs(plus - sum), std::abs(minus - sum));
}

double singularity_residual(const LineMeasure& a, const LineMeasure& b) {
  const double sum = a.norm() + b.norm();
  return std::max(std::abs((a + b).norm() - sum), std::abs((a - b).norm() - sum));
}

Verdicts measure_verdicts(const FiniteMeasure& mu, const FiniteMeasure& sigma) {
  Verdicts v;
  v.singular = singularity_residual(mu, sigma) <= 1e-12 * (mu.norm() + sigma.norm());
  v.abs_continuous = true;
  for (Eigen::Index i = 0; i < mu.mass.size(); ++i) {
    if (mu.mass(i) != cplx(0.0) && sigma.mass(i) == cplx(0.0)) v.abs_continuous = false;
  }
  return v;
}

IsometryReport isometry_preservation_check(const Eigen::MatrixXcd& U, const FiniteMeasure& mu,
                                           const FiniteMeasure& sigma) {
  const auto d = static_cast<Eigen::Index>(mu.dim());
  if (U.rows() != d || U.cols() != d || sigma.dim() != mu.dim()) {
    throw PreconditionError("isometry_preservation_check: dimension mismatch");
  }
  auto probe = [&](const Eigen::VectorXcd& v) {
    const double n = v.cwiseAbs().sum();
    if (std::abs((U * v).cwiseAbs().sum() - n) > 1e-12 * n) {
      throw PreconditionError("isometry_preservation_check: U is not an isometry of the total variation norm");
    }
  };
  for (Eigen::Index i = 0; i < d; ++i) probe(Eigen::VectorXcd::Unit(d, i));
  auto rng = stream_rng(0x69736f6dULL, 0);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int k = 0; k < 8; ++k) {
    Eigen::VectorXcd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = cplx(nd(rng), nd(rng));
    probe(v);
  }
  IsometryReport r;
  r.before = measure_verdicts(mu, sigma);
  r.after = measure_verdicts(FiniteMeasure(U * mu.mass), FiniteMeasure(U * sigma.mass));
  r.preserved = r.before == r.after;
  return r;
}

Eigen::MatrixXcd random_phased_permutation(std::size_t d, std::uint64_t seed, std::uint64_t stream) {
  auto rng = stream_rng(seed, stream);
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < d; ++j) U(static_cast<Eigen::Index>(perm[j]), static_cast<Eigen::Index>(j)) = std::polar(1.0, phase(rng));
  return U;
}

FiniteMeasure random_sparse_measure(std::size_t d, double zero_prob, std::uint64_t seed, std::uint64_t stream) {
  auto rng = stream_rng(seed, stream);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto mu = FiniteMeasure::zero(d);
  for (Eigen::Index i = 0; i < mu.mass.size(); ++i) {
    const bool zero = u(rng) < zero_prob;
    const cplx v(nd(rng), nd(rng));
    if (!zero) mu.mass(i) = v;
  }
  return mu;
}

IsometryTrials isometry_trials(std::size_t d, std::size_t trials, std::uint64_t seed) {
  static constexpr double kZeroProb[] = {0.3, 0.5, 0.7};
  IsometryTrials r;
  r.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    const double p = kZeroProb[i % 3];
    const auto U = random_phased_permutation(d, seed, 3 * i);
    const auto mu = random_sparse_measure(d, p, seed, 3 * i + 1);
    const auto sigma = random_sparse_measure(d, p, seed, 3 * i + 2);
    const auto rep = isometry_preservation_check(U, mu, sigma);
    if (!rep.preserved) ++r.mismatches;
    if (rep.before.singular) ++r.singular_pairs;
    if (rep.before.abs_continuous) ++r.ac_pairs;
  }
  return r;
}

QuasiInvariance quasi_invariant_check(const LineMeasure& sigma, std::size_t stride) {
  const std::size_t n = sigma.grid().length;
  if (stride == 0 || n % stride != 0) throw PreconditionError("quasi_invariant_check: stride must divide the grid length");
  QuasiInvariance q;
  const auto in = support_flags(sigma);
  q.degenerate = std::none_of(in.begin(), in.end(), [](bool b) { return b; });
  const auto s = static_cast<std::ptrdiff_t>(stride);
  q.shifts_checked = {s, 3 * s, static_cast<std::ptrdiff_t>((n / 2) / stride * stride)};
  q.pass = true;
  for (auto k : q.shifts_checked) {
    for (std::size_t j = 0; j < n && q.pass; ++j) {
      if (in[j] != in[wrap(static_cast<std::ptrdiff_t>(j) + k, n)]) q.pass = false;
    }
  }
  return q;
}

QuasiInvariance quasi_invariant_check(const FiniteMeasure& sigma, const RepresentationModel& T) {
  if (sigma.dim() != T.dim()) throw PreconditionError("quasi_invariant_check: dimension mismatch");
  QuasiInvariance q;
  const double floor = 1e-10 * sigma.norm();
  q.degenerate = sigma.norm() == 0.0;
  q.pass = true;
  for (std::size_t t = 0; t < T.group().order() && q.pass; ++t) {
    q.shifts_checked.push_back(static_cast<std::ptrdiff_t>(t));
    const auto moved = T.apply(t, sigma);
    for (Eigen::Index i = 0; i < sigma.mass.size(); ++i) {
      if ((std::abs(sigma.mass(i)) > floor) != (std::abs(moved.mass(i)) > floor)) q.pass = false;
    }
  }
  return q;
}

LebesgueAnalyticReport analytic_lebesgue_parts(const LineMeasure& mu, const LineMeasure& sigma,
                                               std::span<const GridInterval> sets, std::size_t stride,
                                               double mu_tol) {
  LebesgueAnalyticReport r;
  r.quasi = quasi_invariant_check(sigma, stride);
  if (!r.quasi.pass) throw PreconditionError("analytic_lebesgue_parts: sigma is not quasi-invariant");
  const auto m = weakly_analytic_check(mu, sets, mu_tol, stride);
  if (!m.pass()) throw AnalyticityError("analytic_lebesgue_parts: mu is not weakly analytic");
  r.defect_mu = m.max_defect;
  r.tol = 10.0 * std::max(r.defect_mu, 1e-15);
  const auto [a, s] = lebesgue_decompose(mu, sigma);
  r.part_a = weakly_analytic_check(a, sets, r.tol, stride);
  r.part_s = weakly_analytic_check(s, sets, r.tol, stride);
  r.s_vacuous = s.norm() == 0.0;
  const bool a_ok = r.part_a.pass() || a.norm() == 0.0;
  const bool s_ok = r.part_s.pass() || r.s_vacuous;
  r.pass = a_ok && s_ok;
  return r;
}

GaussianTrajectory gaussian_counterexample_trajectory(const GridSpec& tgrid) {
  tgrid.validate();
  using boost::math::quadrature::gauss;
  GaussianTrajectory out{GridSignal(tgrid), 0.0};
  for (std::size_t k = 0; k < tgrid.length; ++k) {
    const double t = tgrid.x(k);
    out.g[k] = gauss<double, 30>::integrate([t](double x) { return std::exp(-(x - t) * (x - t)); }, -1.0, 1.0);
  }
  out.defect = periodic_defect(out.g.samples(), out.g.sup_norm());
  return out;
}

void write_trajectory_csv(std::ostream& os, std::span<const double> t, std::span<const cplx> g) {
  if (t.size() != g.size()) throw PreconditionError("write_trajectory_csv: size mismatch");
  const auto old_precision = os.precision(17);
  os << "t,re,im\n";
  for (std::size_t k = 0; k < t.size(); ++k) os << t[k] << ',' << g[k].real() << ',' << g[k].imag() << '\n';
  os.precision(old_precision);
}

}  // namespace lpt
