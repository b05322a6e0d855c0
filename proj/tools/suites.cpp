#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include <boost/math/quadrature/gauss.hpp>

#include "lptrans/analytic.hpp"
#include "lptrans/cocountable.hpp"
#include "lptrans/kernels.hpp"
#include "lptrans/littlewood_paley.hpp"
#include "lptrans/profile.hpp"
#include "lptrans/rng.hpp"

namespace cli {

using namespace lpt;

namespace {

constexpr double kPi = std::numbers::pi;

GridSpec grid_from(Config& cfg, double delta, double half_window) {
  const double dx = cfg.positive("delta", delta);
  const double w = cfg.positive("window", half_window);
  const double n = 2.0 * w / dx;
  if (n < 16.0 || n > 16777216.0) throw ConfigError("grid must have between 16 and 2^24 samples");
  return GridSpec::centered(dx, w);
}

int blocks(Config& cfg, const char* key, long fallback, long lo, long hi) {
  const long v = cfg.integer(key, fallback);
  if (v < lo || v > hi) throw ConfigError(std::string(key) + " out of range");
  return static_cast<int>(v);
}

std::size_t count(Config& cfg, const char* key, long fallback) {
  const long v = cfg.integer(key, fallback);
  if (v <= 0) throw ConfigError(std::string(key) + " must be positive");
  return static_cast<std::size_t>(v);
}

void require_nyquist(const GridSpec& g, int N) {
  if (std::ldexp(1.0, N + 1) >= g.nyquist()) {
    throw ConfigError("grid Nyquist " + std::to_string(g.nyquist()) + " does not admit blocks up to N = " + std::to_string(N));
  }
}

// (1/2 pi) int p(s) e^{isx} ds, Gauss-Legendre on panels short enough that
// |x| * width <= 1 on each linear piece.
cplx profile_inverse_by_quadrature(const FrequencyProfile& p, double x) {
  using boost::math::quadrature::gauss;
  const auto bp = p.breakpoints();
  cplx acc = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i].s.to_double(), b = bp[i + 1].s.to_double();
    const double va = bp[i].value.convert_to<double>(), vb = bp[i + 1].value.convert_to<double>();
    const auto panels = static_cast<std::size_t>(std::ceil(std::abs(x) * (b - a))) + 1;
    const double w = (b - a) / double(panels);
    for (std::size_t k = 0; k < panels; ++k) {
      const double lo = a + w * double(k);
      auto line = [&](double s) { return va + (vb - va) * (s - a) / (b - a); };
      acc += cplx(gauss<double, 20>::integrate([&](double s) { return line(s) * std::cos(s * x); }, lo, lo + w),
                  gauss<double, 20>::integrate([&](double s) { return line(s) * std::sin(s * x); }, lo, lo + w));
    }
  }
  return acc / (2.0 * kPi);
}

FiniteMeasure random_measure(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXcd m(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cplx(nd(rng), nd(rng));
  return FiniteMeasure(m);
}

GroupFunction random_function(const FiniteAbelianGroup& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  GroupFunction f(g);
  for (std::size_t t = 0; t < g.order(); ++t) f[t] = cplx(nd(rng), nd(rng));
  return f;
}

// Random function whose Fourier support is `count` random characters, so the
// lemma's excluded set is not empty.
GroupFunction sparse_spectrum_function(const FiniteAbelianGroup& g, std::size_t count, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  GroupFunction f(g);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t chi = rng() % g.order();
    const cplx c(nd(rng), nd(rng));
    for (std::size_t t = 0; t < g.order(); ++t) f[t] += c * g.character(chi, t);
  }
  return f;
}

void write_csv_profile(const std::filesystem::path& dir, const std::string& name, const FrequencyProfile& p) {
  auto out = open_output(dir, name);
  write_profile_csv(out, p, 256);
}

void write_csv_signal(const std::filesystem::path& dir, const std::string& name, const GridSignal& f) {
  auto out = open_output(dir, name);
  write_signal_csv(out, f);
}

}  // namespace

FiniteAbelianGroup parse_group(const std::string& text) {
  std::vector<std::size_t> factors;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != 'Z') throw ConfigError("bad group: " + text);
    ++pos;
    std::size_t end = pos;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    if (end == pos) throw ConfigError("bad group: " + text);
    const auto n = std::stoul(text.substr(pos, end - pos));
    if (n < 1 || n > 4096) throw ConfigError("bad group factor in " + text);
    factors.push_back(n);
    pos = end;
    if (pos < text.size()) {
      if (text[pos] != 'x') throw ConfigError("bad group: " + text);
      ++pos;
      if (pos == text.size()) throw ConfigError("bad group: " + text);
    }
  }
  if (factors.empty()) throw ConfigError("bad group: " + text);
  return FiniteAbelianGroup(factors);
}

RepresentationModel load_representation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read representation " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    std::vector<std::size_t> factors = j.at("factors").get<std::vector<std::size_t>>();
    std::vector<Eigen::MatrixXcd> gens;
    for (const auto& m : j.at("generators")) {
      const auto rows = static_cast<Eigen::Index>(m.size());
      const auto cols = rows ? static_cast<Eigen::Index>(m.at(0).size()) : 0;
      Eigen::MatrixXcd M(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = m.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ConfigError("ragged generator matrix in " + path.string());
        for (Eigen::Index c = 0; c < cols; ++c) {
          const auto& e = row.at(static_cast<std::size_t>(c));
          M(r, c) = e.is_array() ? cplx(e.at(0).get<double>(), e.at(1).get<double>()) : cplx(e.get<double>());
        }
      }
      gens.push_back(std::move(M));
    }
    return RepresentationModel::build(FiniteAbelianGroup(factors), std::move(gens));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed representation file " + path.string() + ": " + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("invalid representation: ") + e.what());
  }
}

SuiteReport run_kernels(Config& cfg) {
  SuiteReport r;
  r.suite = "kernels";
  r.seed = cfg.seed();
  const int N = blocks(cfg, "blocks", 10, 0, 20);
  const int M = blocks(cfg, "neg-blocks", 6, 0, 20);
  const std::size_t trials = count(cfg, "trials", 50);
  const double tol = cfg.positive("tol", 1e-6);
  const GridSpec grid = grid_from(cfg, 0.02, 160.0);

  // h + sum_{0..N} m_n: 1 on [-1/2, 2^N], 0 on (-inf, -1]
  {
    const auto p = lp_profile(SignPattern::constant(0, N, 1), N);
    const double span = std::ldexp(1.0, N) + 128.0;
    const int e = static_cast<int>(std::floor(std::log2(span / 1e4)));
    const Dyadic step = Dyadic::pow2(e);
    std::size_t checked = 0, bad = 0;
    for (Dyadic s = Dyadic(-64); s <= Dyadic::pow2(N) + Dyadic(64); s += step) {
      const auto v = p.exact(s);
      if (s >= Dyadic(-1, -1) && s <= Dyadic::pow2(N)) {
        ++checked;
        bad += v != 1;
      } else if (s <= Dyadic(-1)) {
        ++checked;
        bad += v != 0;
      }
    }
    r.details["partition_lp_points"] = checked;
    r.at_most("partition_lp", "exact mismatches of h + sum m_n against 1 on [-1/2, 2^N] and 0 on (-inf, -1]", double(bad), 0.0);
  }
  // sum_{-M..N} m_n: 1 on [2^-M, 2^N]
  {
    const auto p = two_sided_profile(SignPattern::constant(-M, N, 1), M, N);
    std::size_t checked = 0, bad = 0;
    for (int oct = -M; oct < N; ++oct) {
      for (int j = 0; j < 1024; ++j) {
        const Dyadic s = Dyadic::pow2(oct) + Dyadic(j, oct - 10);
        ++checked;
        bad += p.exact(s) != 1;
      }
    }
    ++checked;
    bad += p.exact(Dyadic::pow2(N)) != 1;
    r.details["partition_two_sided_points"] = checked;
    r.at_most("partition_two_sided", "exact mismatches of sum_{-M..N} m_n against 1 on [2^-M, 2^N]", double(bad), 0.0);
  }
  // closed forms against quadrature of the inverse transform
  {
    const auto fp = fejer_profile(1.0);
    const double peak = fejer_time(1.0, 0.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double x = 0.05 + 0.6 * k;
      worst = std::max(worst, std::abs(fejer_time(1.0, x) - profile_inverse_by_quadrature(fp, x)) / peak);
    }
    r.at_most("fejer_closed_form", "max |k_1 closed form - quadrature| / k_1(0) over 100 points", worst, tol);
    worst = 0.0;
    for (int n = 0; n < 4; ++n) {
      const auto mp = mn_profile(n);
      const double mpeak = std::abs(mn_time(n, 0.0));
      for (int k = 0; k < 25; ++k) {
        const double x = 0.05 + 1.3 * k;
        worst = std::max(worst, std::abs(mn_time(n, x) - profile_inverse_by_quadrature(mp, x)) / mpeak);
      }
    }
    r.at_most("mn_closed_form", "max |m_n closed form - quadrature| / |m_n(0)| over 100 points, n = 0..3", worst, tol);
  }
  // |K^_j| <= 1 exactly for random sign patterns
  {
    auto rng = stream_rng(r.seed, 0);
    std::uniform_int_distribution<int> pm(0, M), pn(0, N);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const int m = pm(rng), n = pn(rng);
      const auto eps = SignPattern::random(-m, n, r.seed, t + 1);
      for (const auto& p : split_K_profiles(eps, m, n)) worst = std::max(worst, p.sup_abs().convert_to<double>());
      worst = std::max(worst, two_sided_profile(eps, m, n).sup_abs().convert_to<double>());
    }
    r.at_most("multiplier_sup", "max over random patterns of sup |K^_j| and sup |sum eps_n m^_n| (exact)", worst, 1.0);
  }

  if (auto dir = cfg.csv_dir()) {
    ensure_writable_dir(*dir);
    write_csv_profile(*dir, "profile_h.csv", h_profile());
    for (int n = -M; n <= N; ++n) write_csv_profile(*dir, "profile_m" + std::to_string(n) + ".csv", mn_profile(n));
    write_csv_profile(*dir, "profile_vdp.csv", vdp_profile(N));
    write_csv_profile(*dir, "profile_lp_sum.csv", lp_profile(SignPattern::constant(0, N, 1), N));
    write_csv_signal(*dir, "kernel_fejer1.csv", sample_function(grid, [](double x) { return cplx(fejer_time(1.0, x)); }));
    for (int n = 0; n <= N && std::ldexp(1.0, n + 1) < grid.nyquist(); ++n) {
      write_csv_signal(*dir, "kernel_m" + std::to_string(n) + ".csv", sample_profile_kernel(mn_profile(n), grid));
    }
  }
  r.config = cfg.used();
  return r;
}

SuiteReport run_lp_verify(Config& cfg) {
  SuiteReport r;
  r.suite = "lp-verify";
  r.seed = cfg.seed();
  const int N = blocks(cfg, "blocks", 8, 1, 20);
  const int M = blocks(cfg, "neg-blocks", 6, 0, 20);
  const std::size_t trials = count(cfg, "trials", 50);
  const std::size_t signals = count(cfg, "signals", 5);
  const double tol = cfg.positive("tol", 1e-9);
  const GridSpec grid = grid_from(cfg, 1.0 / 256.0, 64.0);
  require_nyquist(grid, N);
  // signals live below both block ranges, so the N and N - 4 ratios see the same spectrum
  const int N_low = std::max(1, N - 4);
  const double band_hi = std::ldexp(1.0, N_low - 1);
  if (band_hi <= 1.0 + 2.0 * grid.resolution()) throw ConfigError("band [1, 2^(N-5)] too narrow for this window");

  double vdp = 0.0, recon = 0.0, ratio_hi = 0.0, ratio_lo = 0.0;
  json per_signal = json::array();
  for (std::size_t i = 0; i < signals; ++i) {
    const auto f = make_h1_test(r.seed * 1000 + i, 1.0, band_hi, grid);
    const auto v = reconstruct_vdp_identity(f, N);
    const auto hi = unconditional_ratio(f, N, trials, r.seed + i);
    const auto lo = unconditional_ratio(f, N_low, trials, r.seed + 7919 + i);  // independent sign draws
    vdp = std::max(vdp, v.residual / f.l1_norm());
    recon = std::max(recon, hi.reconstruction_residual);
    ratio_hi = std::max(ratio_hi, hi.max_ratio);
    ratio_lo = std::max(ratio_lo, lo.max_ratio);
    json s;
    s["signal"] = i;
    s["vdp_residual"] = v.residual / f.l1_norm();
    s["reconstruction"] = hi.reconstruction_residual;
    s["max_ratio_N"] = hi.max_ratio;
    s["max_ratio_N_low"] = lo.max_ratio;
    per_signal.push_back(std::move(s));
    if (i == 0) {
      if (auto dir = cfg.csv_dir()) {
        ensure_writable_dir(*dir);
        write_csv_signal(*dir, "lp_signal.csv", f);
        write_csv_signal(*dir, "lp_partial_sum.csv", lp_partial_sum(f, SignPattern::random(0, N, r.seed, 0), N));
      }
    }
  }
  r.details["signals"] = std::move(per_signal);
  r.details["N_low"] = N_low;
  r.at_most("vdp_identity", "max ||V*f - (h*f + sum m_n*f)||_1 / ||f||_1 over H1 test signals", vdp, tol);
  r.at_most("reconstruction", "max ||f - (h*f + sum m_n*f)||_1 / ||f||_1", recon, 1e-3);
  r.at_most("ratio_stability", "max sign-pattern ratio at N over the same at N - 4", ratio_hi / ratio_lo, 1.10);

  auto rng = stream_rng(r.seed, 0);
  std::uniform_int_distribution<int> pm(0, M), pn(0, N);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const int m = pm(rng), n = pn(rng);
    for (const auto& p : split_K_profiles(SignPattern::random(-m, n, r.seed, t + 1), m, n)) {
      worst = std::max(worst, p.sup_abs().convert_to<double>());
    }
  }
  r.at_most("kernel_bound", "max sup |K^_j| over random sign patterns (exact)", worst, 1.0);
  r.config = cfg.used();
  return r;
}

SuiteReport run_transfer_verify(Config& cfg) {
  SuiteReport r;
  r.suite = "transfer-verify";
  r.seed = cfg.seed();
  const std::size_t trials = count(cfg, "trials", 100);
  const double tol = cfg.positive("tol", 1e-9);
  const std::string rep_path = cfg.text("rep", "");
  std::optional<RepresentationModel> fixed;
  FiniteAbelianGroup g;
  std::size_t d = 0;
  if (!rep_path.empty()) {
    fixed = load_representation(rep_path);
    g = fixed->group();
    d = fixed->dim();
  } else {
    g = parse_group(cfg.text("group", "Z8"));
    d = count(cfg, "dim", 3);
    if (d > 64) throw ConfigError("dim too large");
  }

  json list = json::array();
  std::size_t passed = 0, spec_mismatch = 0, lemma_fail = 0, lemma_excluded = 0, vector_fail = 0;
  double worst_ratio = 0.0, algebra = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto rng = stream_rng(r.seed, i);
    const auto T = fixed ? *fixed : RepresentationModel::random_similarity(g, d, r.seed, 1000 + i);
    const auto mu = random_measure(d, rng);
    const auto spec = spec_fourier(mu, T);
    SpectrumSet S = spec;
    std::bernoulli_distribution extra(0.3);
    for (std::size_t chi = 0; chi < g.order(); ++chi) {
      if (!S.contains(chi) && extra(rng)) S.characters.push_back(chi);
    }
    std::sort(S.characters.begin(), S.characters.end());
    const auto nu = random_function(g, rng);
    const auto rep = verify_main_theorem(T, S, nu, mu, r.seed + i);
    passed += rep.pass;
    worst_ratio = std::max(worst_ratio, rep.ratio / rep.bound);

    const auto sigma = random_function(g, rng);
    const auto alg = check_algebra(sigma, nu, mu, T);
    algebra = std::max({algebra, alg.commutation / std::max(1.0, alg.scale), alg.associativity / std::max(1.0, alg.scale)});
    spec_mismatch += !(spec_ideal(mu, T) == spec);

    std::vector<std::size_t> E;
    for (std::size_t a = 0; a < d; ++a) {
      if (rng() & 1) E.push_back(a);
    }
    if (E.empty()) E.push_back(0);
    const auto lemma = lemma_ref1_checks(mu, T, nu, sparse_spectrum_function(g, 2, rng), E);
    lemma_fail += !lemma.pass();
    lemma_excluded += lemma.a_excluded_count;

    std::vector<FiniteMeasure> F;
    for (std::size_t t = 0; t < g.order(); ++t) F.push_back(T.apply(t, mu));
    GroupFunction scaled = nu;
    scaled *= rep.nu_scale;
    vector_fail += !vector_valued_contraction_check(g, F, scaled, S).pass;

    json e;
    e["trial"] = i;
    e["group"] = rep.group;
    e["d"] = rep.d;
    e["c"] = rep.c;
    e["C_upper"] = rep.C_upper;
    e["C_lower"] = rep.C_lower;
    e["spec_size"] = rep.spec_size;
    e["S_size"] = rep.S_size;
    e["hypothesis_estimate"] = rep.hypothesis_estimate;
    e["nu_scale"] = rep.nu_scale;
    e["ratio"] = rep.ratio;
    e["bound"] = rep.bound;
    e["pass"] = rep.pass;
    list.push_back(std::move(e));
  }
  r.details["trials"] = std::move(list);
  r.at_least("transference_bound", "trials with ||nu *_T mu|| <= c^3 C_upper ||mu|| (1 + 1e-9)", double(passed), double(trials));
  r.at_most("transference_margin", "max ratio / (c^3 C_upper)", worst_ratio, 1.0 + tol);
  r.at_most("algebra", "max relative commutation/associativity residual", algebra, 1e-10);
  r.at_most("spectrum_methods", "instances where spec_fourier != spec_ideal", double(spec_mismatch), 0.0);
  r.details["lemma_excluded_characters"] = lemma_excluded;
  r.at_most("lemma_checks", "instances failing the finite lemma checks (a), (b), (c)", double(lemma_fail), 0.0);
  r.at_most("vector_contraction", "instances failing the vector-valued contraction check", double(vector_fail), 0.0);
  r.config = cfg.used();
  return r;
}

SuiteReport run_analytic_demo(Config& cfg) {
  SuiteReport r;
  r.suite = "analytic-demo";
  r.seed = cfg.seed();
  const int N = blocks(cfg, "blocks", 6, 1, 20);
  const std::size_t trials = count(cfg, "trials", 100);
  const std::size_t nsets = count(cfg, "sets", 16);
  const double tol = cfg.positive("tol", 1e-4);
  const GridSpec grid = grid_from(cfg, 0.02, 160.0);
  require_nyquist(grid, N);
  if (grid.length % 2 != 0) throw ConfigError("analytic-demo needs an even grid length");

  const auto sets = random_intervals(grid, nsets, r.seed);
  const auto f = make_h1_test(r.seed, 1.0, std::ldexp(1.0, N - 1), grid);
  const LineMeasure mu(f);

  const auto an = weakly_analytic_check(mu, sets, tol);
  r.at_most("analytic_input", "max trajectory defect of the H1 density", an.max_defect, tol);
  const LineMeasure gauss(sample_function(grid, [](double x) { return cplx(std::exp(-0.5 * x * x)); }));
  r.at_least("gaussian_not_analytic", "max trajectory defect of a real Gaussian density", weakly_analytic_check(gauss, sets, tol).max_defect, 0.25);

  const auto d = lp_decompose_measure(mu, N, SignPattern::constant(0, N, 1), tol);
  r.at_most("decomposition", "||sum of pieces - mu|| / ||mu||", d.reconstruction, 1e-3);
  r.at_most("pieces_have_no_atoms", "total atom mass over all pieces", d.atom_mass, 0.0);
  r.details["piece_norms"] = d.piece_norms;
  r.details["tail_norms"] = d.tail_norms;

  const double a_emp = unconditional_ratio(f, N, trials, r.seed + 1).max_ratio;
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) worst = std::max(worst, partial_sum_norm(d, SignPattern::random(0, N, r.seed + 2, t)));
  r.at_most("unconditional_bound", "max partial-sum norm / (a_emp ||mu||), c = C = 1", worst / (a_emp * mu.norm()), 1.05);

  {
    bool rejected = false;
    try {
      lp_decompose_measure(LineMeasure::atom(grid, grid.length / 2), N, SignPattern::constant(0, N, 1), tol);
    } catch (const AnalyticityError&) {
      rejected = true;
    }
    r.at_least("atom_rejected", "atom input rejected by the analyticity precondition (1 = rejected)", rejected ? 1.0 : 0.0, 1.0);
  }

  // orbit modulus on a fine grid, where delta * top frequency stays small
  {
    const auto fine = GridSpec::centered(1.0 / 256.0, 32.0);
    const LineMeasure m(make_h1_test(r.seed + 3, 1.0, 8.0, fine));
    const auto fd = lp_decompose_measure(m, 4, SignPattern::constant(0, 4, 1), tol);
    std::vector<double> deltas;
    for (int k : {8, 4, 2, 1}) deltas.push_back(k * fine.spacing);
    double min_factor = INFINITY;
    json moduli = json::array();
    for (std::size_t i = 0; i < fd.pieces.size(); ++i) {
      if (fd.piece_norms[i] < 1e-8 * m.norm()) continue;
      const auto w = orbit_continuity_modulus(fd.pieces[i], deltas);
      for (std::size_t k = 0; k + 1 < w.size(); ++k) min_factor = std::min(min_factor, w[k] / w[k + 1]);
      moduli.push_back(w);
    }
    r.details["orbit_moduli"] = std::move(moduli);
    r.at_least("orbit_modulus", "min ratio omega(delta)/omega(delta/2) over pieces, 3 halvings", min_factor, 1.5);
    const auto aw = orbit_continuity_modulus(LineMeasure::atom(fine, 7), deltas);
    r.details["atom_modulus"] = aw;
  }

  {
    const auto bump = commuting_operator_check(convolution_operator([](double s) { return cplx(std::exp(-0.5 * s * s)); }), mu, sets);
    r.at_most("commuting_operator", "defect of P mu for P = Gaussian bump convolution", bump.defect_out, bump.tol);
    double residual = 0.0;
    try {
      commuting_operator_check(reflection_operator(), mu, sets);
    } catch (const CommutationError& e) {
      residual = e.residual();
    }
    r.at_least("reflection_rejected", "commutation probe residual of the reflection", residual, 1e-9);
  }

  {
    GridSignal even(grid);
    for (std::size_t j = 0; j < grid.length; j += 2) even[j] = 1.0;
    const auto parts = analytic_lebesgue_parts(mu, LineMeasure(even), sets, 2, tol);
    r.at_most("lebesgue_parts", "max defect of mu_a, mu_s (sigma on even samples, stride-2 action)",
              std::max(parts.part_a.max_defect, parts.part_s.max_defect), parts.tol);
    // a sampled Gaussian underflows to exact zeros far out; the Cauchy density stays positive
    const auto q_gauss = quasi_invariant_check(LineMeasure(sample_function(grid, [](double x) { return cplx(1.0 / (1.0 + x * x)); })));
    const auto q_atom = quasi_invariant_check(LineMeasure::atom(grid, 0));
    const auto q_zero = quasi_invariant_check(LineMeasure::zero(grid));
    const double wrong = double(!q_gauss.pass) + double(q_atom.pass) + double(!(q_zero.pass && q_zero.degenerate));
    r.at_most("quasi_invariance", "wrong verdicts on Cauchy density (pass), atom (fail), zero (degenerate pass)", wrong, 0.0);
  }

  {
    const auto iso = isometry_trials(6, trials, r.seed);
    r.at_most("isometry_preservation", "verdict mismatches under random phased permutations", double(iso.mismatches), 0.0);
    r.details["isometry_singular_pairs"] = iso.singular_pairs;
    r.details["isometry_ac_pairs"] = iso.ac_pairs;
  }

  if (auto dir = cfg.csv_dir()) {
    ensure_writable_dir(*dir);
    const auto g = trajectory(mu, sets.front());
    std::vector<double> t(g.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = k * grid.spacing;
    auto out = open_output(*dir, "analytic_trajectory.csv");
    write_trajectory_csv(out, t, g);
  }
  r.config = cfg.used();
  return r;
}

SuiteReport run_counterexample(Config& cfg, const std::string& which) {
  if (which != "gaussian" && which != "cocountable" && which != "both") throw ConfigError("unknown counterexample: " + which);
  SuiteReport r;
  r.suite = which == "both" ? "counterexample" : "counterexample-" + which;
  r.seed = cfg.seed();
  const auto dir = cfg.csv_dir();
  if (dir) ensure_writable_dir(*dir);

  if (which != "cocountable") {
    const GridSpec grid = grid_from(cfg, 0.01, 40.0);
    const auto tr = gaussian_counterexample_trajectory(grid);
    r.at_least("gaussian_defect", "analytic defect of g(t) = int_{-1}^{1} exp(-(x-t)^2) dx", tr.defect, 1e-3);
    double asym = 0.0, closed = 0.0;
    const std::size_t n = grid.length;
    for (std::size_t k = 1; k < n; ++k) {
      const double t = grid.x(k);
      // mirror sample of t about 0
      const double m = -t;
      const double idx = (m - grid.origin) / grid.spacing;
      if (std::abs(idx - std::round(idx)) < 1e-6 && idx >= 0 && idx < double(n)) {
        asym = std::max(asym, std::abs(tr.g[k] - tr.g[static_cast<std::size_t>(std::llround(idx))]));
      }
      const double ref = 0.5 * std::sqrt(kPi) * (std::erf(1.0 - t) + std::erf(1.0 + t));
      closed = std::max(closed, std::abs(tr.g[k].real() - ref));
    }
    r.at_most("gaussian_symmetry", "max |g(t) - g(-t)|", asym, 1e-12);
    r.at_most("gaussian_quadrature", "max |g(t) - closed form via erf|", closed, 1e-10);

    ProductModel prod;
    prod.first.diffuse = 1.0;
    prod.first.atoms[0.0] = -1.0;
    const auto line = SymbolicSet::cocountable({});
    double mu_max = 0.0;
    std::vector<cplx> singular(n);
    for (std::size_t k = 0; k < n; ++k) {
      mu_max = std::max(mu_max, std::abs(prod.trajectory(line, -1.0, 1.0, grid.x(k))));
      singular[k] = prod.singular_part().trajectory(line, -1.0, 1.0, grid.x(k));
    }
    r.at_most("product_mu_vanishes", "max |T_t mu(R x [-1,1])| for mu = nu - theta", mu_max, 0.0);
    r.at_least("product_singular_part", "analytic defect of T_t mu_s(R x [-1,1]), mu_s = -theta",
               periodic_defect(singular, 1.0), 1e-3);
    if (dir) {
      std::vector<double> t(n);
      for (std::size_t k = 0; k < n; ++k) t[k] = grid.x(k);
      auto out = open_output(*dir, "gaussian_trajectory.csv");
      write_trajectory_csv(out, t, tr.g.samples());
    }
  }

  if (which != "gaussian") {
    const std::size_t nsets = count(cfg, "sets", 50);
    const double alpha = cfg.real("alpha", 1.0);
    SymbolicCoCountMeasure mu;
    mu.diffuse = 1.0;
    mu.atoms[0.0] = -1.0;
    std::vector<double> ts;
    for (int k = -40; k <= 40; ++k) ts.push_back(0.125 * k + 0.0625);
    auto sets = random_symbolic_sets(nsets, 4, r.seed);
    const auto demo = cocountable_demo(mu, sets, ts, alpha);
    r.at_most("cocountable_norm", "| ||nu - delta_0|| - 2 |", std::abs(demo.norm - 2.0), 0.0);
    std::size_t bad = 0, bad_phase = 0;
    json list = json::array();
    for (std::size_t i = 0; i < demo.sets.size(); ++i) {
      const auto& s = demo.sets[i];
      bad += !(s.vanishes_ae && s.nonzero_inside_exceptional);
      bad_phase += !(demo.phased[i].vanishes_ae && demo.phased[i].nonzero_inside_exceptional);
      json e;
      e["set"] = s.set;
      e["exceptional"] = s.exceptional;
      e["samples"] = s.samples;
      e["nonzero"] = s.nonzero;
      list.push_back(std::move(e));
    }
    r.details["cocountable_sets"] = std::move(list);
    r.at_most("cocountable_vanishing", "sets whose trajectory is nonzero off its finite exceptional set", double(bad), 0.0);
    r.at_most("cocountable_phased", "same for t -> exp(i alpha t) T_t", double(bad_phase), 0.0);
    r.at_least("not_sup_path_attaining", "all trajectories vanish a.e. while ||mu|| > 0 (1 = certified)",
               demo.not_sup_path_attaining ? 1.0 : 0.0, 1.0);
    if (dir) {
      std::vector<double> t;
      std::vector<cplx> g;
      const auto origin = SymbolicSet::countable({0.0});
      for (int k = -16; k <= 16; ++k) {
        t.push_back(0.125 * k);
        g.push_back(mu.translated(t.back())(origin));
      }
      auto out = open_output(*dir, "cocountable_trajectory.csv");
      write_trajectory_csv(out, t, g);
    }
  }
  r.config = cfg.used();
  return r;
}

SuiteReport run_all(const Config& cfg) {
  SuiteReport all;
  all.suite = "all";
  Config seed_cfg = cfg;
  all.seed = seed_cfg.seed();
  all.config = cfg.given();
  auto merge = [&](SuiteReport part) {
    for (auto& a : part.assertions) {
      a.id = part.suite + "." + a.id;
      all.assertions.push_back(std::move(a));
    }
    json d;
    d["config"] = part.config;
    d["pass"] = part.pass();
    if (!part.details.empty()) d["details"] = part.details;
    all.details[part.suite] = std::move(d);
  };
  {
    Config c = cfg;
    merge(run_kernels(c));
  }
  {
    Config c = cfg;
    merge(run_lp_verify(c));
  }
  {
    Config c = cfg;
    merge(run_transfer_verify(c));
  }
  {
    Config c = cfg;
    merge(run_analytic_demo(c));
  }
  {
    Config c = cfg;
    merge(run_counterexample(c, "both"));
  }
  return all;
}

}  // namespace cli
