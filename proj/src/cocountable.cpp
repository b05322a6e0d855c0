#include "lptrans/cocountable.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "lptrans/rng.hpp"

namespace lpt {

SymbolicSet::SymbolicSet(Kind k, std::vector<double> p) : kind_(k), points_(std::move(p)) {
  for (double x : points_) {
    if (!std::isfinite(x)) throw PreconditionError("symbolic set: non-finite point");
  }
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

SymbolicSet SymbolicSet::countable(std::vector<double> points) { return SymbolicSet(Kind::countable, std::move(points)); }

SymbolicSet SymbolicSet::cocountable(std::vector<double> excluded) {
  return SymbolicSet(Kind::cocountable, std::move(excluded));
}

SymbolicSet SymbolicSet::parse(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.empty() || text.back() != ')') {
    throw PreconditionError("malformed symbolic set: " + text);
  }
  const std::string head = text.substr(0, open);
  Kind kind;
  if (head == "Countable") {
    kind = Kind::countable;
  } else if (head == "CoCountable") {
    kind = Kind::cocountable;
  } else {
    throw PreconditionError("malformed symbolic set: " + text);
  }
  std::vector<double> pts;
  std::stringstream body(text.substr(open + 1, text.size() - open - 2));
  std::string item;
  while (std::getline(body, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw PreconditionError("malformed symbolic set: " + text);
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw PreconditionError("malformed symbolic set: " + text);
    pts.push_back(v);
  }
  return SymbolicSet(kind, std::move(pts));
}

bool SymbolicSet::contains(double x) const {
  const bool listed = std::binary_search(points_.begin(), points_.end(), x);
  return kind_ == Kind::countable ? listed : !listed;
}

std::string SymbolicSet::str() const {
  std::ostringstream os;
  os << (kind_ == Kind::countable ? "Countable(" : "CoCountable(");
  for (std::size_t i = 0; i < points_.size(); ++i) os << (i ? "," : "") << points_[i];
  os << ')';
  return os.str();
}

double SymbolicCoCountMeasure::norm() const {
  double s = std::abs(diffuse);
  for (const auto& [p, m] : atoms) s += std::abs(m);
  return s;
}

std::complex<double> SymbolicCoCountMeasure::operator()(const SymbolicSet& A) const {
  std::complex<double> v = A.kind() == SymbolicSet::Kind::cocountable ? diffuse : 0.0;
  for (const auto& [p, m] : atoms) {
    if (A.contains(p)) v += m;
  }
  return v;
}

SymbolicCoCountMeasure SymbolicCoCountMeasure::translated(double t) const {
  SymbolicCoCountMeasure out;
  out.diffuse = diffuse;
  for (const auto& [p, m] : atoms) out.atoms[p - t] += m;
  return out;
}

namespace {

SetTrajectory evaluate(const SymbolicCoCountMeasure& mu, const SymbolicSet& A, const std::vector<double>& t_samples,
                       double alpha, bool phased) {
  SetTrajectory r;
  r.set = A.str();
  // Away from t in {p - q}, no moved atom p - t meets a listed point q.
  r.generic = A.kind() == SymbolicSet::Kind::cocountable ? mu.diffuse : 0.0;
  if (A.kind() == SymbolicSet::Kind::cocountable) {
    for (const auto& [p, m] : mu.atoms) r.generic += m;
  }
  std::set<double> exc;
  for (const auto& [p, m] : mu.atoms) {
    for (double q : A.points()) exc.insert(p - q);
  }
  r.exceptional.assign(exc.begin(), exc.end());

  std::vector<double> ts = t_samples;
  ts.insert(ts.end(), r.exceptional.begin(), r.exceptional.end());
  r.samples = ts.size();
  r.nonzero_inside_exceptional = true;
  for (double t : ts) {
    std::complex<double> v = mu.translated(t)(A);
    if (phased) v *= std::polar(1.0, alpha * t);
    if (v != 0.0) {
      ++r.nonzero;
      if (!exc.count(t)) r.nonzero_inside_exceptional = false;
    }
  }
  r.vanishes_ae = r.generic == 0.0;
  return r;
}

}  // namespace

CocountableReport cocountable_demo(const SymbolicCoCountMeasure& mu, const std::vector<SymbolicSet>& sets,
                                   const std::vector<double>& t_samples, double alpha) {
  CocountableReport r;
  r.norm = mu.norm();
  r.alpha = alpha;
  r.all_vanish_ae = true;
  for (const auto& A : sets) {
    r.sets.push_back(evaluate(mu, A, t_samples, alpha, false));
    r.phased.push_back(evaluate(mu, A, t_samples, alpha, true));
    const auto& a = r.sets.back();
    const auto& b = r.phased.back();
    r.all_vanish_ae = r.all_vanish_ae && a.vanishes_ae && a.nonzero_inside_exceptional && b.vanishes_ae &&
                      b.nonzero_inside_exceptional;
  }
  r.not_sup_path_attaining = r.all_vanish_ae && r.norm > 0.0;
  return r;
}

std::vector<SymbolicSet> random_symbolic_sets(std::size_t count, std::size_t max_points, std::uint64_t seed) {
  auto rng = stream_rng(seed, 0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::size_t> size(0, max_points);
  std::uniform_int_distribution<int> point(-5, 5);
  std::vector<SymbolicSet> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> pts(size(rng));
    for (auto& p : pts) p = point(rng);
    out.push_back(coin(rng) ? SymbolicSet::cocountable(pts) : SymbolicSet::countable(pts));
  }
  return out;
}

double gaussian_interval_mass(double a, double b) {
  using boost::math::quadrature::gauss;
  // split into unit panels so the fixed rule stays accurate on long intervals
  const double lo = std::min(a, b), hi = std::max(a, b);
  const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
  const double h = (hi - lo) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    s += gauss<double, 30>::integrate([](double y) { return std::exp(-y * y); }, lo + i * h, lo + (i + 1) * h);
  }
  return b >= a ? s : -s;
}

std::complex<double> ProductModel::trajectory(const SymbolicSet& A, double a, double b, double t) const {
  return first.translated(t)(A) * gaussian_interval_mass(a + t, b + t);
}

ProductModel ProductModel::absolutely_continuous_part() const {
  ProductModel p;
  p.first.diffuse = first.diffuse;
  return p;
}

ProductModel ProductModel::singular_part() const {
  ProductModel p;
  p.first.atoms = first.atoms;
  return p;
}

}  // namespace lpt
