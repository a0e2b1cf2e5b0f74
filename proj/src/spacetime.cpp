#include "qcausal/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcausal/hilbert.hpp"

namespace qcausal {

std::string to_string(CausalRelation r) {
  switch (r) {
    case CausalRelation::SpaceLike: return "SpaceLike";
    case CausalRelation::TimeLikeFuture: return "TimeLikeFuture";
    case CausalRelation::TimeLikePast: return "TimeLikePast";
    case CausalRelation::Neither: return "Neither";
  }
  return "Neither";
}

CausalRelation reversed(CausalRelation r) {
  if (r == CausalRelation::TimeLikeFuture) return CausalRelation::TimeLikePast;
  if (r == CausalRelation::TimeLikePast) return CausalRelation::TimeLikeFuture;
  return r;
}

PointClassification classify_points(const Event& p, const Event& q) {
  const double dt = q.t - p.t;
  const double dx = std::abs(q.x - p.x);
  if (std::abs(std::abs(dt) - dx) <= kLightlikeTol) return {CausalRelation::Neither, true};
  if (dx > std::abs(dt)) return {CausalRelation::SpaceLike, false};
  return {dt > 0 ? CausalRelation::TimeLikeFuture : CausalRelation::TimeLikePast, false};
}

void validate(const Diamond& d) {
  if (!(d.radius > 0.0) || !std::isfinite(d.radius)) {
    throw ValidationError("diamond radius must be positive and finite");
  }
  if (!std::isfinite(d.center.t) || !std::isfinite(d.center.x)) {
    throw ValidationError("diamond center must be finite");
  }
}

CausalRelation classify_regions(const Diamond& a, const Diamond& b) {
  validate(a);
  validate(b);
  // A diamond is a square box in null coordinates u = t + x, v = t - x, so the
  // separations du, dv of point pairs range over independent intervals.
  const double du = (b.center.t + b.center.x) - (a.center.t + a.center.x);
  const double dv = (b.center.t - b.center.x) - (a.center.t - a.center.x);
  const double reach = a.radius + b.radius;
  const double du_lo = du - reach;
  const double du_hi = du + reach;
  const double dv_lo = dv - reach;
  const double dv_hi = dv + reach;
  if (du_lo > 0 && dv_lo > 0) return CausalRelation::TimeLikeFuture;
  if (du_hi < 0 && dv_hi < 0) return CausalRelation::TimeLikePast;
  if ((du_lo > 0 && dv_hi < 0) || (du_hi < 0 && dv_lo > 0)) return CausalRelation::SpaceLike;
  return CausalRelation::Neither;
}

// ------------------------------------------------------------ LatticeModel

std::size_t LatticeModel::distance(std::size_t a, std::size_t b) const {
  const std::size_t d = a > b ? a - b : b - a;
  return periodic ? std::min(d, n_sites - d) : d;
}

void LatticeModel::validate(const LatticeInterval& r) const {
  if (r.first >= n_sites || r.last >= n_sites) {
    throw ValidationError("lattice interval sites out of range for " + std::to_string(n_sites) +
                          " sites");
  }
  if (r.first > r.last && !periodic) {
    throw ValidationError("lattice interval requires first <= last on a non-periodic chain");
  }
  if (r.time_step < 0 || static_cast<std::size_t>(r.time_step) >= n_steps) {
    throw ValidationError("lattice interval time step " + std::to_string(r.time_step) +
                          " outside [0, " + std::to_string(n_steps) + ")");
  }
}

std::vector<std::size_t> LatticeModel::sites(const LatticeInterval& r) const {
  validate(r);
  std::vector<std::size_t> out;
  std::size_t s = r.first;
  while (true) {
    out.push_back(s);
    if (s == r.last) break;
    s = (s + 1) % n_sites;
  }
  return out;
}

std::vector<LatticeInterval> LatticeModel::all_regions() const {
  std::vector<LatticeInterval> out;
  for (std::size_t step = 0; step < n_steps; ++step) {
    const int tau = static_cast<int>(step);
    for (std::size_t len = 1; len <= n_sites; ++len) {
      const std::size_t starts = (periodic && len < n_sites) ? n_sites : n_sites - len + 1;
      for (std::size_t a = 0; a < starts; ++a) {
        out.push_back({tau, a, (a + len - 1) % n_sites});
      }
    }
  }
  return out;
}

CausalRelation classify_regions(const LatticeInterval& a, const LatticeInterval& b,
                                const LatticeModel& model) {
  const auto sa = model.sites(a);
  const auto sb = model.sites(b);
  const int dtau = b.time_step - a.time_step;
  const std::size_t span = static_cast<std::size_t>(std::abs(dtau));

  bool all_space = true;
  bool all_time = dtau != 0;
  for (std::size_t x : sa) {
    for (std::size_t y : sb) {
      const std::size_t ds = model.distance(x, y);
      if (ds <= span) all_space = false;
      if (ds > span) all_time = false;
    }
  }
  if (all_space) return CausalRelation::SpaceLike;
  if (all_time) return dtau > 0 ? CausalRelation::TimeLikeFuture : CausalRelation::TimeLikePast;
  return CausalRelation::Neither;
}

CausalRelation classify_regions(const Region& a, const Region& b, const LatticeModel* model) {
  if (a.index() != b.index()) throw ValidationError("cannot classify regions of mixed kinds");
  if (const auto* da = std::get_if<Diamond>(&a)) return classify_regions(*da, std::get<Diamond>(b));
  if (model == nullptr) throw ValidationError("lattice regions need a lattice model");
  return classify_regions(std::get<LatticeInterval>(a), std::get<LatticeInterval>(b), *model);
}

std::vector<std::size_t> causal_sort(const std::vector<Region>& regions, const LatticeModel* model) {
  const std::size_t n = regions.size();
  // before[i][j]: region i must precede region j.
  std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const CausalRelation r = classify_regions(regions[i], regions[j], model);
      if (r == CausalRelation::Neither) {
        std::ostringstream os;
        os << "regions " << i << " and " << j
           << " are neither space-like nor time-like separated; no joint-probability "
              "prescription exists for this configuration";
        throw CausalConfigurationError(os.str(), i, j);
      }
      if (r == CausalRelation::TimeLikeFuture) {
        before[i][j] = true;
        ++pending[j];
      } else if (r == CausalRelation::TimeLikePast) {
        before[j][i] = true;
        ++pending[i];
      }
    }
  }
  std::vector<std::size_t> order;
  std::vector<bool> placed(n, false);
  order.reserve(n);
  while (order.size() < n) {
    std::size_t next = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!placed[i] && pending[i] == 0) {
        next = i;
        break;
      }
    }
    // Time-like future is a strict partial order on regions, so this cannot
    // stall; guard anyway against inconsistent classifications.
    if (next == n) throw CausalConfigurationError("causal order contains a cycle", 0, 0);
    placed[next] = true;
    order.push_back(next);
    for (std::size_t j = 0; j < n; ++j) {
      if (before[next][j]) --pending[j];
    }
  }
  return order;
}

// ------------------------------------------------------------------ boosts

double lorentz_gamma(double v) {
  if (!(std::abs(v) < 1.0)) {
    throw ValidationError("boost velocity must satisfy |v| < 1, got " + std::to_string(v));
  }
  return 1.0 / std::sqrt(1.0 - v * v);
}

Event boost_event(const Event& e, double v) {
  const double g = lorentz_gamma(v);
  return {g * (e.t - v * e.x), g * (e.x - v * e.t)};
}

Event apply(const PoincareElement& g, const Event& e) {
  const Event b = boost_event(e, g.v);
  return {b.t + g.dt, b.x + g.dx};
}

namespace {

using Mat3 = PoincareReport::Mat3;

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Mat3 bracket(const Mat3& a, const Mat3& b) {
  const Mat3 ab = multiply(a, b);
  const Mat3 ba = multiply(b, a);
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = ab[i][j] - ba[i][j];
  return out;
}

double distance(const Mat3& a, const Mat3& b) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double d = static_cast<double>(a[i][j] - b[i][j]);
      sum += d * d;
    }
  return std::sqrt(sum);
}

}  // namespace

PoincareReport poincare_commutator_check() {
  PoincareReport r;
  // Acting on column vectors (t, x, 1).
  r.H = {{{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}};
  r.P = {{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}}};
  r.K = {{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}};
  r.KP_commutator = bracket(r.K, r.P);
  r.KH_commutator = bracket(r.K, r.H);
  r.HP_commutator = bracket(r.H, r.P);
  r.residual_KP_minus_H = distance(r.KP_commutator, r.H);
  r.residual_KH_minus_P = distance(r.KH_commutator, r.P);
  r.residual_HP = distance(r.HP_commutator, Mat3{});
  return r;
}

}  // namespace qcausal
