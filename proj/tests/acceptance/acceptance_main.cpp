// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcausal/measurement.hpp"
#include "qcausal/modified_born.hpp"
#include "qcausal/random.hpp"
#include "qcausal/signaling.hpp"
#include "qcausal/spacetime.hpp"

using namespace qcausal;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SpectralObservable computational(std::size_t dim) {
  std::vector<Operator> ps;
  for (std::size_t k = 0; k < dim; ++k) ps.push_back(Operator::outer(StateVector::basis(dim, k).amplitudes()));
  return SpectralObservable::from_projectors(ps);
}

SpectralObservable rotated(const SpectralObservable& o, const Operator& u) {
  std::vector<Operator> ps;
  for (const auto& p : o.projectors()) ps.push_back(Operator(u.matrix() * p.matrix() * u.matrix().adjoint()));
  return SpectralObservable::from_projectors(ps, 1e-10);
}

SpectralObservable lift(const SpectralObservable& o, const std::vector<std::size_t>& sites, std::size_t n) {
  std::vector<Operator> ps;
  for (const auto& p : o.projectors()) ps.push_back(embed_local(p, sites, n));
  return SpectralObservable::from_projectors(ps, 1e-10);
}

/// Random observables on complementary site sets of an n-site chain.
std::pair<SpectralObservable, SpectralObservable> disjoint_pair(Sampler& s, std::size_t n) {
  const std::size_t split = s.integer(1, n - 1);
  std::vector<std::size_t> left, right;
  for (std::size_t k = 0; k < n; ++k) (k < split ? left : right).push_back(k);
  return {lift(s.observable(std::size_t{1} << left.size()), left, n),
          lift(s.observable(std::size_t{1} << right.size()), right, n)};
}

// ------------------------------------------------------------- criteria

Outcome normalization() {
  const auto t0 = Clock::now();
  Sampler s(101);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t dim = s.integer(2, 8);
    const auto d = joint_distribution(s.density_matrix(dim), s.observable(dim), s.observable(dim));
    worst = std::max(worst, std::abs(d.total() - 1.0));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-10 && secs < 5.0,
          "max |sum P(i,j) - 1| = " + fmt("%.2e", worst) + " over 100 triples, dims 2-8, " + fmt("%.3f", secs) + " s"};
}

Outcome commuting_equivalence() {
  Sampler s(102);
  double worst_delta = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t dim = s.integer(3, 6);
    const Operator u = s.unitary(dim);
    const auto fine = rotated(computational(dim), u);
    const std::size_t cut = s.integer(1, dim - 1);
    Matrix lo = Matrix::Zero(dim, dim);
    for (std::size_t b = 0; b < cut; ++b) lo(b, b) = 1.0;
    const auto later = rotated(
        SpectralObservable::from_projectors({Operator(lo), Operator(Matrix::Identity(dim, dim) - lo)}), u);
    Coarsening c{{{0}}};
    std::vector<std::size_t> rest;
    for (std::size_t b = 1; b < dim; ++b) rest.push_back(b);
    c.blocks.push_back(rest);
    const auto r = contextuality_probe(s.density_matrix(dim), fine, coarsen(fine, c), c, later, 0, s.index(2));
    worst_delta = std::max(worst_delta, std::abs(r.delta));
  }
  double worst_cond = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto [a, b] = disjoint_pair(s, s.integer(2, 3));
    const auto rho = s.density_matrix(a.dim());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (rho.expectation(a.projector(i)) < 1e-9) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        // B measured after A, conditioned on A's outcome, versus B measured
        // before A, conditioned on A's (later, space-like) outcome.
        const double time_like = pre_condition_probability(rho, a, b, i, j);
        const double space_like = post_condition_probability(rho, b, a, j, i);
        worst_cond = std::max(worst_cond, std::abs(time_like - space_like));
      }
    }
  }
  return {worst_delta < 1e-12 && worst_cond < 1e-10,
          "max |delta| = " + fmt("%.2e", worst_delta) + " over 100 commuting pairs; max space-like vs pre-conditioning gap = " +
              fmt("%.2e", worst_cond) + " over 100 disjoint-factor pairs"};
}

Outcome contextuality_witness() {
  const double pinned = 0.1333333333333333;  // 1/3 - 1/5
  const double pi = std::acos(-1.0);
  std::vector<Operator> f;
  for (int k = 0; k < 3; ++k) {
    Vector v(3);
    for (int m = 0; m < 3; ++m) v(m) = std::polar(1.0 / std::sqrt(3.0), 2.0 * pi * k * m / 3.0);
    f.push_back(Operator::outer(v));
  }
  const auto later = SpectralObservable::from_projectors(f, 1e-12);
  const auto fine = computational(3);
  const Coarsening c{{{0}, {1, 2}}};
  const auto rho = DensityMatrix::pure(StateVector::normalized(Vector::Ones(3)));
  const auto r = contextuality_probe(rho, fine, coarsen(fine, c), c, later, 0, 0);
  return {std::abs(r.delta) > 0.01 && std::abs(r.delta - pinned) < 1e-9,
          "p_fine = " + fmt("%.16g", r.p_fine) + ", p_coarse = " + fmt("%.16g", r.p_coarse) + ", delta = " +
              fmt("%.16g", r.delta) + " (pinned " + fmt("%.16g", pinned) + ")"};
}

Outcome composition() {
  Sampler s(104);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = s.integer(2, 3);
    const auto [a, b] = disjoint_pair(s, n);
    const PreparationProcedure w{s.density_matrix(a.dim()), {}};
    const auto r = verify_composition_law(w, Instrument("I", a), Instrument("J", b));
    worst = std::max({worst, r.max_probability_discrepancy, r.max_state_discrepancy});
  }
  return {worst < 1e-10, "max discrepancy = " + fmt("%.2e", worst) + " over 100 compatible pairs on 2-3 site chains"};
}

Outcome nonlinear_signal() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    worst = std::max(worst, std::abs(epr_signal(EPRScenario::standard(t)).delta - std::tanh(2 * t)));
  }
  double linear = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    linear = std::max(linear, std::abs(epr_signal(EPRScenario::standard(t, linear_law("sigma_z", pauli::Z()))).delta));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-6 && linear < 1e-10 && secs < 10.0,
          "max |delta - tanh(2t)| = " + fmt("%.2e", worst) + " at t = 0.25, 0.5, 1; linear control |delta| = " +
              fmt("%.2e", linear) + ", " + fmt("%.3f", secs) + " s"};
}

Outcome onset() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> vel(-0.95, 0.95), len(0.1, 10.0), eps(0.0, 0.1);
  double worst_formula = 0.0, worst_round_trip = 0.0;
  const double machine = 8 * std::numeric_limits<double>::epsilon();
  bool ok = true;
  for (int k = 0; k < 50; ++k) {
    const double v = vel(rng), L = len(rng), e = eps(rng);
    const auto r = onset_in_frame(v, L, e);
    const double err = std::max(std::abs(r.shift - v * L), std::abs(r.discrepancy - std::abs(v * L)));
    worst_formula = std::max(worst_formula, err / std::max(1.0, L));
    ok &= err <= machine * std::max(1.0, L);
    for (const auto& [moving, rest] : {std::pair{r.rest_onset_moving, r.rest_onset},
                                       std::pair{r.boosted_prediction_moving, r.boosted_prediction}}) {
      const Event back = boost_event(moving, -v);
      worst_round_trip = std::max({worst_round_trip, std::abs(back.t - rest.t), std::abs(back.x - rest.x)});
    }
  }
  ok &= worst_round_trip < 1e-12;
  return {ok, "max |shift - v L| / max(1, L) = " + fmt("%.2e", worst_formula) + " (bound " + fmt("%.1e", machine) +
                  ") over 50 samples; max boost round-trip error = " + fmt("%.2e", worst_round_trip)};
}

Outcome poincare() {
  const auto r = poincare_commutator_check();
  return {r.residual_KP_minus_H == 0.0,
          "||[K,P] - H|| = " + fmt("%g", r.residual_KP_minus_H) + ", ||[K,H] - P|| = " + fmt("%g", r.residual_KH_minus_P) +
              ", ||[H,P]|| = " + fmt("%g", r.residual_HP)};
}

Outcome gauge() {
  const auto good = verify_gauge_equivalence(random_theory(3, 108), nonlinear_phase_gauge(3, 0.7), 100, 108);
  const auto bad = verify_gauge_equivalence(random_theory(3, 108), broken_gauge(3, 0.7), 100, 108);
  return {good.max_discrepancy < 1e-9 && bad.max_discrepancy > 1e-3 && !bad.passed(),
          "nonlinear phase max discrepancy = " + fmt("%.2e", good.max_discrepancy) +
              " over 100 scenarios; broken inverse flagged with " + fmt("%.3g", bad.max_discrepancy)};
}

Outcome modified_reduction() {
  const LatticeModel m{3, 3, false};
  const auto all = m.all_regions();
  const auto id = make_family("identity", m);
  Sampler s(109);
  double worst = 0.0;
  int chains = 0;
  while (chains < 50) {
    const std::size_t n = s.integer(1, 4);
    std::vector<MeasurementEvent> events;
    std::vector<Region> regions;
    for (std::size_t k = 0; k < n; ++k) {
      const auto r = all[s.index(all.size())];
      const auto sites = m.sites(r);
      const std::size_t local = std::size_t{1} << sites.size();
      events.push_back({r, embed_local(s.projector(local, s.integer(1, local - 1)), sites, m.n_sites)});
      regions.emplace_back(r);
    }
    std::vector<std::size_t> order;
    try {
      order = causal_sort(regions, &m);
    } catch (const CausalConfigurationError&) {
      continue;
    }
    const StateVector psi = s.unit_vector(m.dim());
    std::vector<Operator> ps;
    for (auto it = order.rbegin(); it != order.rend(); ++it) ps.push_back(events[*it].projector);
    worst = std::max(worst, std::abs(modified_sequence_probability(psi, events, id) - sequence_probability(psi, ps)));
    ++chains;
  }

  const LatticeModel wide{4, 2, true};
  bool independent = true;
  for (int k = 0; k < 20; ++k) {
    const StateVector psi = s.unit_vector(wide.dim());
    std::vector<MeasurementEvent> events{{{0, 0, 0}, embed_local(s.projector(2, 1), {0}, 4)},
                                         {{0, 2, 2}, embed_local(s.projector(2, 1), {2}, 4)}};
    const double base = modified_sequence_probability(psi, events, make_family("identity", wide));
    for (const auto& name : family_names()) {
      independent &= modified_sequence_probability(psi, events, make_family(name, wide)) == base;
    }
  }
  return {worst < 1e-12 && independent,
          "identity family max deviation = " + fmt("%.2e", worst) + " on 50 chains; all-space-like configurations " +
              (independent ? "bit-identical" : "NOT identical") + " across all families"};
}

Outcome constraint_verifiers() {
  const auto t0 = Clock::now();
  const auto verdicts = shipped_families(LatticeModel{3, 2, true});
  const double secs = seconds_since(t0);
  bool ok = secs < 30.0;
  std::ostringstream os;
  for (const auto& v : verdicts) {
    const auto& name = v.assignment.family_name;
    int target = 0;
    if (name == "global-coupled") target = 1;
    if (name == "local-unitary") target = 2;
    if (name == "step-phase") target = 3;
    if (name == "identity") {
      for (const auto& r : v.reports) ok &= r.max_residual == 0.0;
      os << "identity residuals 0/0/0: " << (v.all_pass() && ok ? "yes" : "no") << "; ";
    } else if (target != 0) {
      bool exact = true;
      for (const auto& r : v.reports) {
        exact &= r.constraint == target ? (!r.pass() && r.max_residual > 1e-3) : r.pass();
      }
      ok &= exact;
      os << name << " fails only " << target << " (" << fmt("%.3g", v.reports[target - 1].max_residual)
         << "): " << (exact ? "yes" : "no") << "; ";
    } else if (name == "local-phase") {
      const auto& r1 = v.reports[0];
      const bool c1 = r1.max_residual < 1e-9;
      ok &= c1;
      os << "local-phase constraint 1 residual " << fmt("%.3g", r1.max_residual) << " (ray residual "
         << fmt("%.2g", r1.max_ray_residual) << "): " << (c1 ? "passes" : "fails") << "; ";
    }
  }
  os << fmt("%.2f", secs) << " s";
  return {ok, os.str()};
}

Outcome causal_classifier() {
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> c(-6.0, 6.0), r(0.2, 2.0), vel(-0.95, 0.95), pt(-10.0, 10.0);
  auto grid = [](const Diamond& d) {
    std::vector<Event> pts;
    const double u0 = d.center.t + d.center.x, v0 = d.center.t - d.center.x;
    for (int a = 0; a < 100; ++a) {
      // 100 points per diamond: 10 x 10 in null coordinates, corners included
      const double u = u0 - d.radius + 2 * d.radius * (a / 10) / 9.0;
      const double v = v0 - d.radius + 2 * d.radius * (a % 10) / 9.0;
      pts.push_back({0.5 * (u + v), 0.5 * (u - v)});
    }
    return pts;
  };
  int agree = 0;
  for (int k = 0; k < 200; ++k) {
    const Diamond a{{c(rng), c(rng)}, r(rng)}, b{{c(rng), c(rng)}, r(rng)};
    bool space = true, future = true, past = true;
    for (const auto& p : grid(a))
      for (const auto& q : grid(b)) {
        const auto rel = classify_points(p, q).relation;
        space &= rel == CausalRelation::SpaceLike;
        future &= rel == CausalRelation::TimeLikeFuture;
        past &= rel == CausalRelation::TimeLikePast;
      }
    const CausalRelation oracle = space    ? CausalRelation::SpaceLike
                                  : future ? CausalRelation::TimeLikeFuture
                                  : past   ? CausalRelation::TimeLikePast
                                           : CausalRelation::Neither;
    agree += classify_regions(a, b) == oracle;
  }
  int invariant = 0;
  for (int k = 0; k < 500; ++k) {
    const Event p{pt(rng), pt(rng)}, q{pt(rng), pt(rng)};
    const double v = vel(rng);
    invariant += classify_points(boost_event(p, v), boost_event(q, v)).relation == classify_points(p, q).relation;
  }
  return {agree == 200 && invariant == 500,
          "closed form agrees with the 10^4-pair oracle on " + std::to_string(agree) +
              "/200 diamond pairs; boost-invariant on " + std::to_string(invariant) + "/500 samples"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"joint-probability normalization", normalization},
      {"commuting-case equivalence", commuting_equivalence},
      {"contextuality witness", contextuality_witness},
      {"composition law", composition},
      {"nonlinear signal", nonlinear_signal},
      {"onset contradiction", onset},
      {"Poincare commutator", poincare},
      {"gauge triviality", gauge},
      {"modified Born reduction", modified_reduction},
      {"constraint verifiers", constraint_verifiers},
      {"causal classifier", causal_classifier},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
