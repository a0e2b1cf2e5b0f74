#pragma once

// 1+1 dimensional Minkowski causal geometry (units c = 1): point and region
// classification, causal ordering, boosts, and a qubit-chain lattice.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qcausal {

struct Event {
  double t = 0.0;
  double x = 0.0;
};

enum class CausalRelation { SpaceLike, TimeLikeFuture, TimeLikePast, Neither };

std::string to_string(CausalRelation r);
CausalRelation reversed(CausalRelation r);

/// Relation of q as seen from p. TimeLikeFuture means q lies in the
/// time-like future of p. Null separations are Neither with lightlike set.
struct PointClassification {
  CausalRelation relation = CausalRelation::Neither;
  bool lightlike = false;
};

inline constexpr double kLightlikeTol = 1e-12;

PointClassification classify_points(const Event& p, const Event& q);

/// Closed diamond |t - t0| + |x - x0| <= radius.
struct Diamond {
  Event center;
  double radius = 1.0;
};

/// Sites [first, last] of a qubit chain at an integer time step. On periodic
/// models first > last denotes an interval that wraps around the ring.
struct LatticeInterval {
  int time_step = 0;
  std::size_t first = 0;
  std::size_t last = 0;

  friend bool operator==(const LatticeInterval&, const LatticeInterval&) = default;
};

struct LatticeModel {
  std::size_t n_sites = 2;
  std::size_t n_steps = 1;
  bool periodic = false;
  // Propagation speed is fixed at one site per step.

  std::size_t dim() const { return std::size_t{1} << n_sites; }
  /// Site distance, measured around the ring when periodic.
  std::size_t distance(std::size_t a, std::size_t b) const;
  /// Sites covered by an interval, in chain order from `first`.
  std::vector<std::size_t> sites(const LatticeInterval& r) const;
  void validate(const LatticeInterval& r) const;
  /// Every interval at every time step (wrapping ones included when periodic).
  std::vector<LatticeInterval> all_regions() const;
};

using Region = std::variant<Diamond, LatticeInterval>;

/// Raised for configurations outside the strict space-like / time-like
/// dichotomy, such as a Neither-related region pair in a causal ordering.
class CausalConfigurationError : public std::runtime_error {
 public:
  CausalConfigurationError(const std::string& what, std::size_t first, std::size_t second)
      : std::runtime_error(what), pair_{first, second} {}
  std::array<std::size_t, 2> offending_pair() const { return pair_; }

 private:
  std::array<std::size_t, 2> pair_;
};

void validate(const Diamond& d);

/// Relation of b as seen from a, decided in closed form from null coordinates.
CausalRelation classify_regions(const Diamond& a, const Diamond& b);
CausalRelation classify_regions(const LatticeInterval& a, const LatticeInterval& b,
                                const LatticeModel& model);
/// Dispatches on the region kind; lattice regions need a model. Mixed kinds
/// are rejected.
CausalRelation classify_regions(const Region& a, const Region& b,
                                const LatticeModel* model = nullptr);

/// Stable causal order: every region precedes the regions in its time-like
/// future; otherwise input order is kept. Throws CausalConfigurationError on
/// a Neither pair.
std::vector<std::size_t> causal_sort(const std::vector<Region>& regions,
                                     const LatticeModel* model = nullptr);

/// Lorentz boost t' = g(t - v x), x' = g(x - v t). Requires |v| < 1.
Event boost_event(const Event& e, double v);
double lorentz_gamma(double v);

struct PoincareElement {
  double v = 0.0;
  double dt = 0.0;
  double dx = 0.0;
};

/// Boost by v, then translate by (dt, dx).
Event apply(const PoincareElement& g, const Event& e);

/// Lie-algebra check in the affine representation on (t, x, 1).
struct PoincareReport {
  using Mat3 = std::array<std::array<long long, 3>, 3>;
  Mat3 H{};  // time translation
  Mat3 P{};  // space translation
  Mat3 K{};  // boost
  Mat3 KP_commutator{};
  Mat3 KH_commutator{};
  Mat3 HP_commutator{};
  double residual_KP_minus_H = 0.0;
  double residual_KH_minus_P = 0.0;
  double residual_HP = 0.0;

  bool passed() const {
    return residual_KP_minus_H == 0.0 && residual_KH_minus_P == 0.0 && residual_HP == 0.0;
  }
};

PoincareReport poincare_commutator_check();

}  // namespace qcausal
