#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qcasim/causal_net.hpp"

// Observers as periodic causal chains, and the coordinates they build by
// counting events: two-way radar simultaneity, foliations, coarse-grained
// charts, and the empirical recovery of boosts between two observers.
namespace qcasim::observer {

using causal::Event;
using causal::Region;

class ObserverError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares fit could not be posed (too few or collinear samples).
class InsufficientData : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A periodic causal chain: `pattern` over {R, L} (R increments u, L
/// increments v) repeated in both time directions, with index 0 at `origin`.
class ObserverSpec {
public:
  /// Throws ObserverError unless the pattern is nonempty, uses only R/L and
  /// contains both letters (a timelike chain).
  explicit ObserverSpec(std::string_view pattern, Event origin = {});

  const std::string& pattern() const { return pattern_; }
  Event origin() const { return origin_; }
  std::int64_t period() const { return static_cast<std::int64_t>(pattern_.size()); }
  std::int64_t n_right() const { return n_right_; }
  std::int64_t n_left() const { return n_left_; }

  /// Kinematic drift (nR - nL) / (nR + nL), in units of the causal speed.
  double drift() const;
  /// nR / nL, the squared lightcone scaling of the chain.
  double lightcone_ratio() const;
  /// sqrt(nR / nL): relativistic Doppler factor relative to the lattice rest frame.
  double doppler_factor() const;
  /// (nR + nL) / (2 sqrt(nR nL)): chain events per unit proper time.
  double gamma() const;

  /// Shortest lattice vector (du, dv) along this observer's simultaneity
  /// direction, pointing right: (nR, -nL) / gcd(nR, nL).
  std::array<std::int64_t, 2> simultaneity_step() const;

  ObserverSpec translated(std::int64_t du, std::int64_t dv) const;

  Event event_at(std::int64_t n) const;
  /// Largest n with event_at(n) causally preceding or equal to e.
  std::int64_t last_at_or_before(const Event& e) const;
  /// Smallest n with e causally preceding or equal to event_at(n).
  std::int64_t first_at_or_after(const Event& e) const;

private:
  // Largest n whose u (resp. v) offset from the origin is <= d.
  std::int64_t last_index_with_u_at_most(std::int64_t d) const;
  std::int64_t last_index_with_v_at_most(std::int64_t d) const;

  std::string pattern_;
  Event origin_;
  std::int64_t n_right_ = 0;
  std::int64_t n_left_ = 0;
  std::vector<std::int64_t> r_positions_;  // step index of the k-th R in one period
  std::vector<std::int64_t> l_positions_;
  std::vector<std::int64_t> u_prefix_;     // R steps among the first r steps
  std::vector<std::int64_t> v_prefix_;
};

/// An exact multiple of 1/2, stored as twice its value.
struct HalfInteger {
  std::int64_t twice = 0;

  double value() const { return 0.5 * static_cast<double>(twice); }
  static HalfInteger from_int(std::int64_t n) { return {2 * n}; }

  friend bool operator==(const HalfInteger&, const HalfInteger&) = default;
  friend auto operator<=>(const HalfInteger&, const HalfInteger&) = default;
};

std::ostream& operator<<(std::ostream& os, const HalfInteger& h);

/// Radar coordinates in chain-event counts: the emission index t1 of the last
/// chain event in the causal past of the target, and the reception index t2
/// of the first chain event in its causal future.
struct RadarCoordinate {
  std::int64_t emission = 0;   // t1
  std::int64_t reception = 0;  // t2
  int side = 0;                // +1 right of the observer, -1 left, 0 on the chain

  HalfInteger t_obs() const { return {emission + reception}; }
  HalfInteger x_obs() const { return {side * (reception - emission)}; }
};

RadarCoordinate radar_coordinates(const ObserverSpec& spec, const Event& e);

struct FoliationLeaf {
  HalfInteger t_obs;
  std::vector<Event> events;
};

FoliationLeaf foliation_leaf(const ObserverSpec& spec, HalfInteger t_obs, const Region& window);
/// Every nonempty leaf meeting the window, keyed by radar time.
std::map<HalfInteger, std::vector<Event>> foliate(const ObserverSpec& spec, const Region& window);

/// Number of ordered pairs (a, b) in the set with a strictly preceding b.
std::int64_t achronality_violations(std::span<const Event> events);

/// Radar coordinates of one observer rescaled by a coarse-graining factor.
class CoordinateChart {
public:
  CoordinateChart(ObserverSpec observer, double scale);

  /// Lorentz-normalized chart: scale sqrt(nR nL) / (nR + nL), i.e. half the
  /// proper time per chain event. One chart unit is one tic-tac (two events)
  /// of the rest observer RL, and paired canonical charts have unit
  /// determinant.
  static CoordinateChart canonical(const ObserverSpec& observer);

  const ObserverSpec& observer() const { return observer_; }
  double scale() const { return scale_; }

  /// (t_obs, x_obs) * scale
  Eigen::Vector2d coordinates(const Event& e) const;

private:
  ObserverSpec observer_;
  double scale_;
};

CoordinateChart coarse_grain(const CoordinateChart& chart, double factor);

struct BoostSample {
  Event event;
  Eigen::Vector2d a;  // (t, x) in chart A
  Eigen::Vector2d b;  // (t, x) in chart B
};

std::vector<BoostSample> boost_map(const CoordinateChart& a, const CoordinateChart& b,
                                   const Region& window);

/// Least-squares boost between two charts:
///   tB = gamma (tA - beta xA) + offset_t,  xB = gamma (xA - beta tA) + offset_x.
struct LorentzFit {
  double beta = 0.0;
  double gamma = 1.0;
  double offset_t = 0.0;
  double offset_x = 0.0;
  double max_residual = 0.0;  // largest absolute coordinate residual, chart B units
  std::size_t samples = 0;

  /// gamma^2 (1 - beta^2); 1 for a pure boost.
  double determinant() const { return gamma * gamma * (1.0 - beta * beta); }
};

/// Needs at least 8 samples whose chart-A points are not collinear.
LorentzFit fit_lorentz(std::span<const BoostSample> samples);

/// [[gamma, -gamma beta], [-gamma beta, gamma]] acting on (t, x). |beta| < 1.
Eigen::Matrix2d analytic_boost(double beta);

/// Relativistic composition of two collinear velocities.
double compose_velocities(double beta1, double beta2);

/// One tic-tac of an Einstein light clock built from two copies of an
/// observer chain. Mirror B is mirror A translated by `separation` steps of
/// the observer's simultaneity vector; a light signal leaves A at a clock
/// tick (period boundary), reflects on B and returns, and the tic-tac ends at
/// the first tick of A after the return.
struct ClockReading {
  std::int64_t separation = 0;         // in simultaneity steps of this observer
  Event reflection;                    // where the signal meets mirror B
  Event return_event;                  // where it meets mirror A again
  std::int64_t return_index = 0;       // chain index of return_event
  std::int64_t ticktac_chain_events = 0;  // chain events of A during the tic-tac
  /// Twice the advance of mirror A along u over the tic-tac. This is the
  /// event tally of the light-clock picture: 8 for the rest clock at
  /// separation 2, 16 for the factor-two boost at separation 1.
  std::int64_t ticktac_events = 0;
  double mirror_proper_length = 0.0;   // in rest-lattice event units
  double doppler_factor = 1.0;
  double gamma = 1.0;
};

/// `separation` >= 1.
ClockReading einstein_clock(const ObserverSpec& spec, std::int64_t separation);

/// Separation, in the target observer's simultaneity steps, of a clock with
/// the same proper mirror distance as `reference_separation` steps of the
/// reference observer. Throws ObserverError when that is not an integer.
std::int64_t equivalent_separation(const ObserverSpec& target, const ObserverSpec& reference,
                                   std::int64_t reference_separation);

/// Static spacetime diagram (x horizontal, t upward): leaves as polylines and
/// the clock mirror worldlines and light path highlighted.
void write_foliation_svg(std::ostream& os, const ObserverSpec& spec, const Region& window,
                         const std::map<HalfInteger, std::vector<Event>>& leaves,
                         const ClockReading* clock);

}  // namespace qcasim::observer
