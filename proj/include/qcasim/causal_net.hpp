#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

// The homogeneous 1+1 dimensional causal network: a lightcone lattice whose
// events are addressed by integer lightcone coordinates (u, v). Every event
// has two causal successors, (u+1, v) and (u, v+1). The network is implicit;
// only bounded regions are ever materialized.
namespace qcasim::causal {

struct Event {
  std::int64_t u = 0;  // right-lightcone coordinate
  std::int64_t v = 0;  // left-lightcone coordinate

  std::int64_t t() const { return u + v; }
  std::int64_t x() const { return u - v; }

  /// Inverse of (t, x); requires t + x even.
  static Event from_tx(std::int64_t t, std::int64_t x);

  friend bool operator==(const Event&, const Event&) = default;
  friend auto operator<=>(const Event&, const Event&) = default;
};

std::ostream& operator<<(std::ostream& os, const Event& e);

enum class Direction { right, left };

using CausalChain = std::vector<Event>;

std::array<Event, 2> successors(const Event& e);
std::array<Event, 2> predecessors(const Event& e);

/// Strict causal order: e2 lies inside or on the forward lightcone of e1.
bool causally_precedes(const Event& e1, const Event& e2);
/// Reflexive closure of causally_precedes.
inline bool causally_precedes_or_equal(const Event& e1, const Event& e2) {
  return e1.u <= e2.u && e1.v <= e2.v;
}

/// Lightlike chain of `steps` events after `origin`, moving one event per step.
CausalChain signal_trace(const Event& origin, Direction direction, std::int64_t steps);

/// True iff every consecutive step increments exactly one of u, v by one.
bool is_causal_chain(std::span<const Event> events);

/// A finite lightcone box [u_min, u_max] x [v_min, v_max] (inclusive).
struct Region {
  std::int64_t u_min = 0, u_max = 0, v_min = 0, v_max = 0;

  /// Box of side 2*half_width centered on the origin: u, v in [-h, h).
  static Region centered(std::int64_t half_width);

  bool contains(const Event& e) const {
    return e.u >= u_min && e.u <= u_max && e.v >= v_min && e.v <= v_max;
  }
  std::int64_t size() const;
  /// Events in u-major order.
  std::vector<Event> events() const;
};

/// CSV with header `u,v,t,x`, LF line endings.
void write_region_csv(std::ostream& os, std::span<const Event> events);

}  // namespace qcasim::causal
