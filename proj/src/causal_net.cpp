#include "qcasim/causal_net.hpp"

#include <stdexcept>

namespace qcasim::causal {

Event Event::from_tx(std::int64_t t, std::int64_t x) {
  if ((t + x) % 2 != 0) throw std::invalid_argument("t + x must be even for a lattice event");
  return {(t + x) / 2, (t - x) / 2};
}

std::ostream& operator<<(std::ostream& os, const Event& e) {
  return os << "(u=" << e.u << ",v=" << e.v << ")";
}

std::array<Event, 2> successors(const Event& e) {
  return {Event{e.u + 1, e.v}, Event{e.u, e.v + 1}};
}

std::array<Event, 2> predecessors(const Event& e) {
  return {Event{e.u - 1, e.v}, Event{e.u, e.v - 1}};
}

bool causally_precedes(const Event& e1, const Event& e2) {
  return causally_precedes_or_equal(e1, e2) && e1 != e2;
}

CausalChain signal_trace(const Event& origin, Direction direction, std::int64_t steps) {
  if (steps < 0) throw std::invalid_argument("signal_trace: steps must be >= 0");
  CausalChain chain;
  chain.reserve(static_cast<std::size_t>(steps) + 1);
  Event e = origin;
  chain.push_back(e);
  for (std::int64_t i = 0; i < steps; ++i) {
    if (direction == Direction::right)
      ++e.u;
    else
      ++e.v;
    chain.push_back(e);
  }
  return chain;
}

bool is_causal_chain(std::span<const Event> events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    const auto du = events[i].u - events[i - 1].u;
    const auto dv = events[i].v - events[i - 1].v;
    if (!((du == 1 && dv == 0) || (du == 0 && dv == 1))) return false;
  }
  return true;
}

Region Region::centered(std::int64_t half_width) {
  if (half_width <= 0) throw std::invalid_argument("Region::centered: half_width must be > 0");
  return {-half_width, half_width - 1, -half_width, half_width - 1};
}

std::int64_t Region::size() const {
  if (u_max < u_min || v_max < v_min) return 0;
  return (u_max - u_min + 1) * (v_max - v_min + 1);
}

std::vector<Event> Region::events() const {
  std::vector<Event> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (auto u = u_min; u <= u_max; ++u)
    for (auto v = v_min; v <= v_max; ++v) out.push_back({u, v});
  return out;
}

void write_region_csv(std::ostream& os, std::span<const Event> events) {
  os << "u,v,t,x\n";
  for (const auto& e : events) os << e.u << ',' << e.v << ',' << e.t() << ',' << e.x() << '\n';
}

}  // namespace qcasim::causal
