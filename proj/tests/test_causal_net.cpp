#include "doctest.h"

#include <deque>
#include <set>
#include <sstream>

#include "qcasim/causal_net.hpp"

using namespace qcasim::causal;

namespace {

// Reachability by breadth-first search over successor edges inside a box.
std::set<Event> reachable_from(const Event& start, const Region& box) {
  std::set<Event> seen{start};
  std::deque<Event> queue{start};
  while (!queue.empty()) {
    const Event e = queue.front();
    queue.pop_front();
    for (const Event& s : successors(e))
      if (box.contains(s) && seen.insert(s).second) queue.push_back(s);
  }
  return seen;
}

}  // namespace

TEST_CASE("lightcone and space-time coordinates") {
  const Event e{3, 1};
  CHECK(e.t() == 4);
  CHECK(e.x() == 2);
  CHECK(Event::from_tx(4, 2) == e);
  CHECK(Event::from_tx(-3, 1) == Event{-1, -2});
  CHECK_THROWS_AS(Event::from_tx(1, 0), std::invalid_argument);
}

TEST_CASE("neighbours") {
  const auto s = successors({0, 0});
  CHECK(s[0] == Event{1, 0});
  CHECK(s[1] == Event{0, 1});
  const auto p = predecessors({0, 0});
  CHECK(p[0] == Event{-1, 0});
  CHECK(p[1] == Event{0, -1});
}

TEST_CASE("causal order matches graph reachability") {
  const Region box{-3, 3, -3, 3};
  const auto events = box.events();
  for (const Event& a : events) {
    const auto reach = reachable_from(a, box);
    for (const Event& b : events) {
      CHECK(causally_precedes_or_equal(a, b) == (reach.count(b) == 1));
      CHECK(causally_precedes(a, b) == (reach.count(b) == 1 && a != b));
    }
  }
}

TEST_CASE("causal order is a strict partial order") {
  const auto events = Region{-2, 2, -2, 2}.events();
  for (const Event& a : events) {
    CHECK_FALSE(causally_precedes(a, a));
    for (const Event& b : events) {
      if (causally_precedes(a, b)) CHECK_FALSE(causally_precedes(b, a));
      for (const Event& c : events)
        if (causally_precedes(a, b) && causally_precedes(b, c)) CHECK(causally_precedes(a, c));
    }
  }
}

TEST_CASE("signal traces are lightlike chains") {
  const auto r = signal_trace({1, 2}, Direction::right, 3);
  REQUIRE(r.size() == 4);
  CHECK(r.back() == Event{4, 2});
  CHECK(is_causal_chain(r));
  const auto l = signal_trace({0, 0}, Direction::left, 2);
  CHECK(l.back() == Event{0, 2});
  CHECK(signal_trace({0, 0}, Direction::left, 0).size() == 1);
  CHECK_THROWS_AS(signal_trace({0, 0}, Direction::left, -1), std::invalid_argument);

  const std::vector<Event> jump{{0, 0}, {1, 1}};
  CHECK_FALSE(is_causal_chain(jump));
  const std::vector<Event> back{{0, 0}, {-1, 0}};
  CHECK_FALSE(is_causal_chain(back));
}

TEST_CASE("regions") {
  const auto r = Region::centered(2);
  CHECK(r.size() == 16);
  CHECK(r.events().size() == 16);
  CHECK(r.events().front() == Event{-2, -2});
  CHECK(r.events()[1] == Event{-2, -1});
  CHECK(r.contains({1, 1}));
  CHECK_FALSE(r.contains({2, 0}));
  CHECK(Region{1, 0, 0, 0}.size() == 0);
  CHECK_THROWS_AS(Region::centered(0), std::invalid_argument);

  std::ostringstream os;
  const std::vector<Event> ev{{1, 0}, {0, 2}};
  write_region_csv(os, ev);
  CHECK(os.str() == "u,v,t,x\n1,0,1,1\n0,2,2,-2\n");
}
