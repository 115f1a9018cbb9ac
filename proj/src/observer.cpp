#include "qcasim/observer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

namespace qcasim::observer {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

}  // namespace

ObserverSpec::ObserverSpec(std::string_view pattern, Event origin)
    : pattern_(pattern), origin_(origin) {
  if (pattern_.empty()) throw ObserverError("observer pattern is empty");
  u_prefix_.assign(pattern_.size() + 1, 0);
  v_prefix_.assign(pattern_.size() + 1, 0);
  for (std::size_t i = 0; i < pattern_.size(); ++i) {
    const char c = pattern_[i];
    if (c == 'R') {
      r_positions_.push_back(static_cast<std::int64_t>(i));
      ++n_right_;
    } else if (c == 'L') {
      l_positions_.push_back(static_cast<std::int64_t>(i));
      ++n_left_;
    } else {
      throw ObserverError("observer pattern may contain only R and L, got '" + pattern_ + "'");
    }
    u_prefix_[i + 1] = n_right_;
    v_prefix_[i + 1] = n_left_;
  }
  if (n_right_ == 0 || n_left_ == 0)
    throw ObserverError("observer pattern '" + pattern_ +
                        "' is lightlike; a timelike chain needs both R and L steps");
}

double ObserverSpec::drift() const {
  return static_cast<double>(n_right_ - n_left_) / static_cast<double>(n_right_ + n_left_);
}

double ObserverSpec::lightcone_ratio() const {
  return static_cast<double>(n_right_) / static_cast<double>(n_left_);
}

double ObserverSpec::doppler_factor() const { return std::sqrt(lightcone_ratio()); }

double ObserverSpec::gamma() const {
  return static_cast<double>(n_right_ + n_left_) /
         (2.0 * std::sqrt(static_cast<double>(n_right_ * n_left_)));
}

std::array<std::int64_t, 2> ObserverSpec::simultaneity_step() const {
  const std::int64_t g = std::gcd(n_right_, n_left_);
  return {n_right_ / g, -n_left_ / g};
}

ObserverSpec ObserverSpec::translated(std::int64_t du, std::int64_t dv) const {
  return ObserverSpec(pattern_, Event{origin_.u + du, origin_.v + dv});
}

Event ObserverSpec::event_at(std::int64_t n) const {
  const std::int64_t q = floor_div(n, period());
  const std::int64_t r = floor_mod(n, period());
  return {origin_.u + q * n_right_ + u_prefix_[r], origin_.v + q * n_left_ + v_prefix_[r]};
}

// The u offset of event n counts R steps with index < n, so it stays <= d
// exactly up to the index of the R step numbered d (0-based).
std::int64_t ObserverSpec::last_index_with_u_at_most(std::int64_t d) const {
  return floor_div(d, n_right_) * period() + r_positions_[floor_mod(d, n_right_)];
}

std::int64_t ObserverSpec::last_index_with_v_at_most(std::int64_t d) const {
  return floor_div(d, n_left_) * period() + l_positions_[floor_mod(d, n_left_)];
}

std::int64_t ObserverSpec::last_at_or_before(const Event& e) const {
  return std::min(last_index_with_u_at_most(e.u - origin_.u),
                  last_index_with_v_at_most(e.v - origin_.v));
}

std::int64_t ObserverSpec::first_at_or_after(const Event& e) const {
  return std::max(last_index_with_u_at_most(e.u - origin_.u - 1),
                  last_index_with_v_at_most(e.v - origin_.v - 1)) +
         1;
}

std::ostream& operator<<(std::ostream& os, const HalfInteger& h) {
  if (h.twice % 2 == 0) return os << h.twice / 2;
  return os << (h.twice < 0 ? "-" : "") << std::abs(h.twice) / 2 << ".5";
}

RadarCoordinate radar_coordinates(const ObserverSpec& spec, const Event& e) {
  RadarCoordinate rc;
  rc.emission = spec.last_at_or_before(e);
  rc.reception = spec.first_at_or_after(e);
  if (rc.emission == rc.reception) {
    rc.side = 0;
  } else {
    // The step leaving the emission event overshoots e. An R step means e
    // shares the emission event's u, so it lies toward smaller x.
    const std::int64_t r = floor_mod(rc.emission, spec.period());
    rc.side = spec.pattern()[static_cast<std::size_t>(r)] == 'R' ? -1 : 1;
  }
  return rc;
}

FoliationLeaf foliation_leaf(const ObserverSpec& spec, HalfInteger t_obs, const Region& window) {
  FoliationLeaf leaf{t_obs, {}};
  for (const Event& e : window.events())
    if (radar_coordinates(spec, e).t_obs() == t_obs) leaf.events.push_back(e);
  return leaf;
}

std::map<HalfInteger, std::vector<Event>> foliate(const ObserverSpec& spec, const Region& window) {
  std::map<HalfInteger, std::vector<Event>> leaves;
  for (const Event& e : window.events()) leaves[radar_coordinates(spec, e).t_obs()].push_back(e);
  return leaves;
}

std::int64_t achronality_violations(std::span<const Event> events) {
  std::int64_t count = 0;
  for (const Event& a : events)
    for (const Event& b : events)
      if (causal::causally_precedes(a, b)) ++count;
  return count;
}

CoordinateChart::CoordinateChart(ObserverSpec observer, double scale)
    : observer_(std::move(observer)), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ObserverError("chart scale must be positive and finite");
}

CoordinateChart CoordinateChart::canonical(const ObserverSpec& observer) {
  const double nr = static_cast<double>(observer.n_right());
  const double nl = static_cast<double>(observer.n_left());
  return CoordinateChart(observer, std::sqrt(nr * nl) / (nr + nl));
}

Eigen::Vector2d CoordinateChart::coordinates(const Event& e) const {
  const RadarCoordinate rc = radar_coordinates(observer_, e);
  return scale_ * Eigen::Vector2d(rc.t_obs().value(), rc.x_obs().value());
}

CoordinateChart coarse_grain(const CoordinateChart& chart, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw ObserverError("coarse-graining factor must be positive and finite");
  return CoordinateChart(chart.observer(), chart.scale() * factor);
}

std::vector<BoostSample> boost_map(const CoordinateChart& a, const CoordinateChart& b,
                                   const Region& window) {
  std::vector<BoostSample> out;
  out.reserve(window.size());
  for (const Event& e : window.events()) out.push_back({e, a.coordinates(e), b.coordinates(e)});
  return out;
}

LorentzFit fit_lorentz(std::span<const BoostSample> samples) {
  if (samples.size() < 8)
    throw InsufficientData("boost fit needs at least 8 samples, got " +
                           std::to_string(samples.size()));

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& s : samples) mean += s.a;
  mean /= static_cast<double>(samples.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& s : samples) cov += (s.a - mean) * (s.a - mean).transpose();
  const double tr = cov.trace();
  if (!(tr > 0.0) || cov.determinant() <= 1e-12 * tr * tr)
    throw InsufficientData("boost fit samples are collinear in the source chart");

  // Unknowns: p = gamma, q = gamma beta, offset_t, offset_x.
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd m(2 * n, 4);
  Eigen::VectorXd rhs(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    m.row(2 * i) << s.a(0), -s.a(1), 1.0, 0.0;
    m.row(2 * i + 1) << s.a(1), -s.a(0), 0.0, 1.0;
    rhs(2 * i) = s.b(0);
    rhs(2 * i + 1) = s.b(1);
  }
  const Eigen::Vector4d sol = m.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd resid = m * sol - rhs;

  LorentzFit fit;
  fit.gamma = sol(0);
  fit.beta = sol(1) / sol(0);
  fit.offset_t = sol(2);
  fit.offset_x = sol(3);
  fit.max_residual = resid.cwiseAbs().maxCoeff();
  fit.samples = samples.size();
  return fit;
}

Eigen::Matrix2d analytic_boost(double beta) {
  if (!(std::abs(beta) < 1.0)) throw ObserverError("boost velocity must satisfy |beta| < 1");
  const double g = 1.0 / std::sqrt(1.0 - beta * beta);
  Eigen::Matrix2d b;
  b << g, -g * beta, -g * beta, g;
  return b;
}

double compose_velocities(double beta1, double beta2) {
  return (beta1 + beta2) / (1.0 + beta1 * beta2);
}

ClockReading einstein_clock(const ObserverSpec& spec, std::int64_t separation) {
  if (separation < 1) throw ObserverError("clock separation must be at least 1");
  const auto step = spec.simultaneity_step();
  const ObserverSpec mirror_b = spec.translated(separation * step[0], separation * step[1]);
  const Event start = spec.event_at(0);

  ClockReading r;
  r.separation = separation;
  // Outbound light keeps v fixed; the first event of B at that v lies on it.
  r.reflection = mirror_b.event_at(mirror_b.first_at_or_after(Event{mirror_b.origin().u, start.v}));
  // The return keeps u fixed; every event of A from index 0 on has v >= start.v.
  r.return_index = spec.first_at_or_after(Event{r.reflection.u, spec.origin().v});
  r.return_event = spec.event_at(r.return_index);
  r.ticktac_chain_events = floor_div(r.return_index + spec.period() - 1, spec.period()) * spec.period();
  r.ticktac_events = 2 * (spec.event_at(r.ticktac_chain_events).u - start.u);
  r.mirror_proper_length = static_cast<double>(separation) * 2.0 *
                           std::sqrt(static_cast<double>(-step[0] * step[1]));
  r.doppler_factor = spec.doppler_factor();
  r.gamma = spec.gamma();
  return r;
}

std::int64_t equivalent_separation(const ObserverSpec& target, const ObserverSpec& reference,
                                   std::int64_t reference_separation) {
  if (reference_separation < 1) throw ObserverError("clock separation must be at least 1");
  auto step_length = [](const ObserverSpec& s) {
    const auto st = s.simultaneity_step();
    return 2.0 * std::sqrt(static_cast<double>(-st[0] * st[1]));
  };
  const double exact =
      static_cast<double>(reference_separation) * step_length(reference) / step_length(target);
  const double rounded = std::round(exact);
  if (rounded < 1.0 || std::abs(exact - rounded) > 1e-9) {
    std::ostringstream msg;
    msg << "no integer separation for observer " << target.pattern() << " matches "
        << reference_separation << " steps of " << reference.pattern() << " (would be " << exact
        << ")";
    throw ObserverError(msg.str());
  }
  return static_cast<std::int64_t>(rounded);
}

void write_foliation_svg(std::ostream& os, const ObserverSpec& spec, const Region& window,
                         const std::map<HalfInteger, std::vector<Event>>& leaves,
                         const ClockReading* clock) {
  const double cell = 12.0;
  const double xmin = static_cast<double>(window.u_min - window.v_max);
  const double xmax = static_cast<double>(window.u_max - window.v_min);
  const double tmin = static_cast<double>(window.u_min + window.v_min);
  const double tmax = static_cast<double>(window.u_max + window.v_max);
  const double w = (xmax - xmin + 2.0) * cell;
  const double h = (tmax - tmin + 2.0) * cell;
  auto px = [&](const Event& e) { return (static_cast<double>(e.x()) - xmin + 1.0) * cell; };
  auto py = [&](const Event& e) { return (tmax - static_cast<double>(e.t()) + 1.0) * cell; };
  auto polyline = [&](const std::vector<Event>& pts, const char* stroke, double width) {
    os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
       << "\" points=\"";
    for (const Event& e : pts) os << px(e) << ',' << py(e) << ' ';
    os << "\"/>\n";
  };

  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const Event& e : window.events())
    os << "<circle cx=\"" << px(e) << "\" cy=\"" << py(e) << "\" r=\"1.5\" fill=\"#bbb\"/>\n";

  for (const auto& [t, events] : leaves) {
    std::vector<Event> sorted = events;
    std::sort(sorted.begin(), sorted.end(),
              [](const Event& a, const Event& b) { return a.x() < b.x(); });
    polyline(sorted, t.twice % 2 == 0 ? "#4a7ebb" : "#9ab8de", 1.0);
  }

  auto chain_in_window = [&](const ObserverSpec& s) {
    std::vector<Event> pts;
    const std::int64_t lo = s.first_at_or_after(Event{window.u_min, window.v_min});
    for (std::int64_t n = lo;; ++n) {
      const Event e = s.event_at(n);
      if (e.u > window.u_max || e.v > window.v_max) break;
      if (window.contains(e)) pts.push_back(e);
    }
    return pts;
  };
  polyline(chain_in_window(spec), "black", 2.0);

  if (clock != nullptr) {
    const auto step = spec.simultaneity_step();
    const ObserverSpec b =
        spec.translated(clock->separation * step[0], clock->separation * step[1]);
    polyline(chain_in_window(b), "black", 2.0);
    polyline({spec.event_at(0), clock->reflection, clock->return_event}, "#d33", 1.5);
  }
  os << "</svg>\n";
}

}  // namespace qcasim::observer
