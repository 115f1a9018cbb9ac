#include "qcasim/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "qcasim/fock.hpp"
#include "qcasim/gates.hpp"
#include "qcasim/observer.hpp"
#include "qcasim/output.hpp"
#include "qcasim/units.hpp"
#include "qcasim/walk.hpp"

namespace qcasim::recipes {

namespace {

using nlohmann::json;
using output::cell;
using output::CsvTable;
using output::json_number;

// Collects outputs and named pass/fail checks for one run.
class Run {
public:
  Run(const ExperimentDescriptor& d, const RunOptions& o) : desc(d), opts(o) {}

  const ExperimentDescriptor& desc;
  const RunOptions& opts;
  json summary = json::object();
  json checks = json::object();
  RunResult result;

  void check(const std::string& name, bool ok) {
    checks[name] = ok;
    if (!ok) result.failed_checks.push_back(name);
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = opts.out_dir / name;
    output::write_text(path, content);
    result.files.push_back(path);
  }

  void write_json(const std::string& name, const json& j) { write(name, output::dump_json(j)); }
};

walk::WalkParams walk_params(const ExperimentDescriptor& d, std::int64_t default_sites,
                             double default_mu) {
  const std::int64_t n = d.get_int("n_sites", default_sites);
  const double mu = d.get_double("mu", default_mu);
  walk::WalkParams p{n, mu, d.has("zeta") ? d.get_double("zeta", 1.0)
                                          : std::sqrt(std::max(0.0, 1.0 - mu * mu))};
  p.validate();
  return p;
}

double block_unitarity_defect(const walk::WalkParams& p) {
  double worst = 0.0;
  for (const auto& pt : walk::dispersion(p)) {
    const Eigen::Matrix2cd m = walk::momentum_block(p, pt.p);
    worst = std::max(worst, (m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
  }
  return worst;
}

json walk_params_json(const walk::WalkParams& p) {
  return {{"n_sites", p.n_sites}, {"mu", p.mu}, {"zeta", p.zeta}};
}

// --- fig1 -------------------------------------------------------------------

void fig1(Run& r) {
  r.desc.reject_unknown({"rest_pattern", "boosted_pattern", "rest_sep"});
  const observer::ObserverSpec rest(r.desc.get_string("rest_pattern", "RL"));
  const observer::ObserverSpec boosted(r.desc.get_string("boosted_pattern", "RRRRL"));
  const std::int64_t rest_sep = r.desc.get_int("rest_sep", 2);

  const auto rest_clock = observer::einstein_clock(rest, rest_sep);
  const std::int64_t boosted_sep = observer::equivalent_separation(boosted, rest, rest_sep);
  const auto boosted_clock = observer::einstein_clock(boosted, boosted_sep);

  CsvTable events({"clock", "n", "u", "v", "t", "x"});
  for (const auto& [name, spec, clock] :
       {std::tuple{"rest", &rest, &rest_clock}, std::tuple{"boosted", &boosted, &boosted_clock}}) {
    for (std::int64_t n = 0; n <= clock->ticktac_chain_events; ++n) {
      const auto e = spec->event_at(n);
      events.add_row({name, cell(n), cell(e.u), cell(e.v), cell(e.t()), cell(e.x())});
    }
  }
  r.write("clock_events.csv", events.str());

  r.summary["rest_ticktac"] = rest_clock.ticktac_events;
  r.summary["boosted_ticktac"] = boosted_clock.ticktac_events;
  r.summary["rest_sep"] = rest_sep;
  r.summary["boosted_sep"] = boosted_sep;
  r.summary["rest_chain_events"] = rest_clock.ticktac_chain_events;
  r.summary["boosted_chain_events"] = boosted_clock.ticktac_chain_events;
  r.summary["rest_pattern"] = rest.pattern();
  r.summary["boosted_pattern"] = boosted.pattern();
  r.summary["doppler_factor"] = boosted.doppler_factor() / rest.doppler_factor();
  r.summary["gamma"] = boosted.gamma();
  r.summary["mirror_proper_length"] = rest_clock.mirror_proper_length;

  // The tally of the boosted clock scales with the lightcone factor.
  const double ratio = static_cast<double>(boosted_clock.ticktac_events) /
                       static_cast<double>(rest_clock.ticktac_events);
  r.check("ticktac_ratio_equals_doppler",
          std::abs(ratio - boosted.doppler_factor() / rest.doppler_factor()) < 1e-12);
  r.check("equal_mirror_proper_length",
          std::abs(rest_clock.mirror_proper_length - boosted_clock.mirror_proper_length) < 1e-9);

  if (r.opts.svg) {
    for (const auto& [name, spec, clock] : {std::tuple{"rest", &rest, &rest_clock},
                                            std::tuple{"boosted", &boosted, &boosted_clock}}) {
      const causal::Region window{-2, 10, -6, 8};
      std::ostringstream svg;
      observer::write_foliation_svg(svg, *spec, window, observer::foliate(*spec, window), clock);
      r.write(std::string("fig1_") + name + ".svg", svg.str());
    }
  }
}

// --- lorentz_fit ------------------------------------------------------------

void lorentz_fit(Run& r) {
  r.desc.reject_unknown({"observer_a", "observer_b", "half_width", "coarse_a", "coarse_b"});
  const observer::ObserverSpec a(r.desc.get_string("observer_a", "RL"));
  const observer::ObserverSpec b(r.desc.get_string("observer_b", "RRRL"));
  const std::int64_t half = r.desc.get_int("half_width", 16);
  if (half < 2) throw DescriptorError("half_width must be at least 2");
  const auto chart_a =
      observer::coarse_grain(observer::CoordinateChart::canonical(a), r.desc.get_double("coarse_a", 1.0));
  const auto chart_b =
      observer::coarse_grain(observer::CoordinateChart::canonical(b), r.desc.get_double("coarse_b", 1.0));
  const auto window = causal::Region::centered(half);

  const auto samples = observer::boost_map(chart_a, chart_b, window);
  CsvTable mapping({"tA", "xA", "tB", "xB"});
  for (const auto& s : samples) mapping.add_row({cell(s.a(0)), cell(s.a(1)), cell(s.b(0)), cell(s.b(1))});
  r.write("mapping.csv", mapping.str());

  const auto fit = observer::fit_lorentz(samples);
  const double expected = observer::compose_velocities(b.drift(), -a.drift());

  std::int64_t violations = 0, leaves = 0;
  for (const auto* spec : {&a, &b})
    for (const auto& [t, events] : observer::foliate(*spec, window)) {
      violations += observer::achronality_violations(events);
      ++leaves;
    }

  r.summary["beta_hat"] = fit.beta;
  r.summary["gamma_hat"] = fit.gamma;
  r.summary["residual"] = fit.max_residual;
  r.summary["beta_expected"] = expected;
  r.summary["determinant"] = fit.determinant();
  r.summary["samples"] = fit.samples;
  r.summary["leaves"] = leaves;
  r.summary["achronality_violations"] = violations;
  r.summary["scale_a"] = chart_a.scale();
  r.summary["scale_b"] = chart_b.scale();

  r.check("beta_within_0.02", std::abs(fit.beta - expected) <= 0.02);
  r.check("gamma_within_0.02",
          std::abs(fit.beta) < 1.0 &&
              std::abs(fit.gamma - 1.0 / std::sqrt(1.0 - fit.beta * fit.beta)) <= 0.02);
  r.check("residual_at_most_1", fit.max_residual <= 1.0);
  r.check("leaves_achronal", violations == 0);

  if (r.opts.svg) {
    const causal::Region small{-6, 6, -6, 6};
    std::ostringstream svg;
    observer::write_foliation_svg(svg, b, small, observer::foliate(b, small), nullptr);
    r.write("foliation.svg", svg.str());
  }
}

// --- walk recipes -----------------------------------------------------------

void dispersion(Run& r) {
  r.desc.reject_unknown({"n_sites", "mu", "zeta"});
  const auto p = walk_params(r.desc, 64, 0.6);
  CsvTable table({"p", "E", "g"});
  for (const auto& pt : walk::dispersion(p))
    table.add_row({cell(pt.p), cell(pt.energy), cell(pt.group_velocity)});
  r.write("dispersion.csv", table.str());

  const auto g = walk::group_velocity_max(p);
  const double defect = block_unitarity_defect(p);
  r.summary["params"] = walk_params_json(p);
  r.summary["group_velocity_max_analytic"] = g.analytic;
  r.summary["group_velocity_max_measured"] = g.measured;
  r.summary["max_unitarity_defect"] = defect;
  r.check("group_velocity_max_within_resolution",
          std::abs(g.analytic - g.measured) <= 2.0 * std::numbers::pi / static_cast<double>(p.n_sites));
  if (p.is_unitary()) r.check("unitary", defect <= 1e-12);
}

void zitter(Run& r) {
  r.desc.reject_unknown({"n_sites", "mu", "zeta", "p0", "width", "steps"});
  const auto p = walk_params(r.desc, 4096, 0.6);
  const double p0 = r.desc.get_double("p0", 0.0);
  const double width = r.desc.get_double("width", 8.0);
  const std::int64_t steps = r.desc.get_int("steps", 1024);
  const auto z = walk::zitter_frequency(p, p0, width, steps);

  CsvTable series({"t", "<x>", "norm"});
  double defect = 0.0;
  for (std::size_t t = 0; t < z.mean_position.size(); ++t) {
    series.add_row({cell(static_cast<std::int64_t>(t)), cell(z.mean_position[t]), cell(z.norm[t])});
    defect = std::max(defect, std::abs(z.norm[t] - 1.0));
  }
  r.write("timeseries.csv", series.str());

  r.summary["params"] = walk_params_json(p);
  r.summary["zitter_peak"] = z.frequency;
  r.summary["zitter_expected"] = z.expected;
  r.summary["zitter_amplitude"] = z.amplitude;
  r.summary["zitter_detected"] = z.detected;
  r.summary["resolution"] = z.resolution;
  r.summary["max_unitarity_defect"] = defect;
  if (p.mu > 0.0)
    r.check("peak_within_resolution", z.detected && std::abs(z.frequency - z.expected) <= z.resolution);
  else
    r.check("no_oscillation_when_massless", !z.detected);
  if (p.is_unitary()) r.check("norm_preserved", defect <= 1e-9);
}

void front_speed(Run& r) {
  r.desc.reject_unknown({"n_sites", "mu", "zeta", "steps", "eps"});
  const auto p = walk_params(r.desc, 2048, 0.6);
  const std::int64_t steps = r.desc.get_int("steps", 400);
  const double eps = r.desc.get_double("eps", 1e-6);
  const double speed = walk::front_speed(p, steps, eps);

  // Trajectory of the same delta start, for plotting and the exact cone check.
  walk::FieldState s = walk::FieldState::delta(p.n_sites, 0, 1.0, 0.0);
  CsvTable series({"t", "<x>", "norm"});
  CsvTable front({"t", "front", "support"});
  double defect = 0.0;
  bool inside_cone = true;
  for (std::int64_t t = 0; t <= steps; ++t) {
    const double norm = s.norm_squared();
    defect = std::max(defect, std::abs(norm - 1.0));
    series.add_row({cell(t), cell(s.mean_position()), cell(norm)});
    std::int64_t f = 0;
    for (std::int64_t i = 0; i < s.n_sites(); ++i)
      if (s.site_probability(i) > eps) f = std::max(f, s.position(i));
    const std::int64_t support = s.support_radius(0.0);
    inside_cone = inside_cone && support <= t;
    front.add_row({cell(t), cell(f), cell(support)});
    if (t < steps) s = walk::step(s, p);
  }
  r.write("timeseries.csv", series.str());
  r.write("front.csv", front.str());

  r.summary["params"] = walk_params_json(p);
  r.summary["front_speed"] = speed;
  r.summary["group_velocity_max"] = p.zeta;
  r.summary["max_unitarity_defect"] = defect;
  r.check("front_speed_at_most_1", speed <= 1.0);
  r.check("support_inside_light_cone", inside_cone);
  if (p.mu == 0.0) r.check("massless_front_speed_1", speed == 1.0);
  if (p.is_unitary()) r.check("norm_preserved", defect <= 1e-9);
}

void eff_hamiltonian(Run& r) {
  r.desc.reject_unknown({"n_sites", "mu", "zeta", "k_max"});
  const auto p = walk_params(r.desc, 64, 0.6);
  const std::int64_t k_max = r.desc.get_int("k_max", 2);
  if (k_max < 1) throw DescriptorError("k_max must be at least 1");

  CsvTable dev({"k", "deviation"});
  double worst = 0.0;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const double d = walk::effective_hamiltonian_check(p, k);
    worst = std::max(worst, d);
    dev.add_row({cell(k), cell(d)});
  }
  r.write("deviation.csv", dev.str());

  const auto fit = walk::small_parameter_fit(2);
  CsvTable small({"scale", "deviation"});
  for (std::size_t i = 0; i < fit.scale.size(); ++i)
    small.add_row({cell(fit.scale[i]), cell(fit.deviation[i])});
  r.write("small_parameter.csv", small.str());

  r.summary["params"] = walk_params_json(p);
  r.summary["max_deviation"] = worst;
  r.summary["small_parameter_slope"] = fit.slope;
  r.check("closed_form_within_1e-12", worst <= 1e-12);
  r.check("small_parameter_slope_at_least_2.9", fit.slope >= 2.9);
}

// --- gate recipes -----------------------------------------------------------

void bound_scan(Run& r) {
  r.desc.reject_unknown({"mu", "mu_steps", "verify", "seed", "restarts"});
  std::vector<double> mus;
  if (r.desc.has("mu")) {
    mus.push_back(r.desc.get_double("mu", 0.0));
  } else {
    const std::int64_t n = r.desc.get_int("mu_steps", 11);
    if (n < 2) throw DescriptorError("mu_steps must be at least 2");
    for (std::int64_t i = 0; i < n; ++i)
      mus.push_back(static_cast<double>(i) / static_cast<double>(n - 1));
  }
  const bool verify = r.desc.get_int("verify", 1) != 0;
  gates::SolveOptions opts;
  opts.seed = static_cast<std::uint64_t>(r.desc.get_int("seed", 1));
  opts.restarts = static_cast<int>(r.desc.get_int("restarts", 20));

  CsvTable table({"mu", "zeta_max", "n_min"});
  json rows = json::array();
  bool consistent = true;
  for (double mu : mus) {
    const auto b = gates::refraction_bound(mu);
    table.add_row({cell(mu), cell(b.zeta_max), cell(b.n_min)});
    json row = {{"mu", mu},
                {"zeta_max", b.zeta_max},
                {"n_min", json_number(b.n_min)},
                {"printed_bound", b.printed_bound}};
    if (verify) {
      // Probe just inside and just outside the bound where the probe is a valid speed.
      const double inside = b.zeta_max * (1.0 - 1e-6);
      const double outside = b.zeta_max * (1.0 + 1e-3);
      if (inside > 0.0) {
        const auto s = gates::solve_gates(inside, mu, opts);
        row["inside"] = gates::to_json(s);
        consistent = consistent && s.status == gates::SolveStatus::feasible;
      }
      if (outside <= 1.0 && outside > 0.0) {
        const auto s = gates::solve_gates(outside, mu, opts);
        row["outside"] = gates::to_json(s);
        consistent = consistent && s.status == gates::SolveStatus::infeasible &&
                     s.residual >= 1e-4;
      }
    }
    rows.push_back(row);
  }
  r.write("bound_scan.csv", table.str());
  r.summary["rows"] = rows;
  r.summary["seed"] = opts.seed;
  r.summary["restarts"] = opts.restarts;
  if (verify) r.check("solver_matches_bound", consistent);
}

void gates_verify(Run& r) {
  r.desc.reject_unknown({"mu", "zeta", "n_sites", "seed", "restarts"});
  const double mu = r.desc.get_double("mu", 0.6);
  const double zeta = r.desc.get_double("zeta", std::sqrt(std::max(0.0, 1.0 - mu * mu)));
  const std::int64_t n = r.desc.get_int("n_sites", 4);
  if (n < 3 || n > 4) throw DescriptorError("n_sites must be 3 or 4 for the Fock check");
  gates::SolveOptions opts;
  opts.seed = static_cast<std::uint64_t>(r.desc.get_int("seed", 1));
  opts.restarts = static_cast<int>(r.desc.get_int("restarts", 20));

  const auto sol = gates::solve_gates(zeta, mu, opts);
  r.write_json("solver.json", gates::to_json(sol));
  const bool within_bound = zeta * zeta + mu * mu <= 1.0;
  r.summary["solver"] = gates::to_json(sol);
  r.summary["zeta"] = zeta;
  r.summary["mu"] = mu;
  r.check("solver_status_matches_bound",
          within_bound ? sol.status == gates::SolveStatus::feasible
                       : sol.status == gates::SolveStatus::infeasible);

  const double anti = fock::anticommutator_defect(fock::FockSpace(n));
  r.summary["anticommutator_defect"] = anti;
  r.check("anticommutation_within_1e-12", anti <= 1e-12);

  if (sol.status != gates::SolveStatus::feasible) return;

  const auto tiled = gates::tile_gates(sol.a, sol.b, n, gates::Boundary::open);
  json gate_list = json::array();
  for (const auto& g : tiled) gate_list.push_back(gates::to_json(g));
  r.write_json("gates.json", gate_list);

  const auto ring = gates::tile_gates(sol.a, sol.b, n, gates::Boundary::periodic);
  const auto tf = gates::compose_row(ring, gates::Direction::forward, n);
  const auto tb = gates::compose_row(ring, gates::Direction::backward, n);
  const auto row = gates::extract_row_amplitudes(tf, 0);
  const double combination = gates::check_fb_combination(tf, tb, zeta, mu / 2.0);
  r.summary["row"] = {{"eta", {row.eta.real(), row.eta.imag()}},
                      {"zeta", {row.zeta.real(), row.zeta.imag()}},
                      {"gamma", {row.gamma.real(), row.gamma.imag()}},
                      {"norm_squared", row.norm_squared()}};
  r.summary["fb_combination_residual"] = combination;
  r.check("fb_combination_within_1e-8", combination <= 1e-8);
  r.check("row_normalized", std::abs(row.norm_squared() - 1.0) <= 1e-12);

  const auto rep = fock::fock_consistency(tiled, n);
  r.summary["fock"] = {{"conjugation", rep.conjugation},
                       {"vacuum", rep.vacuum},
                       {"vacuum_phase", {rep.vacuum_phase.real(), rep.vacuum_phase.imag()}},
                       {"locality", rep.locality},
                       {"embedding", rep.embedding},
                       {"max", rep.max()}};
  r.check("fock_within_1e-10", rep.max() <= 1e-10);
  r.check("vacuum_within_1e-12", rep.vacuum <= 1e-12);
  r.check("locality_within_1e-12", rep.locality <= 1e-12);
}

// --- units_table ------------------------------------------------------------

struct Particle {
  const char* name;
  double reduced_compton;  // m, CODATA 2018
  double mass;             // kg, CODATA 2018
};

void units_table(Run& r) {
  r.desc.reject_unknown({"chronon"});
  units::Constants c = units::constants_from_environment();
  if (r.desc.has("chronon")) c.chronon = r.desc.get_double("chronon", c.chronon);
  const units::PhysicalUnits u = c.units();
  u.validate();

  const Particle particles[] = {
      {"electron", 3.8615926796e-13, 9.1093837015e-31},
      {"muon", 1.867594306e-15, 1.883531627e-28},
      {"proton", 2.10308910336e-16, 1.67262192369e-27},
  };
  CsvTable table({"particle", "compton_lambda_m", "omega_per_s", "mass_kg", "codata_mass_kg",
                  "relative_error"});
  json rows = json::object();
  double electron_error = 1.0, planck = 0.0;
  for (const auto& p : particles) {
    const double omega = units::omega_from_compton(p.reduced_compton, u);
    const double m = units::mass_from_omega(omega, u);
    const double err = std::abs(m - p.mass) / p.mass;
    if (std::string(p.name) == "electron") electron_error = err;
    planck = std::max(planck, std::abs(m * units::causal_speed(u) * p.reduced_compton / u.hbar - 1.0));
    const double back = units::omega_from_compton(
        units::compton_from_omega(units::omega_from_mass(m, u), u), u);
    planck = std::max(planck, std::abs(back / omega - 1.0));
    table.add_row({p.name, cell(p.reduced_compton), cell(omega), cell(m), cell(p.mass), cell(err)});
    rows[p.name] = {{"omega", omega}, {"mass", m}, {"relative_error", err}};
  }
  table.add_row({"photon", units::format_compton(units::compton_from_omega(0.0, u)), cell(0.0),
                 cell(units::mass_from_omega(0.0, u)), cell(0.0), cell(0.0)});
  r.write("units.csv", table.str());

  r.summary["particles"] = rows;
  r.summary["hbar"] = u.hbar;
  r.summary["c"] = units::causal_speed(u);
  r.summary["chronon"] = u.chronon;
  r.summary["topon"] = u.topon;
  r.summary["planck_round_trip"] = planck;
  r.check("electron_mass_within_1e-6", electron_error <= 1e-6);
  r.check("planck_round_trip_within_1e-12", planck <= 1e-12);
}

struct Entry {
  RecipeInfo info;
  std::function<void(Run&)> body;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"fig1", "Einstein light clock at rest and boosted: tic-tac event tallies"}, fig1},
      {{"lorentz_fit", "radar charts of two observers and the fitted boost between them"},
       lorentz_fit},
      {{"dispersion", "band energy and group velocity of the walk at all lattice momenta"},
       dispersion},
      {{"zitter", "trembling motion of a Gaussian packet and its spectral peak"}, zitter},
      {{"front_speed", "spreading front of a localized state against the light cone"},
       front_speed},
      {{"bound_scan", "maximal speed and refraction index versus mass, with gate-solver probes"},
       bound_scan},
      {{"gates_verify", "solve for A/B gates and verify them against the Fock-space oracle"},
       gates_verify},
      {{"eff_hamiltonian", "coarse-grained generator of the walk against its closed form"},
       eff_hamiltonian},
      {{"units_table", "Compton wavelengths, frequencies and masses in SI units"}, units_table},
  };
  return entries;
}

}  // namespace

const std::vector<RecipeInfo>& list_recipes() {
  static const std::vector<RecipeInfo> infos = [] {
    std::vector<RecipeInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

RunResult run(const ExperimentDescriptor& descriptor, const RunOptions& options) {
  const Entry* entry = nullptr;
  for (const auto& e : registry())
    if (e.info.name == descriptor.recipe()) entry = &e;
  if (entry == nullptr) {
    std::string names;
    for (const auto& e : registry()) names += (names.empty() ? "" : ", ") + e.info.name;
    throw UnknownRecipe("unknown recipe '" + descriptor.recipe() + "'; valid recipes: " + names);
  }

  output::ensure_directory(options.out_dir);
  Run r(descriptor, options);
  entry->body(r);

  r.summary["recipe"] = descriptor.recipe();
  json params = json::object();
  for (const auto& [k, v] : descriptor.params()) params[k] = v;
  r.summary["parameters"] = params;
  r.summary["checks"] = r.checks;
  r.summary["passed"] = r.result.failed_checks.empty();
  r.write_json("summary.json", r.summary);
  r.result.summary = r.summary;
  return r.result;
}

}  // namespace qcasim::recipes
