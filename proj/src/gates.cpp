#include "qcasim/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace qcasim::gates {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kGateTolerance = 1e-12;
constexpr std::int64_t kRingSites = 4;

std::int64_t wrap(std::int64_t n, std::int64_t m) {
  const std::int64_t r = n % m;
  return r < 0 ? r + m : r;
}

Eigen::Matrix2cd gate_from_params(const double* p) { return u2(p[0], p[1], p[2], p[3]); }

// Real and imaginary parts of the fb-combination error at site 0 of a
// periodic ring tiled with the candidate pair.
struct CombinationFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  double zeta;
  double mu;

  int inputs() const { return 8; }
  int values() const { return 4 * kRingSites; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const auto gates = tile_gates(gate_from_params(x.data()), gate_from_params(x.data() + 4),
                                  kRingSites, Boundary::periodic);
    const TransferMatrix tf = compose_row(gates, Direction::forward, kRingSites);
    Eigen::VectorXcd diff = tf.row(0).transpose() - tf.col(0).conjugate();
    diff(2) -= zeta;
    diff(2 * (kRingSites - 1)) += zeta;
    diff(1) -= -2.0 * kI * mu;
    f.resize(values());
    f.head(2 * kRingSites) = diff.real();
    f.tail(2 * kRingSites) = diff.imag();
    return 0;
  }
};

}  // namespace

ModeIndex ModeIndex::from_flat(std::int64_t i) {
  if (i < 0) throw GateError("mode index must be non-negative");
  return {i / 2, i % 2 == 0 ? Chirality::plus : Chirality::minus};
}

std::pair<std::int64_t, std::int64_t> GateSpec::modes(std::int64_t n_sites) const {
  const std::int64_t m = 2 * n_sites;
  if (kind == GateKind::B) return {2 * site, 2 * site + 1};
  return {2 * site + 1, wrap(2 * site + 2, m)};
}

bool is_unitary(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Eigen::MatrixXcd d = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

Eigen::Matrix2cd swap_gate() {
  Eigen::Matrix2cd s;
  s << 0, 1, 1, 0;
  return s;
}

Eigen::Matrix2cd u2(double phase, double theta, double alpha, double beta) {
  Eigen::Matrix2cd m;
  m << std::exp(kI * alpha) * std::cos(theta), std::exp(kI * beta) * std::sin(theta),
      -std::exp(-kI * beta) * std::sin(theta), std::exp(-kI * alpha) * std::cos(theta);
  return std::exp(kI * phase) * m;
}

std::vector<GateSpec> tile_gates(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b,
                                 std::int64_t n_sites, Boundary boundary) {
  if (n_sites < 1) throw GateError("n_sites must be positive");
  std::vector<GateSpec> gates;
  for (std::int64_t n = 0; n < n_sites; ++n) gates.push_back({GateKind::B, n, b});
  const std::int64_t a_count = boundary == Boundary::periodic ? n_sites : n_sites - 1;
  for (std::int64_t n = 0; n < a_count; ++n) gates.push_back({GateKind::A, n, a});
  return gates;
}

TransferMatrix layer_transfer(std::span<const GateSpec> gates, std::int64_t n_sites,
                              Boundary boundary) {
  if (n_sites < 1) throw GateError("n_sites must be positive");
  const std::int64_t m = 2 * n_sites;
  TransferMatrix t = TransferMatrix::Identity(m, m);
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (const GateSpec& g : gates) {
    if (g.site < 0 || g.site >= n_sites)
      throw GateError("gate site " + std::to_string(g.site) + " outside a chain of " +
                      std::to_string(n_sites) + " sites");
    if (g.kind == GateKind::A && g.site == n_sites - 1 && boundary == Boundary::open)
      throw GateError("A gate at the last site needs a periodic chain");
    if (!is_unitary(g.unitary, kGateTolerance))
      throw GateError("gate at site " + std::to_string(g.site) + " is not unitary");
    const auto [i, j] = g.modes(n_sites);
    if (i == j || used[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(j)])
      throw GateError("overlapping gates in one row at site " + std::to_string(g.site));
    used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = true;
    t(i, i) = g.unitary(0, 0);
    t(i, j) = g.unitary(0, 1);
    t(j, i) = g.unitary(1, 0);
    t(j, j) = g.unitary(1, 1);
  }
  return t;
}

TransferMatrix compose_row(std::span<const GateSpec> gates, Direction direction,
                           std::int64_t n_sites, Boundary boundary) {
  std::vector<GateSpec> a_row, b_row;
  for (const GateSpec& g : gates) (g.kind == GateKind::A ? a_row : b_row).push_back(g);
  // Conjugation transfers multiply in application order: B first, then A.
  const TransferMatrix forward =
      layer_transfer(b_row, n_sites, boundary) * layer_transfer(a_row, n_sites, boundary);
  return direction == Direction::forward ? forward : TransferMatrix(forward.adjoint());
}

double RowSpec::norm_squared() const {
  double s = std::norm(eta) + std::norm(zeta) + std::norm(gamma);
  for (const auto& [mode, amp] : residual_terms) s += std::norm(amp);
  return s;
}

RowSpec extract_row_amplitudes(const TransferMatrix& t, std::int64_t site, Direction direction) {
  const std::int64_t m = t.rows();
  if (m % 2 != 0 || t.cols() != m) throw GateError("transfer matrix must be square of even size");
  const std::int64_t n_sites = m / 2;
  const std::int64_t row = 2 * wrap(site, n_sites);
  const std::int64_t eta_col = row;
  const std::int64_t zeta_col =
      2 * wrap(direction == Direction::forward ? site + 1 : site - 1, n_sites);
  const std::int64_t gamma_col = row + 1;

  RowSpec r;
  r.eta = t(row, eta_col);
  r.zeta = t(row, zeta_col);
  r.gamma = t(row, gamma_col);
  for (std::int64_t j = 0; j < m; ++j) {
    if (j == eta_col || j == zeta_col || j == gamma_col) continue;
    if (std::abs(t(row, j)) > 1e-14) r.residual_terms.emplace_back(ModeIndex::from_flat(j), t(row, j));
  }
  return r;
}

double check_fb_combination(const TransferMatrix& tf, const TransferMatrix& tb,
                            double zeta_target, double a_over_lambda, std::int64_t margin) {
  if (tf.rows() != tb.rows() || tf.cols() != tb.cols() || tf.rows() != tf.cols() ||
      tf.rows() % 2 != 0)
    throw GateError("forward and backward transfer matrices must be square, even and equal-sized");
  if (margin < 0) throw GateError("margin must be non-negative");
  const std::int64_t n_sites = tf.rows() / 2;
  double worst = 0.0;
  for (std::int64_t n = margin; n < n_sites - margin; ++n) {
    Eigen::VectorXcd diff = (tf.row(2 * n) - tb.row(2 * n)).transpose();
    diff(2 * wrap(n + 1, n_sites)) -= zeta_target;
    diff(2 * wrap(n - 1, n_sites)) += zeta_target;
    diff(2 * n + 1) += 4.0 * kI * a_over_lambda;
    worst = std::max(worst, diff.norm());
  }
  return worst;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::not_converged: return "not_converged";
  }
  return "unknown";
}

double tiled_residual(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b, double zeta,
                      double mu) {
  const auto gates = tile_gates(a, b, kRingSites, Boundary::periodic);
  return check_fb_combination(compose_row(gates, Direction::forward, kRingSites),
                              compose_row(gates, Direction::backward, kRingSites), zeta,
                              mu / 2.0);
}

SolveResult solve_gates(double zeta, double mu, const SolveOptions& options) {
  if (!(zeta > 0.0 && zeta <= 1.0)) throw GateError("zeta must lie in (0, 1]");
  if (!(mu >= 0.0 && mu <= 1.0)) throw GateError("mu must lie in [0, 1]");
  if (options.restarts < 1) throw GateError("solver needs at least one restart");

  SolveResult best;
  best.seed = options.seed;
  best.residual = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

  CombinationFunctor functor{zeta, mu};
  Eigen::NumericalDiff<CombinationFunctor, Eigen::Central> numeric(functor);
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd x(8);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = angle(rng);
    Eigen::LevenbergMarquardt<decltype(numeric)> lm(numeric);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.maxfev = 4000;
    lm.minimize(x);

    const Eigen::Matrix2cd a = gate_from_params(x.data());
    const Eigen::Matrix2cd b = gate_from_params(x.data() + 4);
    const double res = tiled_residual(a, b, zeta, mu);
    best.restarts_run = r + 1;
    if (res < best.residual) {
      best.residual = res;
      best.a = a;
      best.b = b;
    }
    if (best.residual <= options.tolerance) break;
  }
  if (best.residual <= options.tolerance)
    best.status = SolveStatus::feasible;
  else if (best.residual > options.infeasible_floor)
    best.status = SolveStatus::infeasible;
  else
    best.status = SolveStatus::not_converged;
  return best;
}

RefractionBound refraction_bound(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw GateError(mu > 1.0 ? "mu > 1 is over-coupled: no unitary row exists"
                             : "mu must lie in [0, 1]");
  RefractionBound b;
  b.zeta_max = std::sqrt(1.0 - mu * mu);
  b.n_min = b.zeta_max == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / b.zeta_max;
  b.printed_bound = b.zeta_max;
  return b;
}

nlohmann::json to_json(const GateSpec& g) {
  nlohmann::json u = nlohmann::json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) u.push_back({g.unitary(i, j).real(), g.unitary(i, j).imag()});
  return {{"kind", g.kind == GateKind::A ? "A" : "B"}, {"site", g.site}, {"unitary", u}};
}

GateSpec gate_from_json(const nlohmann::json& j) {
  GateSpec g;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "A" && kind != "B") throw GateError("gate kind must be A or B, got " + kind);
    g.kind = kind == "A" ? GateKind::A : GateKind::B;
    g.site = j.at("site").get<std::int64_t>();
    const auto& u = j.at("unitary");
    if (!u.is_array() || u.size() != 4) throw GateError("gate unitary needs 4 [re, im] entries");
    for (int k = 0; k < 4; ++k)
      g.unitary(k / 2, k % 2) = {u[static_cast<std::size_t>(k)].at(0).get<double>(),
                                 u[static_cast<std::size_t>(k)].at(1).get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw GateError(std::string("malformed gate JSON: ") + e.what());
  }
  return g;
}

nlohmann::json to_json(const SolveResult& r) {
  return {{"feasible", r.status == SolveStatus::feasible},
          {"status", to_string(r.status)},
          {"residual", r.residual},
          {"restarts", r.restarts_run},
          {"seed", r.seed},
          {"gates", {to_json(GateSpec{GateKind::A, 0, r.a}), to_json(GateSpec{GateKind::B, 0, r.b})}}};
}

}  // namespace qcasim::gates
