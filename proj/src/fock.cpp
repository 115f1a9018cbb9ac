#include "qcasim/fock.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace qcasim::fock {

namespace {

using gates::GateError;

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::pair<std::int64_t, std::int64_t> adjacent_pair(const FockSpace& space,
                                                    const gates::GateSpec& g) {
  if (g.site < 0 || g.site >= space.n_sites())
    throw GateError("gate site " + std::to_string(g.site) + " outside the Fock chain");
  const auto [a, b] = g.modes(space.n_sites());
  if (b != a + 1)
    throw GateError("Fock embedding needs adjacent modes; wrap-around gates are not local");
  return {a, b};
}

}  // namespace

FockSpace::FockSpace(std::int64_t n_sites) : n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw GateError("Fock space supports 1 to " + std::to_string(kMaxSites) + " sites, got " +
                    std::to_string(n_sites));
}

std::uint64_t FockSpace::mask(std::int64_t mode) const {
  return std::uint64_t{1} << (n_modes() - 1 - mode);
}

SparseMatrix FockSpace::field(std::int64_t mode) const {
  if (mode < 0 || mode >= n_modes())
    throw GateError("mode " + std::to_string(mode) + " out of range");
  const std::uint64_t m = mask(mode);
  // Modes before `mode` occupy the bits above it.
  const std::uint64_t before = ~((m << 1) - 1) & ((std::uint64_t{1} << n_modes()) - 1);
  std::vector<Eigen::Triplet<cplx>> entries;
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dimension()); ++b) {
    if ((b & m) == 0) continue;
    const double sign = std::popcount(b & before) % 2 == 0 ? 1.0 : -1.0;
    entries.emplace_back(static_cast<int>(b ^ m), static_cast<int>(b), sign);
  }
  SparseMatrix phi(dimension(), dimension());
  phi.setFromTriplets(entries.begin(), entries.end());
  return phi;
}

Eigen::VectorXcd FockSpace::vacuum() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dimension());
  v(0) = 1.0;
  return v;
}

SparseMatrix jw_field_operator(std::int64_t site, gates::Chirality chirality,
                               std::int64_t n_sites) {
  const FockSpace space(n_sites);
  if (site < 0 || site >= n_sites)
    throw GateError("site " + std::to_string(site) + " out of range");
  return space.field(gates::ModeIndex{site, chirality}.flat());
}

double anticommutator_defect(const FockSpace& space) {
  std::vector<SparseMatrix> phi;
  for (std::int64_t m = 0; m < space.n_modes(); ++m) phi.push_back(space.field(m));
  SparseMatrix id(space.dimension(), space.dimension());
  id.setIdentity();
  double worst = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    for (std::size_t j = 0; j < phi.size(); ++j) {
      const SparseMatrix phij_dag = phi[j].adjoint();
      SparseMatrix mixed = phi[i] * phij_dag + phij_dag * phi[i];
      if (i == j) mixed -= id;
      const SparseMatrix same = phi[i] * phi[j] + phi[j] * phi[i];
      for (const SparseMatrix* s : std::array<const SparseMatrix*, 2>{&mixed, &same})
        for (int k = 0; k < s->outerSize(); ++k)
          for (SparseMatrix::InnerIterator it(*s, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

Eigen::Matrix4cd local_gate_matrix(const Eigen::Matrix2cd& u) {
  Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
  g(0, 0) = 1.0;
  // |10> is the lower mode occupied, |01> the upper one.
  g(2, 2) = std::conj(u(0, 0));
  g(1, 2) = std::conj(u(0, 1));
  g(2, 1) = std::conj(u(1, 0));
  g(1, 1) = std::conj(u(1, 1));
  g(3, 3) = std::conj(u.determinant());
  return g;
}

bool is_particle_conserving(const Eigen::Matrix4cd& g, double tol) {
  auto sector = [](int i) { return i == 0 ? 0 : (i == 3 ? 2 : 1); };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (sector(i) != sector(j) && std::abs(g(i, j)) > tol) return false;
  return true;
}

Eigen::Matrix2cd transfer_block(const Eigen::Matrix4cd& g) {
  if (!is_particle_conserving(g)) throw GateError("gate does not conserve particle number");
  Eigen::Matrix2cd u;
  u << std::conj(g(2, 2)), std::conj(g(1, 2)), std::conj(g(2, 1)), std::conj(g(1, 1));
  return u;
}

FockGate to_fock_gate(const gates::GateSpec& g) { return {g, local_gate_matrix(g.unitary)}; }

SparseMatrix embed_gate(const FockSpace& space, const FockGate& gate) {
  const auto [a, b] = adjacent_pair(space, gate.placement);
  const std::uint64_t ma = space.mask(a), mb = space.mask(b);
  std::vector<Eigen::Triplet<cplx>> entries;
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(space.dimension()); ++s) {
    const int col = ((s & ma) ? 2 : 0) + ((s & mb) ? 1 : 0);
    const std::uint64_t rest = s & ~(ma | mb);
    for (int row = 0; row < 4; ++row) {
      const cplx v = gate.local(row, col);
      if (v == cplx{}) continue;
      const std::uint64_t target = rest | ((row & 2) ? ma : 0) | ((row & 1) ? mb : 0);
      entries.emplace_back(static_cast<int>(target), static_cast<int>(s), v);
    }
  }
  SparseMatrix m(space.dimension(), space.dimension());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Eigen::MatrixXcd exponential_gate(const FockSpace& space, const gates::GateSpec& g) {
  const auto [a, b] = g.modes(space.n_sites());
  if (!gates::is_unitary(g.unitary, 1e-12)) throw GateError("gate is not unitary");
  const Eigen::Matrix2cd x = -Eigen::Matrix2cd(g.unitary.log());
  const std::int64_t modes[2] = {a, b};
  SparseMatrix gen(space.dimension(), space.dimension());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      gen += x(i, j) * SparseMatrix(space.field(modes[i]).adjoint() * space.field(modes[j]));
  // gen is anti-Hermitian, so -i gen is Hermitian.
  const Eigen::MatrixXcd h = cplx{0.0, -1.0} * Eigen::MatrixXcd(gen);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (h + h.adjoint()));
  const Eigen::VectorXcd phases =
      (cplx{0.0, 1.0} * eig.eigenvalues().cast<cplx>()).array().exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Eigen::MatrixXcd fock_unitary(const FockSpace& space, std::span<const FockGate> gates) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(space.dimension(), space.dimension());
  for (const auto kind : {gates::GateKind::B, gates::GateKind::A})
    for (const FockGate& g : gates)
      if (g.placement.kind == kind) u = embed_gate(space, g) * u;
  return u;
}

double FockReport::max() const {
  return std::max({conjugation, vacuum, locality, embedding});
}

FockReport fock_consistency(std::span<const FockGate> gates, std::int64_t n_sites) {
  if (n_sites > 4) throw GateError("fock_consistency supports at most 4 sites");
  const FockSpace space(n_sites);
  std::vector<gates::GateSpec> specs;
  for (const FockGate& g : gates) {
    adjacent_pair(space, g.placement);
    specs.push_back({g.placement.kind, g.placement.site, transfer_block(g.local)});
  }
  FockReport r;

  const gates::TransferMatrix t =
      gates::compose_row(specs, gates::Direction::forward, n_sites, gates::Boundary::open);
  const Eigen::MatrixXcd u = fock_unitary(space, gates);
  std::vector<Eigen::MatrixXcd> phi;
  for (std::int64_t m = 0; m < space.n_modes(); ++m) phi.emplace_back(space.field(m));
  for (std::int64_t i = 0; i < space.n_modes(); ++i) {
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(space.dimension(), space.dimension());
    for (std::int64_t j = 0; j < space.n_modes(); ++j)
      if (t(i, j) != cplx{}) expected += t(i, j) * phi[static_cast<std::size_t>(j)];
    r.conjugation = std::max(
        r.conjugation, max_abs(u * phi[static_cast<std::size_t>(i)] * u.adjoint() - expected));
  }

  const Eigen::VectorXcd vac = space.vacuum();
  const Eigen::VectorXcd image = u * vac;
  r.vacuum_phase = image(0);
  r.vacuum = (image - r.vacuum_phase * vac).norm() + std::abs(std::abs(r.vacuum_phase) - 1.0);

  for (std::size_t k = 0; k < gates.size(); ++k) {
    const Eigen::MatrixXcd oracle = exponential_gate(space, specs[k]);
    const auto [a, b] = specs[k].modes(n_sites);
    const std::uint64_t ma = space.mask(a), mb = space.mask(b);
    // Two-qubit block seen with every other mode empty.
    Eigen::Matrix4cd block;
    for (int row = 0; row < 4; ++row)
      for (int col = 0; col < 4; ++col)
        block(row, col) = oracle(static_cast<Eigen::Index>(((row & 2) ? ma : 0) | ((row & 1) ? mb : 0)),
                                 static_cast<Eigen::Index>(((col & 2) ? ma : 0) | ((col & 1) ? mb : 0)));
    const Eigen::MatrixXcd product_form(embed_gate(space, {specs[k], block}));
    r.locality = std::max(r.locality, max_abs(oracle - product_form));
    r.embedding = std::max(r.embedding, max_abs(block - gates[k].local));
  }
  return r;
}

FockReport fock_consistency(std::span<const gates::GateSpec> gates, std::int64_t n_sites) {
  std::vector<FockGate> fg;
  for (const auto& g : gates) fg.push_back(to_fock_gate(g));
  return fock_consistency(fg, n_sites);
}

}  // namespace qcasim::fock
