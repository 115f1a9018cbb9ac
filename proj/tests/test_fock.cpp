#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qcasim/fock.hpp"

using namespace qcasim;
using namespace qcasim::fock;
using gates::GateKind;
using gates::GateSpec;

namespace {

Eigen::MatrixXcd dense(const SparseMatrix& m) { return Eigen::MatrixXcd(m); }

Eigen::Matrix2cd random_u2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-3.2, 3.2);
  return gates::u2(a(rng), a(rng), a(rng), a(rng));
}

// Single-qubit operator on qubit q of an n-qubit register (qubit 0 most significant).
Eigen::MatrixXcd on_qubit(const Eigen::Matrix2cd& op, int q, int n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXcd f = k == q ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd::Identity(2, 2);
    m = Eigen::kroneckerProduct(m, f).eval();
  }
  return m;
}

}  // namespace

TEST_CASE("single-site field operators") {
  Eigen::Matrix2cd lower;
  lower << 0, 1, 0, 0;
  const Eigen::MatrixXcd expected = Eigen::kroneckerProduct(lower, Eigen::Matrix2cd::Identity());
  CHECK(dense(jw_field_operator(0, gates::Chirality::plus, 1)) == expected);

  Eigen::Matrix2cd z;
  z << 1, 0, 0, -1;
  const Eigen::MatrixXcd minus = Eigen::kroneckerProduct(z, lower);
  CHECK(dense(jw_field_operator(0, gates::Chirality::minus, 1)) == minus);
}

TEST_CASE("field operators match the explicit sigma-z string") {
  Eigen::Matrix2cd lower, z;
  lower << 0, 1, 0, 0;
  z << 1, 0, 0, -1;
  const FockSpace space(2);
  for (int m = 0; m < 4; ++m) {
    Eigen::MatrixXcd expected = on_qubit(lower, m, 4);
    for (int k = 0; k < m; ++k) expected = on_qubit(z, k, 4) * expected;
    CHECK(dense(space.field(m)) == expected);
  }
}

TEST_CASE("canonical anticommutation relations") {
  for (std::int64_t n = 1; n <= 5; ++n) CHECK(anticommutator_defect(FockSpace(n)) <= 1e-12);

  // Explicit dense check of all 36 pairs on three sites.
  const FockSpace space(3);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(64, 64);
  for (int i = 0; i < 6; ++i) {
    const Eigen::MatrixXcd a = dense(space.field(i));
    CHECK((a * a).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a * space.vacuum()).norm() == 0.0);
    for (int j = 0; j < 6; ++j) {
      const Eigen::MatrixXcd b = dense(space.field(j));
      Eigen::MatrixXcd ac = a * b.adjoint() + b.adjoint() * a;
      if (i == j) ac -= id;
      CHECK(ac.cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("Fock space limits") {
  CHECK_THROWS_AS(FockSpace(0), gates::GateError);
  CHECK_THROWS_AS(FockSpace(6), gates::GateError);
  CHECK_THROWS_AS(jw_field_operator(3, gates::Chirality::plus, 3), gates::GateError);
  CHECK_THROWS_AS(FockSpace(2).field(4), gates::GateError);
  CHECK(FockSpace(5).dimension() == 1024);
}

TEST_CASE("local gate matrices agree with the exponential construction") {
  std::mt19937_64 rng(8);
  const FockSpace space(2);
  for (int trial = 0; trial < 10; ++trial) {
    const GateSpec g{trial % 2 ? GateKind::A : GateKind::B, 0, random_u2(rng)};
    const Eigen::MatrixXcd oracle = exponential_gate(space, g);
    const Eigen::MatrixXcd local = dense(embed_gate(space, to_fock_gate(g)));
    CHECK((oracle - local).cwiseAbs().maxCoeff() <= 1e-12);
    // Conjugation acts on the pair with u.
    const auto [a, b] = g.modes(2);
    const Eigen::MatrixXcd phi_a = dense(space.field(a)), phi_b = dense(space.field(b));
    const Eigen::MatrixXcd lhs = oracle * phi_a * oracle.adjoint();
    CHECK((lhs - g.unitary(0, 0) * phi_a - g.unitary(0, 1) * phi_b).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("particle conservation") {
  Eigen::Matrix4cd mixing = Eigen::Matrix4cd::Identity();
  mixing(0, 0) = mixing(3, 3) = 0.0;
  mixing(0, 3) = mixing(3, 0) = 1.0;
  CHECK_FALSE(is_particle_conserving(mixing));
  CHECK_THROWS_AS(transfer_block(mixing), gates::GateError);
  const std::vector<FockGate> bad{{GateSpec{GateKind::B, 0, {}}, mixing}};
  CHECK_THROWS_AS(fock_consistency(bad, 2), gates::GateError);

  std::mt19937_64 rng(4);
  const Eigen::Matrix2cd u = random_u2(rng);
  CHECK(is_particle_conserving(local_gate_matrix(u)));
  CHECK((transfer_block(local_gate_matrix(u)) - u).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("identity gates") {
  const auto id = gates::tile_gates(Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Identity(), 3,
                                    gates::Boundary::open);
  const auto r = fock_consistency(id, 3);
  CHECK(r.max() == 0.0);
  CHECK(r.vacuum_phase == cplx(1.0));
}

TEST_CASE("swap gates transpose modes") {
  std::vector<GateSpec> swaps;
  for (std::int64_t s = 0; s < 2; ++s) swaps.push_back({GateKind::A, s, gates::swap_gate()});
  const auto r = fock_consistency(swaps, 3);
  CHECK(r.max() <= 1e-14);
  CHECK(std::abs(r.vacuum_phase - cplx(1.0)) <= 1e-14);

  const FockSpace space(3);
  std::vector<FockGate> fg;
  for (const auto& g : swaps) fg.push_back(to_fock_gate(g));
  const Eigen::MatrixXcd u = fock_unitary(space, fg);
  // (0,-) <-> (1,+): flat modes 1 and 2.
  CHECK((u * dense(space.field(1)) * u.adjoint() - dense(space.field(2))).cwiseAbs().maxCoeff() <=
        1e-14);
}

TEST_CASE("random gate sets: Fock conjugation matches the transfer matrix") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<GateSpec> g;
    for (std::int64_t s = 0; s < 4; ++s) g.push_back({GateKind::B, s, random_u2(rng)});
    for (std::int64_t s = 0; s < 3; ++s) g.push_back({GateKind::A, s, random_u2(rng)});
    const auto r = fock_consistency(g, 4);
    CHECK(r.conjugation <= 1e-10);
    CHECK(r.vacuum <= 1e-12);
    CHECK(r.locality <= 1e-12);
    CHECK(r.embedding <= 1e-12);
  }
}

TEST_CASE("solved gates on four sites") {
  const auto sol = gates::solve_gates(0.8, 0.6);
  const auto r = fock_consistency(gates::tile_gates(sol.a, sol.b, 4, gates::Boundary::open), 4);
  CHECK(r.max() <= 1e-10);
  CHECK(std::abs(std::abs(r.vacuum_phase) - 1.0) <= 1e-12);
}

TEST_CASE("a doubly-occupied phase error is caught") {
  std::mt19937_64 rng(6);
  const GateSpec g{GateKind::B, 1, random_u2(rng)};
  FockGate wrong = to_fock_gate(g);
  wrong.local(3, 3) *= -1.0;
  const std::vector<FockGate> gates{wrong};
  CHECK(fock_consistency(gates, 3).conjugation > 0.1);
}

TEST_CASE("embedded gates commute with Paulis off their wires") {
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  std::mt19937_64 rng(9);
  const FockSpace space(3);
  for (const GateSpec g : {GateSpec{GateKind::A, 1, random_u2(rng)}, GateSpec{GateKind::B, 0, random_u2(rng)}}) {
    const Eigen::MatrixXcd e = dense(embed_gate(space, to_fock_gate(g)));
    const auto [a, b] = g.modes(3);
    for (int q = 0; q < 6; ++q) {
      if (q == a || q == b) continue;
      for (const auto& p : {x, y, z}) {
        const Eigen::MatrixXcd pq = on_qubit(p, q, 6);
        CHECK((e * pq - pq * e).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("wrap-around gates have no local embedding") {
  const FockSpace space(3);
  const GateSpec wrap{GateKind::A, 2, gates::swap_gate()};
  CHECK_THROWS_AS(embed_gate(space, to_fock_gate(wrap)), gates::GateError);
  CHECK_THROWS_AS(fock_consistency(std::vector<GateSpec>{wrap}, 3), gates::GateError);
  CHECK_THROWS_AS(fock_consistency(std::vector<GateSpec>{}, 5), gates::GateError);
}
