#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vqsim/evolution.hpp"
#include "vqsim/scenario.hpp"
#include "vqsim/systems.hpp"

using namespace vqsim;

namespace {

// H^{(x)3} then CZ on (0,1), (1,2), (2,0), all dense
CVector cluster_oracle() {
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CMatrix hhh = Eigen::kroneckerProduct(h, Eigen::kroneckerProduct(h, h).eval());
  CVector v = hhh.col(0);
  for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{2, 0}})
    for (int k = 0; k < 8; ++k)
      if (((k >> a) & 1) && ((k >> b) & 1)) v(k) = -v(k);
  return v;
}

CMatrix dense_word(const std::string& s) { return PauliString::parse(s).matrix(); }

// ||a - e^{i phi} b|| at the best phase
double phase_free_gap(const CVector& a, const CVector& b) {
  const cplx ov = b.dot(a);
  const cplx ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx{1.0};
  return (a - ph * b).norm();
}

}  // namespace

TEST(Ising, Shape) {
  const auto sys = build_ising(3, 0.5, 0.5);
  EXPECT_EQ(sys.hamiltonian.size(), 6u);
  EXPECT_EQ(sys.ansatz.n_parameters(), 2u);
  ASSERT_EQ(sys.ansatz.block(0).derivative.size(), 3u);
  ASSERT_EQ(sys.ansatz.block(1).derivative.size(), 3u);
  for (const auto& d : sys.ansatz.block(0).derivative) {
    EXPECT_NEAR(std::abs(d.f - cplx{0, -0.5}), 0.0, 1e-15);
    EXPECT_EQ(d.sigma.weight(), 2);
    for (int q : d.sigma.support()) EXPECT_EQ(d.sigma.at(q), Pauli::Z);
  }
  for (const auto& d : sys.ansatz.block(1).derivative) {
    EXPECT_NEAR(std::abs(d.f - cplx{0, -0.5}), 0.0, 1e-15);
    EXPECT_EQ(d.sigma.weight(), 1);
    EXPECT_EQ(d.sigma.at(d.sigma.support()[0]), Pauli::X);
  }
  EXPECT_NEAR(sys.horizon, 4 * kPi, 1e-15);
  EXPECT_THROW(build_ising(1, 0.5, 0.5), std::invalid_argument);
}

TEST(Ising, HamiltonianMatchesDenseSum) {
  const double J = 0.7, B = 0.3;
  const auto sys = build_ising(3, J, B);
  CMatrix h = -J * (dense_word("ZZI") + dense_word("IZZ") + dense_word("ZIZ")) -
              B * (dense_word("XII") + dense_word("IXI") + dense_word("IIX"));
  EXPECT_LT((sys.hamiltonian.matrix() - h).norm(), 1e-14);
  // diagonal element on |000>: every ZZ gives +1
  EXPECT_NEAR(sys.hamiltonian.matrix()(0, 0).real(), -3 * J, 1e-15);
}

TEST(Ising, BenchmarkParameters) {
  const auto sys = build_ising(3, 0.5, 0.5);
  EXPECT_NEAR(sys.hamiltonian.matrix()(0, 0).real(), -1.5, 1e-15);
  const auto cfg = RunConfig{};
  EXPECT_EQ(cfg.system.n_s, 3);
  EXPECT_EQ(cfg.system.J, 0.5);
  EXPECT_EQ(cfg.system.B, 0.5);
}

TEST(Ising, CommutesWithRingTranslation) {
  const auto sys = build_ising(4, 0.5, 0.8);
  CMatrix shift = CMatrix::Zero(16, 16);
  for (int k = 0; k < 16; ++k) {
    const int rot = ((k << 1) | (k >> 3)) & 15;
    shift(rot, k) = 1.0;
  }
  const CMatrix h = sys.hamiltonian.matrix();
  EXPECT_LT((shift * h - h * shift).norm(), 1e-13);
}

TEST(Ising, PrepareAtZeroIsClusterState) {
  const auto sys = build_ising(3, 0.5, 0.5);
  const auto psi = sys.ansatz.prepare(sys.initial);
  EXPECT_LT(phase_free_gap(psi.amplitudes(), cluster_oracle()), 1e-12);
}

TEST(Ising, ClusterStabilizersArePlusOne) {
  const auto sys = build_ising(3, 0.5, 0.5);
  const auto psi = sys.ansatz.prepare(sys.initial);
  ASSERT_EQ(sys.stabilizers.size(), 3u);
  for (const auto& s : sys.stabilizers) EXPECT_NEAR(expectation(s, psi), 1.0, 1e-12) << s.label();
  // S_1 = Z_2 X_0 Z_1 on the 3-ring
  EXPECT_EQ(sys.stabilizers[0].label(), "XZZ");
}

TEST(Ising, PrepareMatchesDenseExponential) {
  const auto sys = build_ising(3, 0.5, 0.5);
  const CMatrix hz = -0.5 * (dense_word("ZZI") + dense_word("IZZ") + dense_word("ZIZ"));
  const CMatrix hx = -0.5 * (dense_word("XII") + dense_word("IXI") + dense_word("IIX"));
  for (double l1 : {0.3, -1.7}) {
    ParameterVector p{RVector(2), 0.0};
    p.values << l1, 0.0;
    const CVector want = test::expm(kI * l1 * hz) * cluster_oracle();
    EXPECT_LT(phase_free_gap(sys.ansatz.prepare(p).amplitudes(), want), 1e-12);
    p.values << l1, 0.9;
    const CVector want2 = test::expm(kI * 0.9 * hx) * want;
    EXPECT_LT(phase_free_gap(sys.ansatz.prepare(p).amplitudes(), want2), 1e-12);
  }
}

TEST(Ansatz, ParameterCountMismatch) {
  const auto sys = build_ising(3, 0.5, 0.5);
  EXPECT_THROW(sys.ansatz.prepare({RVector::Zero(3), 0.0}), std::invalid_argument);
  RVector nan = RVector::Zero(2);
  nan(0) = std::nan("");
  EXPECT_THROW(sys.ansatz.prepare({nan, 0.0}), std::invalid_argument);
}

// d|Psi>/dlambda_k by central differences against the decomposition, every shipped ansatz
TEST(Ansatz, DerivativeDecompositionFiniteDifference) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& ansatz : {build_ising(3, 0.5, 0.5).ansatz, build_ising(4, 0.3, 1.1).ansatz,
                             build_qubit_demo().ansatz, build_ising(3, 0.5, 0.5).ansatz.with_global_phase()}) {
    for (int trial = 0; trial < 10; ++trial) {
      ParameterVector p{RVector(ansatz.n_parameters()), 0.0};
      for (Eigen::Index k = 0; k < p.values.size(); ++k) p.values(k) = u(rng);
      const double h = 1e-6;
      for (std::size_t k = 0; k < ansatz.n_parameters(); ++k) {
        ParameterVector a = p, b = p;
        a.values(static_cast<Eigen::Index>(k)) += h;
        b.values(static_cast<Eigen::Index>(k)) -= h;
        const CVector fd = (ansatz.prepare(a).amplitudes() - ansatz.prepare(b).amplitudes()) / (2 * h);
        EXPECT_LT((fd - ansatz.derivative(p, k)).norm(), 1e-6);
      }
    }
  }
}

TEST(Ansatz, InsertStateBuildsBranch) {
  const auto sys = build_ising(3, 0.5, 0.5);
  ParameterVector p{RVector(2), 0.0};
  p.values << 0.4, -0.6;
  const auto zz = PauliString::parse("ZZI");
  // sigma before block 1 = right after R_1
  const CVector want = sys.ansatz.block_unitary(1, -0.6) * zz.matrix() * sys.ansatz.block_unitary(0, 0.4) *
                       cluster_oracle();
  EXPECT_LT(phase_free_gap(sys.ansatz.insert_state(p, 1, zz), want), 1e-12);
  EXPECT_THROW(sys.ansatz.insert_state(p, 3, zz), std::out_of_range);
}

TEST(Ansatz, UnitaryMatchesPrepare) {
  const auto sys = build_ising(3, 0.5, 0.5);
  ParameterVector p{RVector(2), 0.0};
  p.values << 1.1, 0.2;
  const CVector a = sys.ansatz.unitary(p) * sys.ansatz.reference_state().amplitudes();
  EXPECT_LT((a - sys.ansatz.prepare(p).amplitudes()).norm(), 1e-13);
}

TEST(QubitDemo, Definition) {
  const auto sys = build_qubit_demo();
  EXPECT_EQ(sys.initial.values(0), 0.75);
  EXPECT_EQ(sys.initial.values(1), -0.5);
  EXPECT_NEAR(sys.horizon, 2 * kPi, 1e-15);
  EXPECT_TRUE(sys.hamiltonian.time_dependent());
  // t = 0: Y coefficient -(1 - 0)/2, Z coefficient -cos(0)/2
  const auto h0 = sys.hamiltonian.coefficients(0.0);
  ASSERT_EQ(h0.size(), 2u);
  EXPECT_EQ(sys.hamiltonian.term(0).pauli.label(), "Y");
  EXPECT_EQ(sys.hamiltonian.term(1).pauli.label(), "Z");
  EXPECT_NEAR(h0[0], -0.5, 1e-15);
  EXPECT_NEAR(h0[1], -0.5, 1e-15);
  // general t against the defining formula
  for (double t : {0.3, 1.7, 4.0}) {
    const CMatrix want =
        -0.5 * (pauli_matrix(Pauli::Y) + std::cos(t) * pauli_matrix(Pauli::Z) - std::sin(t) * pauli_matrix(Pauli::Y));
    EXPECT_LT((sys.hamiltonian.matrix(t) - want).norm(), 1e-15);
  }
  const auto& d = sys.ansatz.block(0).derivative;
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(std::abs(d[0].f - cplx{0, kPi / 2}), 0.0, 1e-15);
  EXPECT_EQ(d[0].sigma.label(), "Y");
}

TEST(QubitDemo, PrepareAtZeroIsZeroState) {
  const auto sys = build_qubit_demo();
  const auto psi = sys.ansatz.prepare({RVector::Zero(2), 0.0});
  EXPECT_NEAR(std::abs(psi.amplitudes()(0)), 1.0, 1e-15);
}

TEST(ExactEvolution, ZeroTimeIsInitial) {
  const auto sys = build_ising(3, 0.5, 0.5);
  const auto phi0 = sys.ansatz.prepare(sys.initial);
  EXPECT_LT((exact_evolution(sys.hamiltonian, phi0, 0.0).amplitudes() - phi0.amplitudes()).norm(), 1e-14);
  const auto demo = build_qubit_demo();
  const auto q0 = PureState::zero(1);
  EXPECT_LT((exact_evolution(demo.hamiltonian, q0, 0.0).amplitudes() - q0.amplitudes()).norm(), 1e-14);
}

TEST(ExactEvolution, SingleQubitHalfX) {
  // H = -X/2: exp(i pi X / 2)|0> = i|1>
  const Hamiltonian h(1, {{TermCoefficient::fixed(-0.5), PauliString::parse("X"), 0}});
  const auto out = exact_evolution(h, PureState::zero(1), kPi);
  EXPECT_NEAR(std::abs(out.amplitudes()(0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(out.amplitudes()(1) - kI), 0.0, 1e-14);
}

TEST(ExactEvolution, IsingHorizonAgreesWithFineSymmetricTrotter) {
  const auto sys = build_ising(3, 0.5, 0.5);
  const auto phi0 = sys.ansatz.prepare(sys.initial);
  const double T = 4 * kPi;
  const long n = 1256637;
  const double dt = T / static_cast<double>(n);
  const CMatrix hz = sys.hamiltonian.group_part(0).matrix(), hx = sys.hamiltonian.group_part(1).matrix();
  const CMatrix half = test::expm(-kI * hz * (dt / 2)), full = test::expm(-kI * hx * dt);
  const CMatrix step = half * full * half;
  CVector v = phi0.amplitudes();
  for (long k = 0; k < n; ++k) v = step * v;
  const auto oracle = exact_evolution(sys.hamiltonian, phi0, T);
  EXPECT_LT(phase_free_gap(v, oracle.amplitudes()), 1e-7);
  EXPECT_GT(phase_free_gap(oracle.amplitudes(), phi0.amplitudes()), 1e-2);
}

TEST(ExactEvolution, UnitaryAndComposes) {
  const auto sys = build_ising(3, 0.5, 0.5);
  const CMatrix u1 = propagator(sys.hamiltonian, 0.7), u2 = propagator(sys.hamiltonian, 1.9);
  EXPECT_LT((propagator(sys.hamiltonian, 2.6) - u2 * u1).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((u1.adjoint() * u1 - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-10);
  const auto demo = build_qubit_demo();
  std::mt19937_64 rng(1);
  const auto q = test::random_pure(rng, 1);
  EXPECT_NEAR(exact_evolution(demo.hamiltonian, q, 2 * kPi).amplitudes().norm(), 1.0, 1e-10);
}

TEST(ExactEvolution, TimeDependentConverged) {
  const auto demo = build_qubit_demo();
  const auto q = PureState::zero(1);
  const auto fine = exact_evolution(demo.hamiltonian, q, 2 * kPi);
  const auto coarse = exact_evolution(demo.hamiltonian, q, 2 * kPi, 1e-3);
  EXPECT_LT((fine.amplitudes() - coarse.amplitudes()).norm(), 1e-8);
  ExactEvolution inc(demo.hamiltonian, q);
  const auto mid = inc.state_at(kPi);
  EXPECT_LT((inc.state_at(2 * kPi).amplitudes() - fine.amplitudes()).norm(), 1e-10);
  EXPECT_LT((mid.amplitudes() - exact_evolution(demo.hamiltonian, q, kPi).amplitudes()).norm(), 1e-10);
  EXPECT_THROW(inc.state_at(1.0), std::invalid_argument);
}
