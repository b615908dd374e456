#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vqsim/channel.hpp"
#include "vqsim/gate.hpp"
#include "vqsim/pauli.hpp"
#include "vqsim/state.hpp"

using namespace vqsim;
using vqsim::test::projector;

namespace {

std::vector<GateInstance> sample_gates() {
  return {GateInstance::hadamard(0),          GateInstance::pauli_gate(1, Pauli::X),
          GateInstance::pauli_gate(1, Pauli::Y), GateInstance::pauli_gate(2, Pauli::Z),
          GateInstance::phase_rot(0, 0.37),   GateInstance::flip_rot(1, -1.1),
          GateInstance::y_rot(2, 2.3),        GateInstance::zz_rot(0, 2, 0.81),
          GateInstance::controlled_phase(2, 0), GateInstance::controlled_not(0, 1),
          GateInstance::controlled_pauli(1, 2, Pauli::Y), GateInstance::controlled_pauli(2, 0, Pauli::X)};
}

CVector plus() {
  CVector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace

TEST(Pauli, ProductTable) {
  cplx ph;
  EXPECT_EQ(pauli_product(Pauli::X, Pauli::Y, &ph), Pauli::Z);
  EXPECT_NEAR(std::abs(ph - kI), 0.0, 1e-15);
  EXPECT_EQ(pauli_product(Pauli::Y, Pauli::X, &ph), Pauli::Z);
  EXPECT_NEAR(std::abs(ph + kI), 0.0, 1e-15);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto pa = static_cast<Pauli>(a), pb = static_cast<Pauli>(b);
      const Pauli c = pauli_product(pa, pb, &ph);
      EXPECT_LT((pauli_matrix(pa) * pauli_matrix(pb) - ph * pauli_matrix(c)).norm(), 1e-14);
    }
}

TEST(Pauli, LabelOrderIsLittleEndian) {
  // qubit 0 is the low bit: X on qubit 0 maps |0> to |1>
  const auto x0 = PauliString::parse("XI");
  CVector e0 = CVector::Zero(4);
  e0(0) = 1.0;
  const CVector out = x0.apply(e0);
  EXPECT_NEAR(std::abs(out(1)), 1.0, 1e-15);
  EXPECT_EQ(x0.x_mask(), 1u);
  EXPECT_EQ(x0.label(), "XI");
}

TEST(Pauli, MatrixMatchesApply) {
  std::mt19937_64 rng(3);
  for (const char* lab : {"XYZ", "IZY", "YYI", "ZIX"}) {
    const auto p = PauliString::parse(lab, cplx{0.3, -0.2});
    const CVector v = test::random_pure(rng, 3).amplitudes();
    EXPECT_LT((p.matrix() * v - p.apply(v)).norm(), 1e-14) << lab;
  }
}

TEST(Pauli, UnitAndSelfInverse) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> code(0, 3);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Pauli> w;
    for (int q = 0; q < 3; ++q) w.push_back(static_cast<Pauli>(code(rng)));
    const PauliString p(w, std::polar(1.0, ang(rng)));
    EXPECT_TRUE(p.is_unitary());
    const CMatrix m = p.matrix();
    EXPECT_LT((m.adjoint() * m - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
    // P^2 is a phase times identity
    const CMatrix sq = m * m;
    EXPECT_LT((sq - sq(0, 0) * CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(std::abs(sq(0, 0)), 1.0, 1e-12);
  }
}

TEST(Pauli, CommutationAgreesWithMatrices) {
  const auto a = PauliString::parse("XZI"), b = PauliString::parse("ZXY"), c = PauliString::parse("XXZ");
  for (const auto& [p, q] : {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
    const CMatrix comm = p.matrix() * q.matrix() - q.matrix() * p.matrix();
    EXPECT_EQ(p.commutes_with(q), comm.norm() < 1e-12);
  }
}

TEST(Gate, EveryMatrixIsUnitary) {
  for (const auto& g : sample_gates()) {
    const CMatrix u = g.matrix();
    const auto d = u.rows();
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12) << gate_name(g.kind);
  }
}

TEST(Gate, RotationConventions) {
  const double th = 0.4;
  const CMatrix z = pauli_matrix(Pauli::Z), x = pauli_matrix(Pauli::X), y = pauli_matrix(Pauli::Y);
  EXPECT_LT((GateInstance::phase_rot(0, th).matrix() - test::expm(kI * th * z)).norm(), 1e-14);
  EXPECT_LT((GateInstance::flip_rot(0, th).matrix() - test::expm(kI * th * x)).norm(), 1e-14);
  EXPECT_LT((GateInstance::y_rot(0, th).matrix() - test::expm(kI * th * y)).norm(), 1e-14);
  CMatrix zz = Eigen::kroneckerProduct(z, z);
  EXPECT_LT((GateInstance::zz_rot(0, 1, th).matrix() - test::expm(kI * th * zz)).norm(), 1e-14);
}

TEST(Gate, OutOfRangeTargetRejected) {
  const auto st = PureState::zero(2);
  EXPECT_THROW(apply_gate(st, GateInstance::hadamard(2)), std::out_of_range);
  EXPECT_THROW(apply_gate(DensityOperator::from_pure(st), GateInstance::controlled_not(0, 5)), std::out_of_range);
  EXPECT_THROW(apply_gate(st, GateInstance::controlled_not(1, 1)), std::invalid_argument);
}

TEST(ApplyGate, HadamardOnZero) {
  const auto out = apply_gate(PureState::zero(1), GateInstance::hadamard(0));
  EXPECT_NEAR(out.amplitudes()(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(out.amplitudes()(1).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(out.amplitudes().imag().norm(), 0.0, 1e-15);
}

TEST(ApplyGate, ControlledPhaseTwiceIsIdentity) {
  const CVector pp = Eigen::kroneckerProduct(plus(), plus());
  PureState s(2, pp);
  s = apply_gate(apply_gate(s, GateInstance::controlled_phase(0, 1)), GateInstance::controlled_phase(0, 1));
  EXPECT_LT((s.amplitudes() - pp).norm(), 1e-14);
}

TEST(ApplyGate, ZZRotOnZeroZero) {
  // Z(x)Z|00> = |00>, so exp(i pi/4 ZZ)|00> = e^{i pi/4}|00>
  const auto out = apply_gate(PureState::zero(2), GateInstance::zz_rot(0, 1, kPi / 4));
  EXPECT_NEAR(std::abs(out.amplitudes()(0) - std::polar(1.0, kPi / 4)), 0.0, 1e-15);
  EXPECT_NEAR(out.amplitudes().tail(3).norm(), 0.0, 1e-15);
}

TEST(ApplyGate, PureAndDensityAgreeWithDenseEmbedding) {
  std::mt19937_64 rng(11);
  const auto psi = test::random_pure(rng, 3);
  const auto rho = test::random_density(rng, 3);
  for (const auto& g : sample_gates()) {
    // build the full operator column by column from basis states
    CMatrix full(8, 8);
    for (int k = 0; k < 8; ++k) full.col(k) = apply_gate(PureState::basis(3, k), g).amplitudes();
    const auto out = apply_gate(psi, g);
    EXPECT_NEAR(out.amplitudes().squaredNorm(), 1.0, 1e-12);
    EXPECT_LT((out.amplitudes() - full * psi.amplitudes()).norm(), 1e-13);
    const auto r2 = apply_gate(rho, g);
    EXPECT_LT((r2.matrix() - full * rho.matrix() * full.adjoint()).norm(), 1e-13);
    EXPECT_NEAR(r2.trace(), 1.0, 1e-12);
  }
}

TEST(ApplyGate, NormPreservedAlongLongCircuit) {
  std::mt19937_64 rng(2);
  auto psi = test::random_pure(rng, 3);
  const auto gates = sample_gates();
  for (int rep = 0; rep < 50; ++rep)
    for (const auto& g : gates) {
      psi = apply_gate(psi, g);
      ASSERT_NEAR(psi.amplitudes().squaredNorm(), 1.0, 1e-12);
    }
}

TEST(ApplyChannel, SingleQubitDepolarizingOnZero) {
  const double eps = 0.03;
  const auto rho = apply_channel(DensityOperator::from_pure(PureState::zero(1)), PauliChannel::depolarizing(1, eps), {0});
  // X and Y flip |0> to |1>, each with eps/3
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 1.0 - 2.0 * eps / 3.0, 1e-15);
  EXPECT_NEAR(rho.matrix()(1, 1).real(), 2.0 * eps / 3.0, 1e-15);
  EXPECT_NEAR(std::abs(rho.matrix()(0, 1)), 0.0, 1e-15);
}

TEST(ApplyChannel, ZeroRateIsIdentity) {
  std::mt19937_64 rng(4);
  const auto rho = test::random_density(rng, 2);
  EXPECT_LT((apply_channel(rho, PauliChannel::depolarizing(2, 0.0), {0, 1}).matrix() - rho.matrix()).norm(), 1e-15);
  EXPECT_LT((apply_channel(rho, PauliChannel::depolarizing(1, 0.0), {1}).matrix() - rho.matrix()).norm(), 1e-15);
}

TEST(ApplyChannel, FullTwoQubitDepolarizingGivesMaximallyMixed) {
  std::mt19937_64 rng(6);
  const auto rho = test::random_density(rng, 2);
  const auto out = apply_channel(rho, PauliChannel::depolarizing(2, 15.0 / 16.0), {0, 1});
  EXPECT_LT((out.matrix() - CMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ApplyChannel, PauliAndKrausFormsAgree) {
  std::mt19937_64 rng(8);
  const auto rho = test::random_density(rng, 3);
  std::vector<double> p(16);
  std::uniform_real_distribution<double> u(0, 1);
  double s = 0;
  for (auto& v : p) s += (v = u(rng));
  for (auto& v : p) v /= s;
  const auto ch = PauliChannel::from_probabilities(2, p);
  const auto a = apply_channel(rho, ch, {2, 0});
  const auto b = apply_channel(rho, ch.to_kraus(), {2, 0});
  EXPECT_LT((a.matrix() - b.matrix()).norm(), 1e-14);
}

TEST(ApplyChannel, ArityMismatchRejected) {
  const auto rho = DensityOperator::maximally_mixed(2);
  EXPECT_THROW(apply_channel(rho, PauliChannel::depolarizing(2, 0.1), {0}), std::invalid_argument);
}

TEST(Channel, NonCptpRejected) {
  CMatrix e = 1.1 * CMatrix::Identity(2, 2);
  EXPECT_THROW(KrausChannel::from_operators({e}), std::invalid_argument);
  EXPECT_THROW(PauliChannel::from_probabilities(1, {0.5, 0.2, 0.2, 0.2}), std::invalid_argument);
  EXPECT_THROW(PauliChannel::depolarizing(1, 1.5), std::invalid_argument);
}

TEST(Channel, StochasticProbabilitiesSumToOne) {
  for (double eps : {0.0, 1e-3, 0.2, 1.0}) {
    for (int k : {1, 2}) {
      const auto ch = PauliChannel::depolarizing(k, eps);
      double s = 0;
      for (double v : ch.probabilities()) s += v;
      EXPECT_NEAR(s, 1.0, 1e-12);
      EXPECT_NEAR(ch.fidelity(), 1.0 - eps, 1e-15);
    }
  }
}

// 10^4 random CPTP channels on random states
TEST(ApplyChannel, RandomCptpPreservesTraceHermiticityPositivity) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> arity(1, 2), count(1, 4), qubit(0, 2);
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = arity(rng);
    const auto ch = KrausChannel::from_operators(test::random_kraus(rng, k, count(rng)));
    std::vector<int> targets{qubit(rng)};
    if (k == 2) {
      int b = qubit(rng);
      while (b == targets[0]) b = qubit(rng);
      targets.push_back(b);
    }
    const auto rho = test::random_density(rng, 3);
    const auto out = apply_channel(rho, ch, targets);
    const CMatrix& m = out.matrix();
    ASSERT_NEAR(out.trace(), 1.0, 1e-12);
    ASSERT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_GE(Eigen::SelfAdjointEigenSolver<CMatrix>(m).eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(TraceDistance, Basics) {
  const auto zero = DensityOperator::from_pure(PureState::zero(1));
  const auto one = DensityOperator::from_pure(PureState::basis(1, 1));
  const auto p = DensityOperator(1, projector(plus()));
  EXPECT_NEAR(trace_distance(zero, zero), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-15);
  // difference has eigenvalues +-1/(2 sqrt2) * 2 ... half the sum is 1/sqrt2
  EXPECT_NEAR(trace_distance(zero, p), 1.0 / std::sqrt(2.0), 1e-14);
  const CMatrix diff = zero.matrix() - p.matrix();
  const RVector ev = Eigen::SelfAdjointEigenSolver<CMatrix>(diff).eigenvalues();
  EXPECT_NEAR(0.5 * ev.cwiseAbs().sum(), trace_distance(zero, p), 1e-14);
}

TEST(TraceDistance, PureOverloadsAgree) {
  std::mt19937_64 rng(9);
  const auto a = test::random_pure(rng, 2), b = test::random_pure(rng, 2);
  const auto ra = DensityOperator::from_pure(a), rb = DensityOperator::from_pure(b);
  EXPECT_NEAR(trace_distance(a, b), trace_distance(ra, rb), 1e-12);
  EXPECT_NEAR(trace_distance(a, rb), trace_distance(ra, rb), 1e-12);
  EXPECT_NEAR(trace_distance(a, b), std::sqrt(1.0 - std::norm(a.inner(b))), 1e-12);
}

TEST(TraceDistance, DimensionMismatch) {
  EXPECT_THROW(trace_distance(DensityOperator::maximally_mixed(1), DensityOperator::maximally_mixed(2)),
               std::invalid_argument);
}

TEST(TraceDistance, SymmetricAndTriangle) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = test::random_density(rng, 2), b = test::random_density(rng, 2), c = test::random_density(rng, 2);
    const double ab = trace_distance(a, b), bc = trace_distance(b, c), ac = trace_distance(a, c);
    EXPECT_NEAR(ab, trace_distance(b, a), 1e-14);
    EXPECT_LE(ac, ab + bc + 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
  }
}

TEST(TraceDistance, UnitaryInvariance) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = test::random_density(rng, 2), b = test::random_density(rng, 2);
    const CMatrix u = test::random_unitary(rng, 4);
    const DensityOperator ua(2, u * a.matrix() * u.adjoint()), ub(2, u * b.matrix() * u.adjoint());
    EXPECT_NEAR(trace_distance(ua, ub), trace_distance(a, b), 1e-10);
  }
}

TEST(Expectation, Basics) {
  EXPECT_NEAR(expectation(PauliString::parse("Z"), DensityOperator::from_pure(PureState::zero(1))), 1.0, 1e-15);
  EXPECT_NEAR(expectation(PauliString::parse("X"), DensityOperator::maximally_mixed(1)), 0.0, 1e-15);
  EXPECT_THROW(expectation(PauliString::parse("X", kI), DensityOperator::maximally_mixed(1)), std::invalid_argument);
}

TEST(Expectation, XOnPlusAfterDepolarizing) {
  const double eps = 0.075;
  const auto rho = apply_channel(DensityOperator(1, projector(plus())), PauliChannel::depolarizing(1, eps), {0});
  // oracle: mixture written out with dense matrices, then Tr(X rho)
  const CMatrix p = projector(plus());
  CMatrix mix = (1 - eps) * p;
  for (Pauli s : {Pauli::X, Pauli::Y, Pauli::Z}) mix += eps / 3 * pauli_matrix(s) * p * pauli_matrix(s);
  const double oracle = (pauli_matrix(Pauli::X) * mix).trace().real();
  EXPECT_NEAR(oracle, 0.9, 1e-14);
  EXPECT_NEAR(expectation(PauliString::parse("X"), rho), oracle, 1e-14);
}

TEST(DensityOperator, ValidationAndClipping) {
  CMatrix bad(2, 2);
  bad << 1.2, 0, 0, -0.2;
  EXPECT_THROW(DensityOperator(1, bad), std::invalid_argument);
  CMatrix nonherm(2, 2);
  nonherm << 0.5, 0.1, 0.0, 0.5;
  EXPECT_THROW(DensityOperator(1, nonherm), std::invalid_argument);
  CMatrix tiny(2, 2);
  tiny << 1.0 + 5e-11, 0, 0, -5e-11;
  const auto r = DensityOperator(1, tiny);
  EXPECT_GE(r.eigenvalues().minCoeff(), 0.0);
}
