// Copyright 2026 The qcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "qcausal/channels.hpp"
#include "qcausal/entropy.hpp"
#include "test_support.hpp"

namespace qcausal {
namespace {

using Labels = std::vector<std::string>;

DensityOperator state(const Matrix& m, LabeledDims dims) {
  return DensityOperator(LabeledOperator(m, std::move(dims)));
}

std::vector<EntropySpec> all_families() {
  return {EntropySpec::von_neumann(), EntropySpec::renyi(0.3), EntropySpec::renyi(0.5),
          EntropySpec::renyi(0.8),    EntropySpec::renyi(2.0), EntropySpec::renyi(3.0),
          EntropySpec::min(),         EntropySpec::max()};
}

/// Renyi entropy from Eigen's spectrum.
double renyi_oracle(const Matrix& rho, double alpha) {
  const Eigen::VectorXd ev = qtest::eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-14) s += std::pow(ev(i), alpha);
  }
  return std::log2(s) / (1.0 - alpha);
}

TEST(Entropy, MaximallyMixedGivesLogDimension) {
  for (std::size_t d : {1u, 2u, 3u, 5u}) {
    const auto omega = DensityOperator::maximally_mixed(LabeledDims{{"A", d}});
    for (const auto& spec : all_families()) {
      EXPECT_NEAR(entropy(omega, spec), std::log2(static_cast<double>(d)), 1e-12) << spec.name();
    }
  }
}

TEST(Entropy, PureStateGivesZero) {
  qtest::Gen gen(1);
  const auto rho = state(qtest::projector(gen.unit_vector(4)), {{"A", 4}});
  for (const auto& spec : all_families()) EXPECT_NEAR(entropy(rho, spec), 0.0, 1e-10) << spec.name();
}

TEST(Entropy, QuarterDiagonalState) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.75;
  m(1, 1) = 0.25;
  const auto rho = state(m, {{"A", 2}});
  EXPECT_NEAR(entropy(rho), 0.5 + 0.75 * std::log2(4.0 / 3.0), 1e-14);
  EXPECT_NEAR(entropy(rho, EntropySpec::min()), -std::log2(0.75), 1e-14);
  EXPECT_NEAR(entropy(rho, EntropySpec::max()), 1.0, 1e-14);
  EXPECT_NEAR(entropy(rho, EntropySpec::renyi(2.0)), -std::log2(0.625), 1e-14);
}

TEST(Entropy, MatchesSpectrumOracleOnMarginals) {
  qtest::Gen gen(2);
  for (int t = 0; t < 20; ++t) {
    const Matrix m = gen.density(12, gen.integer(1, 12));
    const auto rho = state(m, {{"A", 2}, {"B", 3}, {"C", 2}});
    const Labels ac{"A", "C"};
    const Matrix marginal = qtest::partial_trace(m, {2, 3, 2}, {true, false, true});
    EXPECT_NEAR(entropy(rho, ac), qtest::von_neumann(marginal), 1e-10);
    for (double alpha : {0.5, 0.8, 2.0, 3.5}) {
      EXPECT_NEAR(entropy(rho, ac, EntropySpec::renyi(alpha)), renyi_oracle(marginal, alpha), 1e-9)
          << alpha;
    }
  }
}

TEST(Entropy, SubsystemHandling) {
  qtest::Gen gen(3);
  const auto rho = state(gen.density(4, 4), {{"A", 2}, {"B", 2}});
  const Labels none;
  const Labels dup{"A", "A"};
  const Labels unknown{"Z"};
  EXPECT_EQ(entropy(rho, none), 0.0);
  EXPECT_THROW(entropy(rho, dup), Error);
  EXPECT_THROW(entropy(rho, unknown), Error);
  // Order of the requested labels does not matter.
  const Labels ab{"A", "B"}, ba{"B", "A"};
  EXPECT_NEAR(entropy(rho, ab), entropy(rho, ba), 1e-12);
}

TEST(EntropyFromSpectrum, ClipsSmallNegativesAndRejectsLargeOnes) {
  RealVector ev(3);
  ev << 0.5, 0.5, -5e-10;
  EXPECT_NEAR(entropy_from_spectrum(ev, EntropySpec::von_neumann()), 1.0, 1e-9);
  ev(2) = -1e-6;
  EXPECT_THROW(entropy_from_spectrum(ev, EntropySpec::von_neumann()), Error);
}

TEST(EntropyFromSpectrum, MaxEntropyRankIsRelative) {
  RealVector ev(3);
  ev << 1.0 - 2e-11, 1e-11, 1e-11;
  EXPECT_NEAR(entropy_from_spectrum(ev, EntropySpec::max()), 0.0, 1e-15);
  ev << 0.5, 0.5 - 1e-8, 1e-8;
  EXPECT_NEAR(entropy_from_spectrum(ev, EntropySpec::max()), std::log2(3.0), 1e-15);
}

TEST(ConditionalEntropy, ProductStateGivesMarginal) {
  qtest::Gen gen(4);
  const Matrix rx = gen.density(2, 2), sy = gen.density(3, 3);
  const auto rho = state(qtest::kron(rx, sy), {{"X", 2}, {"Y", 3}});
  const Labels y{"Y"}, x{"X"};
  EXPECT_NEAR(conditional_entropy(rho, y, x), qtest::von_neumann(sy), 1e-10);
}

TEST(ConditionalEntropy, MaximallyEntangledIsMinusOne) {
  const auto rho = state(qtest::projector(qtest::phi_plus(2)), {{"X", 2}, {"Y", 2}});
  const Labels y{"Y"}, x{"X"};
  EXPECT_NEAR(conditional_entropy(rho, y, x), -1.0, 1e-12);
}

TEST(ConditionalEntropy, ClassicallyCorrelatedIsZero) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 0.5;
  const auto rho = state(m, {{"X", 2}, {"Y", 2}});
  const Labels y{"Y"}, x{"X"};
  EXPECT_NEAR(conditional_entropy(rho, y, x), 0.0, 1e-14);
}

TEST(ConditionalEntropy, RejectsOverlap) {
  const auto rho = DensityOperator::maximally_mixed(LabeledDims{{"X", 2}, {"Y", 2}});
  const Labels xy{"X", "Y"}, x{"X"};
  EXPECT_THROW(conditional_entropy(rho, xy, x), Error);
}

TEST(RelativeEntropy, SelfIsZero) {
  qtest::Gen gen(5);
  for (int rank : {1, 2, 4}) {
    const auto rho = state(gen.density(4, rank), {{"A", 4}});
    EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-9) << rank;
  }
}

TEST(RelativeEntropy, AgainstMaximallyMixed) {
  qtest::Gen gen(6);
  const auto rho = state(gen.density(3, 3), {{"A", 3}});
  const auto omega = DensityOperator::maximally_mixed(LabeledDims{{"A", 3}});
  EXPECT_NEAR(relative_entropy(rho, omega), std::log2(3.0) - entropy(rho), 1e-10);
}

TEST(RelativeEntropy, DisjointSupportIsInfinite) {
  const LabeledDims d{{"A", 2}};
  EXPECT_EQ(relative_entropy(DensityOperator::basis(d, 0), DensityOperator::basis(d, 1)), kInfinity);
  EXPECT_TRUE(std::isinf(relative_entropy(DensityOperator::maximally_mixed(d), DensityOperator::basis(d, 0))));
}

TEST(RelativeEntropy, MatchesMatrixLogOracle) {
  qtest::Gen gen(7);
  const Matrix r = gen.density(3, 3), s = gen.density(3, 3);
  // Tr r log r - Tr r log s via Eigen eigendecompositions.
  const auto mlog = [](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const Eigen::VectorXd l = es.eigenvalues().array().log() / std::log(2.0);
    return Matrix(es.eigenvectors() * l.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint());
  };
  const double oracle = (r * (mlog(r) - mlog(s))).trace().real();
  EXPECT_NEAR(relative_entropy(state(r, {{"A", 3}}), state(s, {{"A", 3}})), oracle, 1e-10);
  EXPECT_GT(oracle, 0.0);
}

TEST(SsaGap, ProductStateIsZero) {
  qtest::Gen gen(8);
  const Matrix m = qtest::kron(qtest::kron(gen.density(2, 2), gen.density(2, 2)), gen.density(2, 2));
  const auto rho = state(m, {{"X", 2}, {"Y", 2}, {"Z", 2}});
  const Labels x{"X"}, y{"Y"}, z{"Z"};
  EXPECT_NEAR(ssa_gap(rho, x, y, z), 0.0, 1e-10);
}

TEST(SsaGap, GhzIsOne) {
  Vector ghz = Vector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  const auto rho = state(qtest::projector(ghz), {{"X", 2}, {"Y", 2}, {"Z", 2}});
  const Labels x{"X"}, y{"Y"}, z{"Z"};
  EXPECT_NEAR(ssa_gap(rho, x, y, z), 1.0, 1e-12);
  EXPECT_THROW(ssa_gap(rho, x, x, z), Error);
}

TEST(SsaGap, NonNegativeOnRandomStates) {
  qtest::Gen gen(9);
  const Labels x{"X"}, y{"Y"}, z{"Z"};
  for (int t = 0; t < 1000; ++t) {
    const Matrix m = gen.density(8, gen.integer(1, 8));
    const auto rho = state(m, {{"X", 2}, {"Y", 2}, {"Z", 2}});
    const double gap = ssa_gap(rho, x, y, z);
    EXPECT_GE(gap, -1e-9);
    if (t % 100 == 0) {
      const double oracle = qtest::von_neumann(qtest::partial_trace(m, {2, 2, 2}, {true, true, false})) +
                            qtest::von_neumann(qtest::partial_trace(m, {2, 2, 2}, {false, true, true})) -
                            qtest::von_neumann(m) -
                            qtest::von_neumann(qtest::partial_trace(m, {2, 2, 2}, {false, true, false}));
      EXPECT_NEAR(gap, oracle, 1e-9);
    }
  }
}

TEST(EntropySpec, ParseAndName) {
  EXPECT_EQ(EntropySpec::parse("vn"), EntropySpec::von_neumann());
  EXPECT_EQ(EntropySpec::parse("min"), EntropySpec::min());
  EXPECT_EQ(EntropySpec::parse("max"), EntropySpec::max());
  EXPECT_EQ(EntropySpec::parse("renyi:inf"), EntropySpec::min());
  EXPECT_EQ(EntropySpec::parse("renyi:1"), EntropySpec::von_neumann());
  EXPECT_EQ(EntropySpec::parse("renyi:0.65").alpha(), 0.65);
  for (const auto& spec : all_families()) EXPECT_EQ(EntropySpec::parse(spec.name()), spec);
  EXPECT_EQ(EntropySpec::renyi(1.0 + 5e-7), EntropySpec::von_neumann());
  EXPECT_NE(EntropySpec::renyi(1.0 + 1e-4), EntropySpec::von_neumann());
  for (const char* bad : {"", "renyi", "renyi:", "renyi:-1", "renyi:0", "renyi:x", "renyi:2x", "shannon"}) {
    EXPECT_THROW(EntropySpec::parse(bad), Error) << bad;
  }
  EXPECT_THROW(EntropySpec::renyi(std::nan("")), Error);
}

TEST(EntropySpec, ValidatedRange) {
  EXPECT_TRUE(EntropySpec::von_neumann().validated());
  EXPECT_TRUE(EntropySpec::renyi(0.5).validated());
  EXPECT_TRUE(EntropySpec::renyi(0.9).validated());
  EXPECT_TRUE(EntropySpec::renyi(7.0).validated());
  EXPECT_TRUE(EntropySpec::min().validated());
  EXPECT_TRUE(EntropySpec::max().validated());
  EXPECT_FALSE(EntropySpec::renyi(0.49).validated());
  EXPECT_FALSE(EntropySpec::renyi(0.1).validated());
  EXPECT_TRUE(EntropySpec::max().externally_cited());
  EXPECT_FALSE(EntropySpec::min().externally_cited());
}

// Invariants.

TEST(EntropyProperties, PureStateDuality) {
  qtest::Gen gen(400);
  for (int t = 0; t < 30; ++t) {
    const std::size_t da = static_cast<std::size_t>(gen.integer(1, 4));
    const std::size_t db = static_cast<std::size_t>(gen.integer(1, 4));
    const PureState psi(gen.unit_vector(static_cast<int>(da * db)), {{"A", da}, {"B", db}});
    const auto rho = psi.density();
    const Labels a{"A"}, b{"B"};
    for (const auto& spec : all_families()) {
      if (!spec.validated()) continue;
      EXPECT_NEAR(entropy(rho, a, spec), entropy(rho, b, spec), 1e-9) << spec.name();
    }
  }
}

TEST(EntropyProperties, RenyiContinuousAtOne) {
  qtest::Gen gen(401);
  for (int t = 0; t < 20; ++t) {
    const auto rho = state(gen.density(6, gen.integer(1, 6)), {{"A", 6}});
    const double vn = entropy(rho);
    EXPECT_LT(std::abs(entropy(rho, EntropySpec::renyi(1.0 + 1e-4)) - vn), 1e-3);
    EXPECT_LT(std::abs(entropy(rho, EntropySpec::renyi(1.0 - 1e-4)) - vn), 1e-3);
  }
}

TEST(EntropyProperties, MinBelowRenyiBelowMax) {
  qtest::Gen gen(402);
  for (int t = 0; t < 30; ++t) {
    const auto rho = state(gen.density(5, gen.integer(1, 5)), {{"A", 5}});
    const double lo = entropy(rho, EntropySpec::min());
    const double hi = entropy(rho, EntropySpec::max());
    double previous = hi;
    for (double alpha : {0.1, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 4.0, 10.0}) {
      const double h = entropy(rho, EntropySpec::renyi(alpha));
      EXPECT_GE(h, lo - 1e-9) << alpha;
      EXPECT_LE(h, hi + 1e-9) << alpha;
      EXPECT_LE(h, previous + 1e-9) << alpha;  // non-increasing in alpha
      previous = h;
    }
  }
}

TEST(EntropyProperties, FactorizableChannelsRaiseEntropyByDimensionRatio) {
  // Lambda(rho) = Tr_F U (omega_B1 (x) rho) U^dagger built here with index loops.
  qtest::Gen gen(403);
  struct Shape {
    int b1, q1, f, q2;
  };
  const std::vector<Shape> shapes{{2, 2, 2, 2}, {2, 3, 3, 2}, {3, 2, 2, 3}, {2, 2, 1, 4}, {1, 4, 2, 2}};
  const std::vector<EntropySpec> specs{EntropySpec::von_neumann(), EntropySpec::renyi(0.5),
                                       EntropySpec::renyi(0.8), EntropySpec::renyi(2.0),
                                       EntropySpec::min()};
  for (int t = 0; t < 50; ++t) {
    const Shape& s = shapes[static_cast<std::size_t>(t) % shapes.size()];
    const Matrix u = gen.unitary(s.b1 * s.q1);
    const Matrix rho = gen.density(s.q1, gen.integer(1, s.q1));
    const Matrix omega = Matrix::Identity(s.b1, s.b1) / static_cast<double>(s.b1);
    const Matrix out = qtest::partial_trace(u * qtest::kron(omega, rho) * u.adjoint(), {s.f, s.q2},
                                            {false, true});
    const auto in_state = state(rho, {{"Q1", static_cast<std::size_t>(s.q1)}});
    const auto out_state = state(out, {{"Q2", static_cast<std::size_t>(s.q2)}});
    const double bound = std::log2(static_cast<double>(s.q2) / s.q1);
    for (const auto& spec : specs) {
      EXPECT_GE(entropy(out_state, spec) - entropy(in_state, spec), bound - 1e-9) << spec.name();
    }
  }
}

}  // namespace
}  // namespace qcausal
