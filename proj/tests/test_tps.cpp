#include <gtest/gtest.h>

#include <numbers>

#include "tpslab/lab.hpp"
#include "tpslab/nonequivalence.hpp"
#include "tpslab/spectrum.hpp"
#include "tpslab/tps.hpp"

using namespace tpslab;

namespace {

ComplexMatrix random_local_unitary(std::span<const Index> dims, RandomStream& rng) {
  std::vector<ComplexMatrix> factors;
  for (Index d : dims) factors.push_back(haar_unitary(d, rng));
  return local_unitary(factors);
}

std::vector<double> sorted_entropies(const DensityState& s, const TensorProductStructure& tps) {
  return entropy_profile(s, tps).sorted_multiset;
}

}  // namespace

TEST(StandardTps, Construction) {
  const auto a = standard_tps({2, 2});
  EXPECT_EQ(a.dim(), 4);
  EXPECT_EQ(a.frame(), identity(4));
  EXPECT_EQ(standard_tps({2, 3}).dim(), 6);
  const auto single = standard_tps({2});
  EXPECT_EQ(single.factor_count(), 1);
  EXPECT_EQ(dimension_ledger(single.factor_dims()).gap, 0);
}

TEST(StandardTps, RejectsSmallFactors) {
  for (const std::vector<Index>& dims : {std::vector<Index>{2, 1}, std::vector<Index>{}, std::vector<Index>{0}}) {
    try {
      standard_tps(dims);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidFactorDim);
    }
  }
}

TEST(TensorProductStructure, RejectsNonUnitaryFrame) {
  EXPECT_THROW(TensorProductStructure({2, 2}, 2.0 * identity(4)), Error);
  EXPECT_THROW(TensorProductStructure({2, 2}, identity(3)), Error);
}

TEST(HermitianBasis, OrthogonalHermitianAndComplete) {
  for (Index d : {2, 3, 4}) {
    const auto basis = hermitian_basis(d);
    ASSERT_EQ(static_cast<Index>(basis.size()), d * d);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      EXPECT_LE(hermiticity_residual(basis[i]), 1e-15);
      if (i > 0) EXPECT_NEAR(std::abs(basis[i].trace()), 0.0, 1e-14);
      for (std::size_t j = 0; j < i; ++j) EXPECT_NEAR(std::abs((basis[i] * basis[j]).trace()), 0.0, 1e-14);
    }
  }
}

TEST(AlgebrasOf, StandardQubitPair) {
  const auto algebras = algebras_of(standard_tps({2, 2}));
  ASSERT_EQ(algebras.size(), 2u);
  EXPECT_EQ(algebras[0].generators.size(), 4u);
  EXPECT_EQ(algebras[1].generators.size(), 4u);
  for (const auto& a : algebras[0].generators) {
    EXPECT_LE(hermiticity_residual(a), 1e-10);
    for (const auto& b : algebras[1].generators) EXPECT_LE(commutator(a, b).norm(), 1e-10);
  }
  EXPECT_EQ(span_intersection_dim(algebras[0].generators, algebras[1].generators), 1);
}

TEST(CheckTpsConditions, StandardPasses) {
  for (const std::vector<Index>& dims : {std::vector<Index>{2, 2}, std::vector<Index>{2, 3}, std::vector<Index>{2, 2, 2}}) {
    const auto algebras = algebras_of(standard_tps(dims));
    const auto report = check_tps_conditions(algebras);
    EXPECT_TRUE(report.passes());
    EXPECT_EQ(report.generated_dim, product_of(dims) * product_of(dims));
  }
}

TEST(CheckTpsConditions, DuplicatedFullAlgebraFails) {
  std::vector<ObservableAlgebra> algebras(2);
  for (auto& a : algebras) a.generators = hermitian_basis(4);
  algebras[1].factor_index = 1;
  const auto report = check_tps_conditions(algebras);
  EXPECT_FALSE(report.passes());
  EXPECT_FALSE(report.commute());
  ASSERT_EQ(report.overlaps.size(), 1u);
  EXPECT_EQ(report.overlaps[0].intersection_dim, 16);
  EXPECT_TRUE(report.generates_full_algebra());
}

TEST(CheckTpsConditions, MissingFactorIsNotFull) {
  auto algebras = algebras_of(standard_tps({2, 2}));
  algebras.pop_back();
  const auto report = check_tps_conditions(algebras);
  EXPECT_EQ(report.generated_dim, 4);
  EXPECT_FALSE(report.generates_full_algebra());
}

TEST(CheckTpsConditions, HaarConjugationPreservesConditions) {
  RandomStream rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto tps = transform_tps(standard_tps({2, 3}), haar_unitary(6, rng));
    const auto report = check_tps_conditions(algebras_of(tps));
    EXPECT_TRUE(report.passes()) << "trial " << trial;
  }
}

TEST(TransformTps, FrameAndAlgebras) {
  RandomStream rng(2);
  const auto ref = standard_tps({2, 2});
  const auto same = transform_tps(ref, identity(4));
  EXPECT_EQ(same.frame(), ref.frame());

  const ComplexMatrix s = haar_unitary(4, rng);
  const auto moved = transform_tps(ref, s);
  const auto before = algebras_of(ref);
  const auto after = algebras_of(moved);
  for (std::size_t j = 0; j < before.size(); ++j) {
    for (std::size_t g = 0; g < before[j].generators.size(); ++g) {
      EXPECT_LE((after[j].generators[g] - s * before[j].generators[g] * s.adjoint()).norm(), 1e-9);
    }
  }
  try {
    transform_tps(ref, 2.0 * identity(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotUnitary);
  }
}

TEST(TransformTps, LocalUnitaryKeepsAlgebraSet) {
  RandomStream rng(17);
  const std::vector<Index> dims{2, 2};
  const auto ref = standard_tps(dims);
  const auto moved = transform_tps(ref, random_local_unitary(dims, rng));
  EXPECT_TRUE(same_algebra_set(algebras_of(ref), algebras_of(moved)));
  EXPECT_TRUE(check_tps_conditions(algebras_of(moved)).passes());
  const auto probe = pure_state(haar_state(4, rng));
  const auto a = sorted_entropies(probe, ref), b = sorted_entropies(probe, moved);
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-9);
}

TEST(TransformTps, SwapExchangesAlgebras) {
  RandomStream rng(19);
  const std::vector<Index> dims{2, 2}, perm{1, 0};
  const ComplexMatrix swap = factor_permutation(dims, perm);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(1, 2) = expected(2, 1) = expected(3, 3) = 1.0;
  EXPECT_EQ(swap, expected);

  const auto ref = standard_tps(dims);
  const auto moved = transform_tps(ref, swap);
  const auto a = algebras_of(ref), b = algebras_of(moved);
  EXPECT_EQ(span_intersection_dim(a[0].generators, b[1].generators), 4);
  EXPECT_EQ(span_intersection_dim(a[0].generators, b[0].generators), 1);
  EXPECT_TRUE(same_algebra_set(a, b));

  const auto probe = pure_state(haar_state(4, rng));
  const auto pa = entropy_profile(probe, ref), pb = entropy_profile(probe, moved);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(pa.sorted_multiset[j], pb.sorted_multiset[j], 1e-12);
}

TEST(FactorPermutation, RejectsUnequalDims) {
  const std::vector<Index> dims{2, 3}, perm{1, 0};
  EXPECT_THROW(factor_permutation(dims, perm), Error);
}

TEST(DimensionLedger, KnownValues) {
  const std::vector<Index> three_qubits{2, 2, 2};
  const auto l3 = dimension_ledger(three_qubits);
  EXPECT_EQ(l3.dim_u_tps, 10);
  EXPECT_EQ(l3.dim_u_h_lower, 8);
  EXPECT_EQ(l3.dim_u_h_upper, 64);
  EXPECT_EQ(l3.d_h, 8);
  EXPECT_EQ(l3.d_tps, 4);
  EXPECT_EQ(l3.gap, 4);

  const std::vector<Index> two_qubits{2, 2};
  const auto l2 = dimension_ledger(two_qubits);
  EXPECT_EQ(l2.d_h, 4);
  EXPECT_EQ(l2.d_tps, 3);

  const std::vector<Index> single{5};
  EXPECT_EQ(dimension_ledger(single).gap, 0);

  const std::vector<Index> bad{3, 1};
  EXPECT_THROW(dimension_ledger(bad), Error);
}

TEST(DimensionLedger, StrictGapOverAllFactorizations) {
  for (Index dim = 4; dim <= 64; ++dim) {
    for (const auto& f : factorizations(dim)) {
      const auto l = dimension_ledger(f);
      // Independent arithmetic.
      std::int64_t prod = 1, sum = 0;
      for (Index d : f) prod *= d, sum += d;
      const auto n = static_cast<std::int64_t>(f.size());
      EXPECT_EQ(l.d_h, prod);
      EXPECT_EQ(l.d_tps, sum - n + 1);
      EXPECT_GT(l.gap, 0) << "dim " << dim;
    }
  }
}

TEST(LocalUnitaryGroupDimension, KnownValues) {
  EXPECT_EQ(local_unitary_group_dimension(standard_tps({2, 2})), 7);
  EXPECT_EQ(local_unitary_group_dimension(standard_tps({2, 2, 2})), 10);
  EXPECT_EQ(local_unitary_group_dimension(standard_tps({2, 3})), 12);
}

TEST(LocalUnitaryGroupDimension, FrameDoesNotMatter) {
  RandomStream rng(23);
  const auto tps = transform_tps(standard_tps({2, 3}), haar_unitary(6, rng));
  EXPECT_EQ(local_unitary_group_dimension(tps), 12);
}

TEST(LocalUnitaryGroupDimension, FormulaAgreementUpTo64) {
  std::vector<std::vector<Index>> cases;
  for (Index d = 2; d <= 8; ++d) cases.push_back({d});
  for (Index dim = 4; dim <= 64; ++dim) {
    for (auto& f : factorizations(dim)) {
      // Large single factors only add cost: each brings d² generators.
      if (f.back() <= 8) cases.push_back(std::move(f));
    }
  }
  for (const auto& f : cases) {
    EXPECT_EQ(local_unitary_group_dimension(standard_tps(f)), dimension_ledger(f).dim_u_tps);
  }
}

TEST(CommutingSymmetry, MovesAlgebras) {
  RandomStream rng(29);
  const auto ham = cluster_spectrum(gue(4, rng));
  ASSERT_EQ(ham.multiplicities(), std::vector<Index>(4, 1));
  const auto ref = standard_tps({2, 2});
  const auto before = algebras_of(ref);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix s = sample_commuting_unitary(ham, rng);
    const auto after = algebras_of(transform_tps(ref, s));
    EXPECT_FALSE(same_algebra_set(before, after)) << "trial " << trial;
  }
}

TEST(CertifyNonequivalence, Reflexive) {
  RandomStream rng(3);
  const auto ref = standard_tps({2, 2});
  const auto probes = probe_family(4, {}, rng);
  EXPECT_EQ(probes.size(), 13u);
  const auto w = certify_nonequivalence(ref, ref, probes);
  EXPECT_EQ(w.verdict, Verdict::NotDistinguished);
  EXPECT_LE(w.max_discrepancy, 1e-12);
}

TEST(CertifyNonequivalence, LocalUnitaryNotDistinguished) {
  RandomStream rng(37);
  const std::vector<Index> dims{2, 3};
  const auto ref = standard_tps(dims);
  const auto probes = probe_family(6, {}, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = certify_nonequivalence(ref, transform_tps(ref, random_local_unitary(dims, rng)), probes);
    EXPECT_EQ(w.verdict, Verdict::NotDistinguished);
    EXPECT_LE(w.max_discrepancy, 1e-9);
  }
}

TEST(CertifyNonequivalence, IsingEvolutionCertified) {
  const auto ref = standard_tps({2, 2});
  const ComplexMatrix u = unitary_exp(kron(pauli_x(), pauli_x()), std::numbers::pi / 4, 1);
  const std::vector<Probe> probes{{"zeros", basis_state(4, 0)}};
  const auto w = certify_nonequivalence(ref, transform_tps(ref, u), probes);
  EXPECT_EQ(w.verdict, Verdict::NonequivalentCertified);
  EXPECT_NEAR(w.max_discrepancy, std::numbers::ln2, 1e-9);
}

TEST(CertifyNonequivalence, DifferentFactorDimsAndMismatch) {
  const std::vector<Probe> none;
  const auto w = certify_nonequivalence(standard_tps({2, 3}), standard_tps({6}), none);
  EXPECT_TRUE(w.factor_dims_differ);
  EXPECT_EQ(w.verdict, Verdict::NonequivalentCertified);
  const auto w2 = certify_nonequivalence(standard_tps({2, 3}), standard_tps({3, 2}), none);
  EXPECT_FALSE(w2.factor_dims_differ);
  try {
    certify_nonequivalence(standard_tps({2, 2}), standard_tps({2, 3}), none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}
