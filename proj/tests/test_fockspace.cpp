#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "blockade/fockspace.hpp"

using namespace blockade;

namespace {

std::set<std::string> kets(const std::vector<BasisState>& states) {
  std::set<std::string> out;
  for (const auto& s : states) out.insert(to_ket(s));
  return out;
}

MatrixXc random_matrix(Index n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  MatrixXc m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
  return m;
}

// Every (level, occupations) pair by exhaustive odometer, filtered by the cap.
std::vector<BasisState> brute_force_basis(int n_levels, int n_modes, int cap) {
  std::vector<BasisState> out;
  std::vector<int> digits(n_modes + 1, 0);
  const int radix = cap + 1;
  for (;;) {
    BasisState s{digits[0], std::vector<int>(digits.begin() + 1, digits.end())};
    if (s.atom_level < n_levels && s.excitation() <= cap) out.push_back(s);
    int k = 0;
    while (k <= n_modes && ++digits[k] == radix) digits[k++] = 0;
    if (k > n_modes) break;
  }
  return out;
}

}  // namespace

TEST(EnumerateBasis, ThreeModesCapTwoHasFourteenStates) {
  const auto b = enumerate_basis(2, 3, 2);
  EXPECT_EQ(b.size(), 14u);
  const auto k = kets(b);
  for (const char* s : {"|g,000⟩", "|e,001⟩", "|g,110⟩", "|g,002⟩"}) EXPECT_TRUE(k.count(s)) << s;
}

TEST(EnumerateBasis, SingleModeMatchesAnsatz) {
  const auto b = enumerate_basis(2, 1, 2);
  EXPECT_EQ(kets(b), (std::set<std::string>{"|g,0⟩", "|g,1⟩", "|e,0⟩", "|e,1⟩", "|g,2⟩"}));
}

TEST(EnumerateBasis, NoModes) {
  const auto b = enumerate_basis(2, 0, 2);
  EXPECT_EQ(kets(b), (std::set<std::string>{"|g⟩", "|e⟩"}));
  EXPECT_EQ(enumerate_basis(2, 3, 0).size(), 1u);
}

TEST(EnumerateBasis, CanonicalOrder) {
  const auto b = enumerate_basis(2, 3, 2);
  for (std::size_t i = 1; i < b.size(); ++i) {
    const auto key = [](const BasisState& s) { return std::tuple(s.excitation(), s.atom_level, s.occupations); };
    EXPECT_LT(key(b[i - 1]), key(b[i]));
  }
  EXPECT_EQ(to_ket(b.front()), "|g,000⟩");
}

TEST(EnumerateBasis, CountMatchesBruteForce) {
  for (int m = 0; m <= 5; ++m) {
    const auto b = enumerate_basis(2, m, 2);
    const std::size_t formula = 1 + (1 + m) + (m + m * (m + 1) / 2);
    EXPECT_EQ(b.size(), formula) << m;
    auto brute = brute_force_basis(2, m, 2);
    auto sorted = b;
    std::sort(sorted.begin(), sorted.end());
    std::sort(brute.begin(), brute.end());
    EXPECT_EQ(sorted, brute) << m;
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  }
}

TEST(EnumerateBasis, ThreeLevelAtom) {
  const auto b = enumerate_basis(3, 1, 2);
  auto brute = brute_force_basis(3, 1, 2);
  EXPECT_EQ(b.size(), brute.size());
  EXPECT_TRUE(kets(b).count("|f,0⟩"));
}

TEST(EnumerateBasis, RejectsNegativeArguments) {
  EXPECT_THROW(enumerate_basis(0, 1, 2), InvalidArgument);
  EXPECT_THROW(enumerate_basis(2, -1, 2), InvalidArgument);
  EXPECT_THROW(enumerate_basis(2, 1, -1), InvalidArgument);
}

TEST(Ket, Formatting) {
  EXPECT_EQ(to_ket({1, {0, 0, 1}}), "|e,001⟩");
  EXPECT_EQ(to_ket({0, {}}), "|g⟩");
  EXPECT_EQ(to_ket({0, {10, 2}}), "|g,10,2⟩");
}

TEST(HilbertSpec, Dimensions) {
  HilbertSpec spec{2, 3, 2, 2};
  EXPECT_EQ(spec.full_dimension(), 54);
  EXPECT_EQ(spec.capped_dimension(), 14);
  EXPECT_EQ(spec.dims(), (std::vector<Index>{2, 3, 3, 3}));
  EXPECT_EQ((HilbertSpec{2, 1, 2, 2}.full_dimension()), 6);
  EXPECT_THROW((HilbertSpec{1, 1, 2, 2}.validate()), InvalidArgument);
}

TEST(HilbertSpec, TensorIndexIsAtomMajor) {
  HilbertSpec spec{2, 3, 2, 2};
  EXPECT_EQ(tensor_index({0, {0, 0, 0}}, spec), 0);
  EXPECT_EQ(tensor_index({0, {0, 0, 1}}, spec), 1);
  EXPECT_EQ(tensor_index({1, {0, 0, 0}}, spec), 27);
  EXPECT_EQ(tensor_index({1, {2, 2, 2}}, spec), 53);
  EXPECT_THROW(tensor_index({0, {3, 0, 0}}, spec), InvalidArgument);
}

TEST(Annihilation, Entries) {
  MatrixXc two(2, 2);
  two << 0, 1, 0, 0;
  EXPECT_EQ(annihilation(2).dense(), two);
  const auto a3 = annihilation(3).dense();
  EXPECT_EQ(a3(0, 1), Complex(1));
  EXPECT_NEAR(std::abs(a3(1, 2) - std::sqrt(2.0)), 0, 1e-15);
  EXPECT_EQ(a3.cwiseAbs().sum(), 1 + std::sqrt(2.0));
  EXPECT_THROW(annihilation(1), InvalidDimension);
}

TEST(Annihilation, NumberOperator) {
  const auto a = annihilation(3);
  const MatrixXc n = (a.adjoint() * a).dense();
  EXPECT_LT((n - Eigen::Vector3cd(0, 1, 2).asDiagonal().toDenseMatrix()).norm(), 1e-14);
}

TEST(Annihilation, CommutatorBelowCutoff) {
  for (Index dim : {2, 3, 6}) {
    const MatrixXc a = annihilation(dim).dense();
    const MatrixXc c = a * a.adjoint() - a.adjoint() * a;
    const MatrixXc id = MatrixXc::Identity(dim, dim);
    EXPECT_LT((c - id).topRows(dim - 1).norm(), 1e-14) << dim;
  }
}

TEST(Annihilation, AdjointInvolution) {
  const auto a = annihilation(4);
  EXPECT_EQ(a.adjoint().adjoint().dense(), a.dense());
}

TEST(AtomLowering, Algebra) {
  const MatrixXc s = atom_lowering().dense();
  EXPECT_EQ(MatrixXc(s * s.adjoint() + s.adjoint() * s), MatrixXc::Identity(2, 2));
  EXPECT_EQ(VectorXc(s * Eigen::Vector2cd(0, 1)), Eigen::Vector2cd(1, 0));
  EXPECT_EQ(VectorXc(s * Eigen::Vector2cd(1, 0)), Eigen::Vector2cd(0, 0));
}

TEST(Tensor, IdentityAndSingleFactor) {
  EXPECT_EQ(tensor({identity(2), identity(3)}).dense(), MatrixXc::Identity(6, 6));
  EXPECT_EQ(tensor({identity(2), identity(3)}).dims(), (std::vector<Index>{2, 3}));
  const auto a = annihilation(3);
  EXPECT_EQ(tensor({a}).dense(), a.dense());
  EXPECT_THROW(tensor(std::span<const Operator>{}), InvalidArgument);
}

TEST(Tensor, MixedProduct) {
  std::mt19937 rng(7);
  const Operator A(random_matrix(2, rng)), C(random_matrix(2, rng));
  const Operator B(random_matrix(3, rng)), D(random_matrix(3, rng));
  const MatrixXc lhs = (tensor({A, B}) * tensor({C, D})).dense();
  const MatrixXc rhs = tensor({A * C, B * D}).dense();
  EXPECT_LT((lhs - rhs).norm(), 1e-12 * lhs.norm());
  // Direct Kronecker oracle: (A (x) B)(i*3 + k, j*3 + l) = A(i, j) B(k, l).
  const MatrixXc ab = tensor({A, B}).dense();
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index k = 0; k < 3; ++k)
        for (Index l = 0; l < 3; ++l)
          EXPECT_NEAR(std::abs(ab(i * 3 + k, j * 3 + l) - A.coeff(i, j) * B.coeff(k, l)), 0, 1e-14);
}

TEST(Tensor, Associative) {
  std::mt19937 rng(11);
  const Operator A(random_matrix(2, rng)), B(random_matrix(3, rng)), C(random_matrix(2, rng));
  const auto x = tensor({A, tensor({B, C})});
  const auto y = tensor({A, B, C});
  EXPECT_LT((x.dense() - y.dense()).norm(), 1e-13);
  EXPECT_EQ(x.dims(), y.dims());
}

TEST(Operator, StorageFollowsDimension) {
  HilbertSpec big{2, 3, 2, 2};
  EXPECT_TRUE(embed(annihilation(3), 1, big).is_sparse());
  HilbertSpec small{2, 1, 2, 2};
  EXPECT_FALSE(embed(annihilation(3), 1, small).is_sparse());
  EXPECT_THROW(Operator(std::vector<Index>{2, 2}, MatrixXc(MatrixXc::Identity(3, 3))), InvalidArgument);
  EXPECT_THROW(annihilation(2) * annihilation(3), InvalidArgument);
}

TEST(Embed, DisjointSupportsCommute) {
  HilbertSpec spec{2, 2, 2, 2};
  const auto s = embed(atom_lowering(), 0, spec);
  const auto a = embed(annihilation(3), 1, spec);
  EXPECT_EQ((s * a - a * s).nonzeros(), 0);
}

TEST(Embed, ModeCommutators) {
  HilbertSpec spec{2, 2, 2, 2};
  const auto a1 = embed(annihilation(3), 1, spec);
  const auto a2 = embed(annihilation(3), 2, spec);
  EXPECT_EQ((a1 * a2.adjoint() - a2.adjoint() * a1).nonzeros(), 0);
  const MatrixXc c = (a1 * a1.adjoint() - a1.adjoint() * a1).dense();
  for (const auto& st : enumerate_basis(2, 2, 6)) {
    if (st.occupations[0] > 2 || st.occupations[1] > 2) continue;
    const Index k = tensor_index(st, spec);
    if (st.occupations[0] < 2) {
      EXPECT_LT((c.row(k) - MatrixXc::Identity(18, 18).row(k)).norm(), 1e-14) << to_ket(st);
    }
  }
}

TEST(Embed, IdentityAndSparsity) {
  HilbertSpec spec{2, 3, 2, 2};
  for (int slot = 0; slot < 4; ++slot) {
    const Index d = spec.dims()[slot];
    EXPECT_EQ(embed(identity(d), slot, spec).dense(), MatrixXc::Identity(54, 54));
  }
  const auto a = annihilation(3);
  EXPECT_EQ(embed(a, 2, spec).nonzeros(), a.nonzeros() * 2 * 3 * 3);
  EXPECT_EQ(embed(atom_lowering(), 0, spec).nonzeros(), 27);
}

TEST(Embed, Errors) {
  HilbertSpec spec{2, 1, 2, 2};
  EXPECT_THROW(embed(annihilation(4), 1, spec), InvalidArgument);
  EXPECT_THROW(embed(annihilation(3), 2, spec), InvalidArgument);
  EXPECT_THROW(embed(annihilation(3), -1, spec), InvalidArgument);
}
