#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "blockade/types.hpp"

namespace blockade {

/// Atom level plus per-mode photon occupations.
struct BasisState {
  int atom_level = 0;
  std::vector<int> occupations;

  int excitation() const {
    return atom_level + std::accumulate(occupations.begin(), occupations.end(), 0);
  }

  friend bool operator==(const BasisState&, const BasisState&) = default;
  friend auto operator<=>(const BasisState&, const BasisState&) = default;
};

/// Ket notation: |g,000>, |e,1>, |g> (no modes). Levels beyond the second are
/// written f, h, ... and occupations above 9 are comma separated.
std::string to_ket(const BasisState& state);

/// Truncated Hilbert space of one few-level atom and `n_modes` bosonic modes.
///
/// Two truncations coexist: the full tensor product with `fock_cutoff`
/// photons per mode, and the excitation-capped list with at most
/// `max_excitation` quanta in total. Subsystem slot 0 is the atom, slot i
/// (1-based) is mode i.
struct HilbertSpec {
  int n_levels = 2;
  int n_modes = 1;
  int fock_cutoff = 2;
  int max_excitation = 2;

  void validate() const;
  int n_slots() const { return 1 + n_modes; }
  std::vector<Index> dims() const;
  Index full_dimension() const;
  Index capped_dimension() const;
};

/// Every state with total excitation <= max_excitation, ordered by total
/// excitation, then atom level, then lexicographic occupations.
std::vector<BasisState> enumerate_basis(int n_levels, int n_modes, int max_excitation);

/// Position of `state` in the full tensor-product basis of `spec`
/// (atom most significant, mode n least significant).
Index tensor_index(const BasisState& state, const HilbertSpec& spec);

/// Square operator over an ordered product basis.
///
/// Storage is dense up to kDenseLimit rows and sparse above; the choice is a
/// function of the dimension only, so two operators on the same space always
/// share a representation.
template <typename Scalar>
class BasicOperator {
 public:
  using Dense = DenseMatrix<Scalar>;
  using Sparse = SparseMatrix<Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr Index kDenseLimit = 32;

  BasicOperator() = default;

  BasicOperator(std::vector<Index> dims, const Dense& m) : dims_(std::move(dims)) {
    check_shape(m.rows(), m.cols());
    if (m.rows() <= kDenseLimit) {
      storage_ = m;
    } else {
      storage_ = Sparse(m.sparseView(Scalar(0), Real(0)));
    }
  }

  BasicOperator(std::vector<Index> dims, const Sparse& m) : dims_(std::move(dims)) {
    check_shape(m.rows(), m.cols());
    if (m.rows() <= kDenseLimit) {
      storage_ = Dense(m);
    } else {
      Sparse s = m;
      s.prune(Scalar(0), Real(0));
      s.makeCompressed();
      storage_ = std::move(s);
    }
  }

  /// Single-subsystem operator.
  explicit BasicOperator(const Dense& m) : BasicOperator(std::vector<Index>{m.rows()}, m) {}

  const std::vector<Index>& dims() const { return dims_; }
  Index rows() const { return std::visit([](const auto& m) { return Index(m.rows()); }, storage_); }
  bool is_sparse() const { return std::holds_alternative<Sparse>(storage_); }

  Dense dense() const {
    return std::visit([](const auto& m) { return Dense(m); }, storage_);
  }
  Sparse sparse() const {
    if (is_sparse()) return std::get<Sparse>(storage_);
    Sparse s = std::get<Dense>(storage_).sparseView(Scalar(0), Real(0));
    s.makeCompressed();
    return s;
  }

  Scalar coeff(Index i, Index j) const {
    return std::visit([&](const auto& m) { return Scalar(m.coeff(i, j)); }, storage_);
  }

  /// Count of structurally and numerically nonzero entries.
  Index nonzeros() const {
    if (is_sparse()) {
      const auto& s = std::get<Sparse>(storage_);
      Index n = 0;
      for (Index k = 0; k < s.outerSize(); ++k)
        for (typename Sparse::InnerIterator it(s, k); it; ++it)
          if (it.value() != Scalar(0)) ++n;
      return n;
    }
    const auto& d = std::get<Dense>(storage_);
    return (d.array() != Scalar(0)).count();
  }

  BasicOperator adjoint() const {
    return std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          return BasicOperator(dims_, M(m.adjoint()));
        },
        storage_);
  }

  Vector apply(const Vector& v) const {
    return std::visit([&](const auto& m) { return Vector(m * v); }, storage_);
  }

  friend BasicOperator operator*(const BasicOperator& a, const BasicOperator& b) {
    a.check_same_space(b);
    if (a.is_sparse()) return {a.dims_, Sparse(a.sp() * b.sp())};
    return {a.dims_, Dense(a.dn() * b.dn())};
  }
  friend BasicOperator operator+(const BasicOperator& a, const BasicOperator& b) {
    a.check_same_space(b);
    if (a.is_sparse()) return {a.dims_, Sparse(a.sp() + b.sp())};
    return {a.dims_, Dense(a.dn() + b.dn())};
  }
  friend BasicOperator operator-(const BasicOperator& a, const BasicOperator& b) {
    a.check_same_space(b);
    if (a.is_sparse()) return {a.dims_, Sparse(a.sp() - b.sp())};
    return {a.dims_, Dense(a.dn() - b.dn())};
  }
  friend BasicOperator operator*(Scalar s, const BasicOperator& a) {
    if (a.is_sparse()) return {a.dims_, Sparse(s * a.sp())};
    return {a.dims_, Dense(s * a.dn())};
  }
  friend BasicOperator operator*(const BasicOperator& a, Scalar s) { return s * a; }

  BasicOperator& operator+=(const BasicOperator& b) { return *this = *this + b; }

 private:
  void check_shape(Index r, Index c) const {
    if (r != c) throw InvalidArgument("operator must be square");
    Index prod = 1;
    for (Index d : dims_) prod *= d;
    if (dims_.empty() || prod != r)
      throw InvalidArgument("operator dimension does not match its dims signature");
  }
  void check_same_space(const BasicOperator& b) const {
    if (dims_ != b.dims_) throw InvalidArgument("operators act on different spaces");
  }
  const Sparse& sp() const { return std::get<Sparse>(storage_); }
  const Dense& dn() const { return std::get<Dense>(storage_); }

  std::vector<Index> dims_;
  std::variant<Dense, Sparse> storage_;
};

using Operator = BasicOperator<Complex>;

template <typename Scalar = Complex>
BasicOperator<Scalar> identity(Index dim) {
  if (dim < 1) throw InvalidDimension("identity dimension must be >= 1");
  return BasicOperator<Scalar>(DenseMatrix<Scalar>::Identity(dim, dim));
}

template <typename Scalar = Complex>
BasicOperator<Scalar> identity(const std::vector<Index>& dims) {
  Index n = 1;
  for (Index d : dims) n *= d;
  SparseMatrix<Scalar> id(n, n);
  id.setIdentity();
  return BasicOperator<Scalar>(dims, id);
}

/// Truncated bosonic lowering operator: sqrt(n) on the (n-1, n) superdiagonal.
template <typename Scalar = Complex>
BasicOperator<Scalar> annihilation(Index dim) {
  if (dim < 2) throw InvalidDimension("annihilation operator needs dim >= 2, got " + std::to_string(dim));
  DenseMatrix<Scalar> a = DenseMatrix<Scalar>::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) a(n - 1, n) = Scalar(std::sqrt(Real(n)));
  return BasicOperator<Scalar>(a);
}

/// |g><e| in the (g, e) ordering.
template <typename Scalar = Complex>
BasicOperator<Scalar> atom_lowering() {
  DenseMatrix<Scalar> s = DenseMatrix<Scalar>::Zero(2, 2);
  s(0, 1) = Scalar(1);
  return BasicOperator<Scalar>(s);
}

/// Kronecker product in list order; dims concatenate.
template <typename Scalar>
BasicOperator<Scalar> tensor(std::span<const BasicOperator<Scalar>> factors) {
  if (factors.empty()) throw InvalidArgument("tensor of an empty operator list");
  std::vector<Index> dims = factors.front().dims();
  SparseMatrix<Scalar> acc = factors.front().sparse();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const auto& f = factors[k];
    dims.insert(dims.end(), f.dims().begin(), f.dims().end());
    SparseMatrix<Scalar> next = Eigen::kroneckerProduct(acc, f.sparse()).eval();
    acc = std::move(next);
  }
  return BasicOperator<Scalar>(std::move(dims), acc);
}

template <typename Scalar>
BasicOperator<Scalar> tensor(std::initializer_list<BasicOperator<Scalar>> factors) {
  return tensor(std::span<const BasicOperator<Scalar>>(factors.begin(), factors.size()));
}

/// `op` on subsystem `slot` of the full tensor space of `spec`, identity elsewhere.
template <typename Scalar>
BasicOperator<Scalar> embed(const BasicOperator<Scalar>& op, int slot, const HilbertSpec& spec) {
  const auto dims = spec.dims();
  if (slot < 0 || slot >= static_cast<int>(dims.size()))
    throw InvalidArgument("slot " + std::to_string(slot) + " is outside the Hilbert space");
  if (op.rows() != dims[slot])
    throw InvalidArgument("operator dimension " + std::to_string(op.rows()) +
                          " does not match subsystem " + std::to_string(slot) + " of dimension " +
                          std::to_string(dims[slot]));
  std::vector<BasicOperator<Scalar>> factors;
  factors.reserve(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k)
    factors.push_back(static_cast<int>(k) == slot ? op : identity<Scalar>(dims[k]));
  auto full = tensor(std::span<const BasicOperator<Scalar>>(factors));
  // Keep one subsystem entry per slot even when op carries a composite signature.
  return BasicOperator<Scalar>(dims, full.sparse());
}

}  // namespace blockade
