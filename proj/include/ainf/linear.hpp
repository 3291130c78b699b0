#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ainf/scalar.hpp"

namespace ainf {

/// Thrown for shape, object or degree mismatches between inputs.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse vector over a based space: sorted (index, nonzero coefficient) pairs.
class SparseVec {
 public:
  using Entry = std::pair<int, Scalar>;

  SparseVec() = default;
  static SparseVec unit(int index, const Scalar& coeff = Scalar(1));

  /// Adds c to coordinate `index`, dropping the entry if it cancels.
  void add(int index, const Scalar& c);
  /// this += c * x
  void axpy(const Scalar& c, const SparseVec& x);
  SparseVec scaled(const Scalar& c) const;

  Scalar at(int index) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend SparseVec operator+(SparseVec a, const SparseVec& b) {
    a.axpy(Scalar(1), b);
    return a;
  }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) {
    a.axpy(Scalar(-1), b);
    return a;
  }
  friend bool operator==(const SparseVec&, const SparseVec&) = default;

 private:
  std::vector<Entry> entries_;
};

struct BasisElement {
  std::string name;
  int degree = 0;
  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

/// Finite based Z-graded space. Basis order is the index order.
class GradedSpace {
 public:
  GradedSpace() = default;
  /// Throws StructuralError on duplicate names.
  explicit GradedSpace(std::vector<BasisElement> basis);

  int dim() const { return static_cast<int>(basis_.size()); }
  const BasisElement& operator[](int i) const { return basis_[i]; }
  const std::vector<BasisElement>& basis() const { return basis_; }
  int degree(int i) const { return basis_[i].degree; }
  const std::string& name(int i) const { return basis_[i].name; }
  std::optional<int> index_of(const std::string& name) const;
  /// Indices of basis elements in degree k, in index order.
  std::vector<int> in_degree(int k) const;
  /// Distinct degrees present, ascending.
  std::vector<int> degrees() const;
  /// Degree of a homogeneous vector; nullopt for zero; throws if inhomogeneous.
  std::optional<int> degree_of(const SparseVec& v) const;
  std::string describe(const SparseVec& v) const;

  friend bool operator==(const GradedSpace& a, const GradedSpace& b) { return a.basis_ == b.basis_; }

 private:
  std::vector<BasisElement> basis_;
  std::map<std::string, int> index_;
};

/// Graded linear map of fixed degree shift, stored column-wise.
class GradedMap {
 public:
  GradedMap() = default;
  GradedMap(GradedSpace source, GradedSpace target, int shift);

  static GradedMap identity(const GradedSpace& space);
  static GradedMap zero(const GradedSpace& source, const GradedSpace& target, int shift);

  const GradedSpace& source() const { return source_; }
  const GradedSpace& target() const { return target_; }
  int shift() const { return shift_; }

  /// Sets the image of a source basis element; throws on degree violation.
  void set_column(int source_index, SparseVec image);
  const SparseVec& column(int source_index) const { return columns_[source_index]; }

  SparseVec apply(const SparseVec& v) const;
  Scalar entry(int target_index, int source_index) const { return columns_[source_index].at(target_index); }
  bool is_zero() const;

  friend bool operator==(const GradedMap&, const GradedMap&) = default;

 private:
  GradedSpace source_;
  GradedSpace target_;
  int shift_ = 0;
  std::vector<SparseVec> columns_;
};

/// (this ∘ other): apply `other` first.
GradedMap compose(const GradedMap& outer, const GradedMap& inner);
GradedMap subtract(const GradedMap& a, const GradedMap& b);

/// Small dense matrix used for degreewise elimination.
class DenseMatrix {
 public:
  DenseMatrix(int rows, int cols);
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Scalar& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Scalar& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  /// Reduced row echelon form in place: leftmost nonzero column, first
  /// nonzero row at or below the current pivot row. Returns pivot columns.
  std::vector<int> rref();
  /// Any solution of this * x = rhs, free variables set to zero.
  std::optional<std::vector<Scalar>> solve(const std::vector<Scalar>& rhs) const;
  int rank() const;
  /// Null space basis: one vector per free column, echelon form.
  std::vector<std::vector<Scalar>> null_space() const;

 private:
  int rows_, cols_;
  std::vector<Scalar> data_;
};

/// Block of `m` from source degree k to target degree k + shift.
DenseMatrix degree_block(const GradedMap& m, int k);

/// Preimage of `target` under `m`, degreewise; nullopt when none exists.
std::optional<SparseVec> solve_linear(const GradedMap& m, const SparseVec& target);

/// Splitting of a degreewise surjection m: V -> W as V ≅ ker(m) ⊕ W.
struct SplitData {
  GradedMap surjection;  // V -> W
  GradedSpace kernel;    // echelon basis, named after free source columns
  GradedMap inclusion;   // K -> V
  GradedMap retraction;  // V -> K
  GradedMap section;     // W -> V

  /// Checks the five splitting identities exactly.
  bool verify() const;
};

class NotSurjective : public std::runtime_error {
 public:
  NotSurjective(int degree, std::string what) : std::runtime_error(std::move(what)), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

/// Throws NotSurjective naming the first failing degree.
SplitData split_surjection(const GradedMap& m);

/// Thrown when d∘d != 0; carries a basis element witnessing it.
class NotAComplex : public std::runtime_error {
 public:
  NotAComplex(std::string witness, std::string what)
      : std::runtime_error(std::move(what)), witness_(std::move(witness)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

/// Cohomology of (space, d) with chosen representatives in every degree.
class Cohomology {
 public:
  /// d must be an endomorphism of shift +1 with d∘d = 0.
  Cohomology(const GradedSpace& space, const GradedMap& d);

  const std::map<int, int>& dims() const { return dims_; }
  int dim(int k) const;
  /// Representative cycles of a basis of H^k.
  const std::vector<SparseVec>& representatives(int k) const;
  /// Coordinates of the class of a degree-k cycle; nullopt if not a cycle.
  std::optional<std::vector<Scalar>> class_of(const SparseVec& cycle, int k) const;
  bool acyclic() const;
  const GradedSpace& space() const { return space_; }

 private:
  struct Piece {
    std::vector<SparseVec> reps;
    std::vector<SparseVec> boundaries;  // spanning set of im d in this degree
  };
  GradedSpace space_;
  GradedMap d_;
  std::map<int, int> dims_;
  std::map<int, Piece> pieces_;
};

inline Cohomology cohomology(const GradedSpace& space, const GradedMap& d) { return Cohomology(space, d); }

std::vector<Scalar> to_dense(const SparseVec& v, const std::vector<int>& indices);
SparseVec from_dense(const std::vector<Scalar>& x, const std::vector<int>& indices);

}  // namespace ainf
