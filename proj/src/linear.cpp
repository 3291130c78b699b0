#include "ainf/linear.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ainf {

SparseVec SparseVec::unit(int index, const Scalar& coeff) {
  SparseVec v;
  v.add(index, coeff);
  return v;
}

void SparseVec::add(int index, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, int i) { return e.first < i; });
  if (it != entries_.end() && it->first == index) {
    it->second += c;
    if (it->second.is_zero()) entries_.erase(it);
  } else {
    entries_.insert(it, {index, c});
  }
}

void SparseVec::axpy(const Scalar& c, const SparseVec& x) {
  if (c.is_zero()) return;
  for (const auto& [i, v] : x.entries_) add(i, c * v);
}

SparseVec SparseVec::scaled(const Scalar& c) const {
  SparseVec out;
  if (c.is_zero()) return out;
  out.entries_.reserve(entries_.size());
  for (const auto& [i, v] : entries_) out.entries_.emplace_back(i, v * c);
  return out;
}

Scalar SparseVec::at(int index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, int i) { return e.first < i; });
  if (it != entries_.end() && it->first == index) return it->second;
  return Scalar();
}

GradedSpace::GradedSpace(std::vector<BasisElement> basis) : basis_(std::move(basis)) {
  for (int i = 0; i < dim(); ++i) {
    if (!index_.emplace(basis_[i].name, i).second)
      throw StructuralError("duplicate basis name '" + basis_[i].name + "'");
  }
}

std::optional<int> GradedSpace::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> GradedSpace::in_degree(int k) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (basis_[i].degree == k) out.push_back(i);
  return out;
}

std::vector<int> GradedSpace::degrees() const {
  std::set<int> ds;
  for (const auto& b : basis_) ds.insert(b.degree);
  return {ds.begin(), ds.end()};
}

std::optional<int> GradedSpace::degree_of(const SparseVec& v) const {
  std::optional<int> d;
  for (const auto& [i, c] : v) {
    if (d && *d != basis_[i].degree) throw StructuralError("inhomogeneous vector " + describe(v));
    d = basis_[i].degree;
  }
  return d;
}

std::string GradedSpace::describe(const SparseVec& v) const {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : v) {
    if (!first) os << " + ";
    first = false;
    if (!c.is_one()) os << "(" << c << ")*";
    os << (i < dim() ? basis_[i].name : "#" + std::to_string(i));
  }
  return os.str();
}

GradedMap::GradedMap(GradedSpace source, GradedSpace target, int shift)
    : source_(std::move(source)), target_(std::move(target)), shift_(shift), columns_(source_.dim()) {}

GradedMap GradedMap::identity(const GradedSpace& space) {
  GradedMap m(space, space, 0);
  for (int i = 0; i < space.dim(); ++i) m.columns_[i] = SparseVec::unit(i);
  return m;
}

GradedMap GradedMap::zero(const GradedSpace& source, const GradedSpace& target, int shift) {
  return GradedMap(source, target, shift);
}

void GradedMap::set_column(int source_index, SparseVec image) {
  int want = source_.degree(source_index) + shift_;
  for (const auto& [t, c] : image) {
    if (t < 0 || t >= target_.dim()) throw StructuralError("column entry outside target space");
    if (target_.degree(t) != want)
      throw StructuralError("degree violation: " + source_.name(source_index) + " (degree " +
                            std::to_string(source_.degree(source_index)) + ") -> " + target_.name(t) +
                            " (degree " + std::to_string(target_.degree(t)) + "), shift " +
                            std::to_string(shift_));
  }
  columns_[source_index] = std::move(image);
}

SparseVec GradedMap::apply(const SparseVec& v) const {
  SparseVec out;
  for (const auto& [i, c] : v) out.axpy(c, columns_[i]);
  return out;
}

bool GradedMap::is_zero() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const SparseVec& c) { return c.empty(); });
}

GradedMap compose(const GradedMap& outer, const GradedMap& inner) {
  if (!(inner.target() == outer.source())) throw StructuralError("compose: space mismatch");
  GradedMap out(inner.source(), outer.target(), inner.shift() + outer.shift());
  for (int i = 0; i < inner.source().dim(); ++i) out.set_column(i, outer.apply(inner.column(i)));
  return out;
}

GradedMap subtract(const GradedMap& a, const GradedMap& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target()) || a.shift() != b.shift())
    throw StructuralError("subtract: shape mismatch");
  GradedMap out(a.source(), a.target(), a.shift());
  for (int i = 0; i < a.source().dim(); ++i) out.set_column(i, a.column(i) - b.column(i));
  return out;
}

DenseMatrix::DenseMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

std::vector<int> DenseMatrix::rref() {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols_ && row < rows_; ++col) {
    int pivot = -1;
    for (int r = row; r < rows_; ++r)
      if (!(*this)(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int c = 0; c < cols_; ++c) std::swap((*this)(row, c), (*this)(pivot, c));
    Scalar inv = (*this)(row, col).inverse();
    for (int c = col; c < cols_; ++c) (*this)(row, c) *= inv;
    for (int r = 0; r < rows_; ++r) {
      if (r == row || (*this)(r, col).is_zero()) continue;
      Scalar f = (*this)(r, col);
      for (int c = col; c < cols_; ++c) (*this)(r, c) -= f * (*this)(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::optional<std::vector<Scalar>> DenseMatrix::solve(const std::vector<Scalar>& rhs) const {
  if (static_cast<int>(rhs.size()) != rows_) throw StructuralError("solve: dimension mismatch");
  DenseMatrix aug(rows_, cols_ + 1);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) aug(r, c) = (*this)(r, c);
    aug(r, cols_) = rhs[r];
  }
  auto pivots = aug.rref();
  if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
  std::vector<Scalar> x(cols_);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(static_cast<int>(i), cols_);
  return x;
}

int DenseMatrix::rank() const {
  DenseMatrix copy = *this;
  return static_cast<int>(copy.rref().size());
}

std::vector<std::vector<Scalar>> DenseMatrix::null_space() const {
  DenseMatrix r = *this;
  auto pivots = r.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int j = 0; j < cols_; ++j) {
    if (is_pivot[j]) continue;
    std::vector<Scalar> v(cols_);
    v[j] = Scalar(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(static_cast<int>(i), j);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Scalar> to_dense(const SparseVec& v, const std::vector<int>& indices) {
  std::vector<Scalar> out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) out[i] = v.at(indices[i]);
  return out;
}

SparseVec from_dense(const std::vector<Scalar>& x, const std::vector<int>& indices) {
  SparseVec out;
  for (std::size_t i = 0; i < indices.size(); ++i) out.add(indices[i], x[i]);
  return out;
}

DenseMatrix degree_block(const GradedMap& m, int k) {
  auto cols = m.source().in_degree(k);
  auto rows = m.target().in_degree(k + m.shift());
  DenseMatrix block(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows.size(); ++r) block(static_cast<int>(r), static_cast<int>(c)) = m.entry(rows[r], cols[c]);
  return block;
}

std::optional<SparseVec> solve_linear(const GradedMap& m, const SparseVec& target) {
  std::map<int, SparseVec> by_degree;
  for (const auto& [i, c] : target) {
    if (i < 0 || i >= m.target().dim()) throw StructuralError("solve_linear: vector outside target space");
    by_degree[m.target().degree(i)].add(i, c);
  }
  SparseVec x;
  for (const auto& [deg, part] : by_degree) {
    int k = deg - m.shift();
    auto cols = m.source().in_degree(k);
    auto rows = m.target().in_degree(deg);
    auto sol = degree_block(m, k).solve(to_dense(part, rows));
    if (!sol) return std::nullopt;
    x = x + from_dense(*sol, cols);
  }
  return x;
}

SplitData split_surjection(const GradedMap& m) {
  if (m.shift() != 0) throw StructuralError("split_surjection: map must have shift 0");
  const GradedSpace& V = m.source();
  const GradedSpace& W = m.target();

  std::set<int> degrees;
  for (int d : V.degrees()) degrees.insert(d);
  for (int d : W.degrees()) degrees.insert(d);

  // kernel elements in (degree, free column) order
  struct KernelVec {
    int free_col;
    SparseVec vec;
  };
  std::vector<KernelVec> kernel;
  std::vector<SparseVec> section_cols(W.dim());

  for (int k : degrees) {
    auto cols = V.in_degree(k);
    auto rows = W.in_degree(k);
    int nr = static_cast<int>(rows.size()), nc = static_cast<int>(cols.size());
    DenseMatrix aug(nr, nc + nr);
    for (int r = 0; r < nr; ++r) {
      for (int c = 0; c < nc; ++c) aug(r, c) = m.entry(rows[r], cols[c]);
      aug(r, nc + r) = Scalar(1);
    }
    auto pivots = aug.rref();
    int rank = static_cast<int>(std::count_if(pivots.begin(), pivots.end(), [&](int p) { return p < nc; }));
    if (rank < nr)
      throw NotSurjective(k, "not surjective in degree " + std::to_string(k) + " (rank " + std::to_string(rank) +
                                 " < " + std::to_string(nr) + ")");
    std::vector<bool> is_pivot(nc, false);
    for (int p : pivots) is_pivot[p] = true;
    for (int j = 0; j < nc; ++j) {
      if (is_pivot[j]) continue;
      SparseVec v = SparseVec::unit(cols[j]);
      for (int i = 0; i < nr; ++i) v.add(cols[pivots[i]], -aug(i, j));
      kernel.push_back({cols[j], std::move(v)});
    }
    // section: x_pivots = E w, where E is the transformation block
    for (int w = 0; w < nr; ++w) {
      SparseVec s;
      for (int i = 0; i < nr; ++i) s.add(cols[pivots[i]], aug(i, nc + w));
      section_cols[rows[w]] = std::move(s);
    }
  }

  std::vector<BasisElement> kb;
  for (const auto& kv : kernel) kb.push_back(V[kv.free_col]);
  SplitData out{m, GradedSpace(kb), {}, {}, {}};
  out.inclusion = GradedMap(out.kernel, V, 0);
  out.retraction = GradedMap(V, out.kernel, 0);
  out.section = GradedMap(W, V, 0);
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    out.inclusion.set_column(static_cast<int>(i), kernel[i].vec);
    out.retraction.set_column(kernel[i].free_col, SparseVec::unit(static_cast<int>(i)));
  }
  for (int w = 0; w < W.dim(); ++w) out.section.set_column(w, section_cols[w]);
  return out;
}

bool SplitData::verify() const {
  const auto& V = surjection.source();
  const auto& W = surjection.target();
  if (!(compose(surjection, section) == GradedMap::identity(W))) return false;
  if (!(compose(retraction, inclusion) == GradedMap::identity(kernel))) return false;
  if (!compose(surjection, inclusion).is_zero()) return false;
  if (!compose(retraction, section).is_zero()) return false;
  GradedMap sum = compose(inclusion, retraction);
  GradedMap sm = compose(section, surjection);
  for (int i = 0; i < V.dim(); ++i)
    if (!(sum.column(i) + sm.column(i) == SparseVec::unit(i))) return false;
  return true;
}

Cohomology::Cohomology(const GradedSpace& space, const GradedMap& d) : space_(space), d_(d) {
  if (!(d.source() == space) || !(d.target() == space) || d.shift() != 1)
    throw StructuralError("cohomology: differential must be an endomorphism of shift +1");
  for (int i = 0; i < space.dim(); ++i) {
    SparseVec dd = d.apply(d.column(i));
    if (!dd.empty())
      throw NotAComplex(space.name(i), "d∘d != 0 on " + space.name(i) + ": " + space.describe(dd));
  }
  for (int k : space.degrees()) {
    auto idx = space.in_degree(k);
    Piece piece;
    for (int j : space.in_degree(k - 1)) {
      if (!d.column(j).empty()) piece.boundaries.push_back(d.column(j));
    }
    auto cycles = degree_block(d, k).null_space();
    // boundaries first, then cycle basis; pivots among the cycles pick representatives
    int nb = static_cast<int>(piece.boundaries.size());
    DenseMatrix m(static_cast<int>(idx.size()), nb + static_cast<int>(cycles.size()));
    for (int c = 0; c < nb; ++c) {
      auto col = to_dense(piece.boundaries[c], idx);
      for (std::size_t r = 0; r < idx.size(); ++r) m(static_cast<int>(r), c) = col[r];
    }
    for (std::size_t c = 0; c < cycles.size(); ++c)
      for (std::size_t r = 0; r < idx.size(); ++r) m(static_cast<int>(r), nb + static_cast<int>(c)) = cycles[c][r];
    for (int p : m.rref())
      if (p >= nb) piece.reps.push_back(from_dense(cycles[p - nb], idx));
    dims_[k] = static_cast<int>(piece.reps.size());
    pieces_[k] = std::move(piece);
  }
}

int Cohomology::dim(int k) const {
  auto it = dims_.find(k);
  return it == dims_.end() ? 0 : it->second;
}

const std::vector<SparseVec>& Cohomology::representatives(int k) const {
  static const std::vector<SparseVec> empty;
  auto it = pieces_.find(k);
  return it == pieces_.end() ? empty : it->second.reps;
}

std::optional<std::vector<Scalar>> Cohomology::class_of(const SparseVec& cycle, int k) const {
  if (!d_.apply(cycle).empty()) return std::nullopt;
  auto it = pieces_.find(k);
  if (it == pieces_.end()) {
    if (cycle.empty()) return std::vector<Scalar>{};
    return std::nullopt;
  }
  const Piece& piece = it->second;
  auto idx = space_.in_degree(k);
  int nr = static_cast<int>(piece.reps.size()), nb = static_cast<int>(piece.boundaries.size());
  DenseMatrix m(static_cast<int>(idx.size()), nr + nb);
  for (int c = 0; c < nr + nb; ++c) {
    auto col = to_dense(c < nr ? piece.reps[c] : piece.boundaries[c - nr], idx);
    for (std::size_t r = 0; r < idx.size(); ++r) m(static_cast<int>(r), c) = col[r];
  }
  auto sol = m.solve(to_dense(cycle, idx));
  if (!sol) return std::nullopt;
  sol->resize(nr);
  return sol;
}

bool Cohomology::acyclic() const {
  return std::all_of(dims_.begin(), dims_.end(), [](const auto& kv) { return kv.second == 0; });
}

}  // namespace ainf
