#include "ainf/quiver.hpp"

#include <omp.h>

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace ainf {

Tuple Tuple::make(const std::vector<int>& objects, const std::vector<int>& inputs) {
  if (inputs.size() > static_cast<std::size_t>(kMaxArity))
    throw StructuralError("arity " + std::to_string(inputs.size()) + " exceeds the supported maximum " +
                          std::to_string(kMaxArity));
  if (objects.size() != inputs.size() + 1) throw StructuralError("tuple needs arity+1 objects");
  Tuple t;
  t.arity = static_cast<std::uint8_t>(inputs.size());
  for (std::size_t j = 0; j < objects.size(); ++j) {
    if (objects[j] < 0 || objects[j] > 255) throw StructuralError("object index out of range");
    t.objects[j] = static_cast<std::uint8_t>(objects[j]);
  }
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (inputs[j] < 0 || inputs[j] > 255) throw StructuralError("basis index out of range");
    t.inputs[j] = static_cast<std::uint8_t>(inputs[j]);
  }
  return t;
}

GradedQuiver::GradedQuiver(std::vector<std::string> objects)
    : objects_(std::move(objects)), homs_(objects_.size() * objects_.size()) {
  if (objects_.size() > 255) throw StructuralError("too many objects");
  for (std::size_t i = 0; i < objects_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (objects_[i] == objects_[j]) throw StructuralError("duplicate object '" + objects_[i] + "'");
}

std::optional<int> GradedQuiver::index_of(const std::string& name) const {
  auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) return std::nullopt;
  return static_cast<int>(it - objects_.begin());
}

void GradedQuiver::set_hom(int a, int b, GradedSpace space) {
  if (space.dim() > 256) throw StructuralError("hom space too large");
  homs_[static_cast<std::size_t>(a) * size() + b] = std::move(space);
}

std::optional<std::pair<int, int>> GradedQuiver::degree_range() const {
  std::optional<std::pair<int, int>> r;
  for (const auto& h : homs_)
    for (const auto& b : h.basis()) {
      if (!r) r = std::pair{b.degree, b.degree};
      r->first = std::min(r->first, b.degree);
      r->second = std::max(r->second, b.degree);
    }
  return r;
}

int GradedQuiver::input_degree(const Tuple& t) const {
  int d = 0;
  for (int j = 0; j < t.n(); ++j) d += hom(t.object(j), t.object(j + 1)).degree(t.input(j));
  return d;
}

std::string GradedQuiver::describe(const Tuple& t) const {
  std::ostringstream os;
  os << "(";
  for (int j = t.n() - 1; j >= 0; --j) {
    os << hom(t.object(j), t.object(j + 1)).name(t.input(j));
    if (j > 0) os << ", ";
  }
  os << ") over ";
  for (int j = 0; j <= t.n(); ++j) os << (j ? " -> " : "") << object(t.object(j));
  return os.str();
}

int reduced_degree(const GradedQuiver& q, const Tuple& t) { return q.input_degree(t) - t.n(); }

SparseVec FormalMorphism::component(const Tuple& t) const {
  auto it = components.find(t);
  return it == components.end() ? SparseVec() : it->second;
}

void FormalMorphism::add(const Tuple& t, const SparseVec& v) {
  SparseVec& slot = components[t];
  slot = slot + v;
  if (slot.empty()) components.erase(t);
}

int FormalMorphism::support_arity() const { return components.empty() ? 0 : components.rbegin()->first.n(); }

bool FormalMorphism::is_identity() const {
  if (source != target && !(*source == *target)) return false;
  for (int i = 0; i < static_cast<int>(object_map.size()); ++i)
    if (object_map[i] != i) return false;
  std::size_t expected = 0;
  for (int a = 0; a < source->size(); ++a)
    for (int b = 0; b < source->size(); ++b) expected += source->hom(a, b).dim();
  if (components.size() != expected) return false;
  for (const auto& [t, v] : components)
    if (t.n() != 1 || !(v == SparseVec::unit(t.input(0)))) return false;
  return true;
}

SparseVec Prenatural::component(const Tuple& t) const {
  auto it = components.find(t);
  return it == components.end() ? SparseVec() : it->second;
}

void Prenatural::add(const Tuple& t, const SparseVec& v) {
  SparseVec& slot = components[t];
  slot = slot + v;
  if (slot.empty()) components.erase(t);
}

bool Prenatural::is_zero() const {
  return components.empty() &&
         std::all_of(constant.begin(), constant.end(), [](const auto& kv) { return kv.second.empty(); });
}

int Prenatural::support_arity() const { return components.empty() ? 0 : components.rbegin()->first.n(); }

void check_components(const GradedQuiver& source, const GradedQuiver& target, const std::vector<int>& object_map,
                      const Components& comps, int shift_offset) {
  for (const auto& [t, v] : comps) {
    if (t.n() < 1) throw StructuralError("component of arity 0 stored with positive arities");
    for (int j = 0; j <= t.n(); ++j)
      if (t.object(j) >= source.size()) throw StructuralError("component object out of range");
    for (int j = 0; j < t.n(); ++j)
      if (t.input(j) >= source.hom(t.object(j), t.object(j + 1)).dim())
        throw StructuralError("component input out of range at " + std::to_string(j));
    const GradedSpace& out = target.hom(object_map[t.first()], object_map[t.last()]);
    int want = source.input_degree(t) + shift_offset - t.n();
    for (const auto& [i, c] : v) {
      if (i >= out.dim()) throw StructuralError("component output outside target hom at " + source.describe(t));
      if (out.degree(i) != want)
        throw StructuralError("degree violation at " + source.describe(t) + ": output " + out.name(i) +
                              " has degree " + std::to_string(out.degree(i)) + ", expected " + std::to_string(want));
    }
  }
}

void check_formal(const FormalMorphism& f) {
  if (static_cast<int>(f.object_map.size()) != f.source->size()) throw StructuralError("object map has wrong size");
  for (int y : f.object_map)
    if (y < 0 || y >= f.target->size()) throw StructuralError("object map leaves the target quiver");
  check_components(*f.source, *f.target, f.object_map, f.components, 1);
}

void check_prenatural(const Prenatural& p) {
  check_formal(*p.base);
  check_components(p.source(), p.target(), p.base->object_map, p.components, p.degree);
  for (const auto& [x, v] : p.constant) {
    int y = p.base->object_map[x];
    const GradedSpace& h = p.target().hom(y, y);
    for (const auto& [i, c] : v)
      if (h.degree(i) != p.degree) throw StructuralError("arity-0 part at " + p.source().object(x) + " has wrong degree");
  }
}

FormalMorphism identity_formal(QuiverPtr q) {
  FormalMorphism f;
  f.source = q;
  f.target = q;
  for (int x = 0; x < q->size(); ++x) f.object_map.push_back(x);
  for (int a = 0; a < q->size(); ++a)
    for (int b = 0; b < q->size(); ++b)
      for (int i = 0; i < q->hom(a, b).dim(); ++i) f.components[Tuple::make({a, b}, {i})] = SparseVec::unit(i);
  return f;
}

FormalPtr identity_ptr(QuiverPtr q) { return std::make_shared<const FormalMorphism>(identity_formal(std::move(q))); }

namespace kernel {
namespace {

constexpr int kBlock = 0, kInsert = 1, kInsertConstant = 2;

struct Candidate {
  const Tuple* tuple;  // null for arity-0 insertions
  int object;          // start object for arity-0 insertions
  Scalar coeff;
  int reduced;
  int kind;
};

using Index = std::unordered_map<std::uint32_t, std::vector<Candidate>>;

// candidates are found by (start object in the block source, output pair, output basis)
std::uint32_t key(int x, int y0, int y1, int b) {
  return (static_cast<std::uint32_t>(x) << 24) | (static_cast<std::uint32_t>(y0) << 16) |
         (static_cast<std::uint32_t>(y1) << 8) | static_cast<std::uint32_t>(b);
}

int arity_of(const Candidate& c) { return c.tuple ? c.tuple->n() : 0; }

void index_components(Index& index, const Components& comps, const GradedQuiver& q, const std::vector<int>& omap,
                      int kind) {
  for (const auto& [t, v] : comps) {
    int red = reduced_degree(q, t);
    for (const auto& [b, c] : v)
      index[key(t.first(), omap[t.first()], omap[t.last()], b)].push_back({&t, -1, c, red, kind});
  }
}

struct Walker {
  const Index& index;
  const std::vector<std::vector<int>>& preimage;
  int max_arity, min_arity;
  bool need_insert;
  int insert_bar_degree;
  ExpandResult& out;

  const Tuple* outer = nullptr;
  const SparseVec* value = nullptr;
  std::array<int, kMaxArity + 1> objs{};
  std::array<int, kMaxArity> ins{};

  void run(const Tuple& t, const SparseVec& v) {
    outer = &t;
    value = &v;
    for (int x : preimage[t.object(0)]) {
      objs[0] = x;
      step(0, 0, x, Scalar(1), false, 0);
    }
  }

  void emit(int n, int cur, const Scalar& coeff) {
    if (n < min_arity) return;
    if (n == 0) {
      out.constant[cur].axpy(coeff, *value);
      return;
    }
    Tuple t;
    t.arity = static_cast<std::uint8_t>(n);
    for (int j = 0; j <= n; ++j) t.objects[j] = static_cast<std::uint8_t>(objs[j]);
    for (int j = 0; j < n; ++j) t.inputs[j] = static_cast<std::uint8_t>(ins[j]);
    out.components[t].axpy(coeff, *value);
  }

  void step(int slot, int n, int cur, const Scalar& coeff, bool inserted, int right) {
    int remaining = outer->n() - slot;
    if (remaining == 0) {
      if (need_insert && !inserted) return;
      emit(n, cur, coeff);
      return;
    }
    auto it = index.find(key(cur, outer->object(slot), outer->object(slot + 1), outer->input(slot)));
    if (it == index.end()) return;
    // every later slot takes at least one input unless an arity-0 insertion is still possible
    int reserve = remaining - 1 - (need_insert && !inserted ? 1 : 0);
    if (reserve < 0) reserve = 0;
    for (const Candidate& c : it->second) {
      int ar = arity_of(c);
      if (n + ar + reserve > max_arity) break;
      bool is_insert = c.kind != kBlock;
      if (is_insert && inserted) continue;
      Scalar k = coeff * c.coeff;
      if (is_insert && ((insert_bar_degree * right) & 1)) k = -k;
      if (c.kind == kInsertConstant) {
        step(slot + 1, n, cur, k, true, right);
        continue;
      }
      const Tuple& b = *c.tuple;
      for (int j = 0; j < ar; ++j) {
        ins[n + j] = b.input(j);
        objs[n + j + 1] = b.object(j + 1);
      }
      step(slot + 1, n + ar, b.last(), k, inserted || is_insert, right + c.reduced);
    }
  }
};

void merge_into(ExpandResult& dst, ExpandResult& src) {
  for (auto& [x, v] : src.constant) dst.constant[x].axpy(Scalar(1), v);
  for (auto& [t, v] : src.components) {
    auto [it, fresh] = dst.components.try_emplace(t, std::move(v));
    if (!fresh) it->second.axpy(Scalar(1), v);
  }
}

}  // namespace

ExpandResult expand(const Components& outer, const FormalMorphism& blocks, const Prenatural* insert, int max_arity,
                    int min_arity) {
  if (max_arity > kMaxArity) throw StructuralError("max arity above " + std::to_string(kMaxArity));
  Index index;
  const GradedQuiver& q = *blocks.source;
  index_components(index, blocks.components, q, blocks.object_map, kBlock);
  if (insert) {
    index_components(index, insert->components, q, blocks.object_map, kInsert);
    for (const auto& [x, v] : insert->constant)
      for (const auto& [b, c] : v) {
        int y = blocks.object_map[x];
        index[key(x, y, y, b)].push_back({nullptr, x, c, 0, kInsertConstant});
      }
  }
  for (auto& [k, cands] : index)
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return arity_of(a) < arity_of(b); });
  std::vector<std::vector<int>> preimage(blocks.target->size());
  for (int x = 0; x < q.size(); ++x) preimage[blocks.object_map[x]].push_back(x);

  std::vector<const std::pair<const Tuple, SparseVec>*> entries;
  entries.reserve(outer.size());
  for (const auto& e : outer) entries.push_back(&e);

  int bar = insert ? insert->degree - 1 : 0;
  if (bar < 0) bar = -bar;

  std::vector<ExpandResult> partial(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    ExpandResult& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
    Walker w{index, preimage, max_arity, min_arity, insert != nullptr, bar, local};
#pragma omp for schedule(dynamic, 8)
    for (std::size_t i = 0; i < entries.size(); ++i) w.run(entries[i]->first, entries[i]->second);
  }

  ExpandResult result = std::move(partial[0]);
  for (std::size_t i = 1; i < partial.size(); ++i) merge_into(result, partial[i]);
  std::erase_if(result.components, [](const auto& kv) { return kv.second.empty(); });
  std::erase_if(result.constant, [](const auto& kv) { return kv.second.empty(); });
  return result;
}

}  // namespace kernel

namespace {

void require_composable(const FormalMorphism& g, const FormalMorphism& f, const char* what) {
  if (f.target != g.source && !(*f.target == *g.source))
    throw StructuralError(std::string(what) + ": target of the inner morphism is not the source of the outer one");
}

}  // namespace

FormalMorphism compose_formal(const FormalMorphism& g, const FormalMorphism& f, int max_arity) {
  require_composable(g, f, "compose_formal");
  FormalMorphism out;
  out.source = f.source;
  out.target = g.target;
  for (int y : f.object_map) out.object_map.push_back(g.object_map[y]);
  out.components = kernel::expand(g.components, f, nullptr, max_arity).components;
  return out;
}

FormalPtr compose_bases(const FormalPtr& g, const FormalPtr& f, int max_arity) {
  if (g->is_identity()) return f;
  if (f->is_identity()) return g;
  return std::make_shared<const FormalMorphism>(compose_formal(*g, *f, max_arity));
}

Prenatural compose_prenatural(const Prenatural& d, const Prenatural& dp, int max_arity) {
  require_composable(*d.base, *dp.base, "compose_prenatural");
  auto r = kernel::expand(d.components, *dp.base, &dp, max_arity);
  Prenatural out;
  out.base = compose_bases(d.base, dp.base, max_arity);
  out.degree = d.degree + dp.degree - 1;
  out.constant = std::move(r.constant);
  out.components = std::move(r.components);
  return out;
}

Prenatural l_compose(const FormalPtr& g, const Prenatural& x, int max_arity) {
  require_composable(*g, *x.base, "l_compose");
  auto r = kernel::expand(g->components, *x.base, &x, max_arity);
  Prenatural out;
  out.base = compose_bases(g, x.base, max_arity);
  out.degree = x.degree;
  out.constant = std::move(r.constant);
  out.components = std::move(r.components);
  return out;
}

Prenatural r_compose(const FormalPtr& f, const Prenatural& x, int max_arity) {
  require_composable(*x.base, *f, "r_compose");
  auto r = kernel::expand(x.components, *f, nullptr, max_arity);
  Prenatural out;
  out.base = compose_bases(x.base, f, max_arity);
  out.degree = x.degree;
  for (int s = 0; s < f->source->size(); ++s) {
    auto it = x.constant.find(f->object_map[s]);
    if (it != x.constant.end() && !it->second.empty()) out.constant[s] = it->second;
  }
  out.components = std::move(r.components);
  return out;
}

FormalMorphism inverse_formal(const FormalMorphism& f, int max_arity) {
  const GradedQuiver& q1 = *f.source;
  const GradedQuiver& q2 = *f.target;
  if (q1.size() != q2.size()) throw StructuralError("inverse_formal: object map is not bijective");
  std::vector<int> inv_obj(q2.size(), -1);
  for (int x = 0; x < q1.size(); ++x) {
    if (inv_obj[f.object_map[x]] >= 0) throw StructuralError("inverse_formal: object map is not bijective");
    inv_obj[f.object_map[x]] = x;
  }
  FormalMorphism inv;
  inv.source = f.target;
  inv.target = f.source;
  inv.object_map = inv_obj;

  // arity 1: invert f^1 pairwise
  std::map<std::pair<int, int>, std::vector<SparseVec>> inv1;
  for (int a = 0; a < q1.size(); ++a)
    for (int b = 0; b < q1.size(); ++b) {
      const GradedSpace& src = q1.hom(a, b);
      const GradedSpace& dst = q2.hom(f.object_map[a], f.object_map[b]);
      if (src.dim() != dst.dim()) throw StructuralError("inverse_formal: arity-1 part is not invertible");
      GradedMap m(src, dst, 0);
      for (int i = 0; i < src.dim(); ++i) m.set_column(i, f.component(Tuple::make({a, b}, {i})));
      auto& cols = inv1[{f.object_map[a], f.object_map[b]}];
      for (int j = 0; j < dst.dim(); ++j) {
        auto pre = solve_linear(m, SparseVec::unit(j));
        if (!pre) throw StructuralError("inverse_formal: arity-1 part is not invertible");
        cols.push_back(*pre);
        if (!pre->empty()) inv.components[Tuple::make({f.object_map[a], f.object_map[b]}, {j})] = *pre;
      }
    }
  auto apply_inv1 = [&](int y0, int y1, const SparseVec& v) {
    SparseVec out;
    const auto& cols = inv1.at({y0, y1});
    for (const auto& [j, c] : v) out.axpy(c, cols[j]);
    return out;
  };

  for (int n = 2; n <= max_arity; ++n) {
    auto residual = kernel::expand(f.components, inv, nullptr, n, n).components;
    for (const auto& [t, v] : residual) {
      SparseVec p = apply_inv1(t.first(), t.last(), v).scaled(Scalar(-1));
      if (!p.empty()) inv.components[t] = p;
    }
  }
  return inv;
}

SparseVec evaluate(const Components& comps, const std::vector<int>& objects, const std::vector<SparseVec>& args) {
  SparseVec out;
  int n = static_cast<int>(args.size());
  if (n == 0 || n > kMaxArity) return out;
  std::vector<int> ins(n);
  auto rec = [&](auto&& self, int j, const Scalar& coeff) -> void {
    if (j == n) {
      auto it = comps.find(Tuple::make(objects, ins));
      if (it != comps.end()) out.axpy(coeff, it->second);
      return;
    }
    for (const auto& [b, c] : args[j]) {
      ins[j] = b;
      self(self, j + 1, coeff * c);
    }
  };
  rec(rec, 0, Scalar(1));
  return out;
}

Components truncate(const Components& c, int max_arity) {
  Components out;
  for (const auto& [t, v] : c)
    if (t.n() <= max_arity) out.emplace(t, v);
  return out;
}

Components subtract(const Components& a, const Components& b) {
  Components out = a;
  for (const auto& [t, v] : b) {
    SparseVec& slot = out[t];
    slot.axpy(Scalar(-1), v);
    if (slot.empty()) out.erase(t);
  }
  return out;
}

Prenatural subtract(const Prenatural& a, const Prenatural& b) {
  if (a.degree != b.degree) throw StructuralError("subtract: prenaturals of different degree");
  Prenatural out = a;
  out.components = subtract(a.components, b.components);
  for (const auto& [x, v] : b.constant) {
    out.constant[x].axpy(Scalar(-1), v);
    if (out.constant[x].empty()) out.constant.erase(x);
  }
  return out;
}

FormalMorphism subtract(const FormalMorphism& a, const FormalMorphism& b) {
  FormalMorphism out = a;
  out.components = subtract(a.components, b.components);
  return out;
}

std::optional<Tuple> first_difference(const Components& a, const Components& b, int max_arity) {
  auto diff = subtract(truncate(a, max_arity), truncate(b, max_arity));
  if (diff.empty()) return std::nullopt;
  return diff.begin()->first;
}

bool equal_up_to(const Components& a, const Components& b, int max_arity) {
  return !first_difference(a, b, max_arity).has_value();
}

bool equal_up_to(const Prenatural& a, const Prenatural& b, int max_arity) {
  auto nonzero = [](const std::map<int, SparseVec>& m) {
    std::map<int, SparseVec> out;
    for (const auto& [x, v] : m)
      if (!v.empty()) out.emplace(x, v);
    return out;
  };
  return a.degree == b.degree && nonzero(a.constant) == nonzero(b.constant) &&
         equal_up_to(a.components, b.components, max_arity);
}

bool equal_up_to(const FormalMorphism& a, const FormalMorphism& b, int max_arity) {
  return a.object_map == b.object_map && equal_up_to(a.components, b.components, max_arity);
}

std::vector<Tuple> basis_tuples(const GradedQuiver& q, int arity) {
  std::vector<Tuple> out;
  std::vector<int> objs(arity + 1), ins(arity);
  auto rec = [&](auto&& self, int j) -> void {
    if (j == arity) {
      out.push_back(Tuple::make(objs, ins));
      return;
    }
    for (int y = 0; y < q.size(); ++y) {
      int dim = q.hom(objs[j], y).dim();
      if (dim == 0) continue;
      objs[j + 1] = y;
      for (int i = 0; i < dim; ++i) {
        ins[j] = i;
        self(self, j + 1);
      }
    }
  };
  for (int x = 0; x < q.size(); ++x) {
    objs[0] = x;
    rec(rec, 0);
  }
  return out;
}

std::optional<int> arity_bound(int lo, int hi, int shift_offset) {
  auto feasible = [&](int n) { return n * (lo - 1) + shift_offset <= hi && n * (hi - 1) + shift_offset >= lo; };
  std::optional<int> cap;
  if (lo > 1) cap = (hi - shift_offset) / (lo - 1);
  if (hi < 1) {
    int c = (shift_offset - lo) / (1 - hi);
    cap = cap ? std::min(*cap, c) : c;
  }
  if (!cap) return std::nullopt;
  for (int n = *cap; n >= 1; --n)
    if (feasible(n)) return n;
  return 0;
}

}  // namespace ainf
