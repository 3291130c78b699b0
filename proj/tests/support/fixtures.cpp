#include "fixtures.hpp"

#include <algorithm>
#include <set>

namespace ainf::fixtures {

namespace {

using Matrix = std::vector<std::vector<Scalar>>;

Matrix zeros(int r, int c) { return Matrix(r, std::vector<Scalar>(c, Scalar(0))); }

Matrix multiply(const Matrix& a, const Matrix& b, int inner) {
  int r = static_cast<int>(a.size());
  int c = b.empty() ? 0 : static_cast<int>(b[0].size());
  Matrix out = zeros(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (int j = 0; j < c; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(Rng& rng, int one_in) { return pick(rng, one_in) == 0; }

std::optional<int> unit_index(const AInftyCategory& a, int x) {
  if (!a.units) return std::nullopt;
  const SparseVec& u = (*a.units)[x];
  if (u.size() != 1 || !u.begin()->second.is_one()) return std::nullopt;
  return u.begin()->first;
}

// A random composable basis string of arity n; nullopt if a hom on the way is empty.
std::optional<Tuple> random_tuple(Rng& rng, const GradedQuiver& q, int n, const AInftyCategory* avoid_units) {
  std::vector<int> objs(n + 1), ins(n);
  for (auto& o : objs) o = pick(rng, q.size());
  for (int j = 0; j < n; ++j) {
    int d = q.hom(objs[j], objs[j + 1]).dim();
    if (d == 0) return std::nullopt;
    ins[j] = pick(rng, d);
    if (avoid_units && objs[j] == objs[j + 1] && unit_index(*avoid_units, objs[j]) == ins[j]) return std::nullopt;
  }
  return Tuple::make(objs, ins);
}

std::optional<SparseVec> random_output(Rng& rng, const GradedSpace& space, int degree, const Field& field,
                                       std::optional<int> skip = std::nullopt) {
  std::vector<int> cands;
  for (int i : space.in_degree(degree))
    if (i != skip) cands.push_back(i);
  if (cands.empty()) return std::nullopt;
  SparseVec v;
  v.add(cands[pick(rng, static_cast<int>(cands.size()))], random_scalar(rng, field, true));
  if (cands.size() > 1 && coin(rng, 2)) v.add(cands[pick(rng, static_cast<int>(cands.size()))], random_scalar(rng, field));
  if (v.empty()) return std::nullopt;
  return v;
}

}  // namespace

Scalar random_scalar(Rng& rng, const Field& field, bool nonzero) {
  for (;;) {
    long v = std::uniform_int_distribution<long>(-3, 3)(rng);
    Scalar s(v);
    if (field.is_rational() && coin(rng, 6)) s = s / Scalar(2);
    s = s.in(field);
    if (!nonzero || !s.is_zero()) return s;
  }
}

CategoryPtr dg_category(const DGTable& t) {
  const GradedQuiver& q = *t.quiver;
  Components m;
  for (int x = 0; x < q.size(); ++x)
    for (int y = 0; y < q.size(); ++y)
      for (int i = 0; i < q.hom(x, y).dim(); ++i) {
        SparseVec v = t.d(x, y, i);
        if (!v.empty()) m[Tuple::make({x, y}, {i})] = v.scaled(sign_power(q.hom(x, y).degree(i)).in(t.field));
      }
  for (int x = 0; x < q.size(); ++x)
    for (int y = 0; y < q.size(); ++y)
      for (int z = 0; z < q.size(); ++z)
        for (int i1 = 0; i1 < q.hom(x, y).dim(); ++i1)
          for (int i2 = 0; i2 < q.hom(y, z).dim(); ++i2) {
            SparseVec v = t.mul(x, y, z, i2, i1);
            if (!v.empty())
              m[Tuple::make({x, y, z}, {i1, i2})] = v.scaled(sign_power(q.hom(x, y).degree(i1)).in(t.field));
          }
  return std::make_shared<const AInftyCategory>(make_category(t.quiver, t.field, std::move(m), t.units));
}

Complex random_complex(Rng& rng, const Field& field, int dim, int lo, int hi) {
  Complex c;
  for (int i = 0; i < dim; ++i) c.degrees.push_back(lo + pick(rng, hi - lo + 1));
  std::sort(c.degrees.begin(), c.degrees.end());
  Matrix d = zeros(dim, dim);
  std::vector<bool> used(dim, false);
  for (int i = 0; i < dim; ++i) {
    if (used[i]) continue;
    for (int j = 0; j < dim; ++j)
      if (!used[j] && j != i && c.degrees[j] == c.degrees[i] + 1 && !coin(rng, 3)) {
        used[i] = used[j] = true;
        d[j][i] = random_scalar(rng, field, true);
        break;
      }
  }
  // conjugate by elementary operations inside a degree
  for (int step = 0; step < dim; ++step) {
    int a = pick(rng, dim), b = pick(rng, dim);
    if (a == b || c.degrees[a] != c.degrees[b]) continue;
    Scalar s = random_scalar(rng, field);
    Matrix e = zeros(dim, dim), einv = zeros(dim, dim);
    for (int i = 0; i < dim; ++i) e[i][i] = einv[i][i] = Scalar(1).in(field);
    e[a][b] = s;
    einv[a][b] = -s;
    d = multiply(multiply(e, d, dim), einv, dim);
  }
  c.d = DenseMatrix(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) c.d(i, j) = d[i][j];
  return c;
}

CategoryPtr matrix_category(const Field& field, const std::vector<std::string>& names,
                            const std::vector<Complex>& complexes) {
  int n = static_cast<int>(names.size());
  auto q = std::make_shared<GradedQuiver>(names);
  // basis index (x, y, k) <-> matrix entry (i, j); k = 0 is the unit on endo homs
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> entries;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto& dx = complexes[x].degrees;
      const auto& dy = complexes[y].degrees;
      std::vector<BasisElement> basis;
      auto& ent = entries[{x, y}];
      if (x == y && !dx.empty()) {
        basis.push_back({"1", 0});
        ent.emplace_back(0, 0);
      }
      for (int i = 0; i < static_cast<int>(dy.size()); ++i)
        for (int j = 0; j < static_cast<int>(dx.size()); ++j) {
          if (x == y && i == 0 && j == 0) continue;
          basis.push_back({"e" + std::to_string(i) + "_" + std::to_string(j), dy[i] - dx[j]});
          ent.emplace_back(i, j);
        }
      q->set_hom(x, y, GradedSpace(basis));
    }
  auto dims = [&](int x) { return static_cast<int>(complexes[x].degrees.size()); };
  auto to_matrix = [&](int x, int y, int k) {
    Matrix m = zeros(dims(y), dims(x));
    if (x == y && k == 0) {
      for (int i = 0; i < dims(x); ++i) m[i][i] = Scalar(1).in(field);
    } else {
      auto [i, j] = entries[{x, y}][k];
      m[i][j] = Scalar(1).in(field);
    }
    return m;
  };
  auto coords = [&](int x, int y, const Matrix& m) {
    SparseVec v;
    const auto& ent = entries[{x, y}];
    Scalar c1 = (x == y && dims(x) > 0) ? m[0][0] : Scalar(0);
    for (int k = 0; k < static_cast<int>(ent.size()); ++k) {
      auto [i, j] = ent[k];
      if (x == y && k == 0)
        v.add(k, c1);
      else if (x == y && i == j)
        v.add(k, m[i][j] - c1);
      else
        v.add(k, m[i][j]);
    }
    return v;
  };
  auto dmat = [&](int x) {
    Matrix m = zeros(dims(x), dims(x));
    for (int i = 0; i < dims(x); ++i)
      for (int j = 0; j < dims(x); ++j) m[i][j] = complexes[x].d(i, j);
    return m;
  };

  DGTable t;
  t.quiver = q;
  t.field = field;
  t.d = [&](int x, int y, int k) {
    Matrix a = to_matrix(x, y, k);
    Matrix left = multiply(dmat(y), a, dims(y));
    Matrix right = multiply(a, dmat(x), dims(x));
    Scalar sign = sign_power(q->hom(x, y).degree(k)).in(field);
    for (int i = 0; i < dims(y); ++i)
      for (int j = 0; j < dims(x); ++j) left[i][j] -= sign * right[i][j];
    return coords(x, y, left);
  };
  t.mul = [&](int x, int y, int z, int i2, int i1) {
    return coords(x, z, multiply(to_matrix(y, z, i2), to_matrix(x, y, i1), dims(y)));
  };
  std::vector<SparseVec> units;
  for (int x = 0; x < n; ++x) units.push_back(dims(x) > 0 ? SparseVec::unit(0, Scalar(1).in(field)) : SparseVec());
  t.units = units;
  return dg_category(t);
}

CategoryPtr random_matrix_category(Rng& rng, const Field& field, int objects, int max_dim, const std::string& prefix) {
  std::vector<std::string> names;
  std::vector<Complex> cs;
  for (int i = 0; i < objects; ++i) {
    names.push_back(prefix + std::to_string(i));
    cs.push_back(random_complex(rng, field, 1 + pick(rng, max_dim)));
  }
  return matrix_category(field, names, cs);
}

Product product(const CategoryPtr& c, const CategoryPtr& e) {
  const GradedQuiver& qc = c->q();
  const GradedQuiver& qe = e->q();
  if (std::max(c->structure.support_arity(), e->structure.support_arity()) > 2)
    throw std::invalid_argument("product fixture expects DG inputs");
  const Field& field = c->field;
  std::vector<std::pair<int, int>> objs;
  std::vector<std::string> names;
  for (int i = 0; i < qc.size(); ++i)
    for (int j = 0; j < qe.size(); ++j) {
      objs.emplace_back(i, j);
      names.push_back(qc.object(i) + "*" + qe.object(j));
    }
  int n = static_cast<int>(objs.size());
  auto q = std::make_shared<GradedQuiver>(names);
  // full endo homs: the C' unit becomes (1, 1) and the E unit (0, 1) is "ε"
  auto full_endo = [&](int a, int b) { return a == b && unit_index(*c, objs[a].first) && unit_index(*e, objs[a].second); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<BasisElement> basis;
      const auto& hc = qc.hom(objs[a].first, objs[b].first);
      const auto& he = qe.hom(objs[a].second, objs[b].second);
      bool fe = full_endo(a, b);
      for (int i = 0; i < hc.dim(); ++i)
        basis.push_back({fe && unit_index(*c, objs[a].first) == i ? "1" : "c:" + hc.name(i), hc.degree(i)});
      for (int i = 0; i < he.dim(); ++i)
        basis.push_back({fe && unit_index(*e, objs[a].second) == i ? "ε" : "e:" + he.name(i), he.degree(i)});
      q->set_hom(a, b, GradedSpace(basis));
    }
  auto cdim = [&](int a, int b) { return qc.hom(objs[a].first, objs[b].first).dim(); };
  // basis vector -> (C' part, E part) and back
  auto split = [&](int a, int b, const SparseVec& v) {
    SparseVec pc, pe;
    int cd = cdim(a, b);
    for (const auto& [i, s] : v) {
      if (i < cd) {
        pc.add(i, s);
        if (full_endo(a, b) && unit_index(*c, objs[a].first) == i) pe.add(*unit_index(*e, objs[a].second), s);
      } else {
        pe.add(i - cd, s);
      }
    }
    return std::pair{pc, pe};
  };
  auto join = [&](int a, int b, const SparseVec& pc, const SparseVec& pe) {
    SparseVec v;
    int cd = cdim(a, b);
    for (const auto& [i, s] : pc) v.add(i, s);
    for (const auto& [i, s] : pe) v.add(cd + i, s);
    if (full_endo(a, b)) {
      Scalar u = pc.at(*unit_index(*c, objs[a].first));
      v.add(cd + *unit_index(*e, objs[a].second), -u);
    }
    return v;
  };

  Components m;
  for (int ar = 1; ar <= 2; ++ar)
    for (const Tuple& t : basis_tuples(*q, ar)) {
      std::vector<int> co, eo;
      std::vector<SparseVec> ca, ea;
      for (int j = 0; j <= ar; ++j) {
        co.push_back(objs[t.object(j)].first);
        eo.push_back(objs[t.object(j)].second);
      }
      for (int j = 0; j < ar; ++j) {
        auto [pc, pe] = split(t.object(j), t.object(j + 1), SparseVec::unit(t.input(j), Scalar(1).in(field)));
        ca.push_back(pc);
        ea.push_back(pe);
      }
      SparseVec v = join(t.first(), t.last(), evaluate(c->m(), co, ca), evaluate(e->m(), eo, ea));
      if (!v.empty()) m[t] = v;
    }
  std::optional<std::vector<SparseVec>> units;
  if (c->unital() && e->unital()) {
    units.emplace();
    for (int a = 0; a < n; ++a)
      units->push_back(join(a, a, (*c->units)[objs[a].first], (*e->units)[objs[a].second]));
  }
  auto cat = std::make_shared<const AInftyCategory>(make_category(q, field, std::move(m), units));

  FormalMorphism pr;
  pr.source = q;
  pr.target = c->quiver;
  for (const auto& o : objs) pr.object_map.push_back(o.first);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < q->hom(a, b).dim(); ++i) {
        SparseVec pc = split(a, b, SparseVec::unit(i, Scalar(1).in(field))).first;
        if (!pc.empty()) pr.components[Tuple::make({a, b}, {i})] = pc;
      }
  return {cat, make_functor(cat, c, std::move(pr))};
}

Restriction restrict_to(const CategoryPtr& c, const std::vector<int>& objects, const std::string& prefix) {
  int n = static_cast<int>(objects.size());
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  auto q = std::make_shared<GradedQuiver>(names);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) q->set_hom(a, b, c->q().hom(objects[a], objects[b]));
  std::vector<std::vector<int>> fibre(c->q().size());
  for (int i = 0; i < n; ++i) fibre[objects[i]].push_back(i);
  Components m;
  for (const auto& [t, v] : c->m()) {
    int ar = t.n();
    std::vector<int> choice(ar + 1), ins(t.inputs.begin(), t.inputs.begin() + ar);
    auto rec = [&](auto&& self, int j) -> void {
      if (j > ar) {
        m[Tuple::make(choice, ins)] = v;
        return;
      }
      for (int p : fibre[t.object(j)]) {
        choice[j] = p;
        self(self, j + 1);
      }
    };
    rec(rec, 0);
  }
  std::optional<std::vector<SparseVec>> units;
  if (c->units) {
    units.emplace();
    for (int o : objects) units->push_back((*c->units)[o]);
  }
  auto cat = std::make_shared<const AInftyCategory>(make_category(q, c->field, std::move(m), units));
  FormalMorphism inc = identity_formal(q);
  inc.target = c->quiver;
  inc.object_map = objects;
  return {cat, make_functor(cat, c, std::move(inc))};
}

Conjugation conjugate(Rng& rng, const CategoryPtr& a, int max_arity, int entries, int theta_arity) {
  const GradedQuiver& q = a->q();
  const Field& field = a->field;
  FormalMorphism theta = identity_formal(a->quiver);
  for (auto& [t, v] : theta.components) {
    int x = t.first(), y = t.last(), i = t.input(0);
    if (x == y && unit_index(*a, x) == i) continue;
    if (!coin(rng, 3)) continue;
    const GradedSpace& h = q.hom(x, y);
    for (int j = i + 1; j < h.dim(); ++j)
      if (h.degree(j) == h.degree(i) && !(x == y && unit_index(*a, x) == j)) {
        v.add(j, random_scalar(rng, field, true));
        break;
      }
  }
  for (int n = 2; n <= std::min(theta_arity, max_arity); ++n)
    for (int e = 0, tries = 0; e < entries && tries < 50; ++tries) {
      auto t = random_tuple(rng, q, n, a.get());
      if (!t) continue;
      auto v = random_output(rng, q.hom(t->first(), t->last()), q.input_degree(*t) + 1 - n, field);
      if (!v) continue;
      theta.components[*t] = *v;
      ++e;
    }
  auto tp = std::make_shared<const FormalMorphism>(std::move(theta));
  auto ip = std::make_shared<const FormalMorphism>(inverse_formal(*tp, max_arity));
  Components m = truncate(r_compose(ip, l_compose(tp, a->structure, max_arity), max_arity).components, max_arity);
  auto cat = std::make_shared<const AInftyCategory>(make_category(a->quiver, field, std::move(m), a->units));
  return {cat, make_functor(a, cat, *tp), make_functor(cat, a, *ip)};
}

AInftyFunctor compose(const AInftyFunctor& g, const AInftyFunctor& f, int max_arity) {
  return make_functor(f.source, g.target, compose_formal(g.f(), f.f(), max_arity));
}

AInftyFunctor identity_functor(const CategoryPtr& a) { return make_functor(a, a, identity_formal(a->quiver)); }

CategoryPtr indiscrete(const Field& field, int n, const std::string& prefix) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(n == 1 ? prefix : prefix + std::to_string(i));
  auto q = std::make_shared<GradedQuiver>(names);
  bool primed = !prefix.empty() && prefix.back() == '\'';
  std::string one = primed ? "1'" : "1", u = primed ? "u'" : "u";
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) q->set_hom(a, b, GradedSpace({{a == b ? one : u, 0}}));
  DGTable t;
  t.quiver = q;
  t.field = field;
  t.d = [](int, int, int) { return SparseVec(); };
  t.mul = [&](int, int, int, int, int) { return SparseVec::unit(0, Scalar(1).in(field)); };
  t.units = std::vector<SparseVec>(n, SparseVec::unit(0, Scalar(1).in(field)));
  return dg_category(t);
}

AInftyFunctor indiscrete_map(const CategoryPtr& src, const CategoryPtr& tgt, const std::vector<int>& object_map) {
  FormalMorphism f;
  f.source = src->quiver;
  f.target = tgt->quiver;
  f.object_map = object_map;
  for (int a = 0; a < src->q().size(); ++a)
    for (int b = 0; b < src->q().size(); ++b)
      f.components[Tuple::make({a, b}, {0})] = SparseVec::unit(0, Scalar(1).in(src->field));
  return make_functor(src, tgt, std::move(f));
}

SquareZero square_zero(const Field& field, const std::vector<int>& object_map, int target_objects, bool acyclic) {
  int n = static_cast<int>(object_map.size());
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(n == 1 ? "x" : "x" + std::to_string(i));
  auto q = std::make_shared<GradedQuiver>(names);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) q->set_hom(a, b, GradedSpace({{a == b ? "1" : "u", 0}, {"e", 0}, {"t", -1}}));
  const Scalar one = Scalar(1).in(field);
  DGTable t;
  t.quiver = q;
  t.field = field;
  // m^1(t) = (-1)^{|t|} d t = e
  t.d = [&](int, int, int i) { return acyclic && i == 2 ? SparseVec::unit(1, -one) : SparseVec(); };
  t.mul = [&](int, int, int, int i2, int i1) {
    if (i2 == 0) return SparseVec::unit(i1, one);
    if (i1 == 0) return SparseVec::unit(i2, one);
    return SparseVec();
  };
  t.units = std::vector<SparseVec>(n, SparseVec::unit(0, one));
  SquareZero sq;
  sq.source = dg_category(t);
  sq.target = indiscrete(field, target_objects, "x'");
  FormalMorphism f;
  f.source = q;
  f.target = sq.target->quiver;
  f.object_map = object_map;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) f.components[Tuple::make({a, b}, {0})] = SparseVec::unit(0, one);
  sq.f = make_functor(sq.source, sq.target, std::move(f));
  return sq;
}

CategoryPtr m3(const Field& field, bool perturbed) {
  auto q = std::make_shared<GradedQuiver>(std::vector<std::string>{"o"});
  std::vector<BasisElement> basis{{"a", 1}, {"b", 2}};
  if (perturbed) basis.push_back({"c", 3});
  q->set_hom(0, 0, GradedSpace(basis));
  const Scalar one = Scalar(1).in(field);
  Components m;
  m[Tuple::make({0, 0, 0, 0}, {0, 0, 0})] = SparseVec::unit(1, one);
  if (perturbed) m[Tuple::make({0, 0, 0, 0}, {1, 0, 0})] = SparseVec::unit(2, one);
  return std::make_shared<const AInftyCategory>(make_category(q, field, std::move(m)));
}

RandomF1 random_f1(Rng& rng, const Field& field, int max_arity, bool conjugated, const Shape& shape) {
  CategoryPtr c = random_matrix_category(rng, field, 1 + pick(rng, shape.target_objects), shape.max_dim, "c");
  CategoryPtr e = random_matrix_category(rng, field, 1 + pick(rng, shape.kernel_objects), shape.max_dim, "e");
  Product p = product(c, e);
  RandomF1 r;
  r.strict_target = c;
  r.source = p.category;
  r.target = c;
  r.f = p.projection;
  r.target_conjugation = identity_functor(c);
  if (!conjugated) return r;
  Conjugation src = conjugate(rng, p.category, max_arity, shape.theta_entries, shape.theta_arity);
  r.source = src.category;
  r.f = compose(p.projection, src.inverse, max_arity);
  if (shape.conjugate_target) {
    Conjugation tgt = conjugate(rng, c, max_arity, shape.theta_entries, shape.theta_arity);
    r.target = tgt.category;
    r.f = compose(tgt.theta, r.f, max_arity);
    r.target_conjugation = tgt.theta;
  }
  return r;
}

AInftyFunctor random_g(Rng& rng, const RandomF1& f, int max_arity, bool conjugated, const Shape& shape) {
  int n = 1 + pick(rng, 3);
  std::vector<int> objs;
  for (int i = 0; i < n; ++i) objs.push_back(pick(rng, f.strict_target->q().size()));
  Restriction r = restrict_to(f.strict_target, objs);
  AInftyFunctor g = compose(f.target_conjugation, r.inclusion, max_arity);
  if (!conjugated) return g;
  Conjugation c = conjugate(rng, r.category, max_arity, shape.theta_entries, shape.theta_arity);
  return compose(g, c.inverse, max_arity);
}

FibreProduct direct_fibre_product(const AInftyFunctor& f, const AInftyFunctor& g) {
  const AInftyCategory& a = *f.source;
  const AInftyCategory& a2 = *g.source;
  if (a.structure.support_arity() > 2 || a2.structure.support_arity() > 2 || f.f().support_arity() > 1 ||
      g.f().support_arity() > 1)
    throw std::invalid_argument("direct fibre product needs strict DG data");
  const Field& field = a.field;
  FibreProduct fp;
  std::vector<std::string> names;
  for (int x = 0; x < a.q().size(); ++x)
    for (int y = 0; y < a2.q().size(); ++y)
      if (f.f().object_map[x] == g.f().object_map[y]) {
        fp.objects.emplace_back(x, y);
        names.push_back("(" + a.q().object(x) + "," + a2.q().object(y) + ")");
      }
  int n = static_cast<int>(fp.objects.size());
  auto q = std::make_shared<GradedQuiver>(names);
  // kernel basis per pair, as stacked (a, a'') coordinate columns
  auto bases = std::make_shared<std::map<std::pair<int, int>, std::vector<SparseVec>>>();
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) {
      auto [x0, y0] = fp.objects[p];
      auto [x1, y1] = fp.objects[r];
      const GradedSpace& ha = a.q().hom(x0, x1);
      const GradedSpace& hb = a2.q().hom(y0, y1);
      const GradedSpace& ht = f.target->q().hom(f.f().object_map[x0], f.f().object_map[x1]);
      std::vector<BasisElement> basis;
      auto& vecs = (*bases)[{p, r}];
      std::set<int> degrees;
      for (int d : ha.degrees()) degrees.insert(d);
      for (int d : hb.degrees()) degrees.insert(d);
      for (int k : degrees) {
        std::vector<int> cols_a = ha.in_degree(k), cols_b = hb.in_degree(k);
        int cols = static_cast<int>(cols_a.size() + cols_b.size());
        DenseMatrix m(std::max(ht.dim(), 1), cols);
        for (int c = 0; c < static_cast<int>(cols_a.size()); ++c)
          for (const auto& [i, s] : evaluate(f.f().components, {x0, x1}, {SparseVec::unit(cols_a[c], Scalar(1).in(field))}))
            m(i, c) += s;
        for (int c = 0; c < static_cast<int>(cols_b.size()); ++c)
          for (const auto& [i, s] : evaluate(g.f().components, {y0, y1}, {SparseVec::unit(cols_b[c], Scalar(1).in(field))}))
            m(i, static_cast<int>(cols_a.size()) + c) -= s;
        if (ht.dim() == 0)
          for (int c = 0; c < cols; ++c) m(0, c) = Scalar(0).in(field);
        for (const auto& ns : m.null_space()) {
          SparseVec v;
          for (int c = 0; c < static_cast<int>(cols_a.size()); ++c) v.add(cols_a[c], ns[c]);
          for (int c = 0; c < static_cast<int>(cols_b.size()); ++c)
            v.add(ha.dim() + cols_b[c], ns[cols_a.size() + c]);
          basis.push_back({"v" + std::to_string(vecs.size()), k});
          vecs.push_back(v);
        }
      }
      q->set_hom(p, r, GradedSpace(basis));
    }
  auto objects = fp.objects;
  auto adim = [&a, objects](int p, int r) { return a.q().hom(objects[p].first, objects[r].first).dim(); };
  fp.coordinates = [bases, adim, field](int p, int r, const SparseVec& va, const SparseVec& vb) -> std::optional<SparseVec> {
    const auto& vecs = bases->at({p, r});
    int ad = adim(p, r);
    SparseVec target = va;
    for (const auto& [i, s] : vb) target.add(ad + i, s);
    int rows = 1;
    for (const auto& v : vecs)
      for (const auto& [i, s] : v) rows = std::max(rows, i + 1);
    for (const auto& [i, s] : target) rows = std::max(rows, i + 1);
    DenseMatrix m(rows, static_cast<int>(vecs.size()));
    for (int c = 0; c < static_cast<int>(vecs.size()); ++c)
      for (const auto& [i, s] : vecs[c]) m(i, c) = s;
    std::vector<Scalar> rhs(rows, Scalar(0).in(field));
    for (const auto& [i, s] : target) rhs[i] = s;
    if (vecs.empty()) return target.empty() ? std::optional<SparseVec>(SparseVec()) : std::nullopt;
    auto sol = m.solve(rhs);
    if (!sol) return std::nullopt;
    SparseVec out;
    for (int c = 0; c < static_cast<int>(sol->size()); ++c) out.add(c, (*sol)[c]);
    return out;
  };

  Components m;
  for (int ar = 1; ar <= 2; ++ar)
    for (const Tuple& t : basis_tuples(*q, ar)) {
      std::vector<int> ao, bo;
      std::vector<SparseVec> aa, ba;
      for (int j = 0; j <= ar; ++j) {
        ao.push_back(fp.objects[t.object(j)].first);
        bo.push_back(fp.objects[t.object(j)].second);
      }
      for (int j = 0; j < ar; ++j) {
        const SparseVec& v = bases->at({t.object(j), t.object(j + 1)})[t.input(j)];
        auto [va, vb] = [&] {
          SparseVec x, y;
          int ad = adim(t.object(j), t.object(j + 1));
          for (const auto& [i, s] : v) (i < ad ? x : y).add(i < ad ? i : i - ad, s);
          return std::pair{x, y};
        }();
        aa.push_back(va);
        ba.push_back(vb);
      }
      auto c = fp.coordinates(t.first(), t.last(), evaluate(a.m(), ao, aa), evaluate(a2.m(), bo, ba));
      if (!c) throw std::logic_error("fibre product not closed under the structure");
      if (!c->empty()) m[t] = *c;
    }
  std::optional<std::vector<SparseVec>> units;
  if (a.unital() && a2.unital()) {
    units.emplace();
    for (int p = 0; p < n; ++p)
      units->push_back(*fp.coordinates(p, p, (*a.units)[fp.objects[p].first], (*a2.units)[fp.objects[p].second]));
  }
  fp.category = std::make_shared<const AInftyCategory>(make_category(q, field, std::move(m), units));
  return fp;
}

QuiverPtr random_quiver(Rng& rng, int objects, int max_dim, int lo, int hi) {
  std::vector<std::string> names;
  for (int i = 0; i < objects; ++i) names.push_back("q" + std::to_string(i));
  auto q = std::make_shared<GradedQuiver>(names);
  for (int a = 0; a < objects; ++a)
    for (int b = 0; b < objects; ++b) {
      std::vector<BasisElement> basis;
      int d = pick(rng, max_dim + 1);
      for (int i = 0; i < d; ++i) basis.push_back({"b" + std::to_string(i), lo + pick(rng, hi - lo + 1)});
      q->set_hom(a, b, GradedSpace(basis));
    }
  return q;
}

FormalMorphism random_formal(Rng& rng, const QuiverPtr& src, const QuiverPtr& tgt, const Field& field,
                             int max_arity, int entries) {
  FormalMorphism f;
  f.source = src;
  f.target = tgt;
  for (int x = 0; x < src->size(); ++x) f.object_map.push_back(pick(rng, tgt->size()));
  for (int a = 0; a < src->size(); ++a)
    for (int b = 0; b < src->size(); ++b)
      for (int i = 0; i < src->hom(a, b).dim(); ++i) {
        auto v = random_output(rng, tgt->hom(f.object_map[a], f.object_map[b]), src->hom(a, b).degree(i), field);
        if (v && !coin(rng, 4)) f.components[Tuple::make({a, b}, {i})] = *v;
      }
  for (int n = 2; n <= max_arity; ++n)
    for (int e = 0, tries = 0; e < entries && tries < 50; ++tries) {
      auto t = random_tuple(rng, *src, n, nullptr);
      if (!t) continue;
      auto v = random_output(rng, tgt->hom(f.object_map[t->first()], f.object_map[t->last()]),
                             src->input_degree(*t) + 1 - n, field);
      if (!v) continue;
      f.components[*t] = *v;
      ++e;
    }
  return f;
}

Prenatural random_prenatural(Rng& rng, const FormalPtr& base, int degree, const Field& field, int max_arity,
                             int entries) {
  Prenatural p;
  p.base = base;
  p.degree = degree;
  const GradedQuiver& src = *base->source;
  const GradedQuiver& tgt = *base->target;
  for (int n = 1; n <= max_arity; ++n)
    for (int e = 0, tries = 0; e < entries && tries < 50; ++tries) {
      auto t = random_tuple(rng, src, n, nullptr);
      if (!t) continue;
      auto v = random_output(rng, tgt.hom(base->object_map[t->first()], base->object_map[t->last()]),
                             src.input_degree(*t) + degree - n, field);
      if (!v) continue;
      p.components[*t] = *v;
      ++e;
    }
  return p;
}

std::optional<AInftyFunctor> comparison(const Pullback& p, const FibreProduct& fp) {
  if (p.objects != fp.objects) return std::nullopt;
  FormalMorphism c;
  c.source = p.quiver;
  c.target = fp.category->quiver;
  for (int i = 0; i < p.quiver->size(); ++i) c.object_map.push_back(i);
  for (int a = 0; a < p.quiver->size(); ++a)
    for (int b = 0; b < p.quiver->size(); ++b)
      for (int i = 0; i < p.quiver->hom(a, b).dim(); ++i) {
        SparseVec e = SparseVec::unit(i, Scalar(1).in(p.category->field));
        auto v = fp.coordinates(a, b, evaluate(p.beta.f().components, {a, b}, {e}),
                                evaluate(p.alpha.f().components, {a, b}, {e}));
        if (!v) return std::nullopt;
        if (!v->empty()) c.components[Tuple::make({a, b}, {i})] = *v;
      }
  return make_functor(p.category, fp.category, std::move(c));
}

CategoryPtr perturb(Rng& rng, const CategoryPtr& c, int max_arity) {
  const GradedQuiver& q = c->q();
  for (int tries = 0; tries < 1000; ++tries) {
    int n = 1 + pick(rng, max_arity);
    auto t = random_tuple(rng, q, n, nullptr);
    if (!t) continue;
    auto v = random_output(rng, q.hom(t->first(), t->last()), q.input_degree(*t) + 2 - n, c->field);
    if (!v) continue;
    Components m = c->m();
    SparseVec& slot = m[*t];
    slot = slot + *v;
    if (slot.empty()) continue;
    return std::make_shared<const AInftyCategory>(make_category(c->quiver, c->field, std::move(m), c->units));
  }
  throw std::invalid_argument("perturb: no room for a perturbation");
}

Prenatural random_structure(Rng& rng, const QuiverPtr& q, const Field& field, int max_arity, int entries) {
  return random_prenatural(rng, identity_ptr(q), 2, field, max_arity, entries);
}

}  // namespace ainf::fixtures
