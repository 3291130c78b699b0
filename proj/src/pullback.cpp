#include "ainf/pullback.hpp"

namespace ainf {

namespace {

SparseVec shifted(const SparseVec& v, int offset) {
  SparseVec out;
  for (const auto& [i, c] : v) out.add(i + offset, c);
  return out;
}

// Splits a vector on K ⊕ X into its two parts.
std::pair<SparseVec, SparseVec> split_at(const SparseVec& v, int kd) {
  SparseVec k, x;
  for (const auto& [i, c] : v) {
    if (i < kd)
      k.add(i, c);
    else
      x.add(i - kd, c);
  }
  return {k, x};
}

Check renamed(Check c, std::string name) {
  c.name = std::move(name);
  return c;
}

Check compare_formal(const std::string& name, const FormalMorphism& a, const FormalMorphism& b, int n,
                     const std::string& what) {
  if (a.object_map != b.object_map) return Check::fail(name, what + ": object maps differ");
  if (auto t = first_difference(a.components, b.components, n))
    return Check::fail(name, what + ": differ at " + a.source->describe(*t));
  return Check::pass(name, what);
}

}  // namespace

std::optional<int> Pullback::object_of(int x, int y) const {
  for (std::size_t p = 0; p < objects.size(); ++p)
    if (objects[p] == std::pair{x, y}) return static_cast<int>(p);
  return std::nullopt;
}

PullbackQuiver build_pullback_quiver(const SplitModel& model, const AInftyFunctor& g) {
  const AInftyFunctor& f = model.functor;
  if (!(g.target->q() == f.target->q())) throw StructuralError("G must target the codomain of F");
  const auto& a = f.source->q();
  const auto& app = g.source->q();

  PullbackQuiver pq;
  std::vector<std::string> names;
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < app.size(); ++y)
      if (f.f().object_map[x] == g.f().object_map[y]) {
        pq.objects.emplace_back(x, y);
        names.push_back("(" + a.object(x) + "," + app.object(y) + ")");
      }
  int n = static_cast<int>(pq.objects.size());
  auto q = std::make_shared<GradedQuiver>(names);
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) {
      std::vector<BasisElement> basis;
      for (const auto& b : model.splits.at({pq.objects[p].first, pq.objects[r].first}).kernel.basis())
        basis.push_back({"k:" + b.name, b.degree});
      for (const auto& b : app.hom(pq.objects[p].second, pq.objects[r].second).basis())
        basis.push_back({"a:" + b.name, b.degree});
      q->set_hom(p, r, GradedSpace(basis));
    }
  pq.quiver = q;

  auto kd = [&](int p, int r) { return model.kernel_dim(pq.objects[p].first, pq.objects[r].first); };

  FormalMorphism prod, alpha;
  prod.source = q;
  prod.target = model.quiver;
  alpha.source = q;
  alpha.target = g.source->quiver;
  for (const auto& [x, y] : pq.objects) {
    prod.object_map.push_back(x);
    alpha.object_map.push_back(y);
  }
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) {
      int k = kd(p, r);
      for (int j = 0; j < k; ++j) prod.components[Tuple::make({p, r}, {j})] = SparseVec::unit(j);
      for (int j = 0; j < app.hom(pq.objects[p].second, pq.objects[r].second).dim(); ++j)
        alpha.components[Tuple::make({p, r}, {k + j})] = SparseVec::unit(j);
    }

  // every G^n lifts along all choices of pullback objects over its A''-objects
  std::vector<std::vector<int>> fibre(app.size());
  for (int p = 0; p < n; ++p) fibre[pq.objects[p].second].push_back(p);
  for (const auto& [t, v] : g.f().components) {
    int ar = t.n();
    std::vector<int> choice(ar + 1), ins(ar);
    auto rec = [&](auto&& self, int j) -> void {
      if (j > ar) {
        for (int i = 0; i < ar; ++i) ins[i] = kd(choice[i], choice[i + 1]) + t.input(i);
        prod.components[Tuple::make(choice, ins)] = shifted(v, kd(choice[0], choice[ar]));
        return;
      }
      for (int p : fibre[t.object(j)]) {
        choice[j] = p;
        self(self, j + 1);
      }
    };
    rec(rec, 0);
  }
  pq.product = std::make_shared<const FormalMorphism>(std::move(prod));
  pq.alpha = std::make_shared<const FormalMorphism>(std::move(alpha));
  return pq;
}

Components solve_pullback_arity(const PullbackQuiver& pq, const Components& lower, const Prenatural& product_side,
                                const Prenatural& alpha_side, const AInftyFunctor& g, int n) {
  Prenatural below;
  below.base = identity_ptr(pq.quiver);
  below.degree = 2;
  below.components = lower;
  // psi^n: every term of L_P(D~) - R_P(m_S) except the unknown P^1(D~^n)
  Components psi = kernel::expand(pq.product->components, *below.base, &below, n, n).components;
  Components rp;
  for (const auto& [t, v] : product_side.components)
    if (t.n() == n) rp.emplace(t, v);
  psi = subtract(psi, rp);

  Components support = psi;
  for (const auto& [t, v] : alpha_side.components)
    if (t.n() == n) support.try_emplace(t);

  const GradedQuiver& q = *pq.quiver;
  Components out;
  for (const auto& [t, unused] : support) {
    int kd = q.hom(t.first(), t.last()).dim() -
             g.source->q().hom(pq.objects[t.first()].second, pq.objects[t.last()].second).dim();
    SparseVec a2 = alpha_side.component(t);
    auto pit = psi.find(t);
    auto [k_part, a1_part] = split_at(pit == psi.end() ? SparseVec() : pit->second, kd);
    SparseVec g1 = evaluate(g.f().components, {pq.objects[t.first()].second, pq.objects[t.last()].second}, {a2});
    if (!(a1_part + g1).empty())
      throw ConsistencyError("arity " + std::to_string(n) + " A'-part does not cancel at " + q.describe(t));
    SparseVec value = k_part.scaled(Scalar(-1)) + shifted(a2, kd);
    if (!value.empty()) out.emplace(t, value);
  }
  return out;
}

Pullback build_pullback(const AInftyFunctor& f, const AInftyFunctor& g, int max_arity) {
  F1Result f1 = check_F1(f);
  if (!f1.splits) throw std::runtime_error("F1 failed: " + f1.check.detail);
  Pullback p;
  p.f = f;
  p.g = g;
  p.max_arity = max_arity;
  p.model = build_split_model(f, *f1.splits);
  p.strict = strictify(p.model, max_arity);

  PullbackQuiver pq = build_pullback_quiver(p.model, g);
  p.objects = pq.objects;
  p.quiver = pq.quiver;
  p.product = pq.product;

  Prenatural product_side = r_compose(pq.product, p.strict.model->structure, max_arity);
  Prenatural alpha_side = r_compose(pq.alpha, g.source->structure, max_arity);
  Components d;
  for (int n = 1; n <= max_arity; ++n)
    for (auto& [t, v] : solve_pullback_arity(pq, d, product_side, alpha_side, g, n)) d.emplace(t, std::move(v));

  std::optional<std::vector<SparseVec>> units;
  if (f.source->unital() && g.source->unital()) {
    units.emplace();
    for (const auto& [x, y] : p.objects) {
      const SplitData& sp = p.model.splits.at({x, x});
      units->push_back(sp.retraction.apply((*f.source->units)[x]) + shifted((*g.source->units)[y], sp.kernel.dim()));
    }
  }
  p.category = std::make_shared<const AInftyCategory>(make_category(pq.quiver, f.source->field, std::move(d), units));
  p.alpha = make_functor(p.category, g.source, *pq.alpha);
  p.product_functor = make_functor(p.category, p.strict.model, *pq.product);
  FormalMorphism beta =
      compose_formal(*p.strict.psi, compose_formal(*p.model.recompose, *pq.product, max_arity), max_arity);
  p.beta = make_functor(p.category, f.source, std::move(beta));
  return p;
}

Report certify_pullback(const Pullback& p) {
  Report r;
  const int n = p.max_arity;
  r.max_arity = n;
  r.total = is_total({&p.f.source->q(), &p.f.target->q(), &p.g.source->q()}, n);

  r.add(validate_structure(*p.category, n));
  r.add(renamed(validate_functor(p.product_functor, n), "equation_product"));
  r.add(renamed(validate_functor(p.alpha, n), "equation_alpha"));

  // arity 1: D~^1(k, a'') = (r m_S^1(k, G^1 a''), m''^1(a''))
  const GradedQuiver& q = *p.quiver;
  Check closed = Check::pass("arity_one", "matches the closed form on every basis element");
  for (int a = 0; a < q.size() && closed.passed(); ++a)
    for (int b = 0; b < q.size() && closed.passed(); ++b) {
      int kd = p.kernel_dim(a, b);
      auto [x0, y0] = p.objects[a];
      auto [x1, y1] = p.objects[b];
      for (int i = 0; i < q.hom(a, b).dim(); ++i) {
        SparseVec e = SparseVec::unit(i);
        SparseVec in_s = evaluate(p.product->components, {a, b}, {e});
        auto [k, unused] = split_at(evaluate(p.strict.model->m(), {x0, x1}, {in_s}), kd);
        SparseVec a2 = evaluate(p.g.source->m(), {y0, y1}, {evaluate(p.alpha.f().components, {a, b}, {e})});
        SparseVec want = k + shifted(a2, kd);
        SparseVec got = evaluate(p.category->m(), {a, b}, {e});
        if (!(got == want)) {
          closed = Check::fail("arity_one", "D~^1(" + q.hom(a, b).name(i) + ") = " + q.hom(a, b).describe(got) +
                                                ", closed form gives " + q.hom(a, b).describe(want));
          break;
        }
      }
    }
  r.add(closed);

  FormalMorphism g_alpha = compose_formal(p.g.f(), p.alpha.f(), n);
  r.add(compare_formal("square_model", compose_formal(*p.model.projection, *p.product, n), g_alpha, n,
                       "pr·(Id_K×G) = G·alpha"));
  r.add(compare_formal("square", compose_formal(p.f.f(), p.beta.f(), n), g_alpha, n, "F·beta = G·alpha"));
  r.add(renamed(validate_functor(p.beta, n), "beta_functor"));
  r.add(renamed(check_F1(p.alpha).check, "alpha_F1"));
  if (p.category->unital()) {
    r.add(check_strict_units(*p.category, n));
    r.add(renamed(check_functor_units(p.alpha, n), "alpha_units"));
    r.add(renamed(check_functor_units(p.product_functor, n), "product_units"));
  }
  return r;
}

Report certify_fibration_closure(const Pullback& p, const ClassifyOptions& opts) {
  Report r;
  r.max_arity = p.max_arity;
  F1Result a1 = check_F1(p.alpha);
  r.add(renamed(a1.check, "alpha.F1"));

  Check f_f2 = check_isofibration(p.f, opts);
  Verdict f_qe = check_quasi_equivalence(p.f, opts).overall();
  Check hyp = Check::pass("hypotheses", std::string("F: F2 ") + to_string(f_f2.verdict) + ", quasi-equivalence " +
                                            to_string(f_qe));
  hyp.required = false;
  r.add(hyp);
  bool has_f2 = f_f2.passed();
  bool acyclic = has_f2 && f_qe == Verdict::pass;

  Check iso = renamed(check_isofibration(p.alpha, opts), "IsoFib");
  iso.required = has_f2;
  r.add(iso);

  Check ka = a1.splits ? kernel_acyclicity(p.alpha, *a1.splits)
                       : Check::undecided("kernel_acyclicity", "F1 not established for alpha");
  Check hom = check_hom_quasi_iso(p.alpha);
  Check ff = ka.verdict != Verdict::pass ? ka : hom;
  ff.name = "FF";
  ff.required = acyclic;
  r.add(ff);

  Check ex = renamed(check_essential_surjectivity(p.alpha, opts), "ExSurj");
  ex.required = acyclic;
  r.add(ex);

  Check summary = Check::pass("acyclic_fibration", "alpha is an acyclic fibration");
  for (const Check* c : {&r.checks[0], &iso, &ff, &ex})
    if (c->verdict != Verdict::pass) {
      std::string kind = a1.splits ? "fibration, not acyclic: " : "";
      if (c->verdict == Verdict::undecided) kind = a1.splits ? "fibration, acyclicity undecided: " : "";
      summary = Check{"acyclic_fibration", c->verdict, kind + c->name + ": " + c->detail};
      break;
    }
  summary.required = acyclic;
  r.add(summary);
  return r;
}

InducedFunctor induce_functor(const Pullback& p, const AInftyFunctor& i, const AInftyFunctor& l) {
  const int n = p.max_arity;
  if (!(i.source->q() == l.source->q())) throw StructuralError("cone legs have different sources");
  if (!(i.target->q() == p.f.source->q())) throw StructuralError("first cone leg must target the source of F");
  if (!(l.target->q() == p.g.source->q())) throw StructuralError("second cone leg must target the source of G");
  const GradedQuiver& c = i.source->q();

  FormalMorphism fi = compose_formal(p.f.f(), i.f(), n);
  FormalMorphism gl = compose_formal(p.g.f(), l.f(), n);
  for (int x = 0; x < c.size(); ++x)
    if (fi.object_map[x] != gl.object_map[x]) throw ConeError("cone does not commute on object " + c.object(x));
  if (auto t = first_difference(fi.components, gl.components, n))
    throw ConeError("cone does not commute at arity " + std::to_string(t->n()) + ": " + c.describe(*t));

  FormalMorphism is = compose_formal(*p.model.decompose, compose_formal(*p.strict.phi, i.f(), n), n);
  FormalMorphism nm;
  nm.source = i.source->quiver;
  nm.target = p.quiver;
  for (int x = 0; x < c.size(); ++x) nm.object_map.push_back(*p.object_of(i.f().object_map[x], l.f().object_map[x]));
  Components support = is.components;
  for (const auto& [t, v] : l.f().components) support.try_emplace(t);
  for (const auto& [t, unused] : support) {
    int kd = p.kernel_dim(nm.object_map[t.first()], nm.object_map[t.last()]);
    auto [k, ignored] = split_at(is.component(t), kd);
    SparseVec v = k + shifted(l.f().component(t), kd);
    if (!v.empty()) nm.components.emplace(t, v);
  }

  InducedFunctor out{make_functor(i.source, p.category, std::move(nm)), {}};
  Report& r = out.report;
  r.max_arity = n;
  r.add(validate_functor(out.functor, n));
  FormalMorphism an = compose_formal(p.alpha.f(), out.functor.f(), n);
  r.add(compare_formal("alpha_triangle", an, l.f(), n, "alpha·N = L"));
  r.add(compare_formal("beta_triangle", compose_formal(p.beta.f(), out.functor.f(), n), i.f(), n, "beta·N = I"));

  // the two projections determine N
  FormalMorphism pn = compose_formal(*p.product, out.functor.f(), n);
  FormalMorphism again = out.functor.f();
  again.components.clear();
  Components sup = pn.components;
  for (const auto& [t, v] : an.components) sup.try_emplace(t);
  for (const auto& [t, unused] : sup) {
    int kd = p.kernel_dim(again.object_map[t.first()], again.object_map[t.last()]);
    auto [k, ignored] = split_at(pn.component(t), kd);
    SparseVec v = k + shifted(an.component(t), kd);
    if (!v.empty()) again.components.emplace(t, v);
  }
  r.add(compare_formal("uniqueness", again, out.functor.f(), n, "N is forced by its two projections"));
  if (i.source->unital() && p.category->unital()) r.add(check_functor_units(out.functor, n));
  return out;
}

}  // namespace ainf
