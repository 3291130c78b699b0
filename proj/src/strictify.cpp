#include "ainf/strictify.hpp"

namespace ainf {

namespace {

std::string model_object_name(const AInftyFunctor& f, int x) {
  return "(" + f.source->q().object(x) + "," + f.target->q().object(f.f().object_map[x]) + ")";
}

}  // namespace

SplitModel build_split_model(const AInftyFunctor& f, const SplitTable& splits) {
  const auto& a = f.source->q();
  const auto& ap = f.target->q();
  int n = a.size();
  std::vector<std::string> names;
  for (int x = 0; x < n; ++x) names.push_back(model_object_name(f, x));
  auto s = std::make_shared<GradedQuiver>(names);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      auto it = splits.find({x, y});
      if (it == splits.end())
        throw StructuralError("missing split for (" + a.object(x) + ", " + a.object(y) + ")");
      std::vector<BasisElement> basis;
      for (const auto& b : it->second.kernel.basis()) basis.push_back({"k:" + b.name, b.degree});
      for (const auto& b : ap.hom(f.f().object_map[x], f.f().object_map[y]).basis())
        basis.push_back({"a:" + b.name, b.degree});
      s->set_hom(x, y, GradedSpace(basis));
    }

  SplitModel m{f, splits, s, nullptr, nullptr, nullptr};
  FormalMorphism dec, rec, pr;
  dec.source = f.source->quiver;
  dec.target = s;
  rec.source = s;
  rec.target = f.source->quiver;
  pr.source = s;
  pr.target = f.target->quiver;
  for (int x = 0; x < n; ++x) {
    dec.object_map.push_back(x);
    rec.object_map.push_back(x);
    pr.object_map.push_back(f.f().object_map[x]);
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const SplitData& sp = splits.at({x, y});
      int kd = sp.kernel.dim();
      for (int i = 0; i < a.hom(x, y).dim(); ++i) {
        SparseVec v = sp.retraction.column(i);
        for (const auto& [j, c] : sp.surjection.column(i)) v.add(kd + j, c);
        if (!v.empty()) dec.components[Tuple::make({x, y}, {i})] = v;
      }
      for (int j = 0; j < kd; ++j)
        if (!sp.inclusion.column(j).empty()) rec.components[Tuple::make({x, y}, {j})] = sp.inclusion.column(j);
      for (int j = 0; j < sp.surjection.target().dim(); ++j) {
        if (!sp.section.column(j).empty()) rec.components[Tuple::make({x, y}, {kd + j})] = sp.section.column(j);
        pr.components[Tuple::make({x, y}, {kd + j})] = SparseVec::unit(j);
      }
    }
  m.decompose = std::make_shared<const FormalMorphism>(std::move(dec));
  m.recompose = std::make_shared<const FormalMorphism>(std::move(rec));
  m.projection = std::make_shared<const FormalMorphism>(std::move(pr));
  return m;
}

Check check_split_model(const SplitModel& model) {
  auto rd = compose_formal(*model.recompose, *model.decompose, 1);
  auto dr = compose_formal(*model.decompose, *model.recompose, 1);
  if (!rd.is_identity()) return Check::fail("split_model", "recompose∘decompose is not the identity");
  if (!dr.is_identity()) return Check::fail("split_model", "decompose∘recompose is not the identity");
  return Check::pass("split_model", "decompose and recompose are inverse");
}

FormalMorphism build_phi(const SplitModel& model, int max_arity) {
  const auto& f = model.functor.f();
  FormalMorphism phi = identity_formal(f.source);
  for (const auto& [t, v] : f.components) {
    if (t.n() < 2 || t.n() > max_arity) continue;
    SparseVec s = model.splits.at({t.first(), t.last()}).section.apply(v);
    if (!s.empty()) phi.components[t] = s;
  }
  return phi;
}

Components transport_structure(const AInftyCategory& a, const FormalPtr& phi, int max_arity) {
  Components left = l_compose(phi, a.structure, max_arity).components;
  Components hat;
  for (const auto& [t, v] : left)
    if (t.n() == 1) hat.emplace(t, v);
  for (int n = 2; n <= max_arity; ++n) {
    Components lower = kernel::expand(hat, *phi, nullptr, n, n).components;
    Components level;
    for (const auto& [t, v] : left)
      if (t.n() == n) level.emplace(t, v);
    for (const auto& [t, v] : subtract(level, lower)) hat.emplace(t, v);
  }
  return hat;
}

Strictification strictify(const SplitModel& model, int max_arity) {
  const AInftyFunctor& f = model.functor;
  Strictification s;
  s.phi = std::make_shared<const FormalMorphism>(build_phi(model, max_arity));
  s.psi = std::make_shared<const FormalMorphism>(inverse_formal(*s.phi, max_arity));

  FormalMorphism f1;
  f1.source = f.f().source;
  f1.target = f.f().target;
  f1.object_map = f.f().object_map;
  for (const auto& [t, v] : f.f().components)
    if (t.n() == 1) f1.components.emplace(t, v);
  s.strict_f1 = std::make_shared<const FormalMorphism>(std::move(f1));

  const AInftyCategory& a = *f.source;
  s.transported = std::make_shared<const AInftyCategory>(
      make_category(a.quiver, a.field, transport_structure(a, s.phi, max_arity), a.units));

  Prenatural on_model = r_compose(model.recompose, l_compose(model.decompose, s.transported->structure, max_arity),
                                  max_arity);
  std::optional<std::vector<SparseVec>> units;
  if (a.units) {
    units.emplace();
    for (int x = 0; x < a.q().size(); ++x)
      units->push_back(evaluate(model.decompose->components, {x, x}, {(*a.units)[x]}));
  }
  s.model = std::make_shared<const AInftyCategory>(
      make_category(model.quiver, a.field, std::move(on_model.components), std::move(units)));
  s.projection = make_functor(s.model, f.target, *model.projection);
  s.phi_functor = make_functor(f.source, s.transported, *s.phi);
  return s;
}

Report certify_strictification(const SplitModel& model, const Strictification& s, int max_arity) {
  Report r;
  r.max_arity = max_arity;
  const auto& f = model.functor;
  const int n = max_arity;
  auto id = identity_formal(f.f().source);

  r.add(check_split_model(model));
  if (auto t = first_difference(compose_formal(*s.phi, *s.psi, n).components, id.components, n))
    r.add(Check::fail("phi_psi", "phi·psi differs from Id at " + f.source->q().describe(*t)));
  else
    r.add(Check::pass("phi_psi", "phi·psi = Id"));
  if (auto t = first_difference(compose_formal(*s.psi, *s.phi, n).components, id.components, n))
    r.add(Check::fail("psi_phi", "psi·phi differs from Id at " + f.source->q().describe(*t)));
  else
    r.add(Check::pass("psi_phi", "psi·phi = Id"));

  if (auto t = first_difference(compose_formal(*s.strict_f1, *s.phi, n).components, f.f().components, n))
    r.add(Check::fail("square_f1_phi", "F^1·phi differs from F at " + f.source->q().describe(*t)));
  else
    r.add(Check::pass("square_f1_phi", "F^1·phi = F"));
  if (auto t = first_difference(compose_formal(f.f(), *s.psi, n).components, s.strict_f1->components, n))
    r.add(Check::fail("square_f_psi", "F·psi differs from F^1 at " + f.source->q().describe(*t)));
  else
    r.add(Check::pass("square_f_psi", "F·psi = F^1"));

  Check phi_ok = validate_functor(s.phi_functor, n);
  phi_ok.name = "phi_functor";
  r.add(phi_ok);

  Prenatural series = r_compose(s.psi, l_compose(s.phi, f.source->structure, n), n);
  if (auto t = first_difference(series.components, s.transported->m(), n))
    r.add(Check::fail("transport_crosscheck", "R_psi(L_phi(m)) differs from m^ at " + f.source->q().describe(*t)));
  else
    r.add(Check::pass("transport_crosscheck", "R_psi(L_phi(m)) = m^"));

  Check st = validate_structure(*s.model, n);
  st.name = "model_structure";
  r.add(st);
  Check pr = validate_functor(s.projection, n);
  pr.name = "strict_projection";
  r.add(pr);
  if (s.model->unital()) {
    Check u = check_strict_units(*s.model, n);
    u.name = "model_units";
    r.add(u);
  }
  r.total = is_total({&f.source->q(), &f.target->q()}, n);
  return r;
}

}  // namespace ainf
