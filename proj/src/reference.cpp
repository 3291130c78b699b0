#include "ainf/reference.hpp"

namespace ainf::reference {

namespace {

Tuple slice(const Tuple& t, int from, int len) {
  std::vector<int> objs, ins;
  for (int j = from; j <= from + len; ++j) objs.push_back(t.object(j));
  for (int j = from; j < from + len; ++j) ins.push_back(t.input(j));
  return Tuple::make(objs, ins);
}

int reduced_prefix(const GradedQuiver& q, const Tuple& t, int len) {
  int s = 0;
  for (int j = 0; j < len; ++j) s += q.hom(t.object(j), t.object(j + 1)).degree(t.input(j)) - 1;
  return s;
}

struct Cut {
  std::vector<int> mids;
  std::vector<SparseVec> outputs;
  Scalar sign{1};
};

// Enumerates all cuts of t into consecutive blocks, each evaluated by
// `blocks`, with exactly one block (possibly empty) evaluated by `insert`
// when given.
template <typename Visit>
void for_each_cut(const Tuple& t, const GradedQuiver& q, const FormalMorphism& blocks, const Prenatural* insert,
                  Visit&& visit) {
  int n = t.n();
  Cut cut;
  auto rec = [&](auto&& self, int pos, bool inserted) -> void {
    if (pos == n) {
      if (insert && !inserted) return;
      cut.mids.push_back(blocks.object_map[t.object(n)]);
      visit(cut);
      cut.mids.pop_back();
      return;
    }
    for (int len = 1; pos + len <= n; ++len) {
      SparseVec v = blocks.component(slice(t, pos, len));
      if (v.empty()) continue;
      cut.mids.push_back(blocks.object_map[t.object(pos)]);
      cut.outputs.push_back(v);
      self(self, pos + len, inserted);
      cut.outputs.pop_back();
      cut.mids.pop_back();
    }
    if (insert && !inserted) {
      int bar = insert->degree - 1;
      Scalar sign = ((bar * reduced_prefix(q, t, pos)) & 1) ? Scalar(-1) : Scalar(1);
      for (int len = 0; pos + len <= n; ++len) {
        SparseVec v;
        if (len == 0) {
          auto it = insert->constant.find(t.object(pos));
          if (it != insert->constant.end()) v = it->second;
        } else {
          v = insert->component(slice(t, pos, len));
        }
        if (v.empty()) continue;
        Scalar saved = cut.sign;
        cut.sign = cut.sign * sign;
        cut.mids.push_back(blocks.object_map[t.object(pos)]);
        cut.outputs.push_back(v);
        self(self, pos + len, true);
        cut.outputs.pop_back();
        cut.mids.pop_back();
        cut.sign = saved;
      }
    }
  };
  rec(rec, 0, false);
}

Components dense_expand(const Components& outer, const FormalMorphism& blocks, const Prenatural* insert,
                        int max_arity, std::map<int, SparseVec>* constant) {
  const GradedQuiver& q = *blocks.source;
  Components out;
  for (int n = 1; n <= max_arity; ++n)
    for (const Tuple& t : basis_tuples(q, n)) {
      SparseVec acc;
      for_each_cut(t, q, blocks, insert, [&](const Cut& cut) {
        acc.axpy(cut.sign, evaluate(outer, cut.mids, cut.outputs));
      });
      if (!acc.empty()) out[t] = acc;
    }
  if (constant && insert) {
    for (const auto& [x, v] : insert->constant) {
      int y = blocks.object_map[x];
      SparseVec acc = evaluate(outer, {y, y}, {v});
      if (!acc.empty()) (*constant)[x] = acc;
    }
  }
  return out;
}

}  // namespace

Components compose_formal(const FormalMorphism& g, const FormalMorphism& f, int max_arity) {
  return dense_expand(g.components, f, nullptr, max_arity, nullptr);
}

Prenatural compose_prenatural(const Prenatural& d, const Prenatural& dp, int max_arity) {
  Prenatural out;
  out.base = compose_bases(d.base, dp.base, max_arity);
  out.degree = d.degree + dp.degree - 1;
  out.components = dense_expand(d.components, *dp.base, &dp, max_arity, &out.constant);
  return out;
}

Prenatural l_compose(const FormalPtr& g, const Prenatural& x, int max_arity) {
  Prenatural out;
  out.base = compose_bases(g, x.base, max_arity);
  out.degree = x.degree;
  out.components = dense_expand(g->components, *x.base, &x, max_arity, &out.constant);
  return out;
}

Prenatural r_compose(const FormalPtr& f, const Prenatural& x, int max_arity) {
  Prenatural out;
  out.base = compose_bases(x.base, f, max_arity);
  out.degree = x.degree;
  out.components = dense_expand(x.components, *f, nullptr, max_arity, nullptr);
  for (int s = 0; s < f->source->size(); ++s) {
    auto it = x.constant.find(f->object_map[s]);
    if (it != x.constant.end() && !it->second.empty()) out.constant[s] = it->second;
  }
  return out;
}

Components structure_relation(const GradedQuiver& q, const Components& m, int max_arity) {
  Components out;
  for (int n = 1; n <= max_arity; ++n)
    for (const Tuple& t : basis_tuples(q, n)) {
      SparseVec acc;
      for (int k = 1; k <= n; ++k)
        for (int d = 0; d + k <= n; ++d) {
          SparseVec inner = m.count(slice(t, d, k)) ? m.at(slice(t, d, k)) : SparseVec();
          if (inner.empty()) continue;
          int dagger = 0;
          for (int j = 0; j < d; ++j) dagger += q.hom(t.object(j), t.object(j + 1)).degree(t.input(j));
          dagger -= d;
          std::vector<int> objs;
          std::vector<SparseVec> args;
          for (int j = 0; j < d; ++j) {
            objs.push_back(t.object(j));
            args.push_back(SparseVec::unit(t.input(j)));
          }
          objs.push_back(t.object(d));
          args.push_back(inner);
          for (int j = d + k; j < n; ++j) {
            objs.push_back(t.object(j));
            args.push_back(SparseVec::unit(t.input(j)));
          }
          objs.push_back(t.object(n));
          acc.axpy(sign_power(dagger), evaluate(m, objs, args));
        }
      if (!acc.empty()) out[t] = acc;
    }
  return out;
}

}  // namespace ainf::reference
