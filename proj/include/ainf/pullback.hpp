#pragma once

#include <stdexcept>

#include "ainf/strictify.hpp"

namespace ainf {

/// Internal-consistency failure: an equation that must hold exactly did not.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cone that does not commute; names the first failing tuple.
class ConeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The pullback of F: A -> A' (with F1) along G: A'' -> A'. Objects are the
/// pairs (x, y) with F x = G y; homs are Ker F^1 ⊕ A''.
struct Pullback {
  AInftyFunctor f;
  AInftyFunctor g;
  SplitModel model;
  Strictification strict;
  int max_arity = 0;

  std::vector<std::pair<int, int>> objects;
  QuiverPtr quiver;
  FormalPtr product;  // Id_K × G : S' -> S
  CategoryPtr category;
  AInftyFunctor alpha;            // strict projection to A''
  AInftyFunctor beta;             // psi · recompose · (Id_K × G) to A
  AInftyFunctor product_functor;  // (S', D~) -> (S, m_S)

  int kernel_dim(int p, int q) const { return model.kernel_dim(objects[p].first, objects[q].first); }
  std::optional<int> object_of(int x, int y) const;
};

struct PullbackQuiver {
  std::vector<std::pair<int, int>> objects;
  QuiverPtr quiver;
  FormalPtr product;
  FormalPtr alpha;
};

PullbackQuiver build_pullback_quiver(const SplitModel& model, const AInftyFunctor& g);

/// D~^n given D~ below arity n: the A''-part is m''^n, the K-part solves the
/// arity-n equation against (Id_K × G)^1. Throws ConsistencyError if the A'
/// part does not cancel.
Components solve_pullback_arity(const PullbackQuiver& pq, const Components& lower, const Prenatural& product_side,
                                const Prenatural& alpha_side, const AInftyFunctor& g, int n);

/// Throws std::runtime_error with the F1 report if F is not graded-split.
Pullback build_pullback(const AInftyFunctor& f, const AInftyFunctor& g, int max_arity);

/// D~∘D~ = 0, both defining equations, arity-1 closed form, both squares,
/// alpha F1, beta and the product morphism A∞, unit closure when unital.
Report certify_pullback(const Pullback& p);

/// F1 for alpha, then the F2 / acyclic-fibration clauses when F has them.
Report certify_fibration_closure(const Pullback& p, const ClassifyOptions& opts = {});

struct InducedFunctor {
  AInftyFunctor functor;
  Report report;
};

/// The functor N into the pullback determined by a cone (I: C -> A, L: C -> A'')
/// with F·I = G·L. Throws ConeError naming the first failing tuple.
InducedFunctor induce_functor(const Pullback& p, const AInftyFunctor& i, const AInftyFunctor& l);

}  // namespace ainf
