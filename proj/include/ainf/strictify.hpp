#pragma once

#include "ainf/ainfty.hpp"

namespace ainf {

/// The split model (K × A')_S of a functor F: A -> A' satisfying F1. Model
/// object x stands for (x, F x); the hom is Ker F^1 ⊕ A'(F x, F y) with basis
/// "k:<kernel name>" followed by "a:<target name>".
struct SplitModel {
  AInftyFunctor functor;
  SplitTable splits;
  QuiverPtr quiver;
  FormalPtr decompose;   // A -> S, f ↦ (r f, F^1 f)
  FormalPtr recompose;   // S -> A, (k, a') ↦ i k + s a'
  FormalPtr projection;  // S -> A', (k, a') ↦ a'

  int kernel_dim(int x, int y) const { return splits.at({x, y}).kernel.dim(); }
};

SplitModel build_split_model(const AInftyFunctor& f, const SplitTable& splits);
/// recompose∘decompose and decompose∘recompose are identities on every basis element.
Check check_split_model(const SplitModel& model);

struct Strictification {
  FormalPtr phi;        // A -> A, phi^1 = id, phi^n = s^1 F^n
  FormalPtr psi;        // its inverse
  FormalPtr strict_f1;  // the strict morphism with arity-1 part F^1
  CategoryPtr transported;  // (A, m^), phi: (A, m) -> (A, m^) is an A∞-isomorphism
  CategoryPtr model;        // (S, m_S), the transport of m^ along decompose
  AInftyFunctor projection; // strict (S, m_S) -> A'
  AInftyFunctor phi_functor;
};

FormalMorphism build_phi(const SplitModel& model, int max_arity);
/// m^ solved arity by arity from L_phi(m) = R_phi(m^).
Components transport_structure(const AInftyCategory& a, const FormalPtr& phi, int max_arity);
Strictification strictify(const SplitModel& model, int max_arity);

/// phi·psi = psi·phi = Id, both squares of the strictification diagram,
/// phi an A∞-functor, m^ = R_psi(L_phi(m)), the projection A∞, model units.
Report certify_strictification(const SplitModel& model, const Strictification& s, int max_arity);

}  // namespace ainf
