#pragma once

#include <functional>
#include <random>

#include "ainf/pullback.hpp"

namespace ainf::fixtures {

using Rng = std::mt19937_64;

/// Small nonzero-biased coefficients: integers in [-3, 3], occasionally halves.
Scalar random_scalar(Rng& rng, const Field& field, bool nonzero = false);

/// Bilinear composition data of a DG category, turned into an A∞ structure
/// with m^1(a) = (-1)^{|a|} d a and m^2(a2, a1) = (-1)^{|a1|} a2 a1.
struct DGTable {
  QuiverPtr quiver;
  Field field;
  std::function<SparseVec(int x, int y, int i)> d;
  std::function<SparseVec(int x, int y, int z, int i2, int i1)> mul;  // i1: x -> y, i2: y -> z
  std::optional<std::vector<SparseVec>> units;
};
CategoryPtr dg_category(const DGTable& t);

/// A cochain complex with a chosen basis: degrees per basis vector and d as
/// a dense matrix (d^2 = 0, degree +1).
struct Complex {
  std::vector<int> degrees;
  DenseMatrix d{0, 0};
};
Complex random_complex(Rng& rng, const Field& field, int dim, int lo = -1, int hi = 1);

/// The DG category of the given complexes: hom(x, y) = Hom(V_x, V_y) with
/// basis "1" plus elementary maps "e<i>_<j>" (e0_0 replaced by the unit).
CategoryPtr matrix_category(const Field& field, const std::vector<std::string>& names,
                            const std::vector<Complex>& complexes);
CategoryPtr random_matrix_category(Rng& rng, const Field& field, int objects, int max_dim, const std::string& prefix);

/// C' × E: objects are pairs, homs C'(c, c') ⊕ E(e, e') with the units
/// (1, 1) and "ε" = (0, 1) as basis elements. The projection to C' is strict.
struct Product {
  CategoryPtr category;
  AInftyFunctor projection;
};
Product product(const CategoryPtr& c, const CategoryPtr& e);

/// The category on `objects` (indices into c) with c's homs and structure;
/// objects may repeat. The inclusion is strict and identity on homs.
struct Restriction {
  CategoryPtr category;
  AInftyFunctor inclusion;
};
Restriction restrict_to(const CategoryPtr& c, const std::vector<int>& objects, const std::string& prefix = "y");

/// A strictly unital formal automorphism theta (unitriangular theta^1 fixing
/// units, sparse theta^n avoiding unit slots) and the transported structure
/// R_{theta^-1}(L_theta(m)); theta: (A, m) -> (A, m_theta) is an A∞-functor.
struct Conjugation {
  CategoryPtr category;
  AInftyFunctor theta;    // original -> conjugated
  AInftyFunctor inverse;  // conjugated -> original
};
Conjugation conjugate(Rng& rng, const CategoryPtr& a, int max_arity, int entries = 1, int theta_arity = 2);

AInftyFunctor compose(const AInftyFunctor& g, const AInftyFunctor& f, int max_arity);
AInftyFunctor identity_functor(const CategoryPtr& a);

/// One object, basis {1 deg 0, e deg 0, t deg -1}, m^1(t) = e; the target
/// k<1'>, F^1 kills e and t. With several objects it is the indiscrete
/// category tensored with that algebra; acyclic = false drops m^1(t) = e.
struct SquareZero {
  CategoryPtr source;
  CategoryPtr target;
  AInftyFunctor f;
};
CategoryPtr indiscrete(const Field& field, int n, const std::string& prefix = "c");
SquareZero square_zero(const Field& field, const std::vector<int>& object_map = {0}, int target_objects = 1,
                       bool acyclic = true);
/// Strict functor between indiscrete categories along an object map.
AInftyFunctor indiscrete_map(const CategoryPtr& src, const CategoryPtr& tgt, const std::vector<int>& object_map);

/// One object, a (deg 1), b (deg 2), m^3(a, a, a) = b. The perturbation adds
/// c (deg 3) with m^3(a, a, b) = c.
CategoryPtr m3(const Field& field, bool perturbed = false);

/// Fixture size knobs; the defaults keep arity-6 work to a fraction of a second.
struct Shape {
  int target_objects = 2;  // at most
  int kernel_objects = 1;  // at most
  int max_dim = 2;
  int theta_entries = 1;
  int theta_arity = 2;
  bool conjugate_target = true;
};

/// Random F1 functor between random unital DG data, conjugated on the source
/// (and optionally the target) so that F^2 is (usually) nonzero.
struct RandomF1 {
  CategoryPtr source;
  CategoryPtr target;
  AInftyFunctor f;
  CategoryPtr strict_target;        // before conjugation
  AInftyFunctor target_conjugation; // strict_target -> target
};
RandomF1 random_f1(Rng& rng, const Field& field, int max_arity, bool conjugated = true, const Shape& shape = {});

/// G: A'' -> target, a duplicated-object restriction of the (strict) target
/// followed by its conjugation, optionally conjugated on the source side too.
AInftyFunctor random_g(Rng& rng, const RandomF1& f, int max_arity, bool conjugated = true, const Shape& shape = {});

/// The fibre product of strict DG functors computed directly: homs are the
/// kernel of (F^1, -G^1), with their own echelon basis; structure is
/// componentwise. Object order matches the pullback.
struct FibreProduct {
  CategoryPtr category;
  std::vector<std::pair<int, int>> objects;
  /// Coordinates of (a, a'') in the kernel basis of the pair (p, q).
  std::function<std::optional<SparseVec>(int p, int q, const SparseVec& a, const SparseVec& a2)> coordinates;
};
FibreProduct direct_fibre_product(const AInftyFunctor& f, const AInftyFunctor& g);
/// Arity-1 comparison P -> fibre product sending e to the coordinates of
/// (beta^1 e, alpha^1 e); nullopt if some image leaves the kernel.
std::optional<AInftyFunctor> comparison(const Pullback& p, const FibreProduct& fp);

/// c with one extra random structure entry of arity in [1, max_arity]
/// (added to whatever is already there); units are kept.
CategoryPtr perturb(Rng& rng, const CategoryPtr& c, int max_arity);

/// A random degree-2 prenatural of the identity on a small random quiver.
Prenatural random_structure(Rng& rng, const QuiverPtr& q, const Field& field, int max_arity, int entries);
QuiverPtr random_quiver(Rng& rng, int objects, int max_dim, int lo = -1, int hi = 1);
FormalMorphism random_formal(Rng& rng, const QuiverPtr& src, const QuiverPtr& tgt, const Field& field,
                             int max_arity, int entries);
Prenatural random_prenatural(Rng& rng, const FormalPtr& base, int degree, const Field& field, int max_arity,
                             int entries);

}  // namespace ainf::fixtures
