#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ainf/quiver.hpp"

namespace ainf {

enum class Verdict { pass, fail, undecided };
const char* to_string(Verdict v);

/// One line of a certification report.
struct Check {
  std::string name;
  Verdict verdict = Verdict::pass;
  std::string detail;
  bool required = true;  // informational checks do not affect the overall verdict

  static Check pass(std::string name, std::string detail = {}) { return {std::move(name), Verdict::pass, std::move(detail)}; }
  static Check fail(std::string name, std::string detail) { return {std::move(name), Verdict::fail, std::move(detail)}; }
  static Check undecided(std::string name, std::string detail) {
    return {std::move(name), Verdict::undecided, std::move(detail)};
  }
  bool passed() const { return verdict == Verdict::pass; }
};

struct Report {
  std::vector<Check> checks;
  int max_arity = 0;
  bool total = false;

  void add(Check c) { checks.push_back(std::move(c)); }
  void append(const Report& other);
  /// Over required checks: fail if any fails, else undecided if any is undecided, else pass.
  Verdict overall() const;
  const Check* find(const std::string& name) const;
};

struct AInftyCategory {
  QuiverPtr quiver;
  Field field;
  Prenatural structure;  // degree 2, flat, endotransformation of the identity
  std::optional<std::vector<SparseVec>> units;

  const GradedQuiver& q() const { return *quiver; }
  const Components& m() const { return structure.components; }
  bool unital() const { return units.has_value(); }
};

using CategoryPtr = std::shared_ptr<const AInftyCategory>;

/// Wraps raw components; checks degrees but not the A∞ relation.
AInftyCategory make_category(QuiverPtr q, Field field, Components m,
                             std::optional<std::vector<SparseVec>> units = std::nullopt);

struct AInftyFunctor {
  CategoryPtr source;
  CategoryPtr target;
  FormalPtr map;

  const FormalMorphism& f() const { return *map; }
};

AInftyFunctor make_functor(CategoryPtr source, CategoryPtr target, FormalMorphism f);

/// Largest arity that can carry a nonzero term of the given shift offset over
/// the listed quivers, if bounded.
std::optional<int> degree_arity_bound(const std::vector<const GradedQuiver*>& quivers, int shift_offset);
/// Default bound: the degree bound for defects (offset 3) when finite, else 5.
int default_max_arity(const std::vector<const GradedQuiver*>& quivers);
bool is_total(const std::vector<const GradedQuiver*>& quivers, int max_arity);

/// "arity n at (f_n, ..., f_1) over x_0 -> ... -> x_n: value"
std::string describe_entry(const GradedQuiver& source, const GradedQuiver& target, const std::vector<int>& object_map,
                           const Tuple& t, const SparseVec& value);
std::optional<std::string> first_witness(const Prenatural& p);

/// m∘m up to max_arity; zero certifies the structure at that bound.
Prenatural structure_defect(const AInftyCategory& c, int max_arity);
/// L_F(m_source) - R_F(m_target).
Prenatural functor_defect(const AInftyFunctor& f, int max_arity);

Check validate_structure(const AInftyCategory& c, int max_arity);
Check validate_functor(const AInftyFunctor& f, int max_arity);

/// u1 on every stored component with a unit in some slot, u2 on every basis
/// morphism: m^2(f, 1) = f and m^2(1, f) = (-1)^{deg f} f.
Check check_strict_units(const AInftyCategory& c, int max_arity);
/// fu1: F^1(1_x) = 1_{F x}; fu2: F^n vanishes with a unit in any slot, n >= 2.
Check check_functor_units(const AInftyFunctor& f, int max_arity);

/// Arity-1 part of a component family on the pair (a, b) as a graded map.
GradedMap arity_one(const Components& comps, const GradedQuiver& source, const GradedQuiver& target,
                    const std::vector<int>& object_map, int a, int b, int shift);
GradedMap differential(const AInftyCategory& c, int a, int b);

using SplitTable = std::map<std::pair<int, int>, SplitData>;

struct F1Result {
  std::optional<SplitTable> splits;
  Check check;
};
F1Result check_F1(const AInftyFunctor& f);

/// Degree-0 cohomology category with composition induced by m^2.
class H0Category {
 public:
  explicit H0Category(const AInftyCategory& c);  // throws "units required"

  const AInftyCategory& category() const { return *cat_; }
  int size() const { return cat_->q().size(); }
  int dim(int x, int y) const;
  const Cohomology& cohomology(int x, int y) const { return coh_.at({x, y}); }
  const std::vector<SparseVec>& reps(int x, int y) const { return cohomology(x, y).representatives(0); }

  /// g∘f for f: x -> y, g: y -> z in class coordinates.
  std::vector<Scalar> compose(int x, int y, int z, const std::vector<Scalar>& g, const std::vector<Scalar>& f) const;
  std::vector<Scalar> identity(int x) const;
  /// Coordinates of a degree-0 cycle in hom(x, y); nullopt if not a cycle.
  std::optional<std::vector<Scalar>> class_of(int x, int y, const SparseVec& cycle) const;
  SparseVec representative(int x, int y, const std::vector<Scalar>& coords) const;
  /// Two-sided inverse of phi: x -> y, if any.
  std::optional<std::vector<Scalar>> inverse(int x, int y, const std::vector<Scalar>& phi) const;
  bool is_iso(int x, int y, const std::vector<Scalar>& phi) const { return inverse(x, y, phi).has_value(); }
  /// 1_x lies in the span of all composites y -> x -> ... (necessary for an iso x -> y).
  bool iso_possible(int x, int y) const;

  Check check_laws() const;

 private:
  const AInftyCategory* cat_;
  std::map<std::pair<int, int>, Cohomology> coh_;
};

/// [F] on H^0 between the given pairs, as a dim(target) x dim(source) matrix.
DenseMatrix induced_h0(const AInftyFunctor& f, const H0Category& src, const H0Category& tgt, int x, int y);

/// A user-supplied witness. kind "lift": iso: F x -> target in the target
/// category's H^0 lifted to lift: x -> lift_target. kind "iso": an iso
/// F x -> target witnessing essential surjectivity.
struct Certificate {
  std::string kind;
  std::string source;
  std::string target;
  std::vector<std::pair<std::string, Scalar>> iso;
  std::string lift_target;
  std::vector<std::pair<std::string, Scalar>> lift;
};

struct ClassifyOptions {
  std::vector<Certificate> certificates;
  std::uint64_t enumeration_cap = 200000;
};

Check check_isofibration(const AInftyFunctor& f, const ClassifyOptions& opts = {});
/// Hom-level cohomology isomorphism per pair and degree.
Check check_hom_quasi_iso(const AInftyFunctor& f);
Check check_essential_surjectivity(const AInftyFunctor& f, const ClassifyOptions& opts = {});
Report check_quasi_equivalence(const AInftyFunctor& f, const ClassifyOptions& opts = {});
/// Requires the F1 split table; checks m^1 preserves Ker F^1 and that the
/// restricted complex is acyclic.
Check kernel_acyclicity(const AInftyFunctor& f, const SplitTable& splits);

/// F1, F2, quasi-equivalence and kernel acyclicity together.
Report classify(const AInftyFunctor& f, const ClassifyOptions& opts = {});

}  // namespace ainf
