#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ainf/linear.hpp"

namespace ainf {

constexpr int kMaxArity = 10;

/// A composable string of basis arrows x_0 -f_1-> x_1 -> ... -f_n-> x_n.
/// Stored in path order: inputs[0] is f_1, the rightmost argument in
/// m^n(f_n, ..., f_1). Unused slots stay zero so the defaulted ordering is
/// canonical (arity first, then objects, then inputs).
struct Tuple {
  std::uint8_t arity = 0;
  std::array<std::uint8_t, kMaxArity + 1> objects{};
  std::array<std::uint8_t, kMaxArity> inputs{};

  static Tuple make(const std::vector<int>& objects, const std::vector<int>& inputs);

  int n() const { return arity; }
  int object(int j) const { return objects[j]; }
  int input(int j) const { return inputs[j]; }
  int first() const { return objects[0]; }
  int last() const { return objects[arity]; }

  auto operator<=>(const Tuple&) const = default;
  bool operator==(const Tuple&) const = default;
};

using Components = std::map<Tuple, SparseVec>;

/// Objects plus a hom space for every ordered pair (possibly zero).
class GradedQuiver {
 public:
  GradedQuiver() = default;
  explicit GradedQuiver(std::vector<std::string> objects);

  int size() const { return static_cast<int>(objects_.size()); }
  const std::vector<std::string>& objects() const { return objects_; }
  const std::string& object(int i) const { return objects_[i]; }
  std::optional<int> index_of(const std::string& name) const;

  const GradedSpace& hom(int a, int b) const { return homs_[static_cast<std::size_t>(a) * size() + b]; }
  void set_hom(int a, int b, GradedSpace space);

  /// Smallest and largest degree over all hom spaces; nullopt if all empty.
  std::optional<std::pair<int, int>> degree_range() const;

  /// Sum of degrees of the inputs of t.
  int input_degree(const Tuple& t) const;
  /// Human-readable "(x_n,...,x_0) f_n,...,f_1" in argument order.
  std::string describe(const Tuple& t) const;

  friend bool operator==(const GradedQuiver&, const GradedQuiver&) = default;

 private:
  std::vector<std::string> objects_;
  std::vector<GradedSpace> homs_;
};

using QuiverPtr = std::shared_ptr<const GradedQuiver>;

/// Arity-indexed multilinear components of degree 1-n (no equation imposed).
struct FormalMorphism {
  QuiverPtr source;
  QuiverPtr target;
  std::vector<int> object_map;
  Components components;

  SparseVec component(const Tuple& t) const;
  void add(const Tuple& t, const SparseVec& v);
  int support_arity() const;
  bool is_identity() const;
};

using FormalPtr = std::shared_ptr<const FormalMorphism>;

/// Degree-g prenatural endotransformation of `base`: arity 0 part per source
/// object, arity-n components of shift g-n.
struct Prenatural {
  FormalPtr base;
  int degree = 0;
  std::map<int, SparseVec> constant;
  Components components;

  SparseVec component(const Tuple& t) const;
  void add(const Tuple& t, const SparseVec& v);
  bool is_zero() const;
  int support_arity() const;
  const GradedQuiver& source() const { return *base->source; }
  const GradedQuiver& target() const { return *base->target; }
};

/// Throws StructuralError if an entry breaks chaining, object range or the
/// degree rule output = inputs + shift_offset - n.
void check_components(const GradedQuiver& source, const GradedQuiver& target, const std::vector<int>& object_map,
                      const Components& comps, int shift_offset);
void check_formal(const FormalMorphism& f);
void check_prenatural(const Prenatural& p);

FormalMorphism identity_formal(QuiverPtr q);
FormalPtr identity_ptr(QuiverPtr q);

/// (g·f)^n = sum g^r(f^{i_r}, ..., f^{i_1}), arities <= max_arity.
FormalMorphism compose_formal(const FormalMorphism& g, const FormalMorphism& f, int max_arity);
/// Base of a composite, reusing the operand when the other is an identity.
FormalPtr compose_bases(const FormalPtr& g, const FormalPtr& f, int max_arity);

/// d∘d' with d a G-endotransformation and d' an F-endotransformation:
/// sum ± d^r(F, ..., d'(...), ..., F); one insertion per summand. Degree g+g'-1.
Prenatural compose_prenatural(const Prenatural& d, const Prenatural& dp, int max_arity);
/// L_G(x) for an F-endotransformation x: sum ± G^j(F, ..., x(...), ..., F).
Prenatural l_compose(const FormalPtr& g, const Prenatural& x, int max_arity);
/// R_F(x) for a G-endotransformation x: sum x^r(F^{i_r}, ..., F^{i_1}).
Prenatural r_compose(const FormalPtr& f, const Prenatural& x, int max_arity);

/// Two-sided inverse of a formal morphism with bijective object map and
/// invertible arity-1 part, solved arity by arity from f·inv = Id.
FormalMorphism inverse_formal(const FormalMorphism& f, int max_arity);

/// Multilinear evaluation of `comps` at the given objects and vector arguments
/// (path order: args[0] is the rightmost argument).
SparseVec evaluate(const Components& comps, const std::vector<int>& objects, const std::vector<SparseVec>& args);

Components truncate(const Components& c, int max_arity);
Components subtract(const Components& a, const Components& b);
Prenatural subtract(const Prenatural& a, const Prenatural& b);
FormalMorphism subtract(const FormalMorphism& a, const FormalMorphism& b);
/// First tuple (canonical order) at arity <= max_arity where a and b differ.
std::optional<Tuple> first_difference(const Components& a, const Components& b, int max_arity);
bool equal_up_to(const Components& a, const Components& b, int max_arity);
bool equal_up_to(const Prenatural& a, const Prenatural& b, int max_arity);
bool equal_up_to(const FormalMorphism& a, const FormalMorphism& b, int max_arity);

/// Reduced degree ‖f‖ = deg f - 1 summed over the inputs of t.
int reduced_degree(const GradedQuiver& q, const Tuple& t);

/// All composable basis tuples of the given arity (dense enumeration).
std::vector<Tuple> basis_tuples(const GradedQuiver& q, int arity);

/// Largest arity at which a component of shift offset s0 can be nonzero on
/// quivers with degrees in [lo, hi]; nullopt when unbounded.
std::optional<int> arity_bound(int lo, int hi, int shift_offset);

namespace kernel {

struct ExpandResult {
  std::map<int, SparseVec> constant;
  Components components;
};

/// Shared expansion behind all compositions. Each outer entry (a tuple over
/// blocks.target) has every slot filled by a component of `blocks` or, exactly
/// once when `insert` is given, by a component of `insert` (arity 0 allowed).
/// Runs in parallel over outer entries; the result is independent of the
/// schedule because arithmetic is exact.
ExpandResult expand(const Components& outer, const FormalMorphism& blocks, const Prenatural* insert, int max_arity,
                    int min_arity = 0);

}  // namespace kernel

}  // namespace ainf
