#pragma once

// Serial dense evaluators used as test oracles and as the benchmark baseline.
// Every result is computed by enumerating all composable basis tuples and all
// ways of cutting them into blocks, with no indexing tricks.

#include "ainf/quiver.hpp"

namespace ainf::reference {

Components compose_formal(const FormalMorphism& g, const FormalMorphism& f, int max_arity);
Prenatural compose_prenatural(const Prenatural& d, const Prenatural& dp, int max_arity);
Prenatural l_compose(const FormalPtr& g, const Prenatural& x, int max_arity);
Prenatural r_compose(const FormalPtr& f, const Prenatural& x, int max_arity);

/// The explicit relation sum
///   sum_{d,k} (-1)^{deg f_d + ... + deg f_1 - d} m(f_n, ..., m(f_{d+k}, ..., f_{d+1}), f_d, ..., f_1)
/// for a flat structure given by its components on q.
Components structure_relation(const GradedQuiver& q, const Components& m, int max_arity);

}  // namespace ainf::reference
