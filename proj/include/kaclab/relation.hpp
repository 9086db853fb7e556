#pragma once

#include "kaclab/allocation.hpp"
#include "kaclab/rational.hpp"
#include "kaclab/system.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kaclab {

/// Finite measure-preserving equivalence relation, stored extensionally as a
/// class labeling. Measure preservation for a finite relation is exactly
/// mass uniformity within each class: a within-class transposition is a
/// partial bijection of the relation, and it preserves mu iff the two point
/// masses agree. (Classes are compared among positive-mass points, mod mu.)
struct EquivRelation {
    std::vector<Rational> masses;
    std::vector<uint32_t> class_of;

    size_t size() const { return masses.size(); }
    bool positive(size_t x) const { return masses[x].num() > 0; }
};

/// Class-respecting self-map: class_of(tau(x)) = class_of(x).
struct TauMap {
    std::vector<uint32_t> table;
};

struct RelationVerdict {
    bool valid = false;
    std::string detail; // names an offending class on rejection
};

RelationVerdict validate_relation(const EquivRelation& rel);

struct RelationKacReport {
    Rational f_integral;        // integral of f
    Rational f_tau_integral;    // integral of f_tau
    bool transport_equal = false;
    Rational preimage_integral; // integral of |tau^{-1}({x})| (f = 1 case)
    bool preimage_is_one = false;
};

/// Exact transport identity for (rel, tau, f): integral of f equals integral
/// of f_tau with f_tau(x) = sum of f over tau-preimages of x. Requires a
/// valid relation and a class-respecting tau mapping positive-mass points to
/// positive-mass points.
RelationKacReport verify_relation_kac(const EquivRelation& rel, const TauMap& tau,
                                      const std::vector<Rational>& f);

/// Orbit equivalence relation of a finite system; the result always passes
/// validate_relation (masses are constant along orbits by mu-preservation).
EquivRelation orbit_relation(const FiniteSystem& fs);

/// Realizes a class-respecting tau on the orbit relation as an allocation:
/// A = tau(X), kappa(x) = first enumerated gamma with T_gamma(x) = tau(x).
/// T_kappa equals tau pointwise, so allocation transport reproduces
/// tau-transport value for value.
std::pair<FiniteSet, FiniteAllocation> tau_to_allocation(const FiniteSystem& fs,
                                                         const TauMap& tau);

/// First-return collapse onto A for an invertible finite Z-system:
/// tau(x) = T^{-n_A(x)}(x) with n_A(x) the least m >= 1 with T^{-m}(x) in A.
TauMap first_return_tau(const FiniteSystem& zs, const FiniteSet& A);

} // namespace kaclab
