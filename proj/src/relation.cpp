#include "kaclab/relation.hpp"

#include "kaclab/errors.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace kaclab {

namespace {

void check_relation_shape(const EquivRelation& rel) {
    if (rel.masses.empty()) throw std::invalid_argument("relation needs at least one point");
    if (rel.class_of.size() != rel.masses.size())
        throw std::invalid_argument("class labeling must cover every point");
    Rational total(0);
    for (const Rational& m : rel.masses) {
        if (m.is_negative()) throw std::invalid_argument("masses must be non-negative");
        total += m;
    }
    if (!(total == Rational(1)))
        throw std::invalid_argument("masses must sum to 1, got " + total.str());
}

} // namespace

RelationVerdict validate_relation(const EquivRelation& rel) {
    check_relation_shape(rel);
    std::map<uint32_t, Rational> class_mass;
    RelationVerdict v;
    for (size_t x = 0; x < rel.size(); ++x) {
        if (!rel.positive(x)) continue;
        auto [it, fresh] = class_mass.emplace(rel.class_of[x], rel.masses[x]);
        if (!fresh && !(it->second == rel.masses[x])) {
            v.valid = false;
            v.detail = "class " + std::to_string(rel.class_of[x]) +
                       " mixes masses " + it->second.str() + " and " + rel.masses[x].str();
            return v;
        }
    }
    v.valid = true;
    return v;
}

RelationKacReport verify_relation_kac(const EquivRelation& rel, const TauMap& tau,
                                      const std::vector<Rational>& f) {
    RelationVerdict v = validate_relation(rel);
    if (!v.valid) throw precondition_error("invalid relation: " + v.detail);
    if (tau.table.size() != rel.size())
        throw std::invalid_argument("tau must be defined on every point");
    if (f.size() != rel.size()) throw std::invalid_argument("f must be defined on every point");
    for (const Rational& val : f)
        if (val.is_negative()) throw std::invalid_argument("f must be non-negative");

    for (size_t x = 0; x < rel.size(); ++x) {
        if (!rel.positive(x)) continue;
        uint32_t y = tau.table[x];
        if (y >= rel.size()) throw std::invalid_argument("tau maps outside the point set");
        if (rel.class_of[y] != rel.class_of[x])
            throw precondition_error("tau breaks class of point " + std::to_string(x));
        if (!rel.positive(y))
            throw precondition_error("tau sends positive-mass point " + std::to_string(x) +
                                     " to a null point (not defined mod mu)");
    }

    // literal transport: f_tau(x) = sum of f over tau-preimages of x
    std::vector<Rational> f_tau(rel.size(), Rational(0));
    std::vector<int64_t> preimages(rel.size(), 0);
    for (size_t y = 0; y < rel.size(); ++y) {
        if (!rel.positive(y)) continue;
        f_tau[tau.table[y]] += f[y];
        preimages[tau.table[y]] += 1;
    }

    RelationKacReport rep;
    for (size_t x = 0; x < rel.size(); ++x) {
        if (!rel.positive(x)) continue;
        rep.f_integral += rel.masses[x] * f[x];
        rep.f_tau_integral += rel.masses[x] * f_tau[x];
        rep.preimage_integral += rel.masses[x] * Rational(preimages[x]);
    }
    rep.transport_equal = rep.f_integral == rep.f_tau_integral;
    rep.preimage_is_one = rep.preimage_integral == Rational(1);
    return rep;
}

EquivRelation orbit_relation(const FiniteSystem& fs) {
    EquivRelation rel;
    rel.masses.reserve(fs.size());
    rel.class_of.reserve(fs.size());
    for (size_t x = 0; x < fs.size(); ++x) {
        rel.masses.push_back(fs.mass(x));
        rel.class_of.push_back(fs.orbit_id(x));
    }
    RelationVerdict v = validate_relation(rel);
    if (!v.valid)
        throw std::logic_error("orbit relation of a valid system failed validation: " + v.detail);
    return rel;
}

std::pair<FiniteSet, FiniteAllocation> tau_to_allocation(const FiniteSystem& fs,
                                                         const TauMap& tau) {
    if (tau.table.size() != fs.size())
        throw std::invalid_argument("tau must be defined on every point");
    for (size_t x = 0; x < fs.size(); ++x) {
        if (!fs.positive(x)) continue;
        uint32_t y = tau.table[x];
        if (y >= fs.size()) throw std::invalid_argument("tau maps outside the point set");
        if (fs.orbit_id(y) != fs.orbit_id(x))
            throw precondition_error("tau leaves the orbit of point " + std::to_string(x));
        if (!fs.positive(y))
            throw precondition_error("tau sends a positive-mass point to a null point");
    }

    // A = tau(X) over positive-mass points
    FiniteSet A(fs.size());
    for (size_t x = 0; x < fs.size(); ++x)
        if (fs.positive(x)) A.add(tau.table[x]);

    Enumeration e(fs.group());
    uint64_t limit = e.size().value_or(uint64_t(1) << 24);
    std::vector<GroupElement> kappa;
    kappa.reserve(fs.size());
    for (size_t x = 0; x < fs.size(); ++x) {
        if (!fs.positive(x)) {
            kappa.push_back(identity(fs.group()));
            continue;
        }
        bool found = false;
        for (uint64_t n = 0; n < limit; ++n) {
            GroupElement g = e.at(n);
            if (fs.apply(g, x) == tau.table[x]) {
                kappa.push_back(std::move(g));
                found = true;
                break;
            }
        }
        if (!found)
            throw std::logic_error("tau target unreachable through the group action");
    }
    FiniteAllocation alloc = FiniteAllocation::from_table(fs, A, std::move(kappa));
    return {std::move(A), std::move(alloc)};
}

TauMap first_return_tau(const FiniteSystem& zs, const FiniteSet& A) {
    if (zs.group().finite() || zs.group().rank != 1)
        throw std::invalid_argument("first-return tau needs a Z-action");
    if (!zs.is_sweep_out(A)) throw precondition_error("target set is not sweep-out");
    FiniteSet ap = zs.positive_part(A);
    TauMap tau;
    tau.table.assign(zs.size(), 0);
    for (size_t x = 0; x < zs.size(); ++x) {
        if (!zs.positive(x)) {
            tau.table[x] = uint32_t(x);
            continue;
        }
        size_t y = x;
        bool found = false;
        for (size_t m = 1; m <= zs.size(); ++m) {
            y = zs.apply_generator(0, -1, y);
            if (ap.contains(y)) {
                tau.table[x] = uint32_t(y);
                found = true;
                break;
            }
        }
        if (!found)
            throw precondition_error("backward orbit of point " + std::to_string(x) +
                                     " never meets A");
    }
    return tau;
}

} // namespace kaclab
