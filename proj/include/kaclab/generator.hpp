#pragma once

#include "kaclab/allocation.hpp"
#include "kaclab/rational.hpp"
#include "kaclab/system.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kaclab {

/// Disjoint sweep-out pieces with truncation accounting. For finite ergodic
/// systems the pieces exhaust the space (residual 0); for sampled ergodic
/// systems the quantile construction realizes the countable family of
/// measures eps/2^n, truncated at n_max with residual eps*2^-n_max (the tail
/// of the family left unconstructed).
struct FiniteSweepOutPartition {
    std::vector<FiniteSet> pieces;
    Rational residual;
};

struct SampledSweepOutPartition {
    std::vector<SampledSet> pieces;
    std::vector<Rational> piece_measures;
    Rational residual;
};

/// Greedy packing of the (single) positive orbit into consecutive pieces of
/// mass <= eps. Requires an ergodic finite system; every nonempty piece of a
/// single-orbit system is sweep-out.
FiniteSweepOutPartition sweep_out_partition(const FiniteSystem& fs, const Rational& eps);

/// Quantile pieces of measure exactly eps/2^n, n = 1..n_max. On the rotation
/// the pieces are the intervals [f_{n-1}, f_n); on the odometer the same
/// dyadic intervals are emitted as cylinder unions (eps must be dyadic).
SampledSweepOutPartition sweep_out_partition(const SampledSystem& ss, const Rational& eps,
                                             int n_max);

/// Finite set of (target index, group element) pairs recording which
/// allocated preimages of x land in which generating set. Pairs are kept in
/// canonical (index, norm-lex) order so fingerprints compare determinically.
struct Fingerprint {
    std::vector<std::pair<size_t, GroupElement>> pairs;

    bool operator==(const Fingerprint&) const = default;
    bool operator<(const Fingerprint& o) const;
    std::string str() const;
};

/// C_x = {(n, gamma) : gamma in B_{kappa_n}(x) and T_gamma^{-1}(x) in E_n};
/// empty off the union of the targets.
Fingerprint fingerprint(const FiniteSystem& fs,
                        const std::vector<const FiniteAllocation*>& allocations,
                        const std::vector<FiniteSet>& sets, size_t x);

/// Blocks P_D = {x : C_x = D}, keyed by fingerprint value in canonical order;
/// blocks partition the positive-mass points.
struct GeneratorPartition {
    std::map<Fingerprint, FiniteSet> blocks;
};

GeneratorPartition generator_partition(const FiniteSystem& fs,
                                       const std::vector<const FiniteAllocation*>& allocations,
                                       const std::vector<FiniteSet>& sets);

struct ReconstructionReport {
    size_t n = 0;               // target index checked
    FiniteSet reconstructed;    // union of T_gamma^{-1}(P_D) over D containing (n, gamma)
    Rational symmetric_diff_mass;
    bool equal_mod_mu = false;
};

/// Rebuilds E_n from the generator partition and compares with the original
/// mod mu (exact symmetric-difference mass on positive points).
ReconstructionReport reconstruct_and_verify(const FiniteSystem& fs, const GeneratorPartition& gp,
                                            const std::vector<const FiniteAllocation*>& allocations,
                                            const std::vector<FiniteSet>& sets, size_t n);

struct OrbitCensusRow {
    uint32_t orbit = 0;
    size_t size = 0;
    Rational mass;
};

struct OrbitCensus {
    std::vector<OrbitCensusRow> rows;
    bool all_positive_orbits_finite = true; // always true on finite systems
};

OrbitCensus finite_orbit_census(const FiniteSystem& fs);

} // namespace kaclab
