#pragma once

#include "kaclab/group.hpp"
#include "kaclab/rational.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace kaclab {

/// Subset of a finite system's points.
class FiniteSet {
public:
    FiniteSet() = default;
    explicit FiniteSet(size_t n_points) : bits_(n_points, 0) {}
    FiniteSet(size_t n_points, std::initializer_list<size_t> pts) : bits_(n_points, 0) {
        for (size_t p : pts) add(p);
    }

    size_t universe() const { return bits_.size(); }
    bool contains(size_t x) const { return x < bits_.size() && bits_[x]; }
    void add(size_t x) { bits_.at(x) = 1; }
    void remove(size_t x) { bits_.at(x) = 0; }
    bool empty() const;
    size_t count() const;
    std::vector<size_t> points() const;

    static FiniteSet full(size_t n_points);

    bool operator==(const FiniteSet&) const = default;

private:
    std::vector<uint8_t> bits_;
};

/// Finite point set with exact rational masses and a group action given by
/// one permutation per generator. Construction validates the full contract:
/// masses sum to one, generators are mass-preserving bijections, and the
/// generator relations of the group hold (commutation for Z^d and products,
/// k-th power identity for each cyclic factor).
class FiniteSystem {
public:
    FiniteSystem(Group g, std::vector<Rational> masses,
                 std::vector<std::vector<uint32_t>> generator_perms);

    size_t size() const { return masses_.size(); }
    const Group& group() const { return group_; }
    const Rational& mass(size_t x) const { return masses_.at(x); }
    bool positive(size_t x) const { return masses_[x].num() > 0; }
    const std::vector<std::vector<uint32_t>>& generator_perms() const { return perms_; }

    size_t apply_generator(int gen, int64_t power, size_t x) const;
    size_t apply(const GroupElement& gamma, size_t x) const;

    /// Orbit of x under the full group (generators and inverses), as a sorted set.
    std::vector<size_t> orbit(size_t x) const;
    uint32_t orbit_id(size_t x) const { return orbit_id_.at(x); }
    uint32_t orbit_count() const { return n_orbits_; }

    Rational set_mass(const FiniteSet& s) const;
    /// Positive-mass points of s ("mod mu" view used by all predicates).
    FiniteSet positive_part(const FiniteSet& s) const;
    std::vector<size_t> positive_points() const;

    /// True iff the orbit of every positive-mass point meets a positive-mass point of A.
    bool is_sweep_out(const FiniteSet& A) const;
    /// True iff all positive mass sits in a single orbit.
    bool is_ergodic() const;

private:
    Group group_;
    std::vector<Rational> masses_;
    std::vector<std::vector<uint32_t>> perms_;
    // cycle tables per generator: constant-time application of arbitrary powers
    std::vector<std::vector<uint32_t>> cycle_of_;
    std::vector<std::vector<uint32_t>> pos_in_cycle_;
    std::vector<std::vector<std::vector<uint32_t>>> cycles_;
    std::vector<uint32_t> orbit_id_;
    uint32_t n_orbits_ = 0;

    void validate() const;
    void build_cycles();
    void build_orbits();
};

// ---------------------------------------------------------------------------
// Sampled ergodic systems
// ---------------------------------------------------------------------------

enum class SampledKind { rotation, torus, odometer, cyclic };

/// Point of a sampled system. Rotation/torus points are real coordinates in
/// [0,1); odometer points are a digit-source key plus an integer offset
/// (digits materialize lazily); cyclic points are residues.
struct SamplePoint {
    SampledKind kind = SampledKind::rotation;
    std::vector<double> reals;
    uint64_t odo_key = 0;
    int64_t odo_offset = 0;
    int64_t cyc = 0;
};

/// Half-open interval [lo, hi) within [0,1), exact endpoints.
struct Interval {
    Rational lo, hi;
};

/// Union of disjoint intervals on the circle.
struct IntervalSet {
    std::vector<Interval> parts;
};

/// Union of disjoint axis-aligned boxes on the d-torus; box = one interval per axis.
struct BoxSet {
    std::vector<std::vector<Interval>> boxes;
};

/// Union of prefix-free binary cylinders on the odometer.
struct CylinderSet {
    std::vector<std::vector<uint8_t>> prefixes;
};

/// Subset of residues for sampled cyclic systems.
struct CyclicSet {
    std::vector<int64_t> residues;
};

using SampledSet = std::variant<IntervalSet, BoxSet, CylinderSet, CyclicSet>;

/// Generative ergodic system with seeded, replayable sampling. Draws are
/// deterministic functions of (seed, stream, index); independent streams can
/// run concurrently without coordination.
class SampledSystem {
public:
    static SampledSystem rotation(const std::string& alpha_decimal, uint64_t seed);
    static SampledSystem torus(const std::vector<std::string>& alpha_decimals, uint64_t seed);
    static SampledSystem odometer(int depth, uint64_t seed);
    static SampledSystem cyclic(int64_t n, uint64_t seed);

    SampledKind kind() const { return kind_; }
    const Group& group() const { return group_; }
    uint64_t seed() const { return seed_; }
    void reseed(uint64_t seed) { seed_ = seed; }
    int dimension() const { return int(alpha_.size()); }
    const std::vector<double>& alpha() const { return alpha_; }
    int64_t cyclic_order() const { return cyc_n_; }
    std::string describe() const;

    SamplePoint sample(uint64_t stream, uint64_t index) const;
    SamplePoint apply(const GroupElement& gamma, const SamplePoint& x) const;

    bool member(const SampledSet& s, const SamplePoint& x) const;
    Rational measure(const SampledSet& s) const;

    /// Little-endian binary digits of an odometer point (first `count` digits).
    std::vector<uint8_t> odometer_digits(const SamplePoint& x, int count) const;

private:
    SampledKind kind_ = SampledKind::rotation;
    Group group_ = Group::z(1);
    std::vector<double> alpha_;
    int odo_depth_ = 0;
    int64_t cyc_n_ = 0;
    uint64_t seed_ = 0;
};

/// Validates disjointness/prefix-freeness and returns the exact measure.
Rational exact_measure(const SampledSet& s);

// Deterministic counter-based uniform double in [0,1).
double counter_uniform(uint64_t seed, uint64_t stream, uint64_t index, uint64_t salt = 0);
uint64_t counter_bits(uint64_t seed, uint64_t stream, uint64_t index, uint64_t salt = 0);

} // namespace kaclab
