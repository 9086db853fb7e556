#pragma once

#include "kaclab/estimate.hpp"
#include "kaclab/group.hpp"
#include "kaclab/rational.hpp"
#include "kaclab/system.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace kaclab {

// All finite-system operations work mod mu: zero-mass points are invisible
// to targets, orbits of the predicates, and integrals.

/// Least n >= 1 with T^n(x) in A (Z-actions). Throws no_return_error when the
/// forward cycle of x provably misses A.
uint64_t return_time(const FiniteSystem& zs, const FiniteSet& A, size_t x);
/// First-return transformation T_A(x) = T^{r_A(x)}(x).
size_t induced_map(const FiniteSystem& zs, const FiniteSet& A, size_t x);

/// Exact rational value of the return-time integral over A.
Rational return_time_integral(const FiniteSystem& zs, const FiniteSet& A);

/// A-allocation on a finite system: kappa(x) moves x into A. Three
/// strategies: greedy over an enumeration (least enumerated hit), an explicit
/// validated table, and the forward-hitting Z special case
/// kappa(x) = min{n >= 0 : T^n(x) in A}.
class FiniteAllocation {
public:
    enum class Strategy { greedy, table, forward_hitting };

    static FiniteAllocation greedy(const FiniteSystem& fs, FiniteSet A);
    static FiniteAllocation greedy(const FiniteSystem& fs, FiniteSet A, Enumeration e);
    static FiniteAllocation from_table(const FiniteSystem& fs, FiniteSet A,
                                       std::vector<GroupElement> kappa);
    static FiniteAllocation forward_hitting(const FiniteSystem& fs, FiniteSet A);

    Strategy strategy() const { return strategy_; }
    const FiniteSystem& system() const { return *fs_; }
    const FiniteSet& target() const { return A_; }
    const FiniteSet& target_positive() const { return A_pos_; }

    /// kappa(x); defined on positive-mass points, lazy with memoization.
    const GroupElement& kappa(size_t x) const;
    /// T_{kappa(x)}(x); always lands in the positive part of A.
    size_t t_kappa(size_t x) const;

    /// Cell B_kappa(x) = {gamma : kappa(T_gamma^-1(x)) = gamma}, canonically
    /// sorted by (norm^2, lex). Empty for x outside the positive part of A.
    std::vector<GroupElement> cell(size_t x) const;

private:
    FiniteAllocation(const FiniteSystem& fs, FiniteSet A, Strategy s);

    const FiniteSystem* fs_;
    FiniteSet A_;
    FiniteSet A_pos_;
    Strategy strategy_;
    std::optional<Enumeration> enum_;
    mutable std::vector<std::optional<GroupElement>> memo_;
};

/// Transport f_kappa(x) = sum of f(y) over positive-mass preimages of x under
/// T_kappa; zero off the positive part of A. f must be non-negative.
std::vector<Rational> transport(const FiniteAllocation& alloc, const std::vector<Rational>& f);

struct AllocationIdentityReport {
    Rational lhs; // integral of f_kappa over A
    Rational rhs; // integral of f over X
    bool equal = false;
};

AllocationIdentityReport verify_allocation_identity(const FiniteAllocation& alloc,
                                                    const std::vector<Rational>& f);

/// Kac function of an allocation: distinct cell shapes in first-occurrence
/// order over A, and the shape index phi(x) of each point of A.
struct KacFunction {
    std::vector<std::vector<GroupElement>> shapes;
    std::vector<std::optional<size_t>> phi; // 0-based shape index, set on positive A-points
};

KacFunction kac_function(const FiniteAllocation& alloc);

/// Exact check that the translate family T_gamma^{-1}(phi^{-1}({n})) over
/// gamma in B_n tiles the positive-mass points: pairwise disjoint, exhaustive.
struct PartitionCheck {
    bool disjoint = false;
    bool exhaustive = false;
    bool holds() const { return disjoint && exhaustive; }
};

PartitionCheck verify_translate_partition(const FiniteAllocation& alloc, const KacFunction& kf);

/// Integral of the cell size |B_phi| over A (equals 1 for valid allocations).
Rational kac_cell_integral(const FiniteAllocation& alloc, const KacFunction& kf);

struct TailBoundRow {
    uint64_t n = 0;
    Rational measure; // mu({x in A : |B_phi(x)| >= n})
    Rational bound;   // 1/n
    bool ok = false;
};

/// Markov tail check mu(|B_phi| >= n) <= 1/n for n = 1..max cell size.
std::vector<TailBoundRow> tail_bound_check(const FiniteAllocation& alloc, const KacFunction& kf);

// ---------------------------------------------------------------------------
// Sampled systems: budgeted, abstaining counterparts
// ---------------------------------------------------------------------------

/// Return time on a sampled Z-system; nullopt when the budget runs out.
std::optional<uint64_t> return_time(const SampledSystem& ss, const SampledSet& A,
                                    const SamplePoint& x, uint64_t budget);
std::optional<SamplePoint> induced_map(const SampledSystem& ss, const SampledSet& A,
                                       const SamplePoint& x, uint64_t budget);

/// Greedy allocation over the norm-lex enumeration, evaluated per point with
/// an enumeration-prefix budget.
class SampledAllocation {
public:
    SampledAllocation(const SampledSystem& ss, SampledSet A);

    const SampledSystem& system() const { return *ss_; }
    const SampledSet& target() const { return A_; }

    std::optional<GroupElement> kappa(const SamplePoint& x, uint64_t budget) const;

private:
    const SampledSystem* ss_;
    SampledSet A_;
    Enumeration enum_;
};

struct SampledCell {
    bool complete = false;           // certified complete scan
    std::vector<GroupElement> cell;  // valid when complete
    int64_t radius_used = 0;
};

/// Certified greedy cell at x in A for rotation/torus systems (d <= 2):
/// hits are scanned outward until the partial Voronoi cell is bounded and the
/// scan radius dominates twice its extent, then candidates are verified
/// pointwise. Incomplete results report the radius reached.
SampledCell sampled_cell(const SampledAllocation& alloc, const SamplePoint& x,
                         uint64_t budget, int64_t max_radius = 4096);

struct McIdentityReport {
    Estimate lhs; // integral of f_kappa over A
    Estimate rhs; // integral of f over X
    bool bands_overlap = false; // 3-sigma bands around both means intersect
};

/// Statistical check of the allocation identity on a sampled system, using
/// certified cells to evaluate f_kappa: f_kappa(x) = sum over gamma in
/// B_kappa(x) of f(T_gamma^-1 x). f defaults to 1 when empty.
McIdentityReport verify_allocation_identity_mc(
    const SampledAllocation& alloc, const std::function<double(const SamplePoint&)>& f,
    uint64_t n_samples, uint64_t budget, McOptions opt = {});

} // namespace kaclab
