#include "kaclab/allocation.hpp"

#include "kaclab/errors.hpp"
#include "support/random_systems.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

using namespace kaclab;
using kaclab_test::Rng;

namespace {

FiniteSystem cyclic5() {
    return FiniteSystem(Group::z(1), std::vector<Rational>(5, Rational(1, 5)),
                        {{1, 2, 3, 4, 0}});
}

// independent oracle: first hit of A along the fixed candidate order
// 0, -1, 1, -2, 2, ... computed with plain modular arithmetic
int64_t brute_greedy_kappa_c5(size_t x, const std::set<size_t>& A) {
    std::vector<int64_t> order = {0};
    for (int64_t k = 1; k <= 10; ++k) {
        order.push_back(-k);
        order.push_back(k);
    }
    for (int64_t g : order) {
        int64_t y = (int64_t(x) + g) % 5;
        if (y < 0) y += 5;
        if (A.count(size_t(y))) return g;
    }
    REQUIRE(false);
    return 0;
}

std::vector<int64_t> cell_coords(const std::vector<GroupElement>& cell) {
    std::vector<int64_t> out;
    for (const GroupElement& g : cell) out.push_back(g.v[0]);
    return out;
}

} // namespace

TEST_CASE("return time on cyclic(5), A = {0,1}") {
    FiniteSystem fs = cyclic5();
    FiniteSet A(5, {0, 1});
    CHECK(return_time(fs, A, 0) == 1);
    CHECK(return_time(fs, A, 1) == 4);
    CHECK(return_time(fs, A, 3) == 2);
    // brute force over all five points gives the Kac value 1
    CHECK(return_time_integral(fs, A) == Rational(1));

    FiniteSet X = FiniteSet::full(5);
    for (size_t x = 0; x < 5; ++x) CHECK(return_time(fs, X, x) == 1);
}

TEST_CASE("return time: no-return error off the sweep-out case") {
    FiniteSystem two(Group::z(1), std::vector<Rational>(6, Rational(1, 6)), {{1, 2, 0, 4, 5, 3}});
    FiniteSet A(6, {0});
    CHECK_THROWS_AS(return_time(two, A, 4), no_return_error);
}

TEST_CASE("induced map on cyclic(5)") {
    FiniteSystem fs = cyclic5();
    FiniteSet A(5, {0, 1});
    CHECK(induced_map(fs, A, 0) == 1);
    CHECK(induced_map(fs, A, 1) == 0);
    // A = X: induced map is T itself
    FiniteSet X = FiniteSet::full(5);
    for (size_t x = 0; x < 5; ++x) CHECK(induced_map(fs, X, x) == (x + 1) % 5);
}

TEST_CASE("induced map is a mass-preserving bijection of A") {
    Rng rng(421);
    for (int trial = 0; trial < 25; ++trial) {
        FiniteSystem fs = kaclab_test::random_ergodic_z_system(rng, 40);
        FiniteSet A = kaclab_test::random_sweep_out_set(rng, fs);
        FiniteSet ap = fs.positive_part(A);
        std::set<size_t> image;
        for (size_t x : ap.points()) {
            size_t y = induced_map(fs, A, x);
            CHECK(ap.contains(y));
            CHECK(fs.mass(y) == fs.mass(x));
            image.insert(y);
        }
        CHECK(image.size() == ap.count()); // injective, hence bijective on A
    }
}

TEST_CASE("greedy allocation on cyclic(5), A = {0,1}") {
    FiniteSystem fs = cyclic5();
    FiniteSet A(5, {0, 1});
    FiniteAllocation alloc = FiniteAllocation::greedy(fs, A);
    std::set<size_t> As = {0, 1};
    // frozen from the brute-force oracle: kappa = [0, 0, -1, -2, 1]
    std::vector<int64_t> expect = {0, 0, -1, -2, 1};
    for (size_t x = 0; x < 5; ++x) {
        CHECK(alloc.kappa(x).v[0] == expect[x]);
        CHECK(alloc.kappa(x).v[0] == brute_greedy_kappa_c5(x, As));
        CHECK(A.contains(alloc.t_kappa(x)));
    }
}

TEST_CASE("greedy allocation trivial cases") {
    FiniteSystem fs = cyclic5();
    FiniteSet X = FiniteSet::full(5);
    FiniteAllocation alloc = FiniteAllocation::greedy(fs, X);
    for (size_t x = 0; x < 5; ++x) CHECK(is_identity(alloc.kappa(x))); // x in A -> identity

    FiniteSystem two(Group::z(1), std::vector<Rational>(6, Rational(1, 6)), {{1, 2, 0, 4, 5, 3}});
    CHECK_THROWS_AS(FiniteAllocation::greedy(two, FiniteSet(6, {0})), precondition_error);
}

TEST_CASE("cells on cyclic(5): exact contents and Kac sum") {
    FiniteSystem fs = cyclic5();
    FiniteSet A(5, {0, 1});
    FiniteAllocation alloc = FiniteAllocation::greedy(fs, A);

    // brute-force oracle over gamma in [-20, 20]: gamma in B(x) iff
    // kappa(T_gamma^{-1} x) == gamma; sorted by (norm, value) to match
    auto brute_cell = [&](size_t x) {
        std::vector<int64_t> cell;
        for (int64_t g = -20; g <= 20; ++g) {
            int64_t y = (int64_t(x) - g) % 5;
            if (y < 0) y += 5;
            if (brute_greedy_kappa_c5(size_t(y), {0, 1}) == g) cell.push_back(g);
        }
        std::sort(cell.begin(), cell.end(), [](int64_t a, int64_t b) {
            return a * a != b * b ? a * a < b * b : a < b;
        });
        return cell;
    };
    auto b0 = cell_coords(alloc.cell(0));
    auto b1 = cell_coords(alloc.cell(1));
    CHECK(b0 == brute_cell(0));
    CHECK(b1 == brute_cell(1));
    CHECK(b0 == std::vector<int64_t>{0, 1});
    CHECK(b1 == std::vector<int64_t>{0, -1, -2});
    CHECK(b0.size() + b1.size() == 5);

    // off-target cells vanish
    CHECK(alloc.cell(3).empty());

    // A = X, kappa = identity: every cell is {identity}
    FiniteAllocation id_alloc = FiniteAllocation::greedy(fs, FiniteSet::full(5));
    for (size_t x = 0; x < 5; ++x) {
        CHECK(id_alloc.cell(x).size() == 1);
        CHECK(is_identity(id_alloc.cell(x)[0]));
    }
}

TEST_CASE("transport on cyclic(5)") {
    FiniteSystem fs = cyclic5();
    FiniteSet A(5, {0, 1});
    FiniteAllocation alloc = FiniteAllocation::greedy(fs, A);

    // f = 1: transport equals cell size
    std::vector<Rational> ones(5, Rational(1));
    std::vector<Rational> fk = transport(alloc, ones);
    CHECK(fk[0] == Rational(2));
    CHECK(fk[1] == Rational(3));

    // f = indicator of {3}: kappa(3) = -2 sends 3 -> 1
    std::vector<Rational> ind(5, Rational(0));
    ind[3] = Rational(1);
    fk = transport(alloc, ind);
    CHECK(fk[1] == Rational(1));
    CHECK(fk[0] == Rational(0));

    // f = 0
    std::vector<Rational> zero(5, Rational(0));
    for (const Rational& v : transport(alloc, zero)) CHECK(v == Rational(0));

    // negative f rejected
    std::vector<Rational> neg(5, Rational(-1));
    CHECK_THROWS(transport(alloc, neg));
}

TEST_CASE("allocation identity, exact, on random systems and allocations") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        FiniteSystem fs = trial % 3 == 0 ? kaclab_test::random_multi_z_system(rng)
                        : trial % 3 == 1 ? kaclab_test::random_z2_system(rng)
                                         : kaclab_test::random_cyclic_product_system(rng);
        FiniteSet A = kaclab_test::random_sweep_out_set(rng, fs);
        FiniteAllocation greedy = FiniteAllocation::greedy(fs, A);
        FiniteAllocation table = kaclab_test::random_table_allocation(rng, fs, A);
        for (int fi = 0; fi < 3; ++fi) {
            std::vector<Rational> f = kaclab_test::random_f(rng, fs.size());
            for (const FiniteAllocation* alloc : {&greedy, &table}) {
                AllocationIdentityReport rep = verify_allocation_identity(*alloc, f);
                CHECK(rep.equal);
                // direct two-sided summation oracle
                Rational rhs(0);
                for (size_t y = 0; y < fs.size(); ++y)
                    if (fs.positive(y)) rhs += fs.mass(y) * f[y];
                CHECK(rep.rhs == rhs);
            }
        }
    }
}

TEST_CASE("classical-Kac consistency of the forward-hitting allocation") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        FiniteSystem fs = kaclab_test::random_ergodic_z_system(rng, 40);
        FiniteSet A = kaclab_test::random_sweep_out_set(rng, fs);
        FiniteAllocation fw = FiniteAllocation::forward_hitting(fs, A);
        for (size_t x : fs.positive_part(A).points()) {
            size_t tax = induced_map(fs, A, x);
            CHECK(fw.cell(tax).size() == return_time(fs, A, x));
        }
    }
}

TEST_CASE("kac function on cyclic(5)") {
    FiniteSystem fs = cyclic5();
    FiniteSet A(5, {0, 1});
    FiniteAllocation alloc = FiniteAllocation::greedy(fs, A);
    KacFunction kf = kac_function(alloc);

    REQUIRE(kf.shapes.size() == 2);
    CHECK(cell_coords(kf.shapes[0]) == std::vector<int64_t>{0, 1});
    CHECK(cell_coords(kf.shapes[1]) == std::vector<int64_t>{0, -1, -2});
    CHECK(*kf.phi[0] == 0);
    CHECK(*kf.phi[1] == 1);

    PartitionCheck pc = verify_translate_partition(alloc, kf);
    CHECK(pc.disjoint);
    CHECK(pc.exhaustive);
    CHECK(kac_cell_integral(alloc, kf) == Rational(1));

    // A = X: one shape, the trivial partition
    FiniteAllocation id_alloc = FiniteAllocation::greedy(fs, FiniteSet::full(5));
    KacFunction kf_id = kac_function(id_alloc);
    CHECK(kf_id.shapes.size() == 1);
    CHECK(verify_translate_partition(id_alloc, kf_id).holds());
}

TEST_CASE("tail bounds on cyclic(5)") {
    FiniteSystem fs = cyclic5();
    FiniteAllocation alloc = FiniteAllocation::greedy(fs, FiniteSet(5, {0, 1}));
    KacFunction kf = kac_function(alloc);
    std::vector<TailBoundRow> rows = tail_bound_check(alloc, kf);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].measure == Rational(2, 5)); // n=1: mu(A) <= 1
    CHECK(rows[1].measure == Rational(2, 5)); // n=2: 2/5 <= 1/2
    CHECK(rows[1].bound == Rational(1, 2));
    CHECK(rows[2].measure == Rational(1, 5)); // n=3: 1/5 <= 1/3
    CHECK(rows[2].bound == Rational(1, 3));
    for (const auto& r : rows) CHECK(r.ok);

    // A = X: the n=1 bound is tight
    FiniteAllocation id_alloc = FiniteAllocation::greedy(fs, FiniteSet::full(5));
    std::vector<TailBoundRow> tight = tail_bound_check(id_alloc, kac_function(id_alloc));
    REQUIRE(tight.size() == 1);
    CHECK(tight[0].measure == Rational(1));
    CHECK(tight[0].ok);
}

TEST_CASE("sampled return time on the rotation") {
    SampledSystem rot = SampledSystem::rotation("0.6180339887498949", 31);
    IntervalSet half;
    half.parts.push_back({Rational(0), Rational(1, 2)});
    SampledSet A(half);
    // three-distance structure: returns to [0, 1/2) take 1, 2 or 3 steps
    for (uint64_t i = 0; i < 2000; ++i) {
        SamplePoint x = rot.sample(0, i);
        if (!rot.member(A, x)) continue;
        auto r = return_time(rot, A, x, 100);
        REQUIRE(r.has_value());
        CHECK(*r >= 1);
        CHECK(*r <= 3);
    }
    // budget abstention
    IntervalSet tiny;
    tiny.parts.push_back({Rational(0), Rational(1, 1000000)});
    SamplePoint x = rot.sample(0, 0);
    CHECK_FALSE(return_time(rot, SampledSet(tiny), x, 10).has_value());
}

TEST_CASE("sampled greedy allocation and certified cells") {
    SampledSystem rot = SampledSystem::rotation("0.6180339887498949", 11);
    IntervalSet third;
    third.parts.push_back({Rational(0), Rational(1, 3)});
    SampledAllocation alloc(rot, SampledSet(third));

    for (uint64_t i = 0; i < 50; ++i) {
        SamplePoint x = rot.sample(1, i);
        auto k = alloc.kappa(x, 1000);
        REQUIRE(k.has_value());
        CHECK(rot.member(alloc.target(), rot.apply(*k, x)));
        if (rot.member(alloc.target(), x)) {
            CHECK(is_identity(*k));
            SampledCell cell = sampled_cell(alloc, x, 10000);
            REQUIRE(cell.complete);
            bool has_id = false;
            for (const GroupElement& g : cell.cell) has_id = has_id || is_identity(g);
            CHECK(has_id);
        }
    }
}

TEST_CASE("return time on the odometer: Kac holds for the digit-0 cylinder") {
    SampledSystem odo = SampledSystem::odometer(24, 12);
    CylinderSet c0;
    c0.prefixes.push_back({0});
    SampledSet A(c0);
    // adding 1 flips digit 0, adding 2 restores it: return time is exactly 2
    // on A, so the integral over A is 2 * mu(A) = 1
    for (uint64_t i = 0; i < 500; ++i) {
        SamplePoint x = odo.sample(0, i);
        if (!odo.member(A, x)) continue;
        auto r = return_time(odo, A, x, 10);
        REQUIRE(r.has_value());
        CHECK(*r == 2);
    }
}

TEST_CASE("certified cells on the 2-torus") {
    SampledSystem tor = SampledSystem::torus({"0.7548776662466927", "0.5698402909980532"}, 17);
    BoxSet box;
    box.boxes.push_back({{Rational(0), Rational(1, 2)}, {Rational(0), Rational(1, 2)}});
    SampledAllocation alloc(tor, SampledSet(box));

    int complete = 0;
    double cell_mass = 0.0;
    for (uint64_t i = 0; i < 200; ++i) {
        SamplePoint x = tor.sample(5, i);
        if (!tor.member(alloc.target(), x)) continue;
        SampledCell cell = sampled_cell(alloc, x, 100000);
        REQUIRE(cell.complete);
        ++complete;
        cell_mass += double(cell.cell.size());
        // membership claim of each cell element: kappa of its preimage is the element
        for (const GroupElement& g : cell.cell) {
            SamplePoint y = tor.apply(invert(tor.group(), g), x);
            auto k = alloc.kappa(y, 100000);
            REQUIRE(k.has_value());
            CHECK(*k == g);
        }
    }
    CHECK(complete > 30);
    // cells average about 1/mu(A) = 4 elements; crude sanity band
    CHECK(cell_mass / double(complete) > 2.0);
    CHECK(cell_mass / double(complete) < 8.0);
}

TEST_CASE("mc allocation identity on the torus, f = 1") {
    SampledSystem tor = SampledSystem::torus({"0.7548776662466927", "0.5698402909980532"}, 29);
    BoxSet box;
    box.boxes.push_back({{Rational(0), Rational(1, 2)}, {Rational(0), Rational(1, 2)}});
    SampledAllocation alloc(tor, SampledSet(box));
    McIdentityReport rep = verify_allocation_identity_mc(alloc, nullptr, 4000, 100000);
    CHECK(rep.rhs.mean == 1.0);
    CHECK(rep.bands_overlap);
    CHECK(std::abs(rep.lhs.mean - 1.0) <= 3.0 * rep.lhs.std_error);
}

TEST_CASE("return-time integral is 1 on non-ergodic sweep-out targets too") {
    // two cycles with unequal weights; A meets both positive orbits
    FiniteSystem two(Group::z(1),
                     {Rational(1, 9), Rational(1, 9), Rational(1, 9), Rational(2, 9),
                      Rational(2, 9), Rational(2, 9)},
                     {{1, 2, 0, 4, 5, 3}});
    FiniteSet A(6, {1, 3});
    REQUIRE(two.is_sweep_out(A));
    CHECK_FALSE(two.is_ergodic());
    CHECK(return_time_integral(two, A) == Rational(1));
}
