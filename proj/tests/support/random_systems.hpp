#pragma once

// Randomized test instances: finite systems over Z, Z^2 and cyclic products,
// sweep-out sets, valid allocation tables, relations with class-respecting
// tau maps, and non-negative rational test functions. All generators are
// deterministic in the passed engine.

#include "kaclab/allocation.hpp"
#include "kaclab/relation.hpp"
#include "kaclab/system.hpp"

#include <numeric>
#include <random>
#include <vector>

namespace kaclab_test {

using namespace kaclab;
using Rng = std::mt19937_64;

inline size_t pick(Rng& rng, size_t lo, size_t hi) {
    return std::uniform_int_distribution<size_t>(lo, hi)(rng);
}

// masses uniform within each component: component i of size sz_i and weight
// w_i gets per-point mass w_i / sum_j (w_j * sz_j); weight 0 makes a null orbit
inline std::vector<Rational> component_masses(const std::vector<size_t>& sizes,
                                              const std::vector<int64_t>& weights) {
    int64_t total = 0;
    for (size_t i = 0; i < sizes.size(); ++i) total += weights[i] * int64_t(sizes[i]);
    std::vector<Rational> masses;
    for (size_t i = 0; i < sizes.size(); ++i)
        for (size_t k = 0; k < sizes[i]; ++k) masses.emplace_back(weights[i], total);
    return masses;
}

/// Ergodic Z-system: one positive cycle, optionally padded with a null cycle.
inline FiniteSystem random_ergodic_z_system(Rng& rng, size_t max_points = 128) {
    size_t m = pick(rng, 2, max_points > 16 ? max_points - 8 : max_points);
    bool null_pad = max_points > 16 && pick(rng, 0, 3) == 0;
    size_t pad = null_pad ? pick(rng, 1, 8) : 0;
    std::vector<size_t> sizes = {m};
    std::vector<int64_t> weights = {1};
    if (pad) {
        sizes.push_back(pad);
        weights.push_back(0);
    }
    std::vector<uint32_t> perm(m + pad);
    for (size_t i = 0; i < m; ++i) perm[i] = uint32_t((i + 1) % m);
    for (size_t i = 0; i < pad; ++i) perm[m + i] = uint32_t(m + (i + 1) % pad);
    return FiniteSystem(Group::z(1), component_masses(sizes, weights), {std::move(perm)});
}

/// Z-system with several cycles, random positive weights (some possibly null).
inline FiniteSystem random_multi_z_system(Rng& rng, size_t max_cycles = 4,
                                          size_t max_cycle = 12) {
    size_t k = pick(rng, 1, max_cycles);
    std::vector<size_t> sizes;
    std::vector<int64_t> weights;
    for (size_t i = 0; i < k; ++i) {
        sizes.push_back(pick(rng, 1, max_cycle));
        weights.push_back(int64_t(pick(rng, 1, 9)));
    }
    if (pick(rng, 0, 3) == 0) {
        sizes.push_back(pick(rng, 1, 4));
        weights.push_back(0);
    }
    size_t n = std::accumulate(sizes.begin(), sizes.end(), size_t(0));
    std::vector<uint32_t> perm(n);
    size_t base = 0;
    for (size_t sz : sizes) {
        for (size_t i = 0; i < sz; ++i) perm[base + i] = uint32_t(base + (i + 1) % sz);
        base += sz;
    }
    return FiniteSystem(Group::z(1), component_masses(sizes, weights), {std::move(perm)});
}

/// Z^2-system built from grid components (each a quotient torus n_i x m_i).
inline FiniteSystem random_z2_system(Rng& rng, size_t max_components = 3, size_t max_side = 5) {
    size_t k = pick(rng, 1, max_components);
    std::vector<std::pair<size_t, size_t>> grids;
    std::vector<size_t> sizes;
    std::vector<int64_t> weights;
    for (size_t i = 0; i < k; ++i) {
        size_t rows = pick(rng, 1, max_side), cols = pick(rng, 1, max_side);
        grids.emplace_back(rows, cols);
        sizes.push_back(rows * cols);
        weights.push_back(int64_t(pick(rng, 1, 9)));
    }
    size_t n = std::accumulate(sizes.begin(), sizes.end(), size_t(0));
    std::vector<uint32_t> p1(n), p2(n);
    size_t base = 0;
    for (size_t i = 0; i < grids.size(); ++i) {
        auto [rows, cols] = grids[i];
        for (size_t r = 0; r < rows; ++r)
            for (size_t c = 0; c < cols; ++c) {
                size_t idx = base + r * cols + c;
                p1[idx] = uint32_t(base + ((r + 1) % rows) * cols + c);
                p2[idx] = uint32_t(base + r * cols + (c + 1) % cols);
            }
        base += sizes[i];
    }
    return FiniteSystem(Group::z(2), component_masses(sizes, weights),
                        {std::move(p1), std::move(p2)});
}

/// C_n x C_m system: grid components whose sides divide the factor orders.
inline FiniteSystem random_cyclic_product_system(Rng& rng) {
    static const std::vector<int64_t> orders_pool = {2, 3, 4, 6};
    int64_t n = orders_pool[pick(rng, 0, orders_pool.size() - 1)];
    int64_t m = orders_pool[pick(rng, 0, orders_pool.size() - 1)];
    auto divisors = [](int64_t v) {
        std::vector<size_t> out;
        for (int64_t d = 1; d <= v; ++d)
            if (v % d == 0) out.push_back(size_t(d));
        return out;
    };
    auto dn = divisors(n), dm = divisors(m);
    size_t k = pick(rng, 1, 3);
    std::vector<std::pair<size_t, size_t>> grids;
    std::vector<size_t> sizes;
    std::vector<int64_t> weights;
    for (size_t i = 0; i < k; ++i) {
        size_t rows = dn[pick(rng, 0, dn.size() - 1)];
        size_t cols = dm[pick(rng, 0, dm.size() - 1)];
        grids.emplace_back(rows, cols);
        sizes.push_back(rows * cols);
        weights.push_back(int64_t(pick(rng, 1, 9)));
    }
    size_t total = std::accumulate(sizes.begin(), sizes.end(), size_t(0));
    std::vector<uint32_t> p1(total), p2(total);
    size_t base = 0;
    for (size_t i = 0; i < grids.size(); ++i) {
        auto [rows, cols] = grids[i];
        for (size_t r = 0; r < rows; ++r)
            for (size_t c = 0; c < cols; ++c) {
                size_t idx = base + r * cols + c;
                p1[idx] = uint32_t(base + ((r + 1) % rows) * cols + c);
                p2[idx] = uint32_t(base + r * cols + (c + 1) % cols);
            }
        base += sizes[i];
    }
    return FiniteSystem(Group::product_of_cyclic({n, m}), component_masses(sizes, weights),
                        {std::move(p1), std::move(p2)});
}

/// Random sweep-out target: at least one positive point per positive orbit,
/// plus random extras.
inline FiniteSet random_sweep_out_set(Rng& rng, const FiniteSystem& fs) {
    FiniteSet A(fs.size());
    std::vector<std::vector<size_t>> by_orbit(fs.orbit_count());
    for (size_t x : fs.positive_points()) by_orbit[fs.orbit_id(x)].push_back(x);
    for (const auto& orb : by_orbit) {
        if (orb.empty()) continue;
        A.add(orb[pick(rng, 0, orb.size() - 1)]);
    }
    for (size_t x = 0; x < fs.size(); ++x)
        if (pick(rng, 0, 3) == 0) A.add(x);
    return A;
}

/// Random non-negative rational function with small denominators.
inline std::vector<Rational> random_f(Rng& rng, size_t n, int64_t max_num = 9,
                                      int64_t max_den = 8) {
    std::vector<Rational> f;
    f.reserve(n);
    for (size_t i = 0; i < n; ++i)
        f.emplace_back(int64_t(pick(rng, 0, size_t(max_num))), int64_t(pick(rng, 1, size_t(max_den))));
    return f;
}

/// Random valid allocation table: kappa(x) uniform over window elements
/// moving x into the positive part of A.
inline FiniteAllocation random_table_allocation(Rng& rng, const FiniteSystem& fs,
                                                const FiniteSet& A) {
    FiniteSet ap = fs.positive_part(A);
    std::vector<GroupElement> kappa;
    kappa.reserve(fs.size());
    int64_t window = int64_t(fs.size()) + 2;
    for (size_t x = 0; x < fs.size(); ++x) {
        if (!fs.positive(x)) {
            kappa.push_back(identity(fs.group()));
            continue;
        }
        std::vector<GroupElement> candidates;
        if (fs.group().finite()) {
            Enumeration e(fs.group());
            for (uint64_t i = 0; i < *e.size(); ++i) {
                GroupElement g = e.at(i);
                if (ap.contains(fs.apply(g, x))) candidates.push_back(std::move(g));
            }
        } else if (fs.group().rank == 1) {
            for (int64_t a = -window; a <= window; ++a) {
                GroupElement g = element(fs.group(), {a});
                if (ap.contains(fs.apply(g, x))) candidates.push_back(std::move(g));
            }
        } else {
            for (int64_t a = -window; a <= window; ++a)
                for (int64_t b = -window; b <= window; ++b) {
                    GroupElement g = element(fs.group(), {a, b});
                    if (ap.contains(fs.apply(g, x))) candidates.push_back(std::move(g));
                }
        }
        kappa.push_back(candidates[pick(rng, 0, candidates.size() - 1)]);
    }
    return FiniteAllocation::from_table(fs, A, std::move(kappa));
}

/// Random valid relation: classes with uniform masses among positive points.
inline EquivRelation random_relation(Rng& rng, size_t max_classes = 6, size_t max_class_size = 7) {
    size_t k = pick(rng, 1, max_classes);
    EquivRelation rel;
    std::vector<size_t> sizes;
    std::vector<int64_t> weights;
    for (size_t c = 0; c < k; ++c) {
        sizes.push_back(pick(rng, 1, max_class_size));
        weights.push_back(int64_t(pick(rng, 1, 9)));
    }
    if (pick(rng, 0, 3) == 0) {
        sizes.push_back(pick(rng, 1, 3));
        weights.push_back(0);
    }
    rel.masses = component_masses(sizes, weights);
    for (size_t c = 0; c < sizes.size(); ++c)
        for (size_t i = 0; i < sizes[c]; ++i) rel.class_of.push_back(uint32_t(c));
    return rel;
}

/// Random class-respecting tau mapping positive points to positive points.
inline TauMap random_tau(Rng& rng, const EquivRelation& rel) {
    std::vector<std::vector<size_t>> positive_by_class;
    for (size_t x = 0; x < rel.size(); ++x) {
        if (rel.class_of[x] >= positive_by_class.size())
            positive_by_class.resize(rel.class_of[x] + 1);
        if (rel.positive(x)) positive_by_class[rel.class_of[x]].push_back(x);
    }
    TauMap tau;
    for (size_t x = 0; x < rel.size(); ++x) {
        if (!rel.positive(x)) {
            tau.table.push_back(uint32_t(x));
            continue;
        }
        const auto& cls = positive_by_class[rel.class_of[x]];
        tau.table.push_back(uint32_t(cls[pick(rng, 0, cls.size() - 1)]));
    }
    return tau;
}

/// Random class-respecting tau on the orbit relation of a finite system.
inline TauMap random_orbit_tau(Rng& rng, const FiniteSystem& fs) {
    std::vector<std::vector<size_t>> positive_by_orbit(fs.orbit_count());
    for (size_t x : fs.positive_points()) positive_by_orbit[fs.orbit_id(x)].push_back(x);
    TauMap tau;
    for (size_t x = 0; x < fs.size(); ++x) {
        if (!fs.positive(x)) {
            tau.table.push_back(uint32_t(x));
            continue;
        }
        const auto& orb = positive_by_orbit[fs.orbit_id(x)];
        tau.table.push_back(uint32_t(orb[pick(rng, 0, orb.size() - 1)]));
    }
    return tau;
}

} // namespace kaclab_test
