#pragma once

#include "kaclab/group.hpp"
#include "kaclab/system.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kaclab {

/// Integer lattice vector, dimension <= 3 (unused coordinates stay zero).
struct IVec {
    std::array<int64_t, 3> c{0, 0, 0};

    int64_t& operator[](size_t i) { return c[i]; }
    int64_t operator[](size_t i) const { return c[i]; }
    bool operator==(const IVec&) const = default;
};

IVec ivec(int64_t x);
IVec ivec(int64_t x, int64_t y);
IVec ivec(int64_t x, int64_t y, int64_t z);
IVec from_element(const GroupElement& g, int dim);
GroupElement to_element(const Group& g, const IVec& v);

int64_t dot(const IVec& a, const IVec& b, int dim);
int64_t norm2(const IVec& a, int dim);
bool lex_less(const IVec& a, const IVec& b, int dim);
bool norm_lex_less(const IVec& a, const IVec& b, int dim);
std::string to_string(const IVec& v, int dim);

/// Lattice vectors translating a point of A back into A, scanned over the
/// ball of squared radius radius2. Always contains 0 for x in A.
struct HittingSet {
    int dim = 1;
    int64_t radius2 = 0;
    std::vector<IVec> vectors;
};

HittingSet hitting_set(const FiniteSystem& fs, const FiniteSet& A, size_t x, int64_t radius);
HittingSet hitting_set(const SampledSystem& ss, const SampledSet& A, const SamplePoint& x,
                       int64_t radius);

/// Strict/closed Voronoi cells of the origin for the hit configuration W:
///   strict = {v : |v| <  |v+w|  for all w in W \ {0}}
///   closed = {v : |v| <= |v+w|  for all w in W}
/// decided entirely in exact integer arithmetic via 2<v,w> + |w|^2 >< 0.
/// Boundedness is settled before enumeration from the recession cone
/// {u : <u,w> >= 0 for all w}; when the cone is nontrivial the result is
/// marked unbounded and carries witness directions instead of cells.
struct VoronoiCells {
    bool bounded = false;
    std::vector<IVec> strict_cell;
    std::vector<IVec> closed_cell;
    std::vector<IVec> recession; // witness directions when unbounded
};

VoronoiCells voronoi_cells(const HittingSet& w);

/// True iff every lattice point strictly interior to the convex hull of
/// `cell` belongs to `cell`. Exact integer predicates; dims 1..3.
bool is_almost_convex(int dim, const std::vector<IVec>& cell);

struct SandwichReport {
    enum class Verdict { holds, fails, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    std::vector<IVec> strict_violations; // strict-cell points missing from B
    std::vector<IVec> closed_violations; // B points outside the closed cell
    int64_t required_radius2 = 0;        // scan radius needed for certification
    std::string note;
};

/// Checks strict subset of B subset of closed for B = B_kappa(x) computed under a
/// norm-monotone enumeration. Inconclusive when the closed cell is unbounded at
/// this radius or the scan radius cannot certify the cells are final
/// (needs radius^2 >= 4 * max |v|^2 over the closed cell).
SandwichReport sandwich_check(const HittingSet& w, const std::vector<IVec>& cell_b);

} // namespace kaclab
