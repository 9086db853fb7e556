#include "kaclab/voronoi.hpp"

#include "kaclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kaclab {

IVec ivec(int64_t x) { return IVec{{x, 0, 0}}; }
IVec ivec(int64_t x, int64_t y) { return IVec{{x, y, 0}}; }
IVec ivec(int64_t x, int64_t y, int64_t z) { return IVec{{x, y, z}}; }

IVec from_element(const GroupElement& g, int dim) {
    if (g.v.size() != size_t(dim)) throw std::invalid_argument("element rank mismatch");
    IVec v;
    for (int i = 0; i < dim; ++i) v[size_t(i)] = g.v[size_t(i)];
    return v;
}

GroupElement to_element(const Group& g, const IVec& v) {
    std::vector<int64_t> coords(size_t(g.rank));
    for (int i = 0; i < g.rank; ++i) coords[size_t(i)] = v[size_t(i)];
    return element(g, std::move(coords));
}

int64_t dot(const IVec& a, const IVec& b, int dim) {
    __int128 s = 0;
    for (int i = 0; i < dim; ++i) s += static_cast<__int128>(a[size_t(i)]) * b[size_t(i)];
    if (s > INT64_MAX || s < INT64_MIN) throw std::overflow_error("lattice dot overflow");
    return int64_t(s);
}

int64_t norm2(const IVec& a, int dim) { return dot(a, a, dim); }

bool lex_less(const IVec& a, const IVec& b, int dim) {
    for (int i = 0; i < dim; ++i) {
        if (a[size_t(i)] != b[size_t(i)]) return a[size_t(i)] < b[size_t(i)];
    }
    return false;
}

bool norm_lex_less(const IVec& a, const IVec& b, int dim) {
    int64_t na = norm2(a, dim), nb = norm2(b, dim);
    if (na != nb) return na < nb;
    return lex_less(a, b, dim);
}

std::string to_string(const IVec& v, int dim) {
    if (dim == 1) return std::to_string(v[0]);
    std::string s = "(";
    for (int i = 0; i < dim; ++i) {
        if (i) s += ",";
        s += std::to_string(v[size_t(i)]);
    }
    return s + ")";
}

namespace {

void check_dim(int dim) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("lattice dimension must be 1..3");
}

// enumerate integer points of the box [-r, r]^dim
template <typename F>
void scan_box(int dim, int64_t r, F&& fn) {
    IVec v;
    if (dim == 1) {
        for (v[0] = -r; v[0] <= r; ++v[0]) fn(v);
        return;
    }
    if (dim == 2) {
        for (v[0] = -r; v[0] <= r; ++v[0])
            for (v[1] = -r; v[1] <= r; ++v[1]) fn(v);
        return;
    }
    for (v[0] = -r; v[0] <= r; ++v[0])
        for (v[1] = -r; v[1] <= r; ++v[1])
            for (v[2] = -r; v[2] <= r; ++v[2]) fn(v);
}

template <typename F>
void scan_box_corners(int dim, const IVec& lo, const IVec& hi, F&& fn) {
    IVec v;
    for (v[0] = lo[0]; v[0] <= hi[0]; ++v[0]) {
        if (dim == 1) { fn(v); continue; }
        for (v[1] = lo[1]; v[1] <= hi[1]; ++v[1]) {
            if (dim == 2) { fn(v); continue; }
            for (v[2] = lo[2]; v[2] <= hi[2]; ++v[2]) fn(v);
        }
    }
}

bool is_zero(const IVec& v, int dim) {
    for (int i = 0; i < dim; ++i)
        if (v[size_t(i)] != 0) return false;
    return true;
}

// nonzero hit directions, deduplicated
std::vector<IVec> nonzero_hits(const HittingSet& w) {
    std::vector<IVec> out;
    for (const IVec& v : w.vectors)
        if (!is_zero(v, w.dim)) out.push_back(v);
    std::sort(out.begin(), out.end(),
              [&](const IVec& a, const IVec& b) { return lex_less(a, b, w.dim); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// closed-cell halfspace: 2<v,w> + |w|^2 >= 0
bool closed_ok(const IVec& v, const IVec& w, int dim) {
    __int128 lhs = 2 * static_cast<__int128>(dot(v, w, dim)) + norm2(w, dim);
    return lhs >= 0;
}

bool strict_ok(const IVec& v, const IVec& w, int dim) {
    __int128 lhs = 2 * static_cast<__int128>(dot(v, w, dim)) + norm2(w, dim);
    return lhs > 0;
}

// u is a recession direction iff <u,w> >= 0 for every hit w
bool recession_dir(const IVec& u, const std::vector<IVec>& ws, int dim) {
    if (is_zero(u, dim)) return false;
    for (const IVec& w : ws)
        if (dot(u, w, dim) < 0) return false;
    return true;
}

IVec cross(const IVec& a, const IVec& b) {
    return ivec(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

// any nonzero integer vector orthogonal to w (dim 3)
IVec any_perp3(const IVec& w) {
    if (w[0] != 0 || w[1] != 0) return ivec(-w[1], w[0], 0);
    return ivec(0, -w[2], w[1]);
}

int lattice_rank(const std::vector<IVec>& ws, int dim) {
    if (ws.empty()) return 0;
    if (dim == 1) return 1;
    if (dim == 2) {
        for (size_t i = 0; i < ws.size(); ++i)
            for (size_t j = i + 1; j < ws.size(); ++j)
                if (ws[i][0] * ws[j][1] - ws[i][1] * ws[j][0] != 0) return 2;
        return 1;
    }
    int rank = 1;
    for (size_t i = 0; i < ws.size() && rank < 3; ++i)
        for (size_t j = i + 1; j < ws.size() && rank < 3; ++j) {
            IVec c = cross(ws[i], ws[j]);
            if (!is_zero(c, 3)) {
                rank = 2;
                for (const IVec& w : ws)
                    if (dot(c, w, 3) != 0) { rank = 3; break; }
            }
        }
    return rank;
}

// The recession cone {u : <u,w> >= 0 for all w} is polyhedral; when it is
// nontrivial it contains either a vector orthogonal to the span of the hits
// (rank-deficient case) or an extreme ray supported by dim-1 active
// constraints, whose direction is a perpendicular/cross product of hits.
// Checking those finitely many candidates decides boundedness exactly.
std::vector<IVec> recession_witnesses(const std::vector<IVec>& ws, int dim) {
    std::vector<IVec> found;
    auto try_dir = [&](const IVec& u) {
        if (recession_dir(u, ws, dim) &&
            std::find(found.begin(), found.end(), u) == found.end())
            found.push_back(u);
    };
    if (ws.empty()) {
        for (int i = 0; i < dim; ++i) {
            IVec e;
            e[size_t(i)] = 1;
            found.push_back(e);
        }
        return found;
    }
    int rank = lattice_rank(ws, dim);
    if (rank < dim) {
        // orthogonal complement of the span is free
        if (dim == 2) {
            try_dir(ivec(-ws[0][1], ws[0][0]));
            try_dir(ivec(ws[0][1], -ws[0][0]));
        } else if (dim == 3) {
            if (rank == 1) {
                try_dir(any_perp3(ws[0]));
                IVec p = any_perp3(ws[0]);
                try_dir(ivec(-p[0], -p[1], -p[2]));
            } else {
                for (size_t i = 0; i < ws.size() && found.empty(); ++i)
                    for (size_t j = i + 1; j < ws.size() && found.empty(); ++j) {
                        IVec c = cross(ws[i], ws[j]);
                        if (!is_zero(c, 3)) {
                            try_dir(c);
                            try_dir(ivec(-c[0], -c[1], -c[2]));
                        }
                    }
            }
        }
        return found;
    }
    if (dim == 1) {
        try_dir(ivec(1));
        try_dir(ivec(-1));
    } else if (dim == 2) {
        for (const IVec& w : ws) {
            try_dir(ivec(-w[1], w[0]));
            try_dir(ivec(w[1], -w[0]));
        }
    } else {
        for (size_t i = 0; i < ws.size(); ++i)
            for (size_t j = i + 1; j < ws.size(); ++j) {
                IVec c = cross(ws[i], ws[j]);
                if (is_zero(c, 3)) continue;
                try_dir(c);
                try_dir(ivec(-c[0], -c[1], -c[2]));
            }
    }
    return found;
}

struct Rat128 {
    __int128 num;
    __int128 den; // > 0
};

bool rat_less(const Rat128& a, const Rat128& b) { return a.num * b.den < b.num * a.den; }

// Vertices of the closed-cell polytope are intersections of `dim` constraint
// hyperplanes 2<v,w> = -|w|^2. Their exact bounding box (Cramer's rule over
// rationals) contains every cell point once the cell is bounded.
bool vertex_bbox(const std::vector<IVec>& ws, int dim, IVec& lo, IVec& hi) {
    std::vector<Rat128> mins(static_cast<size_t>(dim), Rat128{0, 1});
    std::vector<Rat128> maxs(static_cast<size_t>(dim), Rat128{0, 1});
    bool any = false;
    auto consider = [&](const std::array<Rat128, 3>& v) {
        // feasibility: 2<v,w> + |w|^2 >= 0, common denominator d > 0
        __int128 d = v[0].den;
        for (const IVec& w : ws) {
            __int128 lhs = 0;
            for (int i = 0; i < dim; ++i) lhs += 2 * v[size_t(i)].num * w[size_t(i)];
            lhs += static_cast<__int128>(norm2(w, dim)) * d;
            if (lhs < 0) return;
        }
        for (int i = 0; i < dim; ++i) {
            if (!any) { mins[size_t(i)] = v[size_t(i)]; maxs[size_t(i)] = v[size_t(i)]; }
            else {
                if (rat_less(v[size_t(i)], mins[size_t(i)])) mins[size_t(i)] = v[size_t(i)];
                if (rat_less(maxs[size_t(i)], v[size_t(i)])) maxs[size_t(i)] = v[size_t(i)];
            }
        }
        any = true;
    };

    size_t n = ws.size();
    if (dim == 1) {
        for (const IVec& w : ws) {
            std::array<Rat128, 3> v{Rat128{-norm2(w, 1), 2 * w[0]}, Rat128{0, 1}, Rat128{0, 1}};
            if (v[0].den < 0) { v[0].den = -v[0].den; v[0].num = -v[0].num; }
            consider(v);
        }
    } else if (dim == 2) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                const IVec& a = ws[i];
                const IVec& b = ws[j];
                __int128 det = static_cast<__int128>(2 * a[0]) * (2 * b[1]) -
                               static_cast<__int128>(2 * a[1]) * (2 * b[0]);
                if (det == 0) continue;
                __int128 ra = -norm2(a, 2), rb = -norm2(b, 2);
                __int128 nx = ra * (2 * b[1]) - static_cast<__int128>(2 * a[1]) * rb;
                __int128 ny = static_cast<__int128>(2 * a[0]) * rb - ra * (2 * b[0]);
                __int128 d = det;
                if (d < 0) { d = -d; nx = -nx; ny = -ny; }
                consider({Rat128{nx, d}, Rat128{ny, d}, Rat128{0, 1}});
            }
    } else {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                for (size_t k = j + 1; k < n; ++k) {
                    const IVec* rows[3] = {&ws[i], &ws[j], &ws[k]};
                    __int128 m[3][3];
                    __int128 rhs[3];
                    for (int r = 0; r < 3; ++r) {
                        for (int c = 0; c < 3; ++c) m[r][c] = 2 * (*rows[r])[size_t(c)];
                        rhs[r] = -norm2(*rows[r], 3);
                    }
                    auto det3 = [](__int128 a[3][3]) {
                        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
                    };
                    __int128 det = det3(m);
                    if (det == 0) continue;
                    std::array<Rat128, 3> v;
                    for (int c = 0; c < 3; ++c) {
                        __int128 mc[3][3];
                        for (int r = 0; r < 3; ++r)
                            for (int cc = 0; cc < 3; ++cc) mc[r][cc] = cc == c ? rhs[r] : m[r][cc];
                        __int128 numc = det3(mc);
                        __int128 d = det;
                        if (d < 0) { d = -d; numc = -numc; }
                        v[size_t(c)] = Rat128{numc, d};
                    }
                    consider(v);
                }
    }
    if (!any) return false;
    for (int i = 0; i < dim; ++i) {
        // floor(min) and ceil(max) with exact integer division
        __int128 fn = mins[size_t(i)].num, fd = mins[size_t(i)].den;
        __int128 q = fn / fd;
        if (fn % fd != 0 && fn < 0) --q;
        lo[size_t(i)] = int64_t(q);
        fn = maxs[size_t(i)].num;
        fd = maxs[size_t(i)].den;
        q = fn / fd;
        if (fn % fd != 0 && fn > 0) ++q;
        hi[size_t(i)] = int64_t(q);
    }
    // 0 is always feasible
    for (int i = 0; i < dim; ++i) {
        lo[size_t(i)] = std::min<int64_t>(lo[size_t(i)], 0);
        hi[size_t(i)] = std::max<int64_t>(hi[size_t(i)], 0);
    }
    return true;
}

} // namespace

VoronoiCells voronoi_cells(const HittingSet& w) {
    check_dim(w.dim);
    bool has_zero = false;
    for (const IVec& v : w.vectors)
        if (is_zero(v, w.dim)) { has_zero = true; break; }
    if (!has_zero) throw precondition_error("hitting set must contain 0");

    std::vector<IVec> ws = nonzero_hits(w);
    VoronoiCells out;
    out.recession = recession_witnesses(ws, w.dim);
    out.bounded = out.recession.empty();
    if (!out.bounded) return out;

    IVec lo, hi;
    if (!vertex_bbox(ws, w.dim, lo, hi))
        throw std::logic_error("bounded cell without vertices");
    scan_box_corners(w.dim, lo, hi, [&](const IVec& v) {
        bool in_closed = true;
        for (const IVec& hit : ws)
            if (!closed_ok(v, hit, w.dim)) { in_closed = false; break; }
        if (!in_closed) return;
        out.closed_cell.push_back(v);
        bool in_strict = true;
        for (const IVec& hit : ws)
            if (!strict_ok(v, hit, w.dim)) { in_strict = false; break; }
        if (in_strict) out.strict_cell.push_back(v);
    });
    auto cmp = [&](const IVec& a, const IVec& b) { return norm_lex_less(a, b, w.dim); };
    std::sort(out.closed_cell.begin(), out.closed_cell.end(), cmp);
    std::sort(out.strict_cell.begin(), out.strict_cell.end(), cmp);
    return out;
}

HittingSet hitting_set(const FiniteSystem& fs, const FiniteSet& A, size_t x, int64_t radius) {
    if (fs.group().finite() || fs.group().rank > 3)
        throw std::invalid_argument("hitting sets need a Z^d action, d <= 3");
    if (radius < 0) throw std::invalid_argument("radius must be >= 0");
    FiniteSet ap = fs.positive_part(A);
    if (!ap.contains(x)) throw precondition_error("x must be a positive-mass point of A");
    HittingSet w;
    w.dim = fs.group().rank;
    w.radius2 = radius * radius;
    scan_box(w.dim, radius, [&](const IVec& v) {
        if (norm2(v, w.dim) > w.radius2) return;
        if (ap.contains(fs.apply(to_element(fs.group(), v), x))) w.vectors.push_back(v);
    });
    return w;
}

HittingSet hitting_set(const SampledSystem& ss, const SampledSet& A, const SamplePoint& x,
                       int64_t radius) {
    if (ss.group().rank > 3) throw std::invalid_argument("hitting sets need d <= 3");
    if (!ss.member(A, x)) throw precondition_error("x must lie in A");
    HittingSet w;
    w.dim = ss.group().rank;
    w.radius2 = radius * radius;
    scan_box(w.dim, radius, [&](const IVec& v) {
        if (norm2(v, w.dim) > w.radius2) return;
        if (ss.member(A, ss.apply(to_element(ss.group(), v), x))) w.vectors.push_back(v);
    });
    return w;
}

// ---------------------------------------------------------------------------
// almost convexity
// ---------------------------------------------------------------------------

namespace {

// orientation of c relative to the segment a->b
__int128 orient2(const IVec& a, const IVec& b, const IVec& c) {
    return static_cast<__int128>(b[0] - a[0]) * (c[1] - a[1]) -
           static_cast<__int128>(b[1] - a[1]) * (c[0] - a[0]);
}

// Andrew monotone chain, returns hull in CCW order (no duplicate endpoints)
std::vector<IVec> hull2(std::vector<IVec> pts) {
    std::sort(pts.begin(), pts.end(), [](const IVec& a, const IVec& b) {
        return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<IVec> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && orient2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && orient2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

bool strictly_inside_hull2(const std::vector<IVec>& hull, const IVec& p) {
    if (hull.size() < 3) return false; // degenerate hull has empty interior
    for (size_t i = 0; i < hull.size(); ++i) {
        const IVec& a = hull[i];
        const IVec& b = hull[(i + 1) % hull.size()];
        if (orient2(a, b, p) <= 0) return false;
    }
    return true;
}

struct Facet3 {
    IVec normal;
    __int128 offset; // <normal, x> <= offset for all points
};

// facet halfspaces of the hull from all point triples (exact, O(n^4) -- cells are small)
std::vector<Facet3> hull_facets3(const std::vector<IVec>& pts, bool& full_dim) {
    std::vector<Facet3> facets;
    full_dim = false;
    size_t n = pts.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                IVec ab = ivec(pts[j][0] - pts[i][0], pts[j][1] - pts[i][1], pts[j][2] - pts[i][2]);
                IVec ac = ivec(pts[k][0] - pts[i][0], pts[k][1] - pts[i][1], pts[k][2] - pts[i][2]);
                IVec nrm = cross(ab, ac);
                if (is_zero(nrm, 3)) continue;
                __int128 off = 0;
                for (int c = 0; c < 3; ++c) off += static_cast<__int128>(nrm[size_t(c)]) * pts[i][size_t(c)];
                bool all_le = true, all_ge = true, strict_side = false;
                for (const IVec& p : pts) {
                    __int128 val = 0;
                    for (int c = 0; c < 3; ++c) val += static_cast<__int128>(nrm[size_t(c)]) * p[size_t(c)];
                    if (val > off) all_le = false;
                    if (val < off) all_ge = false;
                    if (val != off) strict_side = true;
                }
                if (strict_side) full_dim = true;
                if (all_le) facets.push_back({nrm, off});
                else if (all_ge) {
                    facets.push_back({ivec(-nrm[0], -nrm[1], -nrm[2]), -off});
                }
            }
    return facets;
}

} // namespace

bool is_almost_convex(int dim, const std::vector<IVec>& cell) {
    check_dim(dim);
    if (cell.empty()) throw std::invalid_argument("almost-convexity needs a nonempty set");

    auto contains = [&](const IVec& p) {
        return std::find(cell.begin(), cell.end(), p) != cell.end();
    };

    if (dim == 1) {
        int64_t lo = cell[0][0], hi = cell[0][0];
        for (const IVec& v : cell) {
            lo = std::min(lo, v[0]);
            hi = std::max(hi, v[0]);
        }
        for (int64_t t = lo + 1; t < hi; ++t)
            if (!contains(ivec(t))) return false;
        return true;
    }

    IVec lo = cell[0], hi = cell[0];
    for (const IVec& v : cell)
        for (int i = 0; i < dim; ++i) {
            lo[size_t(i)] = std::min(lo[size_t(i)], v[size_t(i)]);
            hi[size_t(i)] = std::max(hi[size_t(i)], v[size_t(i)]);
        }

    if (dim == 2) {
        std::vector<IVec> hull = hull2(cell);
        bool ok = true;
        scan_box_corners(2, lo, hi, [&](const IVec& p) {
            if (!ok) return;
            if (strictly_inside_hull2(hull, p) && !contains(p)) ok = false;
        });
        return ok;
    }

    bool full_dim = false;
    std::vector<Facet3> facets = hull_facets3(cell, full_dim);
    if (!full_dim) return true; // flat hull: empty interior in R^3
    bool ok = true;
    scan_box_corners(3, lo, hi, [&](const IVec& p) {
        if (!ok) return;
        for (const Facet3& f : facets) {
            __int128 val = 0;
            for (int c = 0; c < 3; ++c) val += static_cast<__int128>(f.normal[size_t(c)]) * p[size_t(c)];
            if (val >= f.offset) return; // on or outside some facet: not interior
        }
        if (!contains(p)) ok = false;
    });
    return ok;
}

SandwichReport sandwich_check(const HittingSet& w, const std::vector<IVec>& cell_b) {
    SandwichReport rep;
    VoronoiCells cells = voronoi_cells(w);
    if (!cells.bounded) {
        rep.verdict = SandwichReport::Verdict::inconclusive;
        rep.note = "closed cell unbounded at this radius; increase radius";
        return rep;
    }
    int64_t rho2 = 0;
    for (const IVec& v : cells.closed_cell) rho2 = std::max(rho2, norm2(v, w.dim));
    rep.required_radius2 = 4 * rho2;
    if (w.radius2 < 4 * rho2) {
        rep.verdict = SandwichReport::Verdict::inconclusive;
        rep.note = "scan radius^2 " + std::to_string(w.radius2) +
                   " below certification bound " + std::to_string(4 * rho2);
        return rep;
    }
    // hits beyond the scan radius cannot cut the certified cells:
    // |w| > 2*rho forces |v+w| >= |w| - |v| > rho >= |v| on every cell point
    auto in_b = [&](const IVec& v) {
        return std::find(cell_b.begin(), cell_b.end(), v) != cell_b.end();
    };
    for (const IVec& v : cells.strict_cell)
        if (!in_b(v)) rep.strict_violations.push_back(v);
    for (const IVec& v : cell_b) {
        bool in_closed = false;
        for (const IVec& c : cells.closed_cell)
            if (c == v) { in_closed = true; break; }
        if (!in_closed) rep.closed_violations.push_back(v);
    }
    rep.verdict = rep.strict_violations.empty() && rep.closed_violations.empty()
                      ? SandwichReport::Verdict::holds
                      : SandwichReport::Verdict::fails;
    return rep;
}

} // namespace kaclab
