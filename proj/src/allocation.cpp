#include "kaclab/allocation.hpp"

#include "kaclab/errors.hpp"
#include "kaclab/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kaclab {

namespace {

void require_z_action(const FiniteSystem& fs) {
    if (fs.group().finite() || fs.group().rank != 1)
        throw std::invalid_argument("operation needs a Z-action");
}

void require_nonneg(const std::vector<Rational>& f, size_t n) {
    if (f.size() != n) throw std::invalid_argument("f must assign a value to every point");
    for (const Rational& v : f)
        if (v.is_negative()) throw std::invalid_argument("f must be non-negative");
}

} // namespace

uint64_t return_time(const FiniteSystem& zs, const FiniteSet& A, size_t x) {
    require_z_action(zs);
    FiniteSet ap = zs.positive_part(A);
    if (ap.empty()) throw precondition_error("target set has measure zero");
    size_t y = x;
    for (size_t n = 1; n <= zs.size(); ++n) {
        y = zs.apply_generator(0, 1, y);
        if (ap.contains(y)) return n;
    }
    throw no_return_error("forward orbit of point " + std::to_string(x) + " never meets A");
}

size_t induced_map(const FiniteSystem& zs, const FiniteSet& A, size_t x) {
    uint64_t r = return_time(zs, A, x);
    return zs.apply_generator(0, int64_t(r), x);
}

Rational return_time_integral(const FiniteSystem& zs, const FiniteSet& A) {
    FiniteSet ap = zs.positive_part(A);
    Rational total(0);
    for (size_t x : ap.points())
        total += zs.mass(x) * Rational(int64_t(return_time(zs, A, x)));
    return total;
}

// ---------------------------------------------------------------------------
// FiniteAllocation
// ---------------------------------------------------------------------------

FiniteAllocation::FiniteAllocation(const FiniteSystem& fs, FiniteSet A, Strategy s)
    : fs_(&fs), A_(std::move(A)), strategy_(s) {
    if (A_.universe() != fs.size()) throw std::invalid_argument("target set universe mismatch");
    A_pos_ = fs.positive_part(A_);
    if (!fs.is_sweep_out(A_)) throw precondition_error("target set is not sweep-out");
    memo_.assign(fs.size(), std::nullopt);
}

FiniteAllocation FiniteAllocation::greedy(const FiniteSystem& fs, FiniteSet A) {
    return greedy(fs, std::move(A), Enumeration(fs.group()));
}

FiniteAllocation FiniteAllocation::greedy(const FiniteSystem& fs, FiniteSet A, Enumeration e) {
    if (!(e.group() == fs.group()))
        throw std::invalid_argument("enumeration group does not match the system");
    FiniteAllocation a(fs, std::move(A), Strategy::greedy);
    a.enum_.emplace(std::move(e));
    return a;
}

FiniteAllocation FiniteAllocation::from_table(const FiniteSystem& fs, FiniteSet A,
                                              std::vector<GroupElement> kappa) {
    FiniteAllocation a(fs, std::move(A), Strategy::table);
    if (kappa.size() != fs.size())
        throw std::invalid_argument("allocation table must cover every point");
    for (size_t x = 0; x < fs.size(); ++x) {
        if (!fs.positive(x)) continue;
        if (!a.A_pos_.contains(fs.apply(kappa[x], x)))
            throw precondition_error("table entry for point " + std::to_string(x) +
                                     " does not move it into A");
        a.memo_[x] = kappa[x];
    }
    return a;
}

FiniteAllocation FiniteAllocation::forward_hitting(const FiniteSystem& fs, FiniteSet A) {
    require_z_action(fs);
    FiniteAllocation a(fs, std::move(A), Strategy::forward_hitting);
    return a;
}

const GroupElement& FiniteAllocation::kappa(size_t x) const {
    if (x >= fs_->size()) throw std::out_of_range("point index out of range");
    if (memo_[x]) return *memo_[x];
    if (!fs_->positive(x))
        throw precondition_error("allocation is defined mod mu; point " + std::to_string(x) +
                                 " has mass zero");
    if (strategy_ == Strategy::forward_hitting) {
        size_t y = x;
        for (uint64_t n = 0; n <= fs_->size(); ++n) {
            if (A_pos_.contains(y)) {
                memo_[x] = element(fs_->group(), {int64_t(n)});
                return *memo_[x];
            }
            y = fs_->apply_generator(0, 1, y);
        }
        throw no_return_error("forward orbit never meets A");
    }
    // greedy: least enumerated element moving x into A
    uint64_t limit = enum_->size().value_or(uint64_t(1) << 24);
    for (uint64_t n = 0; n < limit; ++n) {
        GroupElement g = enum_->at(n);
        if (A_pos_.contains(fs_->apply(g, x))) {
            memo_[x] = std::move(g);
            return *memo_[x];
        }
    }
    throw std::logic_error("sweep-out target not reachable within enumeration budget");
}

size_t FiniteAllocation::t_kappa(size_t x) const { return fs_->apply(kappa(x), x); }

std::vector<GroupElement> FiniteAllocation::cell(size_t x) const {
    if (x >= fs_->size()) throw std::out_of_range("point index out of range");
    std::vector<GroupElement> out;
    if (!A_pos_.contains(x)) return out; // cells vanish off A
    for (size_t y : fs_->orbit(x)) {
        if (!fs_->positive(y)) continue;
        if (t_kappa(y) == x) out.push_back(kappa(y));
    }
    std::sort(out.begin(), out.end(),
              [](const GroupElement& a, const GroupElement& b) { return norm_lex_less(a.v, b.v); });
    return out;
}

// ---------------------------------------------------------------------------
// transport and identities
// ---------------------------------------------------------------------------

std::vector<Rational> transport(const FiniteAllocation& alloc, const std::vector<Rational>& f) {
    const FiniteSystem& fs = alloc.system();
    require_nonneg(f, fs.size());
    std::vector<Rational> out(fs.size(), Rational(0));
    for (size_t y = 0; y < fs.size(); ++y) {
        if (!fs.positive(y)) continue;
        out[alloc.t_kappa(y)] += f[y];
    }
    return out;
}

AllocationIdentityReport verify_allocation_identity(const FiniteAllocation& alloc,
                                                    const std::vector<Rational>& f) {
    const FiniteSystem& fs = alloc.system();
    std::vector<Rational> fk = transport(alloc, f);
    AllocationIdentityReport rep;
    for (size_t x : alloc.target_positive().points()) rep.lhs += fs.mass(x) * fk[x];
    for (size_t y = 0; y < fs.size(); ++y)
        if (fs.positive(y)) rep.rhs += fs.mass(y) * f[y];
    rep.equal = rep.lhs == rep.rhs;
    return rep;
}

KacFunction kac_function(const FiniteAllocation& alloc) {
    const FiniteSystem& fs = alloc.system();
    KacFunction kf;
    kf.phi.assign(fs.size(), std::nullopt);
    for (size_t x : alloc.target_positive().points()) {
        std::vector<GroupElement> shape = alloc.cell(x);
        auto it = std::find(kf.shapes.begin(), kf.shapes.end(), shape);
        size_t idx;
        if (it == kf.shapes.end()) {
            idx = kf.shapes.size();
            kf.shapes.push_back(std::move(shape));
        } else {
            idx = size_t(it - kf.shapes.begin());
        }
        kf.phi[x] = idx;
    }
    return kf;
}

PartitionCheck verify_translate_partition(const FiniteAllocation& alloc, const KacFunction& kf) {
    const FiniteSystem& fs = alloc.system();
    std::vector<uint32_t> covered(fs.size(), 0);
    for (size_t n = 0; n < kf.shapes.size(); ++n) {
        for (const GroupElement& g : kf.shapes[n]) {
            GroupElement ginv = invert(fs.group(), g);
            for (size_t x : alloc.target_positive().points()) {
                if (kf.phi[x] != n) continue;
                covered[fs.apply(ginv, x)] += 1;
            }
        }
    }
    PartitionCheck pc;
    pc.disjoint = true;
    pc.exhaustive = true;
    for (size_t y = 0; y < fs.size(); ++y) {
        if (!fs.positive(y)) continue;
        if (covered[y] > 1) pc.disjoint = false;
        if (covered[y] == 0) pc.exhaustive = false;
    }
    return pc;
}

Rational kac_cell_integral(const FiniteAllocation& alloc, const KacFunction& kf) {
    const FiniteSystem& fs = alloc.system();
    Rational total(0);
    for (size_t x : alloc.target_positive().points())
        total += fs.mass(x) * Rational(int64_t(kf.shapes[*kf.phi[x]].size()));
    return total;
}

std::vector<TailBoundRow> tail_bound_check(const FiniteAllocation& alloc, const KacFunction& kf) {
    const FiniteSystem& fs = alloc.system();
    size_t max_size = 0;
    for (const auto& s : kf.shapes) max_size = std::max(max_size, s.size());
    std::vector<TailBoundRow> rows;
    for (uint64_t n = 1; n <= max_size; ++n) {
        TailBoundRow row;
        row.n = n;
        for (size_t x : alloc.target_positive().points())
            if (kf.shapes[*kf.phi[x]].size() >= n) row.measure += fs.mass(x);
        row.bound = Rational(1, int64_t(n));
        row.ok = !(row.bound < row.measure);
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// sampled systems
// ---------------------------------------------------------------------------

std::optional<uint64_t> return_time(const SampledSystem& ss, const SampledSet& A,
                                    const SamplePoint& x, uint64_t budget) {
    if (ss.group().rank != 1) throw std::invalid_argument("return time needs a Z-action");
    GroupElement step = element(ss.group(), {1});
    SamplePoint y = x;
    for (uint64_t n = 1; n <= budget; ++n) {
        y = ss.apply(step, y);
        if (ss.member(A, y)) return n;
    }
    return std::nullopt;
}

std::optional<SamplePoint> induced_map(const SampledSystem& ss, const SampledSet& A,
                                       const SamplePoint& x, uint64_t budget) {
    GroupElement step = element(ss.group(), {1});
    SamplePoint y = x;
    for (uint64_t n = 1; n <= budget; ++n) {
        y = ss.apply(step, y);
        if (ss.member(A, y)) return y;
    }
    return std::nullopt;
}

SampledAllocation::SampledAllocation(const SampledSystem& ss, SampledSet A)
    : ss_(&ss), A_(std::move(A)), enum_(ss.group()) {
    if (ss.measure(A_).is_zero() || ss.measure(A_).is_negative())
        throw precondition_error("target set must have positive measure");
}

std::optional<GroupElement> SampledAllocation::kappa(const SamplePoint& x, uint64_t budget) const {
    for (uint64_t n = 0; n < budget; ++n) {
        GroupElement g = enum_.at(n);
        if (ss_->member(A_, ss_->apply(g, x))) return g;
    }
    return std::nullopt;
}

SampledCell sampled_cell(const SampledAllocation& alloc, const SamplePoint& x, uint64_t budget,
                         int64_t max_radius) {
    const SampledSystem& ss = alloc.system();
    int dim = ss.group().rank;
    if (dim > 3) throw std::invalid_argument("sampled cells support d <= 3");
    if (!ss.member(alloc.target(), x))
        throw precondition_error("cells are computed at points of A");

    SampledCell result;
    for (int64_t r = 8; r <= max_radius; r *= 2) {
        result.radius_used = r;
        HittingSet w = hitting_set(ss, alloc.target(), x, r);
        VoronoiCells cells = voronoi_cells(w);
        if (!cells.bounded) continue;
        int64_t rho2 = 0;
        for (const IVec& v : cells.closed_cell) rho2 = std::max(rho2, norm2(v, dim));
        if (w.radius2 < 4 * rho2) continue; // scan not yet conclusive
        // candidates certified complete: B_kappa(x) subset closed cell
        std::vector<GroupElement> cell;
        for (const IVec& v : cells.closed_cell) {
            GroupElement g = to_element(ss.group(), v);
            SamplePoint y = ss.apply(invert(ss.group(), g), x);
            auto k = alloc.kappa(y, budget);
            if (!k) return result; // abstain: kappa budget exhausted
            if (*k == g) cell.push_back(g);
        }
        std::sort(cell.begin(), cell.end(), [](const GroupElement& a, const GroupElement& b) {
            return norm_lex_less(a.v, b.v);
        });
        result.cell = std::move(cell);
        result.complete = true;
        return result;
    }
    return result;
}

McIdentityReport verify_allocation_identity_mc(
    const SampledAllocation& alloc, const std::function<double(const SamplePoint&)>& f,
    uint64_t n_samples, uint64_t budget, McOptions opt) {
    const SampledSystem& ss = alloc.system();
    std::function<double(const SamplePoint&)> f_or_one =
        f ? f : std::function<double(const SamplePoint&)>([](const SamplePoint&) { return 1.0; });

    Integrand lhs = [&](const SamplePoint& x) -> std::optional<double> {
        if (!ss.member(alloc.target(), x)) return 0.0;
        SampledCell cell = sampled_cell(alloc, x, budget);
        if (!cell.complete) return std::nullopt;
        double total = 0.0;
        for (const GroupElement& g : cell.cell)
            total += f_or_one(ss.apply(invert(ss.group(), g), x));
        return total;
    };
    Integrand rhs = [&](const SamplePoint& x) -> std::optional<double> { return f_or_one(x); };

    McIdentityReport rep;
    McOptions lhs_opt = opt;
    McOptions rhs_opt = opt;
    rhs_opt.stream_base = opt.stream_base + (uint64_t(1) << 32);
    rep.lhs = mc_estimate(ss, lhs, n_samples, lhs_opt);
    rep.rhs = mc_estimate(ss, rhs, n_samples, rhs_opt);
    double gap = std::abs(rep.lhs.mean - rep.rhs.mean);
    rep.bands_overlap = gap <= 3.0 * (rep.lhs.std_error + rep.rhs.std_error);
    return rep;
}

} // namespace kaclab
