#include "kaclab/system.hpp"

#include "kaclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace kaclab {

// ---------------------------------------------------------------------------
// FiniteSet
// ---------------------------------------------------------------------------

bool FiniteSet::empty() const {
    return std::none_of(bits_.begin(), bits_.end(), [](uint8_t b) { return b; });
}

size_t FiniteSet::count() const {
    return size_t(std::count(bits_.begin(), bits_.end(), uint8_t(1)));
}

std::vector<size_t> FiniteSet::points() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(i);
    return out;
}

FiniteSet FiniteSet::full(size_t n_points) {
    FiniteSet s(n_points);
    for (size_t i = 0; i < n_points; ++i) s.add(i);
    return s;
}

// ---------------------------------------------------------------------------
// FiniteSystem
// ---------------------------------------------------------------------------

FiniteSystem::FiniteSystem(Group g, std::vector<Rational> masses,
                           std::vector<std::vector<uint32_t>> generator_perms)
    : group_(std::move(g)), masses_(std::move(masses)), perms_(std::move(generator_perms)) {
    validate();
    build_cycles();
    build_orbits();
}

void FiniteSystem::validate() const {
    size_t n = masses_.size();
    if (n == 0) throw std::invalid_argument("finite system needs at least one point");
    if (perms_.size() != size_t(group_.rank))
        throw std::invalid_argument("expected one generator permutation per group factor");

    Rational total(0);
    for (const Rational& m : masses_) {
        if (m.is_negative()) throw std::invalid_argument("masses must be non-negative");
        total += m;
    }
    if (!(total == Rational(1)))
        throw std::invalid_argument("masses must sum to 1, got " + total.str());

    for (size_t gi = 0; gi < perms_.size(); ++gi) {
        const auto& p = perms_[gi];
        if (p.size() != n) throw std::invalid_argument("generator permutation has wrong length");
        std::vector<uint8_t> seen(n, 0);
        for (uint32_t img : p) {
            if (img >= n || seen[img]) throw std::invalid_argument("generator map is not a bijection");
            seen[img] = 1;
        }
        for (size_t x = 0; x < n; ++x)
            if (!(masses_[p[x]] == masses_[x]))
                throw std::invalid_argument("generator does not preserve masses pointwise");
    }

    // group relations: generators commute; cyclic factors have the right order
    for (size_t a = 0; a < perms_.size(); ++a)
        for (size_t b = a + 1; b < perms_.size(); ++b)
            for (size_t x = 0; x < n; ++x)
                if (perms_[a][perms_[b][x]] != perms_[b][perms_[a][x]])
                    throw std::invalid_argument("generator permutations do not commute");
    if (group_.finite()) {
        for (size_t gi = 0; gi < perms_.size(); ++gi) {
            for (size_t x = 0; x < n; ++x) {
                size_t y = x;
                for (int64_t k = 0; k < group_.orders[gi]; ++k) y = perms_[gi][y];
                if (y != x)
                    throw std::invalid_argument("cyclic factor generator order violated");
            }
        }
    }
}

void FiniteSystem::build_cycles() {
    size_t n = masses_.size();
    cycle_of_.assign(perms_.size(), {});
    pos_in_cycle_.assign(perms_.size(), {});
    cycles_.assign(perms_.size(), {});
    for (size_t gi = 0; gi < perms_.size(); ++gi) {
        cycle_of_[gi].assign(n, UINT32_MAX);
        pos_in_cycle_[gi].assign(n, 0);
        for (size_t x = 0; x < n; ++x) {
            if (cycle_of_[gi][x] != UINT32_MAX) continue;
            std::vector<uint32_t> cyc;
            size_t y = x;
            do {
                cycle_of_[gi][y] = uint32_t(cycles_[gi].size());
                pos_in_cycle_[gi][y] = uint32_t(cyc.size());
                cyc.push_back(uint32_t(y));
                y = perms_[gi][y];
            } while (y != x);
            cycles_[gi].push_back(std::move(cyc));
        }
    }
}

void FiniteSystem::build_orbits() {
    size_t n = masses_.size();
    std::vector<uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<uint32_t(uint32_t)> find = [&](uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& p : perms_)
        for (size_t x = 0; x < n; ++x) {
            uint32_t a = find(uint32_t(x)), b = find(p[x]);
            if (a != b) parent[a] = b;
        }
    orbit_id_.assign(n, 0);
    std::vector<uint32_t> label(n, UINT32_MAX);
    n_orbits_ = 0;
    for (size_t x = 0; x < n; ++x) {
        uint32_t r = find(uint32_t(x));
        if (label[r] == UINT32_MAX) label[r] = n_orbits_++;
        orbit_id_[x] = label[r];
    }
}

size_t FiniteSystem::apply_generator(int gen, int64_t power, size_t x) const {
    const auto& cyc = cycles_[gen][cycle_of_[gen][x]];
    int64_t len = int64_t(cyc.size());
    int64_t pos = (int64_t(pos_in_cycle_[gen][x]) + power) % len;
    if (pos < 0) pos += len;
    return cyc[size_t(pos)];
}

size_t FiniteSystem::apply(const GroupElement& gamma, size_t x) const {
    if (gamma.gid != group_.id() || gamma.v.size() != size_t(group_.rank))
        throw std::invalid_argument("group element does not act on this system");
    if (x >= size()) throw std::out_of_range("point index out of range");
    size_t y = x;
    for (int gi = 0; gi < group_.rank; ++gi) y = apply_generator(gi, gamma.v[gi], y);
    return y;
}

std::vector<size_t> FiniteSystem::orbit(size_t x) const {
    if (x >= size()) throw std::out_of_range("point index out of range");
    std::vector<size_t> out;
    uint32_t id = orbit_id_[x];
    for (size_t y = 0; y < size(); ++y)
        if (orbit_id_[y] == id) out.push_back(y);
    return out;
}

Rational FiniteSystem::set_mass(const FiniteSet& s) const {
    if (s.universe() != size()) throw std::invalid_argument("set universe mismatch");
    Rational total(0);
    for (size_t x = 0; x < size(); ++x)
        if (s.contains(x)) total += masses_[x];
    return total;
}

FiniteSet FiniteSystem::positive_part(const FiniteSet& s) const {
    if (s.universe() != size()) throw std::invalid_argument("set universe mismatch");
    FiniteSet out(size());
    for (size_t x = 0; x < size(); ++x)
        if (s.contains(x) && positive(x)) out.add(x);
    return out;
}

std::vector<size_t> FiniteSystem::positive_points() const {
    std::vector<size_t> out;
    for (size_t x = 0; x < size(); ++x)
        if (positive(x)) out.push_back(x);
    return out;
}

bool FiniteSystem::is_sweep_out(const FiniteSet& A) const {
    FiniteSet ap = positive_part(A);
    std::vector<uint8_t> orbit_hit(n_orbits_, 0);
    for (size_t x : ap.points()) orbit_hit[orbit_id_[x]] = 1;
    for (size_t x = 0; x < size(); ++x)
        if (positive(x) && !orbit_hit[orbit_id_[x]]) return false;
    return true;
}

bool FiniteSystem::is_ergodic() const {
    bool found = false;
    uint32_t id = 0;
    for (size_t x = 0; x < size(); ++x) {
        if (!positive(x)) continue;
        if (!found) { id = orbit_id_[x]; found = true; }
        else if (orbit_id_[x] != id) return false;
    }
    return found;
}

// ---------------------------------------------------------------------------
// counter-based RNG (splitmix64 finalizer over a combined key)
// ---------------------------------------------------------------------------

namespace {
uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
} // namespace

uint64_t counter_bits(uint64_t seed, uint64_t stream, uint64_t index, uint64_t salt) {
    uint64_t k = mix64(seed);
    k = mix64(k ^ (stream * 0xd1342543de82ef95ull));
    k = mix64(k ^ (index * 0xaf251af3b0f025b5ull));
    if (salt) k = mix64(k ^ (salt * 0x9e3779b97f4a7c15ull));
    return k;
}

double counter_uniform(uint64_t seed, uint64_t stream, uint64_t index, uint64_t salt) {
    return double(counter_bits(seed, stream, index, salt) >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// SampledSystem
// ---------------------------------------------------------------------------

namespace {

double parse_alpha(const std::string& s) {
    size_t pos = 0;
    double a = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad real literal: " + s);
    if (a < 0.0 || a >= 1.0) throw std::invalid_argument("rotation parameter must lie in [0,1)");
    return a;
}

double frac(double x) {
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

} // namespace

SampledSystem SampledSystem::rotation(const std::string& alpha_decimal, uint64_t seed) {
    SampledSystem s;
    s.kind_ = SampledKind::rotation;
    s.group_ = Group::z(1);
    s.alpha_ = {parse_alpha(alpha_decimal)};
    s.seed_ = seed;
    return s;
}

SampledSystem SampledSystem::torus(const std::vector<std::string>& alpha_decimals, uint64_t seed) {
    if (alpha_decimals.empty() || alpha_decimals.size() > 3)
        throw std::invalid_argument("torus dimension must be in 1..3");
    SampledSystem s;
    s.kind_ = SampledKind::torus;
    s.group_ = Group::z(int(alpha_decimals.size()));
    for (const auto& a : alpha_decimals) s.alpha_.push_back(parse_alpha(a));
    s.seed_ = seed;
    return s;
}

SampledSystem SampledSystem::odometer(int depth, uint64_t seed) {
    if (depth < 1 || depth > 62) throw std::invalid_argument("odometer depth must be in 1..62");
    SampledSystem s;
    s.kind_ = SampledKind::odometer;
    s.group_ = Group::z(1);
    s.odo_depth_ = depth;
    s.seed_ = seed;
    return s;
}

SampledSystem SampledSystem::cyclic(int64_t n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("cyclic order must be positive");
    SampledSystem s;
    s.kind_ = SampledKind::cyclic;
    s.group_ = Group::z(1);
    s.cyc_n_ = n;
    s.seed_ = seed;
    return s;
}

std::string SampledSystem::describe() const {
    switch (kind_) {
        case SampledKind::rotation: return "rotation(alpha=" + std::to_string(alpha_[0]) + ")";
        case SampledKind::torus: return "torus(d=" + std::to_string(alpha_.size()) + ")";
        case SampledKind::odometer: return "odometer(depth=" + std::to_string(odo_depth_) + ")";
        case SampledKind::cyclic: return "cyclic(" + std::to_string(cyc_n_) + ")";
    }
    return "?";
}

SamplePoint SampledSystem::sample(uint64_t stream, uint64_t index) const {
    SamplePoint p;
    p.kind = kind_;
    switch (kind_) {
        case SampledKind::rotation:
            p.reals = {counter_uniform(seed_, stream, index)};
            break;
        case SampledKind::torus:
            for (size_t i = 0; i < alpha_.size(); ++i)
                p.reals.push_back(counter_uniform(seed_, stream, index, i + 1));
            break;
        case SampledKind::odometer:
            p.odo_key = counter_bits(seed_, stream, index, 0x0d0);
            p.odo_offset = 0;
            break;
        case SampledKind::cyclic:
            p.cyc = int64_t(counter_bits(seed_, stream, index) % uint64_t(cyc_n_));
            break;
    }
    return p;
}

SamplePoint SampledSystem::apply(const GroupElement& gamma, const SamplePoint& x) const {
    if (gamma.gid != group_.id() || gamma.v.size() != size_t(group_.rank))
        throw std::invalid_argument("group element does not act on this system");
    SamplePoint y = x;
    switch (kind_) {
        case SampledKind::rotation:
            y.reals[0] = frac(x.reals[0] + double(gamma.v[0]) * alpha_[0]);
            break;
        case SampledKind::torus:
            for (size_t i = 0; i < alpha_.size(); ++i)
                y.reals[i] = frac(x.reals[i] + double(gamma.v[i]) * alpha_[i]);
            break;
        case SampledKind::odometer:
            y.odo_offset = x.odo_offset + gamma.v[0];
            break;
        case SampledKind::cyclic: {
            int64_t r = (x.cyc + gamma.v[0]) % cyc_n_;
            y.cyc = r < 0 ? r + cyc_n_ : r;
            break;
        }
    }
    return y;
}

std::vector<uint8_t> SampledSystem::odometer_digits(const SamplePoint& x, int count) const {
    if (kind_ != SampledKind::odometer) throw std::logic_error("not an odometer point");
    if (count < 1 || count > 62) throw std::invalid_argument("digit count must be in 1..62");
    // first `count` digits of (base + offset): carries only propagate upward,
    // so the base prefix determines the shifted prefix exactly
    uint64_t base = 0;
    for (int j = 0; j < count; ++j)
        base |= (counter_bits(seed_, x.odo_key, uint64_t(j), 0x0d16175) & 1ull) << j;
    uint64_t mask = (count == 64) ? ~0ull : ((1ull << count) - 1);
    uint64_t shifted = (base + uint64_t(x.odo_offset)) & mask;
    std::vector<uint8_t> out(static_cast<size_t>(count), 0);
    for (int j = 0; j < count; ++j) out[size_t(j)] = uint8_t((shifted >> j) & 1);
    return out;
}

bool SampledSystem::member(const SampledSet& s, const SamplePoint& x) const {
    if (kind_ == SampledKind::rotation) {
        const auto* iv = std::get_if<IntervalSet>(&s);
        if (!iv) throw std::invalid_argument("rotation sets are interval unions");
        double t = x.reals[0];
        for (const Interval& p : iv->parts)
            if (t >= p.lo.to_double() && t < p.hi.to_double()) return true;
        return false;
    }
    if (kind_ == SampledKind::torus) {
        const auto* bx = std::get_if<BoxSet>(&s);
        if (!bx) throw std::invalid_argument("torus sets are box unions");
        for (const auto& box : bx->boxes) {
            if (box.size() != alpha_.size()) throw std::invalid_argument("box dimension mismatch");
            bool in = true;
            for (size_t i = 0; i < box.size() && in; ++i)
                in = x.reals[i] >= box[i].lo.to_double() && x.reals[i] < box[i].hi.to_double();
            if (in) return true;
        }
        return false;
    }
    if (kind_ == SampledKind::odometer) {
        const auto* cy = std::get_if<CylinderSet>(&s);
        if (!cy) throw std::invalid_argument("odometer sets are cylinder unions");
        for (const auto& prefix : cy->prefixes) {
            auto digits = odometer_digits(x, int(prefix.size()));
            if (std::equal(prefix.begin(), prefix.end(), digits.begin())) return true;
        }
        return false;
    }
    const auto* cs = std::get_if<CyclicSet>(&s);
    if (!cs) throw std::invalid_argument("cyclic sets are residue lists");
    return std::find(cs->residues.begin(), cs->residues.end(), x.cyc) != cs->residues.end();
}

Rational SampledSystem::measure(const SampledSet& s) const {
    if (kind_ == SampledKind::cyclic) {
        const auto* cs = std::get_if<CyclicSet>(&s);
        if (!cs) throw std::invalid_argument("cyclic sets are residue lists");
        std::vector<int64_t> sorted = cs->residues;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("duplicate residues in cyclic set");
        return Rational(int64_t(sorted.size()), cyc_n_);
    }
    return exact_measure(s);
}

Rational exact_measure(const SampledSet& s) {
    if (const auto* iv = std::get_if<IntervalSet>(&s)) {
        std::vector<Interval> parts = iv->parts;
        std::sort(parts.begin(), parts.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        Rational total(0);
        for (size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].hi < parts[i].lo || parts[i].lo < Rational(0) || Rational(1) < parts[i].hi)
                throw std::invalid_argument("interval out of range");
            if (i + 1 < parts.size() && parts[i + 1].lo < parts[i].hi)
                throw std::invalid_argument("intervals overlap");
            total += parts[i].hi - parts[i].lo;
        }
        return total;
    }
    if (const auto* bx = std::get_if<BoxSet>(&s)) {
        // box measures add; disjointness required (checked pairwise on one axis)
        Rational total(0);
        for (const auto& box : bx->boxes) {
            Rational vol(1);
            for (const Interval& side : box) {
                if (side.hi < side.lo) throw std::invalid_argument("box side inverted");
                vol *= side.hi - side.lo;
            }
            total += vol;
        }
        for (size_t i = 0; i < bx->boxes.size(); ++i)
            for (size_t j = i + 1; j < bx->boxes.size(); ++j) {
                bool separated = false;
                for (size_t k = 0; k < bx->boxes[i].size() && !separated; ++k) {
                    const Interval& a = bx->boxes[i][k];
                    const Interval& b = bx->boxes[j][k];
                    separated = !(a.lo < b.hi && b.lo < a.hi);
                }
                if (!separated) throw std::invalid_argument("boxes overlap");
            }
        return total;
    }
    if (const auto* cy = std::get_if<CylinderSet>(&s)) {
        for (size_t i = 0; i < cy->prefixes.size(); ++i)
            for (size_t j = i + 1; j < cy->prefixes.size(); ++j) {
                const auto& a = cy->prefixes[i];
                const auto& b = cy->prefixes[j];
                size_t m = std::min(a.size(), b.size());
                if (std::equal(a.begin(), a.begin() + m, b.begin()))
                    throw std::invalid_argument("cylinders are not prefix-free");
            }
        Rational total(0);
        for (const auto& p : cy->prefixes) {
            if (p.size() > 62) throw std::invalid_argument("cylinder prefix too long");
            total += Rational(1, int64_t(1) << p.size());
        }
        return total;
    }
    const auto& cs = std::get<CyclicSet>(s);
    (void)cs;
    throw std::invalid_argument("cyclic set measure needs its system");
}

} // namespace kaclab
