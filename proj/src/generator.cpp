#include "kaclab/generator.hpp"

#include "kaclab/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace kaclab {

FiniteSweepOutPartition sweep_out_partition(const FiniteSystem& fs, const Rational& eps) {
    if (!(Rational(0) < eps)) throw std::invalid_argument("epsilon must be positive");
    if (!fs.is_ergodic())
        throw precondition_error(
            "sweep-out partition of a non-ergodic finite system is unsupported "
            "(needs conditional measures)");
    FiniteSweepOutPartition out;
    out.residual = Rational(0);
    if (!(eps < Rational(1))) {
        // degenerate: one piece carries everything
        FiniteSet piece(fs.size());
        for (size_t x : fs.positive_points()) piece.add(x);
        out.pieces.push_back(std::move(piece));
        return out;
    }
    FiniteSet piece(fs.size());
    Rational acc(0);
    for (size_t x : fs.positive_points()) {
        if (eps < fs.mass(x))
            throw precondition_error("point " + std::to_string(x) +
                                     " has mass above epsilon; no such partition exists");
        if (eps < acc + fs.mass(x) && !piece.empty()) {
            out.pieces.push_back(piece);
            piece = FiniteSet(fs.size());
            acc = Rational(0);
        }
        piece.add(x);
        acc += fs.mass(x);
    }
    if (!piece.empty()) out.pieces.push_back(std::move(piece));
    return out;
}

namespace {

bool is_power_of_two(int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

// decompose a dyadic interval [lo, hi) into maximal aligned dyadic blocks and
// emit each block as a cylinder prefix (digit i carries weight 2^-(i+1))
std::vector<std::vector<uint8_t>> dyadic_cylinders(Rational lo, const Rational& hi) {
    std::vector<std::vector<uint8_t>> prefixes;
    while (lo < hi) {
        int k = 1;
        auto block_fits = [&](int depth) {
            Rational block(1, int64_t(1) << depth);
            // alignment: lo must be a multiple of the block length
            return (depth >= 1) && ((int64_t(1) << depth) % lo.den() == 0) &&
                   !(hi < lo + block);
        };
        while (k <= 62 && !block_fits(k)) ++k;
        if (k > 62) throw std::invalid_argument("interval is not dyadic");
        int64_t j = lo.num() * ((int64_t(1) << k) / lo.den());
        std::vector<uint8_t> prefix(size_t(k), 0);
        for (int i = 0; i < k; ++i) prefix[size_t(i)] = uint8_t((j >> (k - 1 - i)) & 1);
        prefixes.push_back(std::move(prefix));
        lo += Rational(1, int64_t(1) << k);
    }
    return prefixes;
}

} // namespace

SampledSweepOutPartition sweep_out_partition(const SampledSystem& ss, const Rational& eps,
                                             int n_max) {
    if (ss.kind() != SampledKind::rotation && ss.kind() != SampledKind::odometer)
        throw std::invalid_argument("quantile sweep-out pieces need a rotation or odometer");
    if (!(Rational(0) < eps) || Rational(1) < eps)
        throw std::invalid_argument("epsilon must lie in (0, 1]");
    if (n_max < 1 || n_max > 61)
        throw std::invalid_argument("n_max must lie in 1..61 for exact dyadic arithmetic");
    if (ss.kind() == SampledKind::odometer && !is_power_of_two(eps.den()))
        throw std::invalid_argument("odometer pieces need a dyadic epsilon");

    // ergodic specialization: the conditional measure is mu itself, so the
    // quantile functions are plain uniform quantiles f_n = sum_{k<=n} eps/2^k
    SampledSweepOutPartition out;
    Rational f_prev(0);
    Rational tail = eps;
    for (int n = 1; n <= n_max; ++n) {
        Rational len = eps / Rational(int64_t(1) << n);
        Rational f_next = f_prev + len;
        if (ss.kind() == SampledKind::rotation) {
            IntervalSet piece;
            piece.parts.push_back(Interval{f_prev, f_next});
            out.pieces.push_back(SampledSet(std::move(piece)));
        } else {
            CylinderSet piece;
            piece.prefixes = dyadic_cylinders(f_prev, f_next);
            out.pieces.push_back(SampledSet(std::move(piece)));
        }
        out.piece_measures.push_back(len);
        tail -= len;
        f_prev = f_next;
    }
    out.residual = tail; // = eps * 2^-n_max, the unconstructed tail of the family
    return out;
}

bool Fingerprint::operator<(const Fingerprint& o) const {
    auto cmp = [](const std::pair<size_t, GroupElement>& a,
                  const std::pair<size_t, GroupElement>& b) {
        if (a.first != b.first) return a.first < b.first;
        return norm_lex_less(a.second.v, b.second.v);
    };
    return std::lexicographical_compare(pairs.begin(), pairs.end(), o.pairs.begin(),
                                        o.pairs.end(), cmp);
}

std::string Fingerprint::str() const {
    std::string s = "{";
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (i) s += ",";
        s += "(" + std::to_string(pairs[i].first + 1) + "," + to_string(pairs[i].second) + ")";
    }
    return s + "}";
}

namespace {

void check_generator_inputs(const FiniteSystem& fs,
                            const std::vector<const FiniteAllocation*>& allocations,
                            const std::vector<FiniteSet>& sets) {
    if (allocations.size() != sets.size())
        throw std::invalid_argument("one target set E_n per allocation");
    for (const auto* a : allocations) {
        if (!a || &a->system() != &fs)
            throw std::invalid_argument("allocations must live on the given system");
    }
    // the A_n must be pairwise disjoint mod mu
    for (size_t i = 0; i < allocations.size(); ++i)
        for (size_t j = i + 1; j < allocations.size(); ++j)
            for (size_t x : allocations[i]->target_positive().points())
                if (allocations[j]->target_positive().contains(x))
                    throw precondition_error("allocation targets are not pairwise disjoint");
    for (const FiniteSet& e : sets)
        if (e.universe() != fs.size()) throw std::invalid_argument("set universe mismatch");
}

} // namespace

Fingerprint fingerprint(const FiniteSystem& fs,
                        const std::vector<const FiniteAllocation*>& allocations,
                        const std::vector<FiniteSet>& sets, size_t x) {
    check_generator_inputs(fs, allocations, sets);
    Fingerprint fp;
    for (size_t n = 0; n < allocations.size(); ++n) {
        for (const GroupElement& g : allocations[n]->cell(x)) {
            size_t y = fs.apply(invert(fs.group(), g), x);
            if (sets[n].contains(y) && fs.positive(y)) fp.pairs.emplace_back(n, g);
        }
    }
    std::sort(fp.pairs.begin(), fp.pairs.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return norm_lex_less(a.second.v, b.second.v);
              });
    return fp;
}

GeneratorPartition generator_partition(const FiniteSystem& fs,
                                       const std::vector<const FiniteAllocation*>& allocations,
                                       const std::vector<FiniteSet>& sets) {
    GeneratorPartition gp;
    for (size_t x : fs.positive_points()) {
        Fingerprint fp = fingerprint(fs, allocations, sets, x);
        auto it = gp.blocks.emplace(std::move(fp), FiniteSet(fs.size())).first;
        it->second.add(x);
    }
    return gp;
}

ReconstructionReport reconstruct_and_verify(const FiniteSystem& fs, const GeneratorPartition& gp,
                                            const std::vector<const FiniteAllocation*>& allocations,
                                            const std::vector<FiniteSet>& sets, size_t n) {
    check_generator_inputs(fs, allocations, sets);
    if (n >= sets.size()) throw std::out_of_range("target index out of range");

    // E_n-hat = union over gamma and blocks P_D with (n, gamma) in D of T_gamma^{-1}(P_D)
    ReconstructionReport rep;
    rep.n = n;
    rep.reconstructed = FiniteSet(fs.size());
    for (const auto& [fp, block] : gp.blocks) {
        for (const auto& [idx, g] : fp.pairs) {
            if (idx != n) continue;
            GroupElement ginv = invert(fs.group(), g);
            for (size_t x : block.points()) rep.reconstructed.add(fs.apply(ginv, x));
        }
    }
    rep.symmetric_diff_mass = Rational(0);
    for (size_t y = 0; y < fs.size(); ++y) {
        if (!fs.positive(y)) continue;
        bool in_e = sets[n].contains(y);
        bool in_hat = rep.reconstructed.contains(y);
        if (in_e != in_hat) rep.symmetric_diff_mass += fs.mass(y);
    }
    rep.equal_mod_mu = rep.symmetric_diff_mass.is_zero();
    return rep;
}

OrbitCensus finite_orbit_census(const FiniteSystem& fs) {
    OrbitCensus census;
    census.rows.resize(fs.orbit_count());
    for (uint32_t i = 0; i < fs.orbit_count(); ++i) census.rows[i].orbit = i;
    for (size_t x = 0; x < fs.size(); ++x) {
        OrbitCensusRow& row = census.rows[fs.orbit_id(x)];
        row.size += 1;
        row.mass += fs.mass(x);
    }
    return census;
}

} // namespace kaclab
