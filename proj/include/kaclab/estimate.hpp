#pragma once

#include "kaclab/system.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace kaclab {

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    uint64_t n_samples = 0;
    uint64_t n_abstained = 0;

    double abstain_fraction() const {
        return n_samples ? double(n_abstained) / double(n_samples) : 0.0;
    }
};

/// Integrand over sampled points; nullopt signals a budget-exceeded evaluation.
using Integrand = std::function<std::optional<double>(const SamplePoint&)>;

struct McOptions {
    uint64_t chunk_size = 1u << 16;
    double abstain_threshold = 0.0; // abstain fraction above this aborts the estimate
    int threads = 1;
    uint64_t stream_base = 0;
};

/// Monte Carlo mean of `f` over the invariant measure, n i.i.d. draws.
/// Chunked accumulation with fixed chunk boundaries: the result is
/// bit-identical for any thread count and replayable from (seed, n).
/// Throws abstention_error when the budget-exceeded fraction passes the
/// configured threshold.
Estimate mc_estimate(const SampledSystem& sys, const Integrand& f, uint64_t n,
                     McOptions opt = {});

} // namespace kaclab
