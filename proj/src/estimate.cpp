#include "kaclab/estimate.hpp"

#include "kaclab/errors.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace kaclab {

namespace {

struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    uint64_t n_eval = 0;
    uint64_t n_abstained = 0;
};

ChunkSums run_chunk(const SampledSystem& sys, const Integrand& f, uint64_t stream,
                    uint64_t count) {
    ChunkSums s;
    for (uint64_t i = 0; i < count; ++i) {
        SamplePoint x = sys.sample(stream, i);
        std::optional<double> v = f(x);
        if (!v) {
            ++s.n_abstained;
            continue;
        }
        s.sum += *v;
        s.sum_sq += *v * *v;
        ++s.n_eval;
    }
    return s;
}

} // namespace

Estimate mc_estimate(const SampledSystem& sys, const Integrand& f, uint64_t n, McOptions opt) {
    if (n < 2) throw std::invalid_argument("mc_estimate needs n >= 2");
    if (opt.chunk_size == 0) throw std::invalid_argument("chunk_size must be positive");

    uint64_t n_chunks = (n + opt.chunk_size - 1) / opt.chunk_size;
    std::vector<ChunkSums> parts(n_chunks);

    auto chunk_count = [&](uint64_t c) {
        uint64_t begin = c * opt.chunk_size;
        return std::min(opt.chunk_size, n - begin);
    };

    int threads = std::max(1, opt.threads);
    if (threads == 1 || n_chunks == 1) {
        for (uint64_t c = 0; c < n_chunks; ++c)
            parts[c] = run_chunk(sys, f, opt.stream_base + c, chunk_count(c));
    } else {
        std::vector<std::thread> pool;
        std::atomic<uint64_t> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
                    parts[c] = run_chunk(sys, f, opt.stream_base + c, chunk_count(c));
            });
        for (auto& th : pool) th.join();
    }

    // reduce in chunk order so parallel evaluation cannot change the result
    double sum = 0.0, sum_sq = 0.0;
    uint64_t n_eval = 0, n_abstained = 0;
    for (const ChunkSums& p : parts) {
        sum += p.sum;
        sum_sq += p.sum_sq;
        n_eval += p.n_eval;
        n_abstained += p.n_abstained;
    }

    Estimate e;
    e.n_samples = n;
    e.n_abstained = n_abstained;
    if (double(n_abstained) > opt.abstain_threshold * double(n))
        throw abstention_error("budget-exceeded fraction " + std::to_string(e.abstain_fraction()) +
                               " above threshold " + std::to_string(opt.abstain_threshold));
    if (n_eval < 2) throw abstention_error("too few evaluated samples");

    e.mean = sum / double(n_eval);
    double var = (sum_sq - sum * sum / double(n_eval)) / double(n_eval - 1);
    if (var < 0.0) var = 0.0;
    e.std_error = std::sqrt(var / double(n_eval));
    e.ci95_low = e.mean - 1.96 * e.std_error;
    e.ci95_high = e.mean + 1.96 * e.std_error;
    return e;
}

} // namespace kaclab
