#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace ekfrac {

/// Counter-based uniform generator built on the SplitMix64 finalizer.
///
/// Stream keys are derived from (seed, stream); draw i of a stream is
/// mix(key + (i + 1) * golden), so any draw can be produced independently of
/// the others and results do not depend on how work is split across threads.
/// Documented streams: 0 is used by Density::sample and for x1 in Monte Carlo
/// transforms, 1 for x2.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t bits(std::uint64_t index) const;
    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform(std::uint64_t index) const;

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t key_;
};

/// Worker count: EKFRAC_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to
/// default_thread_count() threads, giving each worker at least grain items.
/// The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 1024);

}  // namespace ekfrac
