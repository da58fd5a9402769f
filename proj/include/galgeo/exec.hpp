#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace galgeo {

// Work-sharing policy for the long sweeps. threads == 0 means "hardware
// default". progress, when set, receives fractions in [0,1] at coarse
// intervals from whichever worker owns chunk 0.
struct ExecPolicy {
  unsigned threads = 0;
  std::function<void(double)> progress;

  unsigned resolved_threads() const {
    if (threads) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
  }
};

// Splits [0,total) into one contiguous range per worker and runs
// fn(chunk_index, begin, end) concurrently. Chunk boundaries depend only on
// total and the thread count; callers must merge chunk results with
// order-independent reducers so verdicts do not depend on scheduling.
template <class Fn>
void parallel_ranges(uint64_t total, const ExecPolicy& policy, Fn&& fn) {
  if (total == 0) return;
  uint64_t nchunks = policy.resolved_threads();
  if (nchunks > total) nchunks = total;
  if (nchunks <= 1) {
    fn(0u, uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nchunks);
  std::exception_ptr first_error;
  std::mutex error_mu;
  uint64_t per = total / nchunks, rem = total % nchunks, begin = 0;
  for (uint64_t c = 0; c < nchunks; ++c) {
    uint64_t len = per + (c < rem ? 1 : 0);
    pool.emplace_back([&, c, begin, len] {
      try {
        fn(unsigned(c), begin, begin + len);
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
    begin += len;
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Deterministic PRNG for seeded searches; the sequence is part of the
// reproducibility contract, so do not swap the algorithm.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t bound) { return bound ? next() % bound : 0; }
};

}  // namespace galgeo
