#pragma once

// Data-parallel sweep kernels. Each sweep evaluates a pure per-index
// function and reduces by (value, index) lexicographic minimum, which is
// order-independent: the OpenMP path must reproduce the serial reference
// bit-for-bit. The serial path is kept as the reference implementation for
// testing and as the fallback when OpenMP is unavailable.

#include <cstdint>
#include <limits>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bumpforge {

struct ExecPolicy {
  bool parallel = true;
};

struct MinSweepResult {
  double value = std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
  bool empty() const { return index < 0; }
};

namespace kerneldetail {
inline void combine(MinSweepResult& best, const MinSweepResult& cand) {
  if (cand.index < 0) return;
  if (cand.value < best.value || (cand.value == best.value && cand.index < best.index) ||
      best.index < 0)
    best = cand;
}
}  // namespace kerneldetail

// f(i) -> double; NaN results are treated as +inf misses (skipped).
template <typename F>
MinSweepResult min_sweep_serial(std::int64_t n, const F& f) {
  MinSweepResult best;
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = f(i);
    if (v != v) continue;
    kerneldetail::combine(best, MinSweepResult{v, i});
  }
  return best;
}

template <typename F>
MinSweepResult min_sweep(std::int64_t n, const F& f, ExecPolicy exec = {}) {
#ifdef _OPENMP
  if (exec.parallel && n > 256) {
    MinSweepResult best;
#pragma omp parallel
    {
      MinSweepResult local;
#pragma omp for schedule(static) nowait
      for (std::int64_t i = 0; i < n; ++i) {
        const double v = f(i);
        if (v != v) continue;
        kerneldetail::combine(local, MinSweepResult{v, i});
      }
#pragma omp critical(bumpforge_min_sweep)
      kerneldetail::combine(best, local);
    }
    return best;
  }
#endif
  (void)exec;
  return min_sweep_serial(n, f);
}

// Count of indices with f(i) true, plus the smallest failing index (or -1).
struct CountSweepResult {
  std::int64_t hits = 0;
  std::int64_t first_hit = -1;
};

template <typename F>
CountSweepResult count_sweep_serial(std::int64_t n, const F& f) {
  CountSweepResult r;
  for (std::int64_t i = 0; i < n; ++i) {
    if (f(i)) {
      ++r.hits;
      if (r.first_hit < 0) r.first_hit = i;
    }
  }
  return r;
}

template <typename F>
CountSweepResult count_sweep(std::int64_t n, const F& f, ExecPolicy exec = {}) {
#ifdef _OPENMP
  if (exec.parallel && n > 256) {
    CountSweepResult r;
    std::int64_t hits = 0;
    std::int64_t first = n;
#pragma omp parallel for schedule(static) reduction(+ : hits) reduction(min : first)
    for (std::int64_t i = 0; i < n; ++i) {
      if (f(i)) {
        ++hits;
        if (i < first) first = i;
      }
    }
    r.hits = hits;
    r.first_hit = first == n ? -1 : first;
    return r;
  }
#endif
  (void)exec;
  return count_sweep_serial(n, f);
}

}  // namespace bumpforge
