// Separate binary: intercepts allocations to record the largest single
// block requested while a low-rank fit runs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <new>

#include "epprobit/ep_dense.hpp"
#include "epprobit/ep_lowrank.hpp"

namespace {
std::atomic<bool> tracking{false};
std::atomic<std::size_t> largest{0};

void note(std::size_t size) {
    if (!tracking.load(std::memory_order_relaxed)) return;
    std::size_t cur = largest.load();
    while (size > cur && !largest.compare_exchange_weak(cur, size)) {
    }
}
}  // namespace

void* operator new(std::size_t size) {
    note(size);
    if (void* p = std::malloc(size == 0 ? 1 : size)) return p;
    throw std::bad_alloc();
}
void operator delete(void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }

// Eigen allocates with std::malloc directly. The test is linked with
// -Wl,--wrap=malloc so those calls, including the ones inside the static
// library, land here.
extern "C" void* __real_malloc(std::size_t size);
extern "C" void* __wrap_malloc(std::size_t size) {
    note(size);
    return __real_malloc(size);
}

using namespace epprobit;

TEST_CASE("low-rank fit allocates no p x p block") {
    const PriorConfig prior{25.0};
    const Eigen::Index n = 30;
    const Eigen::Index p = 500;
    const Dataset data = simulate(SimConfig{n, p, 3, BetaGen::Prior}, prior).data;
    const std::size_t pp_bytes = static_cast<std::size_t>(p * p) * sizeof(double);

    largest = 0;
    tracking = true;
    const LowRankFit fit = ep_lowrank_fit(data, prior);
    tracking = false;
    MESSAGE("largest allocation during low-rank fit: " << largest.load() << " bytes");
    CHECK(fit.report.converged);
    CHECK(largest.load() <= static_cast<std::size_t>(p * n) * sizeof(double));
    CHECK(largest.load() < pp_bytes);

    // The tracker does see p x p blocks: the dense routine allocates one.
    largest = 0;
    tracking = true;
    ep_dense_fit(data, prior, EPConfig{1e-5, 1, 1.0});
    tracking = false;
    CHECK(largest.load() >= pp_bytes);
}
