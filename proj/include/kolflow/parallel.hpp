#pragma once

namespace kolflow::parallel {

/// Worker threads used by the OpenMP kernels. Results are bit-identical for
/// any count: parallel loops write disjoint slots and every reduction runs in
/// fixed serial order.
int max_threads();
void set_max_threads(int n);

/// RAII: pin the thread count for a scope (tests pit 1 vs N bitwise).
struct ThreadGuard {
    explicit ThreadGuard(int n) : saved_(max_threads()) { set_max_threads(n); }
    ~ThreadGuard() { set_max_threads(saved_); }
    ThreadGuard(const ThreadGuard&) = delete;
    ThreadGuard& operator=(const ThreadGuard&) = delete;

private:
    int saved_;
};

}  // namespace kolflow::parallel
