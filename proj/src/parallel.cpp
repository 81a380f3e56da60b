#include "kinetic/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace kinetic {

namespace {
int g_threads = 0;

int default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

constexpr std::size_t kBlock = 4096;
} // namespace

int thread_count() {
    return g_threads > 0 ? g_threads : default_threads();
}

void set_thread_count(int n) {
    g_threads = n > 0 ? n : 0;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    const int nt = std::min<std::size_t>(thread_count(), nblocks);
    if (nt <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b)
            body(b * kBlock, std::min(n, (b + 1) * kBlock));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= nblocks) break;
            body(b * kBlock, std::min(n, (b + 1) * kBlock));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

double parallel_reduce(std::size_t n, const std::function<double(std::size_t, std::size_t)>& block_sum) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        partial[b / kBlock] = block_sum(b, e);
    });
    // Kahan-compensated combine in fixed block order.
    double s = 0.0, c = 0.0;
    for (double p : partial) {
        double y = p - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

} // namespace kinetic
