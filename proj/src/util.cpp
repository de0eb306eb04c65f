#include "bbm/util.hpp"

#include "bbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

namespace bbm {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(a);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = static_cast<double>(i) / static_cast<double>(n - 1);
        out.push_back(a + (b - a) * s);
    }
    if (n >= 2) out.back() = b;
    return out;
}

std::vector<double> chebyshev_lobatto(double a, double b, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(0.5 * (a + b));
        return out;
    }
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n; ++i) {
        // cos runs 1 -> -1; flip so output ascends.
        double c = std::cos(pi * static_cast<double>(n - 1 - i) / static_cast<double>(n - 1));
        out.push_back(0.5 * (a + b) + 0.5 * (b - a) * c);
    }
    out.front() = a;
    out.back() = b;
    return out;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned workers = std::min<unsigned>(jobs == 0 ? 1 : jobs, hw);
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex err_mtx;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    // Contiguous blocks: worker w handles [w*chunk, min(n, (w+1)*chunk)).
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi]() {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mtx);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DegenerateFit("least-squares slope needs >= 2 matched points");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw DegenerateFit("all abscissae coincide in slope fit");
    return (n * sxy - sx * sy) / denom;
}

std::size_t find_cell(const std::vector<double>& knots, double v) {
    if (knots.size() < 2) throw GridMismatch("find_cell needs >= 2 knots");
    auto it = std::upper_bound(knots.begin(), knots.end(), v);
    if (it == knots.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
    return std::min(i, knots.size() - 2);
}

} // namespace bbm
