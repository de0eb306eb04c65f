#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace bbm {

// Shortest round-trip decimal form of a double ("%.17g" with trailing-zero
// trimming left to the consumer; 17 significant digits always round-trip).
std::string fmt17(double v);

// n equally spaced points from a to b inclusive (n >= 2), or {a} for n == 1.
std::vector<double> linspace(double a, double b, std::size_t n);

// n Chebyshev–Lobatto points on [a, b], sorted ascending, endpoints exact.
// These cluster near the ends, which suits interpolation of solver output.
std::vector<double> chebyshev_lobatto(double a, double b, std::size_t n);

// Run body(i) for i in [0, n) on up to `jobs` threads.  jobs <= 1 runs
// inline.  Exceptions from workers are rethrown (first one wins).  Work is
// pre-partitioned into contiguous blocks so results written into
// preallocated slots are deterministic regardless of jobs.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

// Least-squares slope of y against x (both same length >= 2).
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y);

// Binary search: largest index i with knots[i] <= v, clamped to
// [0, knots.size()-2] so i always names a valid cell [knots[i], knots[i+1]].
std::size_t find_cell(const std::vector<double>& knots, double v);

} // namespace bbm
