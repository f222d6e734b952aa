#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <vector>

#include "gfb/vector.hpp"

namespace gfb {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One row per completed iteration. `iter` counts iterations performed
/// (1-based). `residual` is the solver's fixed-point or step residual
/// measured at the start of that iteration; `distance` is ||z - z_ref||
/// after it when a reference point is configured, NaN otherwise.
/// `time_ms` is cumulative solver time, excluding diagnostics.
struct IterateRecord {
    std::size_t iter = 0;
    double objective = kNaN;
    double residual = kNaN;
    double distance = kNaN;
    double time_ms = 0.0;
};

struct IterateLog {
    std::vector<IterateRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    const IterateRecord& back() const { return records.back(); }
};

struct SolveResult {
    Vector x;
    IterateLog log;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Accumulates wall time over explicitly bracketed sections.
class Stopwatch {
public:
    void start() { begin_ = Clock::now(); }
    void stop() { total_ += std::chrono::duration<double, std::milli>(Clock::now() - begin_).count(); }
    double elapsed_ms() const { return total_; }

private:
    using Clock = std::chrono::steady_clock;
    Clock::time_point begin_{};
    double total_ = 0.0;
};

}  // namespace gfb
