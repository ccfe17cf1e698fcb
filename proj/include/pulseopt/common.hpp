// common.hpp — shared aliases, error types, deterministic RNG, parallel map
#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pulseopt {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kImag{0.0, 1.0};

// Hardware sampling interval in ns (ibm Eagle-family backends).
inline constexpr double kDefaultDt = 2.2222;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidTruncationError : Error {
    using Error::Error;
};

struct ArityError : Error {
    using Error::Error;
};

struct ZeroDurationError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct NormalizationError : Error {
    using Error::Error;
};

struct DegenerateProjectionError : Error {
    using Error::Error;
};

// Step-size underflow during adaptive integration; carries the time at which
// the controller gave up.
struct StiffnessError : Error {
    StiffnessError(const std::string& msg, double t_fail) : Error(msg), t(t_fail) {}
    double t;
};

// Non-finite objective value; carries the offending parameter vector.
struct EvaluationError : Error {
    EvaluationError(const std::string& msg, std::vector<double> p)
        : Error(msg), params(std::move(p)) {}
    std::vector<double> params;
};

struct ConfigError : Error {
    using Error::Error;
};

// Deterministic RNG. All draws are derived from mt19937_64 with fixed
// arithmetic (no std::*_distribution, whose output is implementation-defined),
// so a seed reproduces the same stream on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    Complex cnormal() { return {normal(), normal()}; }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_{false};
    double spare_{0.0};
};

// Runs fn(i) for i in [0, n) on up to n_threads workers. Results must be
// written to preallocated slots indexed by i so the outcome is independent
// of scheduling order. The first exception thrown by any worker is rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         int n_threads = 0) {
    if (n == 0) return;
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    std::size_t workers = n_threads > 0 ? static_cast<std::size_t>(n_threads) : hw;
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load(std::memory_order_relaxed)) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline bool approx_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace pulseopt
