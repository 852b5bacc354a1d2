#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Reduction kernels used by the metric inner loops. Each operation has a
// scalar reference implementation and an AVX2 variant; the active backend is
// picked once at startup from CPUID and can be forced for testing, either via
// set_backend() or the PUMPSCAN_KERNELS environment variable ("scalar",
// "avx2", "auto").
//
// SIMD variants reassociate floating-point sums, so results may differ from
// the scalar reference in the last bits; all consumers tolerate 1e-9 relative
// error. For a fixed backend, results are bit-for-bit reproducible.

namespace pumpscan::kernels {

enum class Backend : std::uint8_t { Scalar, Avx2 };

// Backend currently used by the dispatch table.
Backend active_backend() noexcept;
// True if the CPU supports the given backend.
bool backend_supported(Backend backend) noexcept;
// Forces a backend; throws std::invalid_argument if unsupported on this CPU.
void set_backend(Backend backend);
// Re-applies the default policy (env override, else best supported).
void reset_backend();

std::string_view backend_name(Backend backend) noexcept;

// sum of x
double sum(std::span<const double> x) noexcept;
// dot product of p and q; sizes must match
double dot(std::span<const double> p, std::span<const double> q) noexcept;
// minimum / maximum; undefined for empty input (callers guard)
double min(std::span<const double> x) noexcept;
double max(std::span<const double> x) noexcept;
// sum of x[i] where flag[i] == want; sizes must match
double masked_sum(std::span<const double> x, std::span<const std::uint8_t> flag,
                  std::uint8_t want) noexcept;

// Scalar reference implementations, always available (used by equivalence
// tests and as the dispatch fallback).
namespace scalar {
double sum(std::span<const double> x) noexcept;
double dot(std::span<const double> p, std::span<const double> q) noexcept;
double min(std::span<const double> x) noexcept;
double max(std::span<const double> x) noexcept;
double masked_sum(std::span<const double> x, std::span<const std::uint8_t> flag,
                  std::uint8_t want) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PUMPSCAN_HAVE_AVX2_KERNELS 1
namespace avx2 {
double sum(std::span<const double> x) noexcept;
double dot(std::span<const double> p, std::span<const double> q) noexcept;
double min(std::span<const double> x) noexcept;
double max(std::span<const double> x) noexcept;
double masked_sum(std::span<const double> x, std::span<const std::uint8_t> flag,
                  std::uint8_t want) noexcept;
}  // namespace avx2
#endif

}  // namespace pumpscan::kernels
