#include "pumpscan/kernels.hpp"

namespace pumpscan::kernels::scalar {

double sum(std::span<const double> x) noexcept {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
}

double dot(std::span<const double> p, std::span<const double> q) noexcept {
    double acc = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) acc += p[i] * q[i];
    return acc;
}

double min(std::span<const double> x) noexcept {
    double best = x[0];
    for (double v : x.subspan(1)) {
        if (v < best) best = v;
    }
    return best;
}

double max(std::span<const double> x) noexcept {
    double best = x[0];
    for (double v : x.subspan(1)) {
        if (v > best) best = v;
    }
    return best;
}

double masked_sum(std::span<const double> x, std::span<const std::uint8_t> flag,
                  std::uint8_t want) noexcept {
    double acc = 0.0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (flag[i] == want) acc += x[i];
    }
    return acc;
}

}  // namespace pumpscan::kernels::scalar
