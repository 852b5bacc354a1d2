#include "pumpscan/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace pumpscan::kernels {

namespace {

struct Vtable {
    double (*sum)(std::span<const double>) noexcept;
    double (*dot)(std::span<const double>, std::span<const double>) noexcept;
    double (*min)(std::span<const double>) noexcept;
    double (*max)(std::span<const double>) noexcept;
    double (*masked_sum)(std::span<const double>, std::span<const std::uint8_t>,
                         std::uint8_t) noexcept;
};

constexpr Vtable kScalarVtable{scalar::sum, scalar::dot, scalar::min, scalar::max,
                               scalar::masked_sum};

#if defined(PUMPSCAN_HAVE_AVX2_KERNELS)
constexpr Vtable kAvx2Vtable{avx2::sum, avx2::dot, avx2::min, avx2::max, avx2::masked_sum};
#endif

bool cpu_has_avx2() noexcept {
#if defined(PUMPSCAN_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend default_backend() {
    if (const char* env = std::getenv("PUMPSCAN_KERNELS")) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2") {
            if (!backend_supported(Backend::Avx2)) {
                throw std::invalid_argument("PUMPSCAN_KERNELS=avx2 but CPU lacks AVX2");
            }
            return Backend::Avx2;
        }
        // anything else (incl. "auto") falls through to detection
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

struct State {
    Backend backend;
    const Vtable* table;
};

State make_state(Backend backend) noexcept {
#if defined(PUMPSCAN_HAVE_AVX2_KERNELS)
    if (backend == Backend::Avx2) return {Backend::Avx2, &kAvx2Vtable};
#endif
    return {Backend::Scalar, &kScalarVtable};
}

State& state() {
    static State s = make_state(default_backend());
    return s;
}

}  // namespace

Backend active_backend() noexcept { return state().backend; }

bool backend_supported(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar: return true;
        case Backend::Avx2: return cpu_has_avx2();
    }
    return false;
}

void set_backend(Backend backend) {
    if (!backend_supported(backend)) {
        throw std::invalid_argument("requested kernel backend not supported on this CPU");
    }
    state() = make_state(backend);
}

void reset_backend() { state() = make_state(default_backend()); }

std::string_view backend_name(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

double sum(std::span<const double> x) noexcept { return state().table->sum(x); }

double dot(std::span<const double> p, std::span<const double> q) noexcept {
    return state().table->dot(p, q);
}

double min(std::span<const double> x) noexcept { return state().table->min(x); }

double max(std::span<const double> x) noexcept { return state().table->max(x); }

double masked_sum(std::span<const double> x, std::span<const std::uint8_t> flag,
                  std::uint8_t want) noexcept {
    return state().table->masked_sum(x, flag, want);
}

}  // namespace pumpscan::kernels
