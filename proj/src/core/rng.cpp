#include "rng.hpp"

#include <cmath>

namespace susphom {

std::uint64_t mix64(std::uint64_t v) {
    // splitmix64 finalizer
    v += 0x9e3779b97f4a7c15ull;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
    return v ^ (v >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t index) {
    std::uint64_t k = mix64(master_seed ^ static_cast<std::uint64_t>(purpose));
    key_ = mix64(k ^ mix64(index));
}

std::uint64_t RngStream::next_u64() {
    // two finalizer rounds over (key, counter); counter-mode, no carried state
    std::uint64_t v = mix64(key_ + 0x632be59bd9b4e019ull * ++ctr_);
    return mix64(v ^ key_);
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) { return a + (b - a) * next_double(); }

std::uint64_t RngStream::poisson(double mean) {
    if (mean < 0) throw ConfigError("poisson: negative mean");
    if (mean == 0) return 0;
    if (mean < 30.0) {
        // Knuth product method
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t n = 0;
        while (true) {
            prod *= next_double();
            if (prod <= limit) return n;
            ++n;
        }
    }
    // PTRS transformed rejection (Hormann 1993); exact for mean >= 10
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    while (true) {
        double u = next_double() - 0.5;
        double v = next_double();
        double us = 0.5 - std::abs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0 || (us < 0.013 && v > us)) continue;
        double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

Vec3 RngStream::unit_vector3() {
    // rejection from the cube; deterministic draw order
    while (true) {
        Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
        double n2 = v.norm2();
        if (n2 > 1e-12 && n2 <= 1.0) return v / std::sqrt(n2);
    }
}

std::uint64_t derive_sample_seed(std::uint64_t master_seed, std::uint64_t sample_index) {
    return mix64(mix64(master_seed ^ static_cast<std::uint64_t>(StreamPurpose::kSampleDerive)) ^
                 mix64(sample_index));
}

}  // namespace susphom
