#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lgcrit/catalog.hpp"
#include "lgcrit/toric.hpp"

namespace lgtest {

inline const lgcrit::Bundle kHirzebruch{1, {1}};
inline const lgcrit::Bundle kBundle312{3, {1, 2}};
inline const lgcrit::BlowupProduct kBlowupProduct42{4, 2};
inline const lgcrit::BlowupBundle kBlowupBundle50{5, 0};

inline std::vector<lgcrit::ModelSpec> desk_models() {
    return {kHirzebruch, kBundle312, kBlowupProduct42, kBlowupBundle50};
}

inline lgcrit::TDivisor unit(const lgcrit::ToricModel& m, int ray) { return lgcrit::TDivisor::unit(m.ray_count(), ray); }

inline lgcrit::TDivisor random_divisor(std::mt19937_64& rng, int rays, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    lgcrit::TDivisor d;
    for (int i = 0; i < rays; ++i) d.coeffs.push_back(dist(rng));
    return d;
}

/// Lattice points of {m : <m, n_F> >= -d_F} inside [-box, box]^n, counted by brute force.
inline std::int64_t brute_h0(const lgcrit::ToricModel& model, const lgcrit::TDivisor& d, int box) {
    const int n = model.dim();
    std::vector<std::int64_t> m(n, -box);
    std::int64_t count = 0;
    while (true) {
        bool inside = true;
        for (int F = 0; F < model.ray_count() && inside; ++F) {
            std::int64_t v = 0;
            for (int i = 0; i < n; ++i) v += m[i] * model.rays()[F][i];
            inside = v >= -d.coeffs[F];
        }
        count += inside;
        int i = 0;
        while (i < n && m[i] == box) m[i++] = -box;
        if (i == n) break;
        ++m[i];
    }
    return count;
}

inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < k) return 0;
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Bundle label arithmetic with indices reduced modulo the lattice spanned by
/// (s+1, 0) and (-sum a, r+1).
inline std::string bundle_label(const lgcrit::Bundle& b, std::int64_t k, std::int64_t l) {
    const std::int64_t s1 = b.s + 1, r1 = std::int64_t(b.a.size()) + 1;
    std::int64_t A = 0;
    for (int x : b.a) A += x;
    std::int64_t lr = ((l % r1) + r1) % r1;
    std::int64_t shift = (l - lr) / r1;
    std::int64_t kr = (((k + shift * A) % s1) + s1) % s1;
    return lgcrit::grid_label('E', {int(kr), int(lr)});
}

}  // namespace lgtest
