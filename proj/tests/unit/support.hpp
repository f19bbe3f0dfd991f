#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mccdma/codes.hpp"
#include "mccdma/txchain.hpp"

namespace mccdma::testing {

// Seeded generator for property tests; every case is reproducible from its index.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }
    int sign() { return coin() ? 1 : -1; }
    int power_of_two(int max_log2) { return 1 << integer(0, max_log2); }

    std::vector<int> signs(std::size_t n) {
        std::vector<int> out(n);
        for (auto& v : out) v = sign();
        return out;
    }
    std::vector<Chip> chips(std::size_t n) {
        std::vector<Chip> out(n);
        for (auto& v : out) v = static_cast<Chip>(sign());
        return out;
    }
    Sample complex_sample(double scale) { return {real(-scale, scale), real(-scale, scale)}; }
    BasebandFrame frame(std::size_t n, double scale) {
        BasebandFrame f;
        f.sample_rate = 1.0;
        f.samples.resize(n);
        for (auto& s : f.samples) s = complex_sample(scale);
        return f;
    }
    UserSymbols symbols(int user, int r, int m, int slots) {
        UserSymbols s(user, r, m, slots);
        for (int slot = 0; slot < slots; ++slot)
            for (int mm = 0; mm < m; ++mm)
                for (int rr = 0; rr < r; ++rr) s.set(rr, mm, slot, sign());
        return s;
    }

private:
    std::mt19937_64 rng_;
};

template <typename Property>
void for_all(int cases, std::uint64_t seed, Property property) {
    for (int c = 0; c < cases; ++c) {
        SCOPED_TRACE("property case " + std::to_string(c));
        Gen gen(seed * 1000003u + static_cast<std::uint64_t>(c));
        property(gen);
        if (::testing::Test::HasFatalFailure()) return;
    }
}

}  // namespace mccdma::testing
