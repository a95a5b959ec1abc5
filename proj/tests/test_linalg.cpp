#include <doctest.h>

#include <random>

#include "gad/linalg.hpp"

using namespace gad;

namespace {

Vec make_vec(const RingSpec& spec, std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs) v.emplace_back(spec, x);
    return v;
}

}  // namespace

TEST_CASE("insert, rank and membership over GF(2)") {
    auto f2 = RingSpec::prime_field(2);
    Subspace s(f2, 3);
    CHECK(s.insert(make_vec(f2, {1, 1, 0})));
    CHECK(s.insert(make_vec(f2, {0, 1, 1})));
    CHECK_FALSE(s.insert(make_vec(f2, {1, 0, 1})));
    CHECK(s.dim() == 2);
    CHECK(s.contains(make_vec(f2, {1, 0, 1})));
    CHECK_FALSE(s.contains(make_vec(f2, {1, 0, 0})));
}

TEST_CASE("canonical bases make equality structural") {
    auto q = RingSpec::rationals();
    Subspace a(q, 3), b(q, 3);
    a.insert(make_vec(q, {2, 4, 0}));
    a.insert(make_vec(q, {0, 0, 3}));
    b.insert(make_vec(q, {1, 2, 1}));
    b.insert(make_vec(q, {0, 0, -5}));
    CHECK(a == b);
}

TEST_CASE("sum and intersection") {
    auto f5 = RingSpec::prime_field(5);
    Subspace a(f5, 3), b(f5, 3);
    a.insert(make_vec(f5, {1, 0, 0}));
    a.insert(make_vec(f5, {0, 1, 0}));
    b.insert(make_vec(f5, {0, 1, 0}));
    b.insert(make_vec(f5, {0, 0, 1}));
    CHECK(a.sum(b).dim() == 3);
    Subspace meet = a.intersect(b);
    CHECK(meet.dim() == 1);
    CHECK(meet.contains(make_vec(f5, {0, 1, 0})));
}

TEST_CASE("intersection against brute-force scan over GF(3)") {
    auto f3 = RingSpec::prime_field(3);
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> d(0, 2);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 4;
        Subspace a(f3, n), b(f3, n);
        for (int i = 0; i < 2; ++i) {
            Vec va, vb;
            for (std::size_t j = 0; j < n; ++j) {
                va.emplace_back(f3, d(rng));
                vb.emplace_back(f3, d(rng));
            }
            a.insert(va);
            b.insert(vb);
        }
        Subspace meet = a.intersect(b);
        // oracle: enumerate all 3^4 vectors
        Subspace expect(f3, n);
        for (int code = 0; code < 81; ++code) {
            Vec v;
            int c = code;
            for (std::size_t j = 0; j < n; ++j, c /= 3) v.emplace_back(f3, long(c % 3));
            if (a.contains(v) && b.contains(v)) expect.insert(v);
        }
        CHECK(meet == expect);
    }
}
