#include "liejet/linalg.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

using namespace liejet;

namespace {

RatVec dense(std::int64_t dim, std::vector<long> vals) {
    std::vector<std::pair<std::int64_t, Rat>> e;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(vals.size()); ++i)
        if (vals[static_cast<std::size_t>(i)] != 0)
            e.emplace_back(i, Rat(vals[static_cast<std::size_t>(i)]));
    return make_vector(dim, std::move(e));
}

}  // namespace

TEST_CASE("span ranks on the spec examples") {
    CHECK(span(2, {dense(2, {1, 0}), dense(2, {0, 1})}).rank() == 2);
    CHECK(span(2, {dense(2, {1, 2}), dense(2, {2, 4})}).rank() == 1);
    CHECK(span(2, {}).rank() == 0);
}

TEST_CASE("membership is exact") {
    Subspace s = span(2, {dense(2, {1, 0})});
    CHECK(s.contains(dense(2, {3, 0})));
    CHECK_FALSE(s.contains(dense(2, {0, 1})));
    CHECK(s.contains(RatVec(2)));  // zero vector
    CHECK_THROWS_AS(s.contains(RatVec(3)), std::invalid_argument);
}

TEST_CASE("direct sum check") {
    Subspace a = span(2, {dense(2, {1, 0})});
    Subspace b = span(2, {dense(2, {0, 1})});
    Subspace c = span(2, {dense(2, {1, 1}), dense(2, {0, 1})});
    CHECK(direct_sum_check(a, b));
    CHECK_FALSE(direct_sum_check(a, c));
    CHECK(direct_sum_check(a, Subspace(2)));
}

TEST_CASE("reduction gives primitive residuals and canonical rows") {
    Subspace s(3);
    s.insert(dense(3, {2, 4, 0}));
    s.insert(dense(3, {0, 0, 3}));
    // rows are primitive with positive lead
    for (const auto& r : s.rows()) {
        CHECK(r.leading_coeff() > 0);
        for (const auto& [i, c] : r.entries) CHECK(c.get_den() == 1);
    }
    CHECK(s.rows()[0] == dense(3, {1, 2, 0}));
    CHECK(s.rows()[1] == dense(3, {0, 0, 1}));
}

TEST_CASE("echelonization is order independent") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        std::int64_t dim = 6;
        std::vector<RatVec> vecs;
        int nv = 1 + static_cast<int>(rng() % 7);
        for (int v = 0; v < nv; ++v) {
            std::vector<long> vals(static_cast<std::size_t>(dim));
            for (auto& x : vals) x = static_cast<long>(rng() % 7) - 3;
            vecs.push_back(dense(dim, vals));
        }
        Subspace a = span(dim, vecs);
        std::shuffle(vecs.begin(), vecs.end(), rng);
        Subspace b = span(dim, vecs);
        CHECK(a.rank() == b.rank());
        CHECK(a == b);  // canonical reduced form is permutation invariant
        // idempotence: re-spanning the rows reproduces the subspace
        CHECK(span(dim, a.rows()) == a);
    }
}

TEST_CASE("rank subadditivity with equality iff direct") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::int64_t dim = 5;
        auto rnd = [&](int n) {
            std::vector<RatVec> vs;
            for (int i = 0; i < n; ++i) {
                std::vector<long> vals(static_cast<std::size_t>(dim));
                for (auto& x : vals) x = static_cast<long>(rng() % 5) - 2;
                vs.push_back(dense(dim, vals));
            }
            return vs;
        };
        Subspace A = span(dim, rnd(1 + static_cast<int>(rng() % 4)));
        Subspace B = span(dim, rnd(1 + static_cast<int>(rng() % 4)));
        Subspace u = A;
        for (const auto& r : B.rows()) u.insert(r);
        CHECK(u.rank() <= A.rank() + B.rank());
        CHECK((u.rank() == A.rank() + B.rank()) == direct_sum_check(A, B));
    }
}

TEST_CASE("kernel tracker finds exact dependencies") {
    // map e0 -> (1,0), e1 -> (0,1), e2 -> (1,1), e3 -> 0
    KernelTracker t(4, 2);
    t.feed(dense(2, {1, 0}));
    t.feed(dense(2, {0, 1}));
    t.feed(dense(2, {1, 1}));
    t.feed(RatVec(2));
    CHECK(t.image_rank() == 2);
    const Subspace& ker = t.kernel();
    CHECK(ker.rank() == 2);
    CHECK(ker.contains(dense(4, {1, 1, -1, 0})));
    CHECK(ker.contains(dense(4, {0, 0, 0, 1})));
    CHECK_FALSE(ker.contains(dense(4, {1, 0, 0, 0})));
}

TEST_CASE("kernel matches rank nullity on random integer maps") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        std::int64_t n = 5, m = 4;
        std::vector<RatVec> cols;
        KernelTracker t(n, m);
        for (int i = 0; i < n; ++i) {
            std::vector<long> vals(static_cast<std::size_t>(m));
            for (auto& x : vals) x = static_cast<long>(rng() % 5) - 2;
            cols.push_back(dense(m, vals));
            t.feed(cols.back());
        }
        CHECK(t.image_rank() + t.kernel().rank() == n);
        // every kernel row really maps to zero
        for (const auto& krow : t.kernel().rows()) {
            RatVec img(m);
            for (const auto& [i, c] : krow.entries)
                img = linear_combine(Rat(1), img, c, cols[static_cast<std::size_t>(i)]);
            CHECK(img.is_zero());
        }
    }
}
