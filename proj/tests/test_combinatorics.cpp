#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "adomian/combinatorics.hpp"

using namespace adomian;

namespace {

// dynamic-programming partition counter, independent of the enumerator
long long partition_count_dp(int n) {
    std::vector<long long> p(std::size_t(n) + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= n; ++part)
        for (int s = part; s <= n; ++s) p[std::size_t(s)] += p[std::size_t(s - part)];
    return p[std::size_t(n)];
}

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// exhaustive search over all multiplicity vectors with weighted sum n
std::set<std::vector<int>> partitions_brute(int n) {
    std::set<std::vector<int>> out;
    std::vector<int> mult(std::size_t(n), 0);
    std::function<void(int, int)> rec = [&](int j, int rem) {
        if (j > n) {
            if (rem == 0) out.insert(mult);
            return;
        }
        for (int k = 0; k * j <= rem; ++k) {
            mult[std::size_t(j - 1)] = k;
            rec(j + 1, rem - k * j);
        }
        mult[std::size_t(j - 1)] = 0;
    };
    if (n == 0)
        out.insert({});
    else
        rec(1, n);
    return out;
}

} // namespace

TEST_CASE("partition enumeration basics") {
    auto p0 = enumerate_partitions(0);
    REQUIRE(p0.size() == 1);
    CHECK(p0[0].mult.empty());
    CHECK(p0[0].order() == 0);

    auto p3 = enumerate_partitions(3);
    REQUIRE(p3.size() == 3); // {3}, {2,1}, {1,1,1}
    CHECK(p3[0].mult == std::vector<int>{0, 0, 1});
    CHECK(p3[1].mult == std::vector<int>{1, 1, 0});
    CHECK(p3[2].mult == std::vector<int>{3, 0, 0});
}

TEST_CASE("partitions of 5 against brute-force enumeration") {
    auto got = enumerate_partitions(5);
    auto brute = partitions_brute(5);
    REQUIRE(got.size() == brute.size());
    std::set<std::vector<int>> seen;
    for (const auto& p : got) {
        CHECK(p.n() == 5);
        CHECK(brute.count(p.mult) == 1);
        CHECK(seen.insert(p.mult).second); // duplicate-free
    }
}

TEST_CASE("partition counts match the DP counter up to 20") {
    for (int n = 0; n <= 20; ++n)
        CHECK(static_cast<long long>(enumerate_partitions(n).size()) == partition_count_dp(n));
}

TEST_CASE("weighted-sum invariant holds for every partition") {
    for (int n = 0; n <= 12; ++n)
        for (const auto& p : enumerate_partitions(n)) CHECK(p.n() == n);
}

TEST_CASE("weak composition enumeration") {
    auto w = enumerate_weak_compositions(2, 2);
    REQUIRE(w.size() == 3);
    CHECK(w[0].parts == std::vector<int>{0, 2});
    CHECK(w[1].parts == std::vector<int>{1, 1});
    CHECK(w[2].parts == std::vector<int>{2, 0});

    auto w0 = enumerate_weak_compositions(0, 3);
    REQUIRE(w0.size() == 1);
    CHECK(w0[0].parts == std::vector<int>{0, 0, 0});
}

TEST_CASE("weak compositions of 4 into 3 against a brute triple loop") {
    std::set<std::vector<int>> brute;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b) brute.insert({a, b, 4 - a - b});
    auto got = enumerate_weak_compositions(4, 3);
    REQUIRE(got.size() == 15);
    REQUIRE(got.size() == brute.size());
    std::set<std::vector<int>> seen;
    for (const auto& c : got) {
        CHECK(c.n() == 4);
        CHECK(brute.count(c.parts) == 1);
        CHECK(seen.insert(c.parts).second);
    }
}

TEST_CASE("weak composition counts are binomials") {
    for (int n = 0; n <= 8; ++n)
        for (int m = 1; m <= 5; ++m)
            CHECK(static_cast<long long>(enumerate_weak_compositions(n, m).size()) ==
                  binomial(n + m - 1, m - 1));
}
