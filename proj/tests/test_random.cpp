#include "conflearn/random.hpp"

#include "doctest.h"

#include <cmath>
#include <set>

using namespace conflearn;

TEST_CASE("philox4x32-10 known-answer vectors") {
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
          PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms lie in the open unit interval") {
    RandomStream rng(42);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // mean of n uniforms has sd 1/sqrt(12 n)
    CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("copies replay and splits are distinct") {
    RandomStream a(7);
    a.uniform();
    RandomStream b = a;
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());

    const RandomStream root(7);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t path = 0; path < 4; ++path) {
        for (std::uint32_t t = 0; t < 4; ++t) {
            for (auto purpose : {StreamPurpose::shock, StreamPurpose::type, StreamPurpose::signal}) {
                auto s = root.split(path, t, purpose);
                firsts.insert(s.next_u64());
            }
        }
    }
    CHECK(firsts.size() == 4 * 4 * 3);

    auto x = root.split(3, 9, StreamPurpose::signal);
    auto y = RandomStream(7).split(3, 9, StreamPurpose::signal);
    CHECK(x.uniform() == y.uniform());
    CHECK(RandomStream(8).split(3, 9, StreamPurpose::signal).uniform() !=
          RandomStream(7).split(3, 9, StreamPurpose::signal).uniform());
}
