#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "bakercrypt/chaos.hpp"

using namespace bakercrypt;
using namespace bakercrypt::chaos;

namespace {

template <typename Fn>
std::optional<Errc> errc_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("seed validation accepts interior non-fixed-point pairs") {
    CHECK_NOTHROW(validate_seed(-0.1790288311, -0.1628589871));
    CHECK_NOTHROW(validate_seed(0.1, 0.2));
    CHECK_NOTHROW(validate_seed(-0.999999, 0.999999));
}

TEST_CASE("seed validation rejects out-of-range values") {
    CHECK(errc_of([] { validate_seed(1.5, 0.2); }) == Errc::out_of_range);
    CHECK(errc_of([] { validate_seed(0.2, -1.5); }) == Errc::out_of_range);
    CHECK(errc_of([] { validate_seed(1.0, 0.2); }) == Errc::out_of_range);
    CHECK(errc_of([] { validate_seed(0.2, -1.0); }) == Errc::out_of_range);
}

TEST_CASE("seed validation rejects fixed points of either track") {
    // f0(x) = 4x^3 - 3x fixes {-1, 0, 1}
    CHECK(errc_of([] { validate_seed(1.0 - 1e-13, 0.2); }) == Errc::fixed_point_seed);
    CHECK(errc_of([] { validate_seed(0.0, 0.2); }) == Errc::fixed_point_seed);
    // f1(y) = 8y^4 - 8y^2 + 1 fixes {-(1+sqrt5)/4, -1/2, (sqrt5-1)/4, 1}
    CHECK(errc_of([] { validate_seed(0.1, -0.5); }) == Errc::fixed_point_seed);
    CHECK(errc_of([] { validate_seed(0.1, (std::sqrt(5.0) - 1.0) / 4.0); }) ==
          Errc::fixed_point_seed);
    CHECK(errc_of([] { validate_seed(0.1, (-1.0 - std::sqrt(5.0)) / 4.0 + 1e-13); }) ==
          Errc::fixed_point_seed);
    // a point 1e-12 *away* is accepted again
    CHECK_NOTHROW(validate_seed(2e-12, 0.2));
}

TEST_CASE("fixed point tables satisfy their defining equations") {
    for (double p : f0_fixed_points()) {
        double v = 4.0 * p * p * p - 3.0 * p;
        CHECK(std::abs(v - p) < 1e-12);
    }
    for (double p : f1_fixed_points()) {
        double v = 8.0 * p * p * p * p - 8.0 * p * p + 1.0;
        CHECK(std::abs(v - p) < 1e-12);
    }
}

TEST_CASE("next_z picks the y track when x + y >= 0") {
    ChaoticState st(KeyMaterial{.x0 = 0.0, .y0 = 0.0});
    double z = st.next_z();
    CHECK(z == 1.0); // f1(0) = 1
    // y landed on the fixed point 1 and was nudged inward by 1e-9
    CHECK(st.y() == 1.0 - 1e-9);
    CHECK(st.x() == 0.0);
    CHECK(st.perturb_counter() == 1);
    CHECK(st.emitted() == 1);
}

TEST_CASE("next_z picks the x track when x + y < 0") {
    ChaoticState st(KeyMaterial{.x0 = 0.5, .y0 = -0.7});
    double z = st.next_z();
    CHECK(z == -1.0); // f0(0.5) = 4/8 - 3/2
    // x landed on the fixed point -1 and was nudged inward; z is pre-nudge
    CHECK(st.x() == -1.0 + 1e-9);
    CHECK(st.y() == -0.7);
    CHECK(st.perturb_counter() == 1);
}

TEST_CASE("quantize boundary and midpoint values") {
    CHECK(quantize(-1.0, 256) == 0);
    CHECK(quantize(1.0, 256) == 255);
    CHECK(quantize(0.0, 256) == 128);
    CHECK(quantize(1.0, 2) == 1);
    CHECK(quantize(-1.0, 2) == 0);
}

TEST_CASE("keystream matches the frozen reference bytes") {
    KeyMaterial key{.x0 = 0.1, .y0 = 0.2};
    auto gen = make_generator(key);
    auto got = gen.keystream(16, 256);
    std::vector<uint32_t> want = {72,  217, 140, 91,  238, 204, 101, 207,
                                  109, 184, 42,  127, 130, 121, 146, 71};
    CHECK(got == want);
}

TEST_CASE("keystream from the reference seed pair matches frozen bytes") {
    KeyMaterial key{.x0 = -0.1790288311, .y0 = -0.1628589871, .k = 32, .t = 20};
    auto gen = make_generator(key);
    auto got = gen.keystream(12, 256);
    std::vector<uint32_t> want = {64, 192, 64, 193, 67, 202, 95, 226, 167, 9, 27, 83};
    CHECK(got == want);
}

TEST_CASE("keystream of count zero leaves the state untouched") {
    KeyMaterial key{.x0 = 0.1, .y0 = 0.2};
    auto gen = make_generator(key);
    double x = gen.x(), y = gen.y();
    auto got = gen.keystream(0, 256);
    CHECK(got.empty());
    CHECK(gen.x() == x);
    CHECK(gen.y() == y);
    CHECK(gen.emitted() == key.warmup);
}

TEST_CASE("equal keys give bit-identical long streams") {
    KeyMaterial key{.x0 = -0.1790288311, .y0 = -0.1628589871};
    auto a = make_generator(key).keystream(1000000, 256);
    auto b = make_generator(key).keystream(1000000, 256);
    CHECK(a == b);
}

TEST_CASE("a million iterates stay in range and never stall") {
    KeyMaterial key{.x0 = -0.1790288311, .y0 = -0.1628589871};
    auto gen = make_generator(key);
    double prev = 2.0;
    int run = 0, max_run = 0;
    bool in_range = true;
    for (int i = 0; i < 1000000; ++i) {
        double z = gen.next_z();
        if (!(z >= -1.0 && z <= 1.0)) in_range = false;
        if (z == prev) {
            max_run = std::max(max_run, ++run);
        } else {
            run = 0;
            prev = z;
        }
    }
    CHECK(in_range);
    CHECK(max_run <= 64);
    CHECK(gen.x() >= -1.0);
    CHECK(gen.x() <= 1.0);
    CHECK(gen.y() >= -1.0);
    CHECK(gen.y() <= 1.0);
}

TEST_CASE("quantized stream stays within the alphabet") {
    KeyMaterial key{.x0 = 0.37, .y0 = -0.22};
    auto gen = make_generator(key);
    for (uint32_t n : {2u, 7u, 128u, 256u}) {
        auto ks = gen.keystream(20000, n);
        for (uint32_t v : ks) CHECK(v < n);
    }
}

TEST_CASE("a 1e-14 seed difference decorrelates the byte stream") {
    KeyMaterial a{.x0 = 0.1, .y0 = 0.2};
    KeyMaterial b{.x0 = 0.1 + 1e-14, .y0 = 0.2};
    auto sa = make_generator(a).keystream(100000, 256);
    auto sb = make_generator(b).keystream(100000, 256);
    size_t same = 0;
    for (size_t i = 0; i < sa.size(); ++i) same += sa[i] == sb[i];
    CHECK(double(same) / double(sa.size()) < 0.01);
}

TEST_CASE("key text round-trips through format and parse") {
    KeyMaterial key{.x0 = -0.1790288311, .y0 = -0.1628589871, .k = 32, .t = 20,
                    .rounds = 3, .warmup = 250};
    CHECK(parse_key_text(format_key_text(key)) == key);

    KeyMaterial odd{.x0 = 1.0 / 3.0, .y0 = -2.0 / 7.0, .k = 5, .t = 6};
    CHECK(parse_key_text(format_key_text(odd)) == odd);
}

TEST_CASE("key text accepts five lines and defaults the warm-up") {
    auto key = parse_key_text("-0.1790288311\n-0.1628589871\n32\n20\n1\n");
    CHECK(key.x0 == -0.1790288311);
    CHECK(key.y0 == -0.1628589871);
    CHECK(key.k == 32);
    CHECK(key.t == 20);
    CHECK(key.rounds == 1);
    CHECK(key.warmup == 100);

    auto six = parse_key_text(" 0.1 \n 0.2\n5\n6\n2\n50\n");
    CHECK(six.warmup == 50);
    CHECK(six.k == 5);
}

TEST_CASE("malformed key text is rejected") {
    CHECK(errc_of([] { parse_key_text(""); }) == Errc::bad_key);
    CHECK(errc_of([] { parse_key_text("0.1\n0.2\n5\n6\n"); }) == Errc::bad_key);
    CHECK(errc_of([] { parse_key_text("0.1\n0.2\n5\n6\n1\n100\n7\n"); }) == Errc::bad_key);
    CHECK(errc_of([] { parse_key_text("zebra\n0.2\n5\n6\n1\n"); }) == Errc::bad_key);
    CHECK(errc_of([] { parse_key_text("0.1x\n0.2\n5\n6\n1\n"); }) == Errc::bad_key);
    CHECK(errc_of([] { parse_key_text("0.1\n0.2\n0\n6\n1\n"); }) == Errc::bad_key);
    CHECK(errc_of([] { parse_key_text("0.1\n0.2\n5\n6\n0\n"); }) == Errc::bad_key);
    CHECK(errc_of([] { parse_key_text("0.1\n0.2\n5\n6\n1\n-3\n"); }) == Errc::bad_key);
    // seed problems surface as key-file errors too
    CHECK(errc_of([] { parse_key_text("1.5\n0.2\n5\n6\n1\n"); }) == Errc::bad_key);
    CHECK(errc_of([] { parse_key_text("0.0\n0.2\n5\n6\n1\n"); }) == Errc::bad_key);
}

TEST_CASE("key files round-trip on disk") {
    auto dir = std::filesystem::temp_directory_path();
    auto path = dir / "bakercrypt_key_roundtrip.txt";
    KeyMaterial key{.x0 = 0.123456789012345, .y0 = -0.543210987654321, .k = 7, .t = 9,
                    .rounds = 2, .warmup = 64};
    save_key_file(key, path);
    CHECK(load_key_file(path) == key);
    std::filesystem::remove(path);
    CHECK(errc_of([&] { load_key_file(path); }) == Errc::io_error);
}
