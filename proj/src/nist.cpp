#include "bakercrypt/nist.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

#include "bakercrypt/error.hpp"

namespace bakercrypt::nist {
namespace {

// upper regularized incomplete gamma Q(a, x)
double igamc(double a, double x) { return boost::math::gamma_q(a, x); }

// standard normal CDF
double ndtr(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void need_bits(const BitString& bits, uint64_t least, const char* test) {
    if (bits.nbits < least)
        raise(Errc::insufficient_bits,
              std::string(test) + " needs at least " + std::to_string(least) + " bits");
}

// p-value for a cusum excursion z over n bits; the summation bounds follow
// the reference code, which evaluates them with integer division
double cusum_p(uint64_t bit_count, int64_t z) {
    const int64_t n = int64_t(bit_count);
    const double sqn = std::sqrt(double(n));
    double sum1 = 0.0;
    for (int64_t k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k) {
        sum1 += ndtr(double((4 * k + 1) * z) / sqn);
        sum1 -= ndtr(double((4 * k - 1) * z) / sqn);
    }
    double sum2 = 0.0;
    for (int64_t k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k) {
        sum2 += ndtr(double((4 * k + 3) * z) / sqn);
        sum2 -= ndtr(double((4 * k + 1) * z) / sqn);
    }
    return 1.0 - sum1 + sum2;
}

} // namespace

double frequency(const BitString& bits) {
    need_bits(bits, 1, "frequency");
    int64_t s = 0;
    for (uint64_t i = 0; i < bits.nbits; ++i) s += bits.bit(i) ? 1 : -1;
    const double sobs = std::abs(double(s)) / std::sqrt(double(bits.nbits));
    return std::erfc(sobs / std::sqrt(2.0));
}

double block_frequency(const BitString& bits, uint32_t block_len) {
    if (block_len == 0)
        raise(Errc::insufficient_bits, "block frequency needs a positive block length");
    need_bits(bits, block_len, "block frequency");
    const uint64_t blocks = bits.nbits / block_len;
    double chi = 0.0;
    for (uint64_t b = 0; b < blocks; ++b) {
        uint64_t ones = 0;
        for (uint32_t j = 0; j < block_len; ++j) ones += bits.bit(b * block_len + j);
        const double pi = double(ones) / double(block_len);
        chi += (pi - 0.5) * (pi - 0.5);
    }
    chi *= 4.0 * double(block_len);
    return igamc(double(blocks) / 2.0, chi / 2.0);
}

double runs(const BitString& bits) {
    need_bits(bits, 2, "runs");
    const double n = double(bits.nbits);
    uint64_t ones = 0;
    for (uint64_t i = 0; i < bits.nbits; ++i) ones += bits.bit(i);
    const double pi = double(ones) / n;
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) return 0.0;
    uint64_t v = 1;
    for (uint64_t i = 0; i + 1 < bits.nbits; ++i)
        v += bits.bit(i) != bits.bit(i + 1);
    const double num = std::abs(double(v) - 2.0 * n * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi);
    return std::erfc(num / den);
}

std::pair<double, double> cumulative_sums(const BitString& bits) {
    need_bits(bits, 1, "cumulative sums");
    int64_t sum = 0;
    int64_t zfwd = 0;        // max |prefix| over prefixes 1..n
    int64_t lo = 0, hi = 0;  // prefix range over prefixes 0..n-1
    for (uint64_t i = 0; i < bits.nbits; ++i) {
        lo = std::min(lo, sum);
        hi = std::max(hi, sum);
        sum += bits.bit(i) ? 1 : -1;
        zfwd = std::max(zfwd, std::abs(sum));
    }
    const int64_t zrev = std::max(std::abs(sum - lo), std::abs(sum - hi));
    return {cusum_p(bits.nbits, zfwd), cusum_p(bits.nbits, zrev)};
}

double approximate_entropy(const BitString& bits, uint32_t m) {
    need_bits(bits, 1, "approximate entropy");
    if (m + 1 > 21)
        raise(Errc::insufficient_bits, "approximate entropy block length too large");
    const uint64_t n = bits.nbits;

    auto phi = [&](uint32_t mm) -> double {
        if (mm == 0) return 0.0;
        const uint32_t mask = (1u << mm) - 1;
        std::vector<uint64_t> count(size_t(1) << mm, 0);
        uint32_t pat = 0;
        for (uint32_t j = 0; j < mm; ++j)
            pat = (pat << 1) | uint32_t(bits.bit(j % n));
        ++count[pat];
        for (uint64_t i = 1; i < n; ++i) {
            pat = ((pat << 1) & mask) | uint32_t(bits.bit((i + mm - 1) % n));
            ++count[pat];
        }
        double s = 0.0;
        for (uint64_t c : count)
            if (c) {
                const double p = double(c) / double(n);
                s += p * std::log(p);
            }
        return s;
    };

    const double apen = phi(m) - phi(m + 1);
    const double chi = 2.0 * double(n) * (std::log(2.0) - apen);
    return igamc(std::pow(2.0, double(m) - 1.0), chi / 2.0);
}

SubsetReport nist_subset(const BitString& bits) {
    need_bits(bits, 1024, "nist subset");
    SubsetReport rep;
    rep.bit_count = bits.nbits;
    rep.advisory = bits.nbits < 1000000;
    auto add = [&](std::string name, double p) {
        rep.tests.push_back({std::move(name), p, p >= 0.01});
    };
    add("frequency", frequency(bits));
    add("block-frequency", block_frequency(bits, 128));
    add("runs", runs(bits));
    const auto [fwd, rev] = cumulative_sums(bits);
    add("cumulative-sums-forward", fwd);
    add("cumulative-sums-reverse", rev);
    add("approximate-entropy", approximate_entropy(bits, 10));
    rep.all_pass = std::all_of(rep.tests.begin(), rep.tests.end(),
                               [](const TestResult& t) { return t.pass; });
    return rep;
}

} // namespace bakercrypt::nist
