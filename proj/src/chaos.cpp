#include "bakercrypt/chaos.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace bakercrypt::chaos {

namespace {

double clamp_unit(double v) {
    if (v < -1.0) return -1.0;
    if (v > 1.0) return 1.0;
    return v;
}

} // namespace

const std::array<double, 3>& f0_fixed_points() {
    static const std::array<double, 3> pts = {-1.0, 0.0, 1.0};
    return pts;
}

const std::array<double, 4>& f1_fixed_points() {
    static const std::array<double, 4> pts = {
        (-1.0 - std::sqrt(5.0)) / 4.0,
        -0.5,
        (std::sqrt(5.0) - 1.0) / 4.0,
        1.0,
    };
    return pts;
}

void validate_seed(double x0, double y0) {
    if (!(std::abs(x0) < 1.0))
        raise(Errc::out_of_range, "seed x0 must lie in the open interval (-1, 1)");
    if (!(std::abs(y0) < 1.0))
        raise(Errc::out_of_range, "seed y0 must lie in the open interval (-1, 1)");
    for (double fp : f0_fixed_points())
        if (std::abs(x0 - fp) < kSeedFixedPointTol)
            raise(Errc::fixed_point_seed, "seed x0 is within 1e-12 of a fixed point of f0");
    for (double fp : f1_fixed_points())
        if (std::abs(y0 - fp) < kSeedFixedPointTol)
            raise(Errc::fixed_point_seed, "seed y0 is within 1e-12 of a fixed point of f1");
}

void validate_key(const KeyMaterial& key) {
    validate_seed(key.x0, key.y0);
    if (key.k < 1 || key.t < 1)
        raise(Errc::bad_key, "block counts k and t must be >= 1");
    if (key.rounds < 1)
        raise(Errc::bad_key, "permutation round count must be >= 1");
}

ChaoticState::ChaoticState(const KeyMaterial& key) : x_(key.x0), y_(key.y0) {}

double ChaoticState::perturb(double v, const double* fps, size_t nfps) {
    for (size_t i = 0; i < nfps; ++i) {
        if (std::abs(v - fps[i]) < kPerturbTol) {
            double delta = static_cast<double>(perturb_counter_ % 9 + 1) * 1e-9;
            v = fps[i] > 0.0 ? v - delta : v + delta;
            v = clamp_unit(v);
            ++perturb_counter_;
            break;
        }
    }
    return v;
}

double ChaoticState::next_z() {
    double z;
    if (x_ + y_ < 0.0) {
        double x2 = x_ * x_;
        double x3 = x2 * x_;
        x_ = clamp_unit(4.0 * x3 - 3.0 * x_);
        z = x_;
        const auto& fps = f0_fixed_points();
        x_ = perturb(x_, fps.data(), fps.size());
    } else {
        double y2 = y_ * y_;
        double y4 = y2 * y2;
        y_ = clamp_unit(8.0 * y4 - 8.0 * y2 + 1.0);
        z = y_;
        const auto& fps = f1_fixed_points();
        y_ = perturb(y_, fps.data(), fps.size());
    }
    ++emitted_;
    return z;
}

std::vector<uint32_t> ChaoticState::keystream(uint64_t count, uint32_t n) {
    std::vector<uint32_t> out;
    out.reserve(count);
    for (uint64_t i = 0; i < count; ++i) out.push_back(quantize(next_z(), n));
    return out;
}

uint32_t quantize(double z, uint32_t n) {
    if (z == 1.0) return n - 1;
    z = clamp_unit(z);
    double u = std::acos(z) / std::numbers::pi;
    double v = std::floor((1.0 - u) * static_cast<double>(n));
    if (v < 0.0) return 0;
    if (v >= static_cast<double>(n)) return n - 1;
    return static_cast<uint32_t>(v);
}

ChaoticState make_generator(const KeyMaterial& key) {
    validate_key(key);
    ChaoticState state(key);
    for (uint32_t i = 0; i < key.warmup; ++i) state.next_z();
    return state;
}

KeyMaterial parse_key_text(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        lines.push_back(line.substr(start));
    }
    if (lines.size() < 5 || lines.size() > 6)
        raise(Errc::bad_key, "key file must hold five lines (x0, y0, k, t, rounds) "
                             "plus an optional warm-up line");

    KeyMaterial key;
    auto parse_real = [](const std::string& s, const char* name) {
        size_t pos = 0;
        double v;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            raise(Errc::bad_key, std::string("key file: cannot parse ") + name);
        }
        if (pos != s.size())
            raise(Errc::bad_key, std::string("key file: trailing characters after ") + name);
        return v;
    };
    auto parse_count = [](const std::string& s, const char* name) {
        size_t pos = 0;
        long long v;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            raise(Errc::bad_key, std::string("key file: cannot parse ") + name);
        }
        if (pos != s.size() || v < 0)
            raise(Errc::bad_key, std::string("key file: invalid ") + name);
        return static_cast<uint32_t>(v);
    };

    key.x0 = parse_real(lines[0], "x0");
    key.y0 = parse_real(lines[1], "y0");
    key.k = parse_count(lines[2], "k");
    key.t = parse_count(lines[3], "t");
    key.rounds = parse_count(lines[4], "rounds");
    key.warmup = lines.size() == 6 ? parse_count(lines[5], "warmup") : 100;

    try {
        validate_key(key);
    } catch (const Error& e) {
        raise(Errc::bad_key, std::string("key file: ") + e.what());
    }
    return key;
}

KeyMaterial load_key_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open key file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_text(buf.str());
}

std::string format_key_text(const KeyMaterial& key) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.17g\n%.17g\n%u\n%u\n%u\n%u\n", key.x0, key.y0, key.k,
                  key.t, key.rounds, key.warmup);
    return buf;
}

void save_key_file(const KeyMaterial& key, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write key file: " + path.string());
    out << format_key_text(key);
    if (!out.flush()) raise(Errc::io_error, "failed writing key file: " + path.string());
}

} // namespace bakercrypt::chaos
