#include "oligo/rng.hpp"

#include <boost/math/distributions/normal.hpp>

#include <stdexcept>

namespace oligo {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kDeriveSalt = 0xA0761D6478BD642Full;
constexpr std::uint64_t kGammaSalt = 0xE7037ED1A0B428DBull;

}  // namespace

RandomStream::RandomStream(Raw, std::uint64_t origin, std::uint64_t gamma)
    : origin_(origin), gamma_(gamma | 1), state_(origin) {}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : RandomStream(Raw{}, mix64(seed + kGolden * (stream_id + 1)),
                   mix64(seed ^ kGammaSalt ^ (stream_id * kGolden))) {}

RandomStream RandomStream::derive(std::uint64_t tag) const {
    std::uint64_t h = mix64(origin_ ^ kDeriveSalt);
    h = mix64(h ^ (tag + kGolden));
    return RandomStream(Raw{}, h, mix64(h ^ kGammaSalt));
}

RandomStream RandomStream::derive(std::string_view name) const {
    // FNV-1a over the name, then a numeric derive.
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return derive(h);
}

RandomStream RandomStream::derive(std::uint64_t tag_a, std::uint64_t tag_b) const {
    return derive(tag_a).derive(tag_b);
}

std::uint64_t RandomStream::next_u64() {
    state_ += gamma_;
    return mix64(state_);
}

double RandomStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("uniform: lo > hi");
    return lo + uniform01() * (hi - lo);
}

bool RandomStream::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p outside [0,1]");
    return uniform01() < p;
}

double RandomStream::normal(double mean, double sd) {
    if (!(sd > 0.0)) throw std::invalid_argument("normal: sd must be > 0");
    // Quantile of a strictly interior uniform; (u+0.5)*2^-53 never hits 0 or 1.
    double u = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    return boost::math::quantile(boost::math::normal_distribution<double>(mean, sd), u);
}

double RandomStream::lognormal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("lognormal: sigma must be > 0");
    return std::exp(normal(mu, sigma));
}

}  // namespace oligo
