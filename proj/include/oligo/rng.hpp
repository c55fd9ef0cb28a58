#pragma once

#include <cstdint>
#include <string_view>

namespace oligo {

// Counter-based random stream: the state advances by a per-stream odd
// increment and output goes through the SplitMix64 finalizer. Streams are
// cheap values; derive() children depend only on the parent's identity
// (its state at creation), never on how many draws the parent has made,
// so per-agent substreams can be derived in any order.
class RandomStream {
public:
    RandomStream() : RandomStream(0) {}
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    RandomStream derive(std::uint64_t tag) const;
    RandomStream derive(std::string_view name) const;
    RandomStream derive(std::uint64_t tag_a, std::uint64_t tag_b) const;

    std::uint64_t next_u64();

    double uniform01();                    // [0, 1)
    double uniform(double lo, double hi);  // [lo, hi); lo == hi allowed
    bool bernoulli(double p);
    bool coin() { return bernoulli(0.5); }
    double normal(double mean, double sd);
    double lognormal(double mu, double sigma);  // exp(normal(mu, sigma))

private:
    struct Raw {};
    RandomStream(Raw, std::uint64_t origin, std::uint64_t gamma);

    std::uint64_t origin_;  // state at creation; basis for derive()
    std::uint64_t gamma_;
    std::uint64_t state_;
};

}  // namespace oligo
