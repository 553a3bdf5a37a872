#pragma once

#include <cstdint>

namespace sympflow {

/// Standard-normal quantile function (Wichura's AS 241, double precision).
/// Requires u in (0, 1).
double inverse_normal_cdf(double u);

/// Reproducible per-path random stream: state derived statelessly from
/// (master seed, stream index) through SplitMix64 mixing, generation by
/// xoshiro256++, Gaussians by inverse CDF. Streams for distinct indices are
/// independent for simulation purposes and can be created in any order, so
/// ensemble results do not depend on worker count or scheduling.
class GaussianStream {
public:
    GaussianStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double uniform01();
    double gaussian();

private:
    std::uint64_t s_[4];
};

}  // namespace sympflow
