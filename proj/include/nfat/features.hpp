#pragma once

#include "nfat/log_event.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace nfat {

using Vec4 = std::array<double, 4>;

// The 4 clustering dimensions plus the event id carried for traceability.
// The id is never a distance dimension.
struct FeatureVector {
    std::uint64_t event_id = 0;
    Vec4 dims{}; // (protocol_code, norm_port, ip_len, tcp_flags)

    double protocol_code() const { return dims[0]; }
    double norm_port() const { return dims[1]; }
    double ip_len() const { return dims[2]; }
    double tcp_flags() const { return dims[3]; }

    bool operator==(const FeatureVector&) const = default;
};

// d_port / 65535 * 100; strictly monotone over [0, 65535].
double normalize_port(std::uint16_t d_port);

// TCP -> 1.0, UDP -> 0.0.
double encode_protocol(Protocol protocol);

// Applies encode_protocol and normalize_port; ip_len and tcp_flags pass
// through unscaled.
FeatureVector to_feature_vector(const LogEvent& event);

std::vector<FeatureVector> to_feature_vectors(std::span<const LogEvent> events);

} // namespace nfat
