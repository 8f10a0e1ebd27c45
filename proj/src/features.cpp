#include "nfat/features.hpp"

namespace nfat {

double normalize_port(std::uint16_t d_port) {
    return static_cast<double>(d_port) / 65535.0 * 100.0;
}

double encode_protocol(Protocol protocol) {
    return protocol == Protocol::TCP ? 1.0 : 0.0;
}

FeatureVector to_feature_vector(const LogEvent& event) {
    FeatureVector fv;
    fv.event_id = event.event_id;
    fv.dims = {encode_protocol(event.protocol), normalize_port(event.d_port),
               static_cast<double>(event.ip_len), static_cast<double>(event.tcp_flags)};
    return fv;
}

std::vector<FeatureVector> to_feature_vectors(std::span<const LogEvent> events) {
    std::vector<FeatureVector> out;
    out.reserve(events.size());
    for (const auto& event : events)
        out.push_back(to_feature_vector(event));
    return out;
}

} // namespace nfat
