#include "ear/overhead.hpp"

#include <numeric>
#include <stdexcept>

namespace ear {

std::size_t header_len(std::size_t constituents, const HeaderModel& model, int receivers) {
    if (receivers < 1) throw std::invalid_argument("receivers must be >= 1");
    if (model.variant == HeaderScheme::A)
        return constituents * static_cast<std::size_t>(model.hash_bytes);
    return static_cast<std::size_t>(model.per_destination_bytes) *
           static_cast<std::size_t>(receivers);
}

std::size_t header_len(std::size_t constituents, const std::vector<long>& window_offsets,
                       const HeaderModel& model, int receivers) {
    if (model.variant == HeaderScheme::B) {
        if (window_offsets.size() != constituents)
            throw std::invalid_argument("one window offset per constituent required");
        for (long off : window_offsets)
            if (off < 0 || off >= model.window_packets)
                throw std::out_of_range("constituent outside the bitmap window");
    }
    return header_len(constituents, model, receivers);
}

double worst_case_total(double k, const ChannelParams& omega, const HeaderModel& model,
                        int receivers) {
    if (model.variant == HeaderScheme::A) {
        const double s =
            std::accumulate(omega.omegas.begin(), omega.omegas.end(), 0.0);
        return static_cast<double>(model.hash_bytes) * k * s;
    }
    return static_cast<double>(model.per_destination_bytes) * receivers;
}

}  // namespace ear
