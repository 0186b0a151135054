#pragma once

#include <cstddef>
#include <vector>

#include "ear/channel_params.hpp"

namespace ear {

enum class HeaderScheme { A, B };

// NC-header accounting for the two encoding-identification schemes:
// A records a 2-byte hash per constituent native packet; B carries a 19-byte
// receive bitmap (152 packets wide) per destination regardless of content.
struct HeaderModel {
    HeaderScheme variant = HeaderScheme::A;
    int hash_bytes = 2;
    int per_destination_bytes = 19;
    int window_packets = 152;
};

// Header length of one transmission carrying `constituents` native packets.
std::size_t header_len(std::size_t constituents, const HeaderModel& model, int receivers);

// Variant that also validates Scheme B's bitmap window: each offset is a
// constituent's sequence number relative to the current batch window and must
// fall inside [0, window_packets). Throws when one does not.
std::size_t header_len(std::size_t constituents, const std::vector<long>& window_offsets,
                       const HeaderModel& model, int receivers);

// Worst-case accounting: Scheme A totals 2*K*sum(omega) bytes over the whole
// batch; Scheme B costs 19*N bytes on every packet regardless of K.
double worst_case_total(double k, const ChannelParams& omega, const HeaderModel& model,
                        int receivers);

}  // namespace ear
