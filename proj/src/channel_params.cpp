#include "ear/channel_params.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ear {

ChannelParams make_channel(std::vector<double> omegas) {
    for (double w : omegas)
        if (!(w >= 0.0 && w <= 1.0))
            throw std::invalid_argument("omega must be in [0, 1]");
    ChannelParams params{std::move(omegas), false};
    params.sorted_ascending =
        std::is_sorted(params.omegas.begin(), params.omegas.end());
    return params;
}

std::pair<ChannelParams, std::vector<int>> sort_channel(const ChannelParams& params) {
    std::vector<int> perm(params.omegas.size());
    std::iota(perm.begin(), perm.end(), 1);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
        return params.omega(a) < params.omega(b);
    });
    ChannelParams sorted;
    sorted.omegas.reserve(perm.size());
    for (int r : perm) sorted.omegas.push_back(params.omega(r));
    sorted.sorted_ascending = true;
    return {std::move(sorted), std::move(perm)};
}

}  // namespace ear
