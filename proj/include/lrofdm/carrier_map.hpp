#pragma once
#include <algorithm>
#include <stdexcept>
#include <string>

#include "dsp.hpp"

namespace lrofdm {

// Partition of the K subcarriers into data, pilot and null bins.
// Indices are DFT bin numbers in [0, K); negative logical indices are
// stored wrapped mod K.
struct CarrierMap {
    int k = 64;
    std::vector<int> data;        // ascending
    std::vector<int> pilots;      // ascending
    std::vector<cplx> pilot_vals; // parallel to pilots

    int occupied() const { return static_cast<int>(data.size() + pilots.size()); }

    bool is_occupied(int bin) const {
        return std::binary_search(data.begin(), data.end(), bin) ||
               std::binary_search(pilots.begin(), pilots.end(), bin);
    }

    void validate() const {
        if (k <= 0) throw std::invalid_argument("carrier map: k must be positive");
        if (data.empty()) throw std::invalid_argument("carrier map: no data carriers");
        if (pilots.size() != pilot_vals.size())
            throw std::invalid_argument("carrier map: pilot value count mismatch");
        std::vector<char> seen(static_cast<std::size_t>(k), 0);
        auto claim = [&](int bin) {
            if (bin < 0 || bin >= k)
                throw std::invalid_argument("carrier map: bin " + std::to_string(bin) +
                                            " out of range");
            if (seen[static_cast<std::size_t>(bin)]++)
                throw std::invalid_argument("carrier map: bin " + std::to_string(bin) +
                                            " claimed twice");
        };
        for (int b : data) claim(b);
        for (int b : pilots) claim(b);
    }
};

// Symmetric layout builder: occupied logical carriers -occupied_half..-1
// and +1..+occupied_half, DC and the outer guard band null. Pilot
// offsets are logical (signed) carrier numbers and must fall inside the
// occupied span.
inline CarrierMap make_symmetric_map(int k, int occupied_half, const std::vector<int>& pilot_offsets,
                                     const std::vector<cplx>& pilot_vals) {
    if (occupied_half < 1 || 2 * occupied_half >= k)
        throw std::invalid_argument("carrier map: occupied_half out of range");
    CarrierMap m;
    m.k = k;
    auto wrap = [k](int c) { return ((c % k) + k) % k; };
    std::vector<int> pw;
    for (int off : pilot_offsets) {
        if (off == 0 || std::abs(off) > occupied_half)
            throw std::invalid_argument("carrier map: pilot offset outside occupied span");
        pw.push_back(wrap(off));
    }
    // keep pilot_vals aligned while sorting pilots ascending
    std::vector<std::size_t> order(pw.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pw[a] < pw[b]; });
    for (std::size_t i : order) {
        m.pilots.push_back(pw[i]);
        m.pilot_vals.push_back(pilot_vals.at(i));
    }
    for (int c = -occupied_half; c <= occupied_half; ++c) {
        if (c == 0) continue;
        const int bin = wrap(c);
        if (!std::binary_search(m.pilots.begin(), m.pilots.end(), bin)) m.data.push_back(bin);
    }
    std::sort(m.data.begin(), m.data.end());
    m.validate();
    return m;
}

// The common 64-carrier convention: 52 occupied (26 each side), four
// pilots, DC plus an 11-bin guard band null. 48 data carriers, so one
// symbol carries 96 QPSK bits.
inline CarrierMap default_map_64() {
    return make_symmetric_map(64, 26, {-21, -7, 7, 21},
                              {cplx{1, 0}, cplx{1, 0}, cplx{1, 0}, cplx{-1, 0}});
}

} // namespace lrofdm
