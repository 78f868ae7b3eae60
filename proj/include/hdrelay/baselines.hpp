#pragma once

#include <cstdint>

#include "hdrelay/network.hpp"
#include "hdrelay/schedule.hpp"
#include "hdrelay/sfm.hpp"

namespace hdrelay {

// Min over cuts of the value with every node transmitting and receiving.
MinCutResult full_duplex_min_cut(const Network& net, const MinCutOptions& options = {});
double full_duplex_bound(const Network& net, const MinCutOptions& options = {});

// Min over cuts of the expected half-duplex value under q.
MinCutResult schedule_min_cut(const Network& net, const Schedule& q, const MinCutOptions& options = {});

// Two configurations, 1/2 each: even layers transmit, then odd layers
// transmit. Throws NotLayered.
Schedule naive_schedule(const Network& net);

// Each relay layer is shuffled and split into halves of sizes ceil(w/2) and
// floor(w/2). In slot t, half h of layer l transmits iff l + h + t is even.
// S always transmits, D always receives. Throws NotLayered, LayerTooThin.
Schedule simple_random_schedule(const Network& net, std::uint64_t seed);

// schedule_min_cut / full_duplex_bound. Throws ZeroFullDuplex.
double hd_fd_ratio(const Network& net, const Schedule& q, const MinCutOptions& options = {});

}  // namespace hdrelay
