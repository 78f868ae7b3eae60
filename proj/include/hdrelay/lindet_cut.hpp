#pragma once

#include "hdrelay/field_matrix.hpp"
#include "hdrelay/network.hpp"
#include "hdrelay/schedule.hpp"

namespace hdrelay {

// Block transfer matrix from the stacked inputs of `tx` to the stacked outputs
// of `rx` (block (v, u) = G_uv, zero where there is no edge). Rows follow rx in
// node order, columns follow tx in node order.
FieldMatrix transfer_matrix(const Network& net, NodeMask tx, NodeMask rx);

// rank(Lambda_{tx, rx}) over F_p.
int lindet_cross_rank(const Network& net, NodeMask tx, NodeMask rx);

// rank(Lambda_{Omega n T(m), Omega^c n R(m)}). Throws ModelMismatch unless the
// model is linear deterministic.
int lindet_mode_cut_value(const Network& net, const Cut& omega, ModeConfig m);

double lindet_expected_cut_value(const Network& net, const Cut& omega, const Schedule& q);
// Grouped form: sum over components of expected component ranks.
double lindet_expected_cut_value(const Network& net, const Cut& omega, const GroupSchedule& locals);

}  // namespace hdrelay
