#pragma once

#include <functional>
#include <span>
#include <vector>

#include "igmtf/tape.hpp"

namespace igmtf {

/// Forward program handed to the checker: builds the scalar loss on a fresh
/// tape from the current parameter storage and reports which nodes are the
/// parameters, aligned with the storage list.
struct BuiltGraph {
    NodeId root;
    std::vector<NodeId> params;
};

using GraphBuilder = std::function<BuiltGraph(Tape&)>;

/// Compares analytic gradients against central finite differences over every
/// entry of every parameter. Returns the max of
/// |analytic − numeric| / max(1, |analytic|); +inf if anything non-finite
/// shows up. The builder must be deterministic and read parameters through
/// the given storage pointers.
double finite_difference_check(const GraphBuilder& build, std::span<Matrix* const> params,
                               double epsilon = 1e-5);

}  // namespace igmtf
