#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qosheft/platform.hpp"
#include "qosheft/rational.hpp"
#include "qosheft/workload.hpp"

namespace qosheft {

/// Upward ranks in DagSpec task order.
struct RankTable {
    std::vector<std::string> task_ids;
    std::vector<Rational> ranks;

    Rational const & at(std::string_view task_id) const;
};

/// rank(i) = mean base-level time of i + max over successors j of
/// (mean communication cost i->j + rank(j)); exact rational arithmetic.
RankTable upward_ranks(DagSpec const & dag, Platform const & platform);

/// Task ids by descending rank, ties by ascending task id.
std::vector<std::string> priority_order(RankTable const & ranks);

/// Same order as priority_order, as indices into the table.
std::vector<std::size_t> priority_indices(RankTable const & ranks);

} // namespace qosheft
