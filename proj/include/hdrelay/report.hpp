#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "hdrelay/experiments.hpp"
#include "hdrelay/grouping.hpp"
#include "hdrelay/schedule_opt.hpp"
#include "hdrelay/sfm.hpp"

namespace hdrelay {

// JSON views of results, shared by the command line tool and the bindings.
// Numbers are plain JSON numbers here; only interchange documents use strings.

nlohmann::json cut_nodes(const Cut& c);  // sorted node list of Omega
nlohmann::json to_json(const SolveResult& r);
nlohmann::json to_json(const MinCutResult& r);
nlohmann::json to_json(const TreeDecomposition& td, const UndirectedGraph& g);

enum class GroupingKind { Auto, Heuristic, Layered, Line };
GroupingKind parse_grouping_kind(const std::string& s);
std::string to_string(GroupingKind k);

// Auto: layered decomposition when the network is layered, the line one when
// every edge spans at most two positions, the heuristic grouping otherwise.
TreeDecomposition decompose(const Network& net, GroupingKind kind);

// Grouping + its checks: sufficient conditions, exhaustive P1 when small
// enough (null otherwise), and the tree decomposition with its verification.
nlohmann::json group_report(const Network& net, GroupingKind kind);

// Full-duplex bound, optimized rate (dense when within `dense_cap` nodes,
// grouped otherwise) and the two baselines. Baseline errors are reported
// inline instead of thrown.
nlohmann::json compare_report(const Network& net, std::uint64_t seed, int dense_cap = kDefaultDenseCap);

nlohmann::json to_json(const TimingRow& r);
nlohmann::json to_json(const DutyRow& r);
nlohmann::json to_json(const RatioRow& r);
nlohmann::json to_json(const RatioInstance& r);

}  // namespace hdrelay
