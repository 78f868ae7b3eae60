#pragma once

#include <string>

#include <json.hpp>

#include "hdrelay/network.hpp"
#include "hdrelay/schedule.hpp"

namespace hdrelay {

// JSON interchange. Network documents look like
//   {"nodes": 4, "source": 0, "dest": 3,
//    "model": {"kind": "gaussian_real" | "gaussian_complex" | "linear_deterministic", "p": 2, "k": 3},
//    "edges": [{"u": 0, "v": 1, "gain": ...}, ...]}
// with gains as decimal strings ("1.25"), complex gains as {"re": "...", "im": "..."},
// ADT levels as {"level": n} and general field matrices as {"matrix": [[...], ...]}.
// Floats are written with 17 significant digits. Documents carry "type"
// ("network" | "schedule" | "group_schedule") so loaders can reject mix-ups.

nlohmann::json to_json(const Network& net);
nlohmann::json to_json(const Schedule& q);
nlohmann::json to_json(const GroupSchedule& gs);

// Throw Error(ParseError) naming the JSON location of the problem, or the
// validation error of the constructed object.
Network network_from_json(const nlohmann::json& doc);
Schedule schedule_from_json(const nlohmann::json& doc);
GroupSchedule group_schedule_from_json(const nlohmann::json& doc);

Network parse_network(const std::string& text);
Schedule parse_schedule(const std::string& text);
GroupSchedule parse_group_schedule(const std::string& text);

std::string format_double(double x);
double parse_double(const std::string& text, const std::string& where);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hdrelay
