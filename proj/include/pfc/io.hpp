#pragma once

#include <map>
#include <string>
#include <vector>

#include "pfc/census.hpp"
#include "pfc/connection.hpp"
#include "pfc/continuation.hpp"
#include "pfc/phase_diagram.hpp"
#include "pfc/state_record.hpp"

namespace pfc {

inline constexpr int kStateFormatVersion = 1;

// Writes content to path via a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// key=value text document followed by a [grid] block. `config` lines are
// stored as comments so a run can be reproduced from the file alone.
std::string format_state(const StateRecord& rec, const std::map<std::string, std::string>& config = {},
                         bool partial = false);
// Restores grid, spec, identity, provenance and the stored reports. Throws
// ConfigError on malformed input.
StateRecord parse_state(const std::string& text);

void write_state(const std::string& path, const StateRecord& rec,
                 const std::map<std::string, std::string>& config = {}, bool partial = false);
StateRecord read_state(const std::string& path);

std::string format_interval(const Interval& x);
Interval parse_interval(const std::string& s);

std::string edges_csv(const std::vector<ConnectionEdge>& edges);
std::string branch_csv(const Branch& b);
std::string phase_csv(const std::vector<PhasePoint>& pts);
std::string census_csv(const CensusResult& r);
// n x n samples of the real-space field over one period, rows along y.
std::string field_csv(const CoeffGrid& a, const ModelSpec& spec, int n);

}  // namespace pfc
