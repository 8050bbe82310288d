#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "twrelay/region_solver.hpp"
#include "twrelay/types.hpp"

namespace twr {

nlohmann::json csi_to_json(const ChannelState& csi);
ChannelState csi_from_json(const nlohmann::json& j);

nlohmann::json alloc_to_json(const ResourceAllocation& a);
ResourceAllocation alloc_from_json(const nlohmann::json& j);

/// Reads any subset of SolverConfig keys; unknown keys are rejected.
SolverConfig config_from_json(const nlohmann::json& j, SolverConfig base = {});
nlohmann::json config_to_json(const SolverConfig& c);

/// FNV-1a 64 over the compact CSI JSON, as 16 hex digits.
std::string csi_digest(const ChannelState& csi);
std::string fnv1a_hex(const std::string& bytes);

/// printf("%.12g")
std::string format_number(double v);

std::string region_csv(const std::vector<const RegionBoundary*>& regions);
nlohmann::json region_json(const RegionBoundary& region);

nlohmann::json read_json_file(const std::string& path);
/// Writes j.dump(2) plus a trailing newline.
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

ChannelState read_csi_file(const std::string& path);
void write_csi_file(const std::string& path, const ChannelState& csi);

}  // namespace twr
