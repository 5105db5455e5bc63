#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "smc/simulator.hpp"

namespace smc
{
/// Column header of trajectory files.
inline constexpr std::string_view trajectory_header = "t,agent_id,x,y,u_norm,metric";

/// Comma-separated text: the header, then one row per recorded sample and
/// agent, ordered by (t, agent_id). Numbers use 17 significant digits, so
/// reading the text back reproduces every double exactly.
std::string format_trajectory(const Trajectory& traj);
void write_trajectory(const Trajectory& traj, const std::filesystem::path& path);

/// Inverse of format_trajectory. Only the sampled data is restored; the
/// configuration fields keep their defaults. Throws IoError on malformed
/// input, naming the line.
Trajectory parse_trajectory(std::string_view text);
Trajectory read_trajectory(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace smc
