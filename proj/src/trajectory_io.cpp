#include "smc/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace smc
{
namespace
{
void append_number(std::string& out, double v)
{
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

double parse_number(std::string_view field, std::size_t line)
{
  // strtod accepts every spelling printf("%.17g") can emit, including inf/nan.
  std::string tmp(field);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size())
  {
    throw IoError("trajectory line " + std::to_string(line) + ": bad number '" + tmp + "'");
  }
  return v;
}

}  // namespace

std::string format_trajectory(const Trajectory& traj)
{
  std::string out(trajectory_header);
  out += '\n';
  out.reserve(out.size() + traj.samples() * traj.agents() * 96);
  for (std::size_t s = 0; s < traj.samples(); ++s)
  {
    for (std::size_t i = 0; i < traj.positions[s].size(); ++i)
    {
      append_number(out, traj.times[s]);
      out += ',';
      out += std::to_string(i);
      out += ',';
      append_number(out, traj.positions[s][i].x());
      out += ',';
      append_number(out, traj.positions[s][i].y());
      out += ',';
      append_number(out, traj.control_norms[s][i]);
      out += ',';
      append_number(out, traj.metric[s]);
      out += '\n';
    }
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
  if (path.has_parent_path())
  {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
    {
      throw IoError("cannot create directory '" + path.parent_path().string() +
                    "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw IoError("cannot write '" + path.string() + "'");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
  {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& path)
{
  write_text_file(path, format_trajectory(traj));
}

Trajectory parse_trajectory(std::string_view text)
{
  Trajectory traj;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size())
  {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos)
    {
      eol = text.size();
    }
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r')
    {
      line.remove_suffix(1);
    }
    if (!header_seen)
    {
      if (line != trajectory_header)
      {
        throw IoError("trajectory line 1: expected header '" + std::string(trajectory_header) +
                      "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty())
    {
      continue;
    }

    std::string_view fields[6];
    std::size_t count = 0;
    std::size_t start = 0;
    while (count < 6)
    {
      const std::size_t comma = line.find(',', start);
      fields[count++] = line.substr(start, comma == std::string_view::npos ? line.npos
                                                                           : comma - start);
      if (comma == std::string_view::npos)
      {
        break;
      }
      start = comma + 1;
    }
    if (count != 6 || line.find(',', start) != std::string_view::npos)
    {
      throw IoError("trajectory line " + std::to_string(line_no) + ": expected 6 fields");
    }

    const double t = parse_number(fields[0], line_no);
    std::size_t agent = 0;
    const auto [ptr, ec] =
        std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), agent);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size())
    {
      throw IoError("trajectory line " + std::to_string(line_no) + ": bad agent id");
    }

    if (agent == 0)
    {
      if (!traj.times.empty() && !(t > traj.times.back()))
      {
        throw IoError("trajectory line " + std::to_string(line_no) +
                      ": times must be strictly increasing");
      }
      traj.times.push_back(t);
      traj.positions.emplace_back();
      traj.control_norms.emplace_back();
      traj.metric.push_back(parse_number(fields[5], line_no));
    }
    else if (traj.times.empty() || t != traj.times.back() ||
             agent != traj.positions.back().size())
    {
      throw IoError("trajectory line " + std::to_string(line_no) +
                    ": rows must be ordered by (t, agent_id)");
    }
    traj.positions.back().emplace_back(parse_number(fields[2], line_no),
                                       parse_number(fields[3], line_no));
    traj.control_norms.back().push_back(parse_number(fields[4], line_no));
  }
  if (!header_seen)
  {
    throw IoError("trajectory file is empty");
  }
  for (std::size_t s = 1; s < traj.positions.size(); ++s)
  {
    if (traj.positions[s].size() != traj.positions[0].size())
    {
      throw IoError("trajectory samples have differing agent counts");
    }
  }
  return traj;
}

Trajectory read_trajectory(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trajectory(ss.str());
}

}  // namespace smc
