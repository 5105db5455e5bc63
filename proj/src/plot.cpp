#include "smc/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "smc/trajectory_io.hpp"

namespace smc
{
namespace
{
std::string xml_escape(const std::string& text)
{
  std::string out;
  for (char ch : text)
  {
    switch (ch)
    {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

struct Rgb
{
  double r, g, b;
};

// Light-to-dark sequential ramp for the density layer.
constexpr std::array<Rgb, 5> ramp = {{{255, 255, 255},
                                      {222, 235, 247},
                                      {158, 202, 225},
                                      {66, 146, 198},
                                      {8, 69, 148}}};

constexpr std::array<const char*, 8> agent_colors = {
    "#d62728", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#7f7f7f"};

std::string hex_color(double v)
{
  v = std::clamp(v, 0.0, 1.0) * (ramp.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(v), ramp.size() - 2);
  const double f = v - static_cast<double>(i);
  const auto mix = [&](double a, double b) { return static_cast<int>(std::lround(a + f * (b - a))); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(ramp[i].r, ramp[i + 1].r),
                mix(ramp[i].g, ramp[i + 1].g), mix(ramp[i].b, ramp[i + 1].b));
  return buf;
}

class Svg
{
public:
  void raw(std::string_view s) { out_ += s; }

  void num(double v)
  {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.2f", v);
    out_.append(buf, static_cast<std::size_t>(n));
  }

  void point(double x, double y)
  {
    num(x);
    out_ += ',';
    num(y);
  }

  std::string& str() { return out_; }

private:
  std::string out_;
};

/// Maps domain coordinates onto the canvas, y pointing up.
struct Frame
{
  double margin;
  double scale;
  double height;

  double x(double v) const { return margin + scale * v; }
  double y(double v) const { return margin + height - scale * v; }
};

std::vector<double> sample_density(const GaussianMixture& density, int n)
{
  const RectDomain& d = density.domain();
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const Vec2 p((i + 0.5) * d.lx() / n, (j + 0.5) * d.ly() / n);
      values[static_cast<std::size_t>(i) * n + j] = density.eval(p);
    }
  }
  return values;
}

void draw_heatmap(Svg& svg, const Frame& f, const GaussianMixture& density, int n, double vmax)
{
  const RectDomain& d = density.domain();
  const std::vector<double> values = sample_density(density, n);
  const double w = f.scale * d.lx() / n;
  const double h = f.scale * d.ly() / n;
  svg.raw("<g class=\"density\" shape-rendering=\"crispEdges\">\n");
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const double v = values[static_cast<std::size_t>(i) * n + j] / vmax;
      svg.raw("<rect x=\"");
      svg.num(f.x(i * d.lx() / n));
      svg.raw("\" y=\"");
      svg.num(f.y((j + 1) * d.ly() / n));
      svg.raw("\" width=\"");
      svg.num(w);
      svg.raw("\" height=\"");
      svg.num(h);
      svg.raw("\" fill=\"" + hex_color(v) + "\"/>\n");
    }
  }
  svg.raw("</g>\n");
}

/// Marching squares over cell-centre samples; each level is one path of
/// disconnected segments.
void draw_contours(Svg& svg, const Frame& f, const GaussianMixture& density, int n, int levels,
                   double vmax)
{
  const RectDomain& d = density.domain();
  const std::vector<double> v = sample_density(density, n);
  const auto at = [&](int i, int j) { return v[static_cast<std::size_t>(i) * n + j]; };
  const auto px = [&](double i) { return (i + 0.5) * d.lx() / n; };
  const auto py = [&](double j) { return (j + 0.5) * d.ly() / n; };

  for (int l = 1; l <= levels; ++l)
  {
    const double level = vmax * l / (levels + 1);
    svg.raw("<path class=\"contour\" fill=\"none\" stroke=\"#08306b\" stroke-width=\"0.6\" "
            "stroke-opacity=\"0.7\" d=\"");
    for (int i = 0; i + 1 < n; ++i)
    {
      for (int j = 0; j + 1 < n; ++j)
      {
        const double c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
        const double ci[4] = {0, 1, 1, 0};
        const double cj[4] = {0, 0, 1, 1};
        Vec2 hits[4];
        int count = 0;
        for (int e = 0; e < 4; ++e)
        {
          const int a = e;
          const int b = (e + 1) % 4;
          if ((c[a] < level) != (c[b] < level))
          {
            const double t = (level - c[a]) / (c[b] - c[a]);
            hits[count++] = Vec2(px(i + ci[a] + t * (ci[b] - ci[a])),
                                 py(j + cj[a] + t * (cj[b] - cj[a])));
          }
        }
        for (int k = 0; k + 1 < count; k += 2)
        {
          svg.raw("M");
          svg.point(f.x(hits[k].x()), f.y(hits[k].y()));
          svg.raw("L");
          svg.point(f.x(hits[k + 1].x()), f.y(hits[k + 1].y()));
        }
      }
    }
    svg.raw("\"/>\n");
  }
}

}  // namespace

std::string render_plot(const Trajectory& traj, const GaussianMixture& density,
                        const PlotOptions& options)
{
  const RectDomain& d = density.domain();
  const double margin = 24.0;
  const double inner = options.width - 2.0 * margin;
  const double scale = inner / std::max(d.lx(), d.ly());
  const Frame f{margin, scale, scale * d.ly()};
  const double canvas_w = 2.0 * margin + scale * d.lx();
  const double canvas_h = 2.0 * margin + scale * d.ly();

  Svg svg;
  svg.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  svg.raw("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"");
  svg.num(canvas_w);
  svg.raw("\" height=\"");
  svg.num(canvas_h);
  svg.raw("\" viewBox=\"0 0 ");
  svg.num(canvas_w);
  svg.raw(" ");
  svg.num(canvas_h);
  svg.raw("\">\n");
  if (!options.title.empty())
  {
    svg.raw("<title>" + xml_escape(options.title) + "</title>\n");
  }
  svg.raw("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

  const std::vector<double> peak = sample_density(density, options.contour_cells);
  const double vmax = std::max(*std::max_element(peak.begin(), peak.end()), 1e-300);
  draw_heatmap(svg, f, density, options.heat_cells, vmax);
  draw_contours(svg, f, density, options.contour_cells, options.contour_levels, vmax);

  svg.raw("<rect class=\"domain\" x=\"");
  svg.num(f.x(0));
  svg.raw("\" y=\"");
  svg.num(f.y(d.ly()));
  svg.raw("\" width=\"");
  svg.num(scale * d.lx());
  svg.raw("\" height=\"");
  svg.num(scale * d.ly());
  svg.raw("\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n");

  for (std::size_t a = 0; a < traj.agents(); ++a)
  {
    const std::string color = agent_colors[a % agent_colors.size()];
    svg.raw("<polyline class=\"path\" fill=\"none\" stroke=\"" + color +
            "\" stroke-width=\"1.5\" points=\"");
    Vec2 last(std::nan(""), std::nan(""));
    bool first = true;
    for (std::size_t s = 0; s < traj.samples(); ++s)
    {
      const Vec2& p = traj.positions[s][a];
      if (p == last && s + 1 != traj.samples())
      {
        continue;
      }
      if (!first)
      {
        svg.raw(" ");
      }
      svg.point(f.x(p.x()), f.y(p.y()));
      last = p;
      first = false;
    }
    svg.raw("\"/>\n");
  }

  const double arm = 6.0;
  for (std::size_t a = 0; a < traj.agents(); ++a)
  {
    const Vec2& p = traj.positions.front()[a];
    const double x = f.x(p.x());
    const double y = f.y(p.y());
    svg.raw("<path class=\"start\" stroke=\"#000000\" stroke-width=\"2\" d=\"M");
    svg.point(x - arm, y - arm);
    svg.raw("L");
    svg.point(x + arm, y + arm);
    svg.raw("M");
    svg.point(x - arm, y + arm);
    svg.raw("L");
    svg.point(x + arm, y - arm);
    svg.raw("\"/>\n");
  }
  for (std::size_t a = 0; a < traj.agents(); ++a)
  {
    const Vec2& p = traj.positions.back()[a];
    svg.raw("<circle class=\"end\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\" cx=\"");
    svg.num(f.x(p.x()));
    svg.raw("\" cy=\"");
    svg.num(f.y(p.y()));
    svg.raw("\" r=\"6\"/>\n");
  }
  svg.raw("</svg>\n");
  return std::move(svg.str());
}

void write_plot(const Trajectory& traj, const GaussianMixture& density,
                const std::filesystem::path& path, const PlotOptions& options)
{
  write_text_file(path, render_plot(traj, density, options));
}

}  // namespace smc
