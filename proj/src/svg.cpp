#include <algorithm>
#include <fmt/format.h>
#include <sstream>

#include "kwatch/io.hpp"

namespace kwatch {

namespace {

constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

struct View {
  double minx, maxy, scale, pad;
  std::string operator()(Point p) const {
    return fmt::format("{:.3f},{:.3f}", pad + (p.x - minx) * scale, pad + (maxy - p.y) * scale);
  }
};

std::string polyline(const View& view, const std::vector<Point>& pts, bool closed) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) d += (i == 0 ? "M" : " L") + view(pts[i]);
  if (closed) d += " Z";
  return d;
}

}  // namespace

std::string render_svg(const Instance& inst, const ResultRecord& rec, const SvgOptions& options) {
  const Polygon poly = instance_polygon(inst);
  double minx = poly[0].x, maxx = minx, miny = poly[0].y, maxy = miny;
  for (const Point& p : poly.vertices()) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double pad = 20.0;
  const double scale = (options.width - 2 * pad) / std::max({maxx - minx, maxy - miny, 1e-9});
  const View view{minx, maxy, scale, pad};
  const double w = (maxx - minx) * scale + 2 * pad, h = (maxy - miny) * scale + 2 * pad;

  std::ostringstream out;
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.3f} {:.3f}\">\n",
      w, h, w, h);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g id=\"polygon\">\n"
      << fmt::format("<path d=\"{}\" fill=\"#f2f2f2\" stroke=\"black\" stroke-width=\"2\"/>\n",
                     polyline(view, poly.vertices(), true))
      << "</g>\n";

  if (inst.mode == SolveMode::kQuota && rec.stats.contains("r_final") &&
      rec.stats["r_final"].get<double>() > 0.0) {
    const GeodesicDisk disk = geodesic_disk(poly, inst.start, rec.stats["r_final"].get<double>());
    out << fmt::format("<g id=\"disk\" data-radius=\"{}\">\n", disk.radius);
    for (const Ring& ring : disk.rings)
      out << fmt::format(
          "<path d=\"{}\" fill=\"#ffdd88\" fill-opacity=\"0.35\" stroke=\"#cc8800\" "
          "stroke-width=\"1.5\"/>\n",
          polyline(view, ring, true));
    out << "</g>\n";
  }

  if (poly.orthogonal() && poly.integral()) {
    const EssentialCutList cuts = compute_essential_cuts(poly, inst.start);
    if (options.grid) {
      const HananGrid grid = build_hanan_grid(poly, inst.start, cuts);
      out << "<g id=\"grid\" stroke=\"#9ab\" stroke-width=\"0.6\">\n";
      for (std::size_t a = 0; a < grid.size(); ++a)
        for (const auto& e : grid.neighbors(a))
          if (a < e.to)
            out << fmt::format("<path d=\"{}\"/>\n",
                               polyline(view, {grid.node(a), grid.node(e.to)}, false));
      for (const Point& p : grid.nodes()) {
        const std::string c = view(p);
        const auto comma = c.find(',');
        out << fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"1.5\" fill=\"#9ab\"/>\n",
                           c.substr(0, comma), c.substr(comma + 1));
      }
      out << "</g>\n";
    }
    out << "<g id=\"cuts\" stroke=\"#555\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\">\n";
    for (const Cut& cut : cuts.cuts)
      out << fmt::format("<path d=\"{}\"/>\n",
                         polyline(view, {cut.reflex_vertex, cut.far_endpoint}, false));
    out << "</g>\n";
  }

  out << "<g id=\"routes\" fill=\"none\" stroke-width=\"2.5\" stroke-linejoin=\"round\">\n";
  for (std::size_t i = 0; i < rec.routes.size(); ++i) {
    if (rec.routes[i].size() < 2) continue;
    out << fmt::format("<path d=\"{}\" stroke=\"{}\" stroke-opacity=\"0.8\"/>\n",
                       polyline(view, rec.routes[i], false), kPalette[i % std::size(kPalette)]);
  }
  out << "</g>\n";

  const std::string s = view(inst.start);
  const auto comma = s.find(',');
  out << fmt::format("<circle id=\"start\" cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"black\"/>\n",
                     s.substr(0, comma), s.substr(comma + 1));
  out << "</svg>\n";
  return out.str();
}

}  // namespace kwatch
