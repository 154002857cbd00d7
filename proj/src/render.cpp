#include "geocontract/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace geocontract {

namespace {

struct Camera {
  Vec3 right, up, toward;  // toward points at the viewer
};

Camera make_camera(double az, double el) {
  Camera c;
  c.toward = {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
  c.right = {-std::sin(az), std::cos(az), 0};
  c.up = cross(c.toward, c.right);
  return c;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const MetricSurface& s, const std::vector<Overlay>& overlays, const RenderOptions& opt) {
  const Camera cam = make_camera(opt.azimuth, opt.elevation);
  Vec3 centre{0, 0, 0};
  for (const auto& v : s.vertices()) centre += v;
  centre = centre * (1.0 / std::max(1, s.vertex_count()));

  double extent = 1e-12;
  for (const auto& v : s.vertices()) extent = std::max(extent, norm(v - centre));
  const double half = opt.size / 2.0;
  const double scale = 0.9 * half / extent;
  auto project = [&](const Vec3& p) {
    const Vec3 d = p - centre;
    return std::array<double, 3>{half + scale * dot(d, cam.right), half - scale * dot(d, cam.up), dot(d, cam.toward)};
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.size) + "\" height=\"" +
         std::to_string(opt.size) + "\" viewBox=\"0 0 " + std::to_string(opt.size) + " " +
         std::to_string(opt.size) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const auto& tris = s.triangles();
  std::vector<double> depth(tris.size());
  for (std::size_t f = 0; f < tris.size(); ++f) {
    double z = 0;
    for (int k = 0; k < 3; ++k) z += project(s.vertices()[tris[f][k]])[2];
    depth[f] = z / 3;
  }
  std::vector<int> order(tris.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return depth[a] < depth[b]; });

  out += "<g stroke=\"#888\" stroke-width=\"0.3\" stroke-linejoin=\"round\">\n";
  for (int f : order) {
    const Vec3& a = s.vertices()[tris[f][0]];
    const Vec3& b = s.vertices()[tris[f][1]];
    const Vec3& c = s.vertices()[tris[f][2]];
    Vec3 n = cross(b - a, c - a);
    const double len = norm(n);
    const double lambert = len > 0 ? std::abs(dot(n, cam.toward)) / len : 0;
    const int g = static_cast<int>(150 + 95 * lambert);
    char fill[16];
    std::snprintf(fill, sizeof fill, "#%02x%02x%02x", g, g, std::min(255, g + 8));
    out += "<polygon points=\"";
    for (const Vec3* p : {&a, &b, &c}) {
      const auto q = project(*p);
      out += fmt(q[0]) + "," + fmt(q[1]) + " ";
    }
    out.pop_back();
    out += "\" fill=\"" + std::string(fill) + "\"/>\n";
  }
  out += "</g>\n";

  for (const auto& ov : overlays) {
    if (ov.points.empty()) continue;
    const std::size_t n = ov.points.size();
    const std::size_t segs = ov.closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i) {
      const auto p = project(ov.points[i]);
      const auto q = project(ov.points[(i + 1) % n]);
      const bool hidden = p[2] + q[2] < 0;
      out += "<line x1=\"" + fmt(p[0]) + "\" y1=\"" + fmt(p[1]) + "\" x2=\"" + fmt(q[0]) + "\" y2=\"" + fmt(q[1]) +
             "\" stroke=\"" + ov.color + "\" stroke-width=\"" + fmt(ov.stroke) + "\"" +
             (hidden ? " stroke-opacity=\"0.3\" stroke-dasharray=\"3,2\"" : "") + "/>\n";
    }
  }
  if (!opt.title.empty()) {
    std::string t;
    for (char ch : opt.title) {
      if (ch == '<') t += "&lt;";
      else if (ch == '>') t += "&gt;";
      else if (ch == '&') t += "&amp;";
      else t += ch;
    }
    out += "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" + t + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace geocontract
