#include "geocontract/mesh_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "geocontract/errors.hpp"

namespace geocontract {

namespace {

// Whitespace tokenizer over OFF content that drops '#' comments.
class OffTokens {
 public:
  explicit OffTokens(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == '#') {
        while (i < text.size() && text[i] != '\n') ++i;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else {
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '#') ++j;
        tokens_.push_back(text.substr(i, j - i));
        i = j;
      }
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }
  std::string_view next() {
    if (done()) throw Error(ErrorCode::ParseError, "unexpected end of OFF data");
    return tokens_[pos_++];
  }
  template <typename T>
  T number() {
    std::string_view tok = next();
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw Error(ErrorCode::ParseError, "bad number '" + std::string(tok) + "'");
    return value;
  }

 private:
  std::vector<std::string_view> tokens_;
  std::size_t pos_ = 0;
};

void fan(const std::vector<int>& poly, std::vector<MetricSurface::Triangle>& out) {
  if (poly.size() < 3) throw Error(ErrorCode::ParseError, "face with fewer than 3 vertices");
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) out.push_back({poly[0], poly[i], poly[i + 1]});
}

MetricSurface parse_off(std::string_view text) {
  OffTokens tok(text);
  std::string_view head = tok.next();
  if (head != "OFF") throw Error(ErrorCode::ParseError, "missing OFF header");
  int nv = tok.number<int>(), nf = tok.number<int>();
  tok.number<int>();
  if (nv <= 0 || nf <= 0) throw Error(ErrorCode::ParseError, "bad OFF counts");
  std::vector<Vec3> verts(nv);
  for (auto& v : verts) v = {tok.number<double>(), tok.number<double>(), tok.number<double>()};
  std::vector<MetricSurface::Triangle> tris;
  for (int f = 0; f < nf; ++f) {
    int n = tok.number<int>();
    std::vector<int> poly(n);
    for (int& i : poly) {
      i = tok.number<int>();
      if (i < 0 || i >= nv) throw Error(ErrorCode::ParseError, "vertex index out of range");
    }
    fan(poly, tris);
  }
  return MetricSurface(std::move(verts), std::move(tris));
}

MetricSurface parse_obj(std::string_view text) {
  std::vector<Vec3> verts;
  std::vector<MetricSurface::Triangle> tris;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind[0] == '#') continue;
    if (kind == "v") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z))
        throw Error(ErrorCode::ParseError, "bad vertex on line " + std::to_string(lineno));
      verts.push_back(v);
    } else if (kind == "f") {
      std::vector<int> poly;
      std::string item;
      while (ls >> item) {
        std::string head = item.substr(0, item.find('/'));
        int idx = 0;
        auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
        if (ec != std::errc() || ptr != head.data() + head.size() || idx == 0)
          throw Error(ErrorCode::ParseError, "bad face index on line " + std::to_string(lineno));
        idx = idx > 0 ? idx - 1 : static_cast<int>(verts.size()) + idx;
        if (idx < 0 || idx >= static_cast<int>(verts.size()))
          throw Error(ErrorCode::ParseError, "face index out of range on line " + std::to_string(lineno));
        poly.push_back(idx);
      }
      fan(poly, tris);
    }
  }
  if (verts.empty() || tris.empty()) throw Error(ErrorCode::ParseError, "OBJ has no v/f records");
  return MetricSurface(std::move(verts), std::move(tris));
}

}  // namespace

MetricSurface load_surface(std::string_view text, MeshFormat format) {
  return format == MeshFormat::Off ? parse_off(text) : parse_obj(text);
}

MetricSurface load_surface_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == "off") return load_surface(buf.str(), MeshFormat::Off);
  if (ext == "obj") return load_surface(buf.str(), MeshFormat::Obj);
  throw Error(ErrorCode::ParseError, "unknown mesh extension '" + ext + "'");
}

std::string to_off(const MetricSurface& s) {
  std::ostringstream out;
  out << std::setprecision(17) << "OFF\n" << s.vertex_count() << ' ' << s.face_count() << " 0\n";
  for (const auto& v : s.vertices()) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& t : s.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  return out.str();
}

std::string to_obj(const MetricSurface& s) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& v : s.vertices()) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& t : s.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  return out.str();
}

}  // namespace geocontract
