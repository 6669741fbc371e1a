#include "teethseg/mesh.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "teethseg/error.hpp"
#include "teethseg/format.hpp"

namespace teethseg {

namespace {

struct LineCursor {
  std::string_view rest;
  std::size_t line_no = 0;

  bool next(std::string_view& line) {
    if (rest.empty()) return false;
    auto pos = rest.find('\n');
    line = rest.substr(0, pos);
    rest = pos == std::string_view::npos ? std::string_view{} : rest.substr(pos + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    return true;
  }
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v'; }

std::string_view next_token(std::string_view& s) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  std::size_t j = i;
  while (j < s.size() && !is_space(s[j])) ++j;
  auto tok = s.substr(i, j - i);
  s.remove_prefix(j);
  return tok;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view tok, std::size_t line_no) {
  double value = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    fail(line_no, "malformed number '" + std::string(tok) + "'");
  }
  return value;
}

Vec3 parse_vec3(std::string_view rest, std::size_t line_no) {
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    auto tok = next_token(rest);
    if (tok.empty()) fail(line_no, "expected 3 coordinates");
    v[k] = parse_double(tok, line_no);
  }
  // Trailing tokens (w, vertex colours) are accepted and ignored.
  return v;
}

struct PendingFace {
  Face face;
  std::size_t line_no;
};

}  // namespace

bool TriMesh::operator==(const TriMesh& other) const {
  return vertices == other.vertices && faces == other.faces && normals == other.normals;
}

void check_mesh(const TriMesh& mesh) {
  const auto n = static_cast<Index>(mesh.vertices.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    for (Index v : mesh.faces[f]) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::invalid_argument,
                    "face " + std::to_string(f) + " references vertex " + std::to_string(v));
      }
    }
  }
  if (!mesh.normals.empty() && mesh.normals.size() != mesh.vertices.size()) {
    throw Error(ErrorCode::invalid_argument, "normal count differs from vertex count");
  }
}

TriMesh parse_obj(std::string_view text) {
  TriMesh mesh;
  Points normals;
  std::vector<PendingFace> pending;
  std::vector<Index> polygon;

  LineCursor cursor{text};
  std::string_view line;
  while (cursor.next(line)) {
    std::string_view rest = line;
    auto kind = next_token(rest);
    if (kind == "v") {
      mesh.vertices.push_back(parse_vec3(rest, cursor.line_no));
    } else if (kind == "vn") {
      Vec3 n = parse_vec3(rest, cursor.line_no);
      double len = n.norm();
      if (!(len > 0.0)) fail(cursor.line_no, "zero-length normal");
      // Already-unit normals are kept bit-exact so write/parse round-trips.
      normals.push_back(std::abs(len - 1.0) > 1e-12 ? Vec3(n / len) : n);
    } else if (kind == "f") {
      polygon.clear();
      for (auto tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
        auto slash = tok.find('/');
        auto idx_tok = tok.substr(0, slash);
        long long idx = 0;
        auto [ptr, ec] = std::from_chars(idx_tok.data(), idx_tok.data() + idx_tok.size(), idx);
        if (idx_tok.empty() || ec != std::errc() || ptr != idx_tok.data() + idx_tok.size()) {
          fail(cursor.line_no, "malformed face index '" + std::string(tok) + "'");
        }
        if (idx == 0) fail(cursor.line_no, "face index 0 is not valid in OBJ");
        long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(mesh.vertices.size()) + idx;
        if (resolved < 0 || resolved > INT32_MAX) {
          fail(cursor.line_no, "face index " + std::to_string(idx) + " out of range");
        }
        polygon.push_back(static_cast<Index>(resolved));
      }
      if (polygon.size() < 3) fail(cursor.line_no, "face with fewer than 3 vertices");
      for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
        pending.push_back({{polygon[0], polygon[k], polygon[k + 1]}, cursor.line_no});
      }
    }
    // everything else (vt, vp, o, g, s, usemtl, mtllib, l, comments) is ignored
  }

  const auto n = static_cast<Index>(mesh.vertices.size());
  mesh.faces.reserve(pending.size());
  for (const auto& p : pending) {
    for (Index v : p.face) {
      if (v >= n) fail(p.line_no, "face index " + std::to_string(v + 1) + " out of range");
    }
    mesh.faces.push_back(p.face);
  }
  if (normals.size() == mesh.vertices.size()) mesh.normals = std::move(normals);
  return mesh;
}

std::string write_obj(const TriMesh& mesh) {
  std::string out = "# teethseg mesh: " + std::to_string(mesh.vertices.size()) + " vertices, " +
                    std::to_string(mesh.faces.size()) + " faces\n";
  out.reserve(out.size() + mesh.vertices.size() * 64 + mesh.faces.size() * 24);
  auto put_vec = [&](const char* tag, const Vec3& v) {
    out += tag;
    for (int k = 0; k < 3; ++k) {
      out += ' ';
      out += format_double(v[k]);
    }
    out += '\n';
  };
  for (const auto& v : mesh.vertices) put_vec("v", v);
  for (const auto& n : mesh.normals) put_vec("vn", n);
  for (const auto& f : mesh.faces) {
    out += "f ";
    out += std::to_string(f[0] + 1);
    out += ' ';
    out += std::to_string(f[1] + 1);
    out += ' ';
    out += std::to_string(f[2] + 1);
    out += '\n';
  }
  return out;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 face_normal(const TriMesh& mesh, const Face& face) {
  const Vec3& a = mesh.vertices[face[0]];
  Vec3 n = (mesh.vertices[face[1]] - a).cross(mesh.vertices[face[2]] - a);
  double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

}  // namespace teethseg
