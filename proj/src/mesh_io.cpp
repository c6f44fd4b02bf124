// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hns/errors.hpp"

namespace hns {

namespace {

constexpr double kDegenerateAreaRel = 1e-18;  // area / diag^2 below this is dropped

[[noreturn]] void parse_fail(const std::string& where, std::size_t line, const std::string& msg) {
  throw ParseError(where + ":" + std::to_string(line) + ": " + msg);
}

struct LineReader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
  std::size_t line = 0;

  bool next(std::string_view* out) {
    if (pos >= bytes.size()) return false;
    std::size_t start = pos;
    while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    std::size_t end = pos;
    if (pos < bytes.size()) ++pos;  // consume '\n'
    while (end > start && (bytes[end - 1] == '\r' || bytes[end - 1] == ' ')) --end;
    ++line;
    *out = std::string_view(reinterpret_cast<const char*>(bytes.data()) + start, end - start);
    return true;
  }
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view tok, const std::string& where, std::size_t line) {
  // from_chars for double is incomplete in some libstdc++ versions; strtod is fine here
  char buf[64];
  if (tok.size() >= sizeof(buf)) parse_fail(where, line, "number too long");
  std::memcpy(buf, tok.data(), tok.size());
  buf[tok.size()] = '\0';
  char* end = nullptr;
  double v = std::strtod(buf, &end);
  if (end != buf + tok.size()) parse_fail(where, line, "bad number '" + std::string(tok) + "'");
  return v;
}

long parse_long(std::string_view tok, const std::string& where, std::size_t line) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    parse_fail(where, line, "bad integer '" + std::string(tok) + "'");
  }
  return v;
}

void drop_degenerate_faces(TriangleMesh& mesh, LoadStats* stats) {
  double diag = mesh.bounding_box_diagonal();
  double min_area = kDegenerateAreaRel * diag * diag;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const Face& f = mesh.faces[i];
    bool distinct = f[0] != f[1] && f[1] != f[2] && f[0] != f[2];
    if (distinct && mesh.face_area(static_cast<std::uint32_t>(i)) > min_area) {
      mesh.faces[kept++] = f;
    } else if (stats) {
      ++stats->dropped_degenerate_faces;
    }
  }
  mesh.faces.resize(kept);
}

// ---------------------------------------------------------------------------
// OBJ

TriangleMesh load_obj(std::span<const std::uint8_t> bytes, LoadStats* stats) {
  const std::string where = "obj";
  TriangleMesh mesh;
  LineReader reader{bytes};
  std::string_view line;
  while (reader.next(&line)) {
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] == "v") {
      if (toks.size() < 4) parse_fail(where, reader.line, "vertex needs 3 coordinates");
      mesh.vertices.push_back({parse_double(toks[1], where, reader.line),
                               parse_double(toks[2], where, reader.line),
                               parse_double(toks[3], where, reader.line)});
    } else if (toks[0] == "f") {
      if (toks.size() < 4) parse_fail(where, reader.line, "face needs at least 3 vertices");
      std::vector<std::uint32_t> poly;
      poly.reserve(toks.size() - 1);
      for (std::size_t i = 1; i < toks.size(); ++i) {
        std::string_view tok = toks[i];
        std::size_t slash = tok.find('/');
        if (slash != std::string_view::npos) tok = tok.substr(0, slash);
        long idx = parse_long(tok, where, reader.line);
        long n = static_cast<long>(mesh.vertices.size());
        long resolved = idx > 0 ? idx - 1 : n + idx;  // negative = relative
        if (resolved < 0 || resolved >= n) {
          parse_fail(where, reader.line, "face index " + std::string(toks[i]) + " out of range");
        }
        poly.push_back(static_cast<std::uint32_t>(resolved));
      }
      if (poly.size() > 3 && stats) ++stats->triangulated_polygons;
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        mesh.faces.push_back({poly[0], poly[i], poly[i + 1]});
      }
    }
    // vt, vn, usemtl, g, o, s, mtllib: ignored
  }
  if (mesh.faces.empty()) throw ParseError("obj: mesh has no faces");
  return mesh;
}

// ---------------------------------------------------------------------------
// PLY

enum class PlyType { I8, U8, I16, U16, I32, U32, F32, F64 };

std::size_t ply_type_size(PlyType t) {
  switch (t) {
    case PlyType::I8:
    case PlyType::U8: return 1;
    case PlyType::I16:
    case PlyType::U16: return 2;
    case PlyType::I32:
    case PlyType::U32:
    case PlyType::F32: return 4;
    case PlyType::F64: return 8;
  }
  return 0;
}

PlyType ply_type_from(std::string_view s, const std::string& where, std::size_t line) {
  if (s == "char" || s == "int8") return PlyType::I8;
  if (s == "uchar" || s == "uint8") return PlyType::U8;
  if (s == "short" || s == "int16") return PlyType::I16;
  if (s == "ushort" || s == "uint16") return PlyType::U16;
  if (s == "int" || s == "int32") return PlyType::I32;
  if (s == "uint" || s == "uint32") return PlyType::U32;
  if (s == "float" || s == "float32") return PlyType::F32;
  if (s == "double" || s == "float64") return PlyType::F64;
  parse_fail(where, line, "unknown property type '" + std::string(s) + "'");
}

struct PlyProperty {
  std::string name;
  bool is_list = false;
  PlyType count_type = PlyType::U8;
  PlyType value_type = PlyType::F32;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

struct BinaryCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos;

  double read(PlyType t) {
    std::size_t size = ply_type_size(t);
    if (pos + size > bytes.size()) throw ParseError("ply: unexpected end of binary payload");
    const std::uint8_t* p = bytes.data() + pos;
    pos += size;
    switch (t) {
      case PlyType::I8: return static_cast<double>(static_cast<std::int8_t>(p[0]));
      case PlyType::U8: return static_cast<double>(p[0]);
      case PlyType::I16: {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        return v;
      }
      case PlyType::U16: {
        std::uint16_t v;
        std::memcpy(&v, p, 2);
        return v;
      }
      case PlyType::I32: {
        std::int32_t v;
        std::memcpy(&v, p, 4);
        return v;
      }
      case PlyType::U32: {
        std::uint32_t v;
        std::memcpy(&v, p, 4);
        return v;
      }
      case PlyType::F32: {
        float v;
        std::memcpy(&v, p, 4);
        return v;
      }
      case PlyType::F64: {
        double v;
        std::memcpy(&v, p, 8);
        return v;
      }
    }
    return 0.0;
  }
};

TriangleMesh load_ply(std::span<const std::uint8_t> bytes, LoadStats* stats) {
  const std::string where = "ply";
  LineReader reader{bytes};
  std::string_view line;
  if (!reader.next(&line) || line != "ply") throw ParseError("ply: missing 'ply' magic");

  bool binary = false;
  bool format_seen = false;
  std::vector<PlyElement> elements;
  while (true) {
    if (!reader.next(&line)) parse_fail(where, reader.line, "missing end_header");
    auto toks = split_ws(line);
    if (toks.empty() || toks[0] == "comment" || toks[0] == "obj_info") continue;
    if (toks[0] == "format") {
      if (toks.size() < 2) parse_fail(where, reader.line, "bad format line");
      if (toks[1] == "ascii") {
        binary = false;
      } else if (toks[1] == "binary_little_endian") {
        binary = true;
      } else {
        parse_fail(where, reader.line, "unsupported format '" + std::string(toks[1]) + "'");
      }
      format_seen = true;
    } else if (toks[0] == "element") {
      if (toks.size() != 3) parse_fail(where, reader.line, "bad element line");
      PlyElement e;
      e.name = std::string(toks[1]);
      e.count = static_cast<std::size_t>(parse_long(toks[2], where, reader.line));
      elements.push_back(std::move(e));
    } else if (toks[0] == "property") {
      if (elements.empty()) parse_fail(where, reader.line, "property before element");
      PlyProperty p;
      if (toks.size() >= 5 && toks[1] == "list") {
        p.is_list = true;
        p.count_type = ply_type_from(toks[2], where, reader.line);
        p.value_type = ply_type_from(toks[3], where, reader.line);
        p.name = std::string(toks[4]);
      } else if (toks.size() >= 3) {
        p.value_type = ply_type_from(toks[1], where, reader.line);
        p.name = std::string(toks[2]);
      } else {
        parse_fail(where, reader.line, "bad property line");
      }
      elements.back().properties.push_back(std::move(p));
    } else if (toks[0] == "end_header") {
      break;
    } else {
      parse_fail(where, reader.line, "unknown header record '" + std::string(toks[0]) + "'");
    }
  }
  if (!format_seen) throw ParseError("ply: missing format line");

  TriangleMesh mesh;
  BinaryCursor cursor{bytes, reader.pos};

  auto read_ascii_row = [&](std::vector<std::string_view>* toks) {
    std::string_view row;
    if (!reader.next(&row)) parse_fail(where, reader.line, "unexpected end of data");
    *toks = split_ws(row);
  };

  for (const PlyElement& elem : elements) {
    bool is_vertex = elem.name == "vertex";
    bool is_face = elem.name == "face";
    int xi = -1, yi = -1, zi = -1, li = -1;
    for (std::size_t i = 0; i < elem.properties.size(); ++i) {
      const PlyProperty& p = elem.properties[i];
      if (is_vertex && p.name == "x") xi = static_cast<int>(i);
      if (is_vertex && p.name == "y") yi = static_cast<int>(i);
      if (is_vertex && p.name == "z") zi = static_cast<int>(i);
      if (is_face && p.is_list && (p.name == "vertex_indices" || p.name == "vertex_index")) {
        li = static_cast<int>(i);
      }
    }
    if (is_vertex && (xi < 0 || yi < 0 || zi < 0)) {
      throw ParseError("ply: vertex element lacks x/y/z properties");
    }
    if (is_face && li < 0) throw ParseError("ply: face element lacks vertex_indices list");

    for (std::size_t row = 0; row < elem.count; ++row) {
      std::vector<std::string_view> toks;
      std::size_t tok_pos = 0;
      if (!binary) read_ascii_row(&toks);
      auto next_value = [&](PlyType t) -> double {
        if (binary) return cursor.read(t);
        if (tok_pos >= toks.size()) parse_fail(where, reader.line, "row too short");
        return parse_double(toks[tok_pos++], where, reader.line);
      };

      Vec3 v;
      std::vector<std::uint32_t> poly;
      for (std::size_t i = 0; i < elem.properties.size(); ++i) {
        const PlyProperty& p = elem.properties[i];
        if (p.is_list) {
          auto n = static_cast<std::size_t>(next_value(p.count_type));
          for (std::size_t k = 0; k < n; ++k) {
            double value = next_value(p.value_type);
            if (static_cast<int>(i) == li) {
              long idx = static_cast<long>(value);
              if (idx < 0) parse_fail(where, reader.line, "negative face index");
              poly.push_back(static_cast<std::uint32_t>(idx));
            }
          }
        } else {
          double value = next_value(p.value_type);
          if (static_cast<int>(i) == xi) v.x = value;
          if (static_cast<int>(i) == yi) v.y = value;
          if (static_cast<int>(i) == zi) v.z = value;
        }
      }

      if (is_vertex) mesh.vertices.push_back(v);
      if (is_face) {
        if (poly.size() < 3) parse_fail(where, reader.line, "face with fewer than 3 indices");
        for (std::uint32_t idx : poly) {
          if (idx >= mesh.vertices.size()) {
            parse_fail(where, reader.line, "face index " + std::to_string(idx) + " out of range");
          }
        }
        if (poly.size() > 3 && stats) ++stats->triangulated_polygons;
        for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
          mesh.faces.push_back({poly[0], poly[i], poly[i + 1]});
        }
      }
    }
  }
  if (mesh.faces.empty()) throw ParseError("ply: mesh has no faces");
  return mesh;
}

}  // namespace

TriangleMesh load_mesh(std::span<const std::uint8_t> bytes, MeshFormat format, LoadStats* stats) {
  LoadStats local;
  if (!stats) stats = &local;
  TriangleMesh mesh = format == MeshFormat::Obj ? load_obj(bytes, stats) : load_ply(bytes, stats);
  drop_degenerate_faces(mesh, stats);
  if (mesh.faces.empty()) throw ParseError("mesh has no non-degenerate faces");
  return mesh;
}

TriangleMesh load_mesh_file(const std::string& path, LoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() >= 3 && std::memcmp(bytes.data(), "ply", 3) == 0) {
    return load_mesh(bytes, MeshFormat::PlyAscii, stats);
  }
  return load_mesh(bytes, format_for_path(path) == MeshFormat::Obj ? MeshFormat::Obj
                                                                   : MeshFormat::PlyAscii,
                   stats);
}

namespace {

void append(std::vector<std::uint8_t>& out, std::string_view s) {
  out.insert(out.end(), s.begin(), s.end());
}

void append_raw(std::vector<std::uint8_t>& out, const void* p, std::size_t n) {
  const auto* b = static_cast<const std::uint8_t*>(p);
  out.insert(out.end(), b, b + n);
}

}  // namespace

std::vector<std::uint8_t> write_mesh(const TriangleMesh& mesh, MeshFormat format) {
  std::vector<std::uint8_t> out;
  char buf[160];
  if (format == MeshFormat::Obj) {
    for (const Vec3& v : mesh.vertices) {
      std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
      append(out, buf);
    }
    for (const Face& f : mesh.faces) {
      std::snprintf(buf, sizeof(buf), "f %u %u %u\n", f[0] + 1, f[1] + 1, f[2] + 1);
      append(out, buf);
    }
    return out;
  }

  bool binary = format == MeshFormat::PlyBinaryLittleEndian;
  append(out, "ply\n");
  append(out, binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n");
  std::snprintf(buf, sizeof(buf), "element vertex %zu\n", mesh.vertices.size());
  append(out, buf);
  append(out, "property double x\nproperty double y\nproperty double z\n");
  std::snprintf(buf, sizeof(buf), "element face %zu\n", mesh.faces.size());
  append(out, buf);
  append(out, "property list uchar int vertex_indices\nend_header\n");
  if (binary) {
    for (const Vec3& v : mesh.vertices) {
      append_raw(out, &v.x, 8);
      append_raw(out, &v.y, 8);
      append_raw(out, &v.z, 8);
    }
    for (const Face& f : mesh.faces) {
      std::uint8_t n = 3;
      append_raw(out, &n, 1);
      std::int32_t idx[3] = {static_cast<std::int32_t>(f[0]), static_cast<std::int32_t>(f[1]),
                             static_cast<std::int32_t>(f[2])};
      append_raw(out, idx, 12);
    }
  } else {
    for (const Vec3& v : mesh.vertices) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x, v.y, v.z);
      append(out, buf);
    }
    for (const Face& f : mesh.faces) {
      std::snprintf(buf, sizeof(buf), "3 %u %u %u\n", f[0], f[1], f[2]);
      append(out, buf);
    }
  }
  return out;
}

void write_mesh_file(const TriangleMesh& mesh, const std::string& path, MeshFormat format) {
  std::vector<std::uint8_t> bytes = write_mesh(mesh, format);
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw IoError("cannot open '" + path + "' for writing");
  outf.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  if (!outf) throw IoError("failed writing '" + path + "'");
}

MeshFormat format_for_path(const std::string& path) {
  auto dotpos = path.find_last_of('.');
  std::string ext = dotpos == std::string::npos ? "" : path.substr(dotpos + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "obj") return MeshFormat::Obj;
  if (ext == "ply") return MeshFormat::PlyBinaryLittleEndian;
  throw InvalidArgumentError("unsupported mesh extension '." + ext + "' (use .obj or .ply)");
}

void save_mesh_file(const TriangleMesh& mesh, const std::string& path) {
  write_mesh_file(mesh, path, format_for_path(path));
}

}  // namespace hns
