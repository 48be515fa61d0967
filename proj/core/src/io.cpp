// Copyright 2026 The Roomtrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "roomtrack/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <json.hpp>

#include "roomtrack/error.hpp"

namespace roomtrack {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

[[noreturn]] void fail(Errc code, const std::string& path, const std::string& reason) {
  throw Error(code, path + ": " + reason);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, path, "cannot open");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(Errc::io_error, path, "read failed");
  return bytes;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_error, path, "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) fail(Errc::io_error, path, "write failed");
}

// ---- little-endian primitives ----

void put_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& s, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(s, bits);
}

// Sequential reader over a loaded binary file; running short is a
// dimension mismatch (truncation), matching the on-disk size contracts.
struct Cursor {
  const std::string& bytes;
  const std::string& path;
  std::size_t off = 0;

  void need(std::size_t n) const {
    if (off + n > bytes.size()) fail(Errc::dimension_mismatch, path, "truncated file");
  }
  std::uint16_t u16() {
    need(2);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + off;
    off += 2;
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }
  std::uint32_t u32() {
    need(4);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + off;
    off += 4;
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  void magic(const char* tag) {
    need(4);
    if (bytes.compare(off, 4, tag) != 0) fail(Errc::io_error, path, "bad magic");
    off += 4;
  }
  void done() const {
    if (off != bytes.size()) fail(Errc::io_error, path, "trailing bytes");
  }
};

// ---- structured documents ----

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool scalar_only(const Json& j) {
  for (const Json& e : j) {
    if (e.is_object() || e.is_array()) return false;
  }
  return true;
}

void emit(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : j.items()) {
        out += pad + "  " + Json(key).dump() + ": ";
        emit(value, indent + 2, out);
        out += (++i < j.size()) ? ",\n" : "\n";
      }
      out += pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (scalar_only(j)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], indent, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad + "  ";
        emit(j[i], indent + 2, out);
        out += (i + 1 < j.size()) ? ",\n" : "\n";
      }
      out += pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += fmt_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

std::string dump_doc(const Json& j) {
  std::string out;
  emit(j, 0, out);
  out += "\n";
  return out;
}

Json parse_doc(const std::string& path) {
  const std::string text = read_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::io_error, path, "malformed document");
  return j;
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    fail(Errc::io_error, path, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

void check_format(const Json& j, const char* tag, const std::string& path) {
  const Json& f = field(j, "format", path);
  if (!f.is_string() || f.get<std::string>() != tag) {
    fail(Errc::io_error, path, std::string("expected format '") + tag + "'");
  }
}

double num(const Json& v, const char* what, const std::string& path) {
  if (!v.is_number()) fail(Errc::io_error, path, std::string(what) + " must be a number");
  return v.get<double>();
}

int integer(const Json& v, const char* what, const std::string& path) {
  if (!v.is_number_integer()) {
    fail(Errc::io_error, path, std::string(what) + " must be an integer");
  }
  return v.get<int>();
}

const Json& array(const Json& v, const char* what, const std::string& path) {
  if (!v.is_array()) fail(Errc::io_error, path, std::string(what) + " must be an array");
  return v;
}

Vec3 vec3(const Json& v, const char* what, const std::string& path) {
  array(v, what, path);
  if (v.size() != 3) fail(Errc::io_error, path, std::string(what) + " must have 3 entries");
  return Vec3(num(v[0], what, path), num(v[1], what, path), num(v[2], what, path));
}

Json vec3_json(const Vec3& v) {
  return Json::array({v.x(), v.y(), v.z()});
}

Json calibration_json(const RigCalibration& rig) {
  Json views = Json::array();
  for (const ViewCalibration& view : rig.views) {
    Json rot = Json::array();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) rot.push_back(view.p.r(r, c));
    }
    views.push_back(Json{{"fx", view.k.fx},
                         {"fy", view.k.fy},
                         {"cx", view.k.cx},
                         {"cy", view.k.cy},
                         {"rotation", rot},
                         {"translation", vec3_json(view.p.t)}});
  }
  return Json{{"scale", rig.scale}, {"views", views}};
}

RigCalibration calibration_from_json(const Json& j, const std::string& path) {
  RigCalibration rig;
  rig.scale = num(field(j, "scale", path), "scale", path);
  const Json& views = array(field(j, "views", path), "views", path);
  for (const Json& vj : views) {
    ViewCalibration view;
    view.k.fx = num(field(vj, "fx", path), "fx", path);
    view.k.fy = num(field(vj, "fy", path), "fy", path);
    view.k.cx = num(field(vj, "cx", path), "cx", path);
    view.k.cy = num(field(vj, "cy", path), "cy", path);
    const Json& rot = array(field(vj, "rotation", path), "rotation", path);
    if (rot.size() != 9) fail(Errc::io_error, path, "rotation must have 9 entries");
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) view.p.r(r, c) = num(rot[3 * r + c], "rotation", path);
    }
    view.p.t = vec3(field(vj, "translation", path), "translation", path);
    rig.views.push_back(view);
  }
  rig.validate();
  return rig;
}

Json positions_json(const std::vector<Vec3>& positions) {
  Json out = Json::array();
  for (const Vec3& p : positions) out.push_back(vec3_json(p));
  return out;
}

std::vector<Vec3> positions_from_json(const Json& j, const std::string& path) {
  std::vector<Vec3> out;
  for (const Json& p : array(j, "positions", path)) {
    out.push_back(vec3(p, "position", path));
  }
  return out;
}

std::string frame_name(int v, int t, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "v%02d_t%04d.%s", v, t, ext);
  return buf;
}

}  // namespace

DepthMap load_depth(const std::string& path) {
  const std::string bytes = read_file(path);
  Cursor c{bytes, path};
  c.magic("ORGD");
  const std::uint32_t w = c.u32();
  const std::uint32_t h = c.u32();
  if (w < 1 || h < 1 || w > 65535 || h > 65535) {
    fail(Errc::io_error, path, "implausible dimensions");
  }
  const std::size_t expected = 12 + 4ull * w * h;
  if (bytes.size() < expected) fail(Errc::dimension_mismatch, path, "truncated file");
  DepthMap depth(static_cast<int>(w), static_cast<int>(h));
  for (double& d : depth.data) d = static_cast<double>(c.f32());
  c.done();
  return depth;
}

void save_depth(const std::string& path, const DepthMap& depth) {
  std::string bytes = "ORGD";
  put_u32(bytes, static_cast<std::uint32_t>(depth.width));
  put_u32(bytes, static_cast<std::uint32_t>(depth.height));
  for (const double d : depth.data) put_f32(bytes, static_cast<float>(d));
  write_file(path, bytes);
}

RgbImage load_ppm(const std::string& path) {
  const std::string bytes = read_file(path);
  std::size_t off = 0;
  const auto skip_space = [&] {
    while (off < bytes.size()) {
      const char ch = bytes[off];
      if (ch == '#') {
        while (off < bytes.size() && bytes[off] != '\n') ++off;
      } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
        ++off;
      } else {
        break;
      }
    }
  };
  const auto token = [&]() -> std::string {
    skip_space();
    const std::size_t start = off;
    while (off < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[off])) &&
           bytes[off] != '#') {
      ++off;
    }
    if (off == start) fail(Errc::io_error, path, "truncated header");
    return bytes.substr(start, off - start);
  };
  const auto header_int = [&](const char* what) -> long {
    const std::string tok = token();
    long value = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
      fail(Errc::io_error, path, std::string("bad ") + what);
    }
    return value;
  };

  if (token() != "P6") fail(Errc::io_error, path, "bad magic");
  const long w = header_int("width");
  const long h = header_int("height");
  const long maxval = header_int("maxval");
  if (w < 1 || h < 1 || w > 65535 || h > 65535) {
    fail(Errc::io_error, path, "implausible dimensions");
  }
  if (maxval != 255) fail(Errc::io_error, path, "unsupported maxval");
  // Exactly one whitespace byte separates the header from the pixels.
  if (off >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[off]))) {
    fail(Errc::io_error, path, "truncated header");
  }
  ++off;
  const std::size_t expected = off + 3ull * w * h;
  if (bytes.size() < expected) fail(Errc::dimension_mismatch, path, "truncated file");
  if (bytes.size() > expected) fail(Errc::io_error, path, "trailing bytes");
  RgbImage img(static_cast<int>(w), static_cast<int>(h));
  std::memcpy(img.data.data(), bytes.data() + off, img.data.size());
  return img;
}

void save_ppm(const std::string& path, const RgbImage& img) {
  std::string bytes = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                      "\n255\n";
  bytes.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
  write_file(path, bytes);
}

void save_cloud(const std::string& path, const FusedCloud& cloud) {
  if (cloud.features.size() != cloud.points.size() ||
      cloud.provenance.size() != cloud.points.size()) {
    fail(Errc::dimension_mismatch, path, "cloud arrays disagree");
  }
  std::string bytes = "ORPC";
  put_u32(bytes, static_cast<std::uint32_t>(cloud.points.size()));
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    for (int a = 0; a < 3; ++a) put_f32(bytes, static_cast<float>(cloud.points[i][a]));
    for (int a = 0; a < kFeatureDim; ++a) put_f32(bytes, cloud.features[i][a]);
    put_u16(bytes, cloud.provenance[i].view);
    put_u16(bytes, cloud.provenance[i].row);
    put_u16(bytes, cloud.provenance[i].col);
  }
  write_file(path, bytes);
}

FusedCloud load_cloud(const std::string& path) {
  const std::string bytes = read_file(path);
  Cursor c{bytes, path};
  c.magic("ORPC");
  const std::uint32_t count = c.u32();
  constexpr std::size_t kRecord = 3 * 4 + kFeatureDim * 4 + 3 * 2;
  if (bytes.size() < 8 + kRecord * count) fail(Errc::dimension_mismatch, path, "truncated file");
  FusedCloud cloud;
  cloud.points.reserve(count);
  cloud.features.reserve(count);
  cloud.provenance.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Vec3 p;
    for (int a = 0; a < 3; ++a) p[a] = static_cast<double>(c.f32());
    FeatureDescriptor f;
    for (int a = 0; a < kFeatureDim; ++a) f[a] = c.f32();
    PointProvenance prov;
    prov.view = c.u16();
    prov.row = c.u16();
    prov.col = c.u16();
    cloud.points.push_back(p);
    cloud.features.push_back(f);
    cloud.provenance.push_back(prov);
  }
  c.done();
  return cloud;
}

void save_calibration(const std::string& path, const RigCalibration& rig) {
  Json j = Json{{"format", "roomtrack-calibration"}};
  j.update(calibration_json(rig));
  write_file(path, dump_doc(j));
}

RigCalibration load_calibration(const std::string& path) {
  const Json j = parse_doc(path);
  check_format(j, "roomtrack-calibration", path);
  return calibration_from_json(j, path);
}

void save_queries(const std::string& path, const std::vector<Query>& queries) {
  Json list = Json::array();
  for (const Query& q : queries) {
    list.push_back(Json{{"id", q.id}, {"t", q.t_q}, {"position", vec3_json(q.p_q)}});
  }
  write_file(path, dump_doc(Json{{"format", "roomtrack-queries"}, {"queries", list}}));
}

std::vector<Query> load_queries(const std::string& path) {
  const Json j = parse_doc(path);
  check_format(j, "roomtrack-queries", path);
  std::vector<Query> out;
  for (const Json& qj : array(field(j, "queries", path), "queries", path)) {
    Query q;
    q.id = integer(field(qj, "id", path), "id", path);
    q.t_q = integer(field(qj, "t", path), "t", path);
    q.p_q = vec3(field(qj, "position", path), "position", path);
    out.push_back(q);
  }
  return out;
}

void save_gt_tracks(const std::string& path, const std::vector<GtTrack>& gt) {
  Json list = Json::array();
  for (const GtTrack& g : gt) {
    Json visible = Json::array();
    for (const std::uint8_t v : g.visible) visible.push_back(static_cast<int>(v));
    list.push_back(Json{{"id", g.id},
                        {"positions", positions_json(g.positions)},
                        {"visible", visible}});
  }
  write_file(path, dump_doc(Json{{"format", "roomtrack-gt-tracks"}, {"tracks", list}}));
}

std::vector<GtTrack> load_gt_tracks(const std::string& path) {
  const Json j = parse_doc(path);
  check_format(j, "roomtrack-gt-tracks", path);
  std::vector<GtTrack> out;
  for (const Json& gj : array(field(j, "tracks", path), "tracks", path)) {
    GtTrack g;
    g.id = integer(field(gj, "id", path), "id", path);
    g.positions = positions_from_json(field(gj, "positions", path), path);
    for (const Json& v : array(field(gj, "visible", path), "visible", path)) {
      const int flag = integer(v, "visible", path);
      if (flag != 0 && flag != 1) fail(Errc::io_error, path, "visible must be 0 or 1");
      g.visible.push_back(static_cast<std::uint8_t>(flag));
    }
    if (g.visible.size() != g.positions.size()) {
      fail(Errc::dimension_mismatch, path, "positions and visible lengths differ");
    }
    out.push_back(std::move(g));
  }
  return out;
}

void save_tracks(const std::string& path, const TrackSet& tracks) {
  Json list = Json::array();
  for (const Track& t : tracks.tracks) {
    Json visibility = Json::array();
    for (const double v : t.visibility) visibility.push_back(v);
    list.push_back(Json{{"query_id", t.query_id},
                        {"t0", t.t0},
                        {"positions", positions_json(t.positions)},
                        {"visibility", visibility}});
  }
  Json failures = Json::array();
  for (const TrackSet::Failure& f : tracks.failures) {
    failures.push_back(Json{{"query_id", f.query_id}, {"reason", f.reason}});
  }
  write_file(path, dump_doc(Json{{"format", "roomtrack-tracks"},
                                 {"tracks", list},
                                 {"failures", failures}}));
}

TrackSet load_tracks(const std::string& path) {
  const Json j = parse_doc(path);
  check_format(j, "roomtrack-tracks", path);
  TrackSet out;
  for (const Json& tj : array(field(j, "tracks", path), "tracks", path)) {
    Track t;
    t.query_id = integer(field(tj, "query_id", path), "query_id", path);
    t.t0 = integer(field(tj, "t0", path), "t0", path);
    t.positions = positions_from_json(field(tj, "positions", path), path);
    for (const Json& v : array(field(tj, "visibility", path), "visibility", path)) {
      t.visibility.push_back(num(v, "visibility", path));
    }
    if (t.visibility.size() != t.positions.size()) {
      fail(Errc::dimension_mismatch, path, "positions and visibility lengths differ");
    }
    out.tracks.push_back(std::move(t));
  }
  for (const Json& fj : array(field(j, "failures", path), "failures", path)) {
    TrackSet::Failure f;
    f.query_id = integer(field(fj, "query_id", path), "query_id", path);
    const Json& reason = field(fj, "reason", path);
    if (!reason.is_string()) fail(Errc::io_error, path, "reason must be a string");
    f.reason = reason.get<std::string>();
    out.failures.push_back(std::move(f));
  }
  return out;
}

void save_tracks_tsv(const std::string& path, const TrackSet& tracks) {
  std::string out = "# id\tt\tx\ty\tz\tvisibility\n";
  for (const Track& track : tracks.tracks) {
    for (std::size_t i = 0; i < track.positions.size(); ++i) {
      const Vec3& p = track.positions[i];
      out += std::to_string(track.query_id) + "\t" +
             std::to_string(track.t0 + static_cast<int>(i)) + "\t" + fmt_double(p.x()) + "\t" +
             fmt_double(p.y()) + "\t" + fmt_double(p.z()) + "\t" +
             fmt_double(track.visibility[i]) + "\n";
    }
  }
  write_file(path, out);
}

void save_rectified(const std::string& path, const RectifiedGeometry& geom) {
  Json corrections = Json::array();
  for (const DepthAffine& ab : geom.depth_correction) {
    corrections.push_back(Json{{"a", ab.a}, {"b", ab.b}});
  }
  write_file(path, dump_doc(Json{{"format", "roomtrack-rectified"},
                                 {"calibration", calibration_json(geom.rig)},
                                 {"depth_correction", corrections},
                                 {"converged", geom.converged},
                                 {"scale_observable", geom.scale_observable}}));
}

RectifiedGeometry load_rectified(const std::string& path) {
  const Json j = parse_doc(path);
  check_format(j, "roomtrack-rectified", path);
  RectifiedGeometry geom;
  geom.rig = calibration_from_json(field(j, "calibration", path), path);
  for (const Json& cj :
       array(field(j, "depth_correction", path), "depth_correction", path)) {
    DepthAffine ab;
    ab.a = num(field(cj, "a", path), "a", path);
    ab.b = num(field(cj, "b", path), "b", path);
    geom.depth_correction.push_back(ab);
  }
  if (geom.depth_correction.size() != geom.rig.views.size()) {
    fail(Errc::dimension_mismatch, path, "depth_correction count differs from views");
  }
  const Json& converged = field(j, "converged", path);
  const Json& observable = field(j, "scale_observable", path);
  if (!converged.is_boolean() || !observable.is_boolean()) {
    fail(Errc::io_error, path, "flags must be booleans");
  }
  geom.converged = converged.get<bool>();
  geom.scale_observable = observable.get<bool>();
  return geom;
}

void save_sequence(const std::string& dir, const Sequence& seq) {
  const std::size_t views = seq.rig.views.size();
  for (const MultiViewFrame& frame : seq.frames) {
    if (frame.views.size() != views) {
      fail(Errc::dimension_mismatch, dir, "frame view count differs from calibration");
    }
    for (std::size_t v = 0; v < views; ++v) {
      const ViewImages& view = frame.views[v];
      const ViewImages& first = seq.frames.front().views[v];
      if (view.rgb.width != view.depth.width || view.rgb.height != view.depth.height ||
          view.rgb.width != first.rgb.width || view.rgb.height != first.rgb.height) {
        fail(Errc::dimension_mismatch, dir, "inconsistent frame resolutions");
      }
    }
  }

  std::error_code ec;
  fs::create_directories(fs::path(dir) / "rgb", ec);
  fs::create_directories(fs::path(dir) / "depth", ec);
  if (ec) fail(Errc::io_error, dir, "cannot create directories");

  Json resolutions = Json::array();
  for (std::size_t v = 0; v < views; ++v) {
    const RgbImage& rgb = seq.frames.empty() ? RgbImage() : seq.frames.front().views[v].rgb;
    resolutions.push_back(Json{{"width", rgb.width}, {"height", rgb.height}});
  }
  write_file((fs::path(dir) / "sequence.json").string(),
             dump_doc(Json{{"format", "roomtrack-sequence"},
                           {"views", static_cast<int>(views)},
                           {"frames", static_cast<int>(seq.frames.size())},
                           {"resolutions", resolutions}}));
  save_calibration((fs::path(dir) / "calibration.json").string(), seq.rig);

  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    for (std::size_t v = 0; v < views; ++v) {
      const ViewImages& view = seq.frames[t].views[v];
      save_ppm((fs::path(dir) / "rgb" / frame_name(static_cast<int>(v), static_cast<int>(t), "ppm"))
                   .string(),
               view.rgb);
      save_depth((fs::path(dir) / "depth" /
                  frame_name(static_cast<int>(v), static_cast<int>(t), "orgd"))
                     .string(),
                 view.depth);
    }
  }

  if (!seq.queries.empty()) {
    save_queries((fs::path(dir) / "queries.json").string(), seq.queries);
  }
  if (!seq.gt.empty()) {
    save_gt_tracks((fs::path(dir) / "gt_tracks.json").string(), seq.gt);
  }
}

Sequence load_sequence(const std::string& dir) {
  const std::string seq_path = (fs::path(dir) / "sequence.json").string();
  const Json j = parse_doc(seq_path);
  check_format(j, "roomtrack-sequence", seq_path);
  const int views = integer(field(j, "views", seq_path), "views", seq_path);
  const int frames = integer(field(j, "frames", seq_path), "frames", seq_path);
  if (views < 1 || frames < 0) fail(Errc::io_error, seq_path, "implausible counts");
  const Json& resolutions = array(field(j, "resolutions", seq_path), "resolutions", seq_path);
  if (static_cast<int>(resolutions.size()) != views) {
    fail(Errc::dimension_mismatch, seq_path, "resolution count differs from views");
  }

  Sequence seq;
  const std::string calib_path = (fs::path(dir) / "calibration.json").string();
  seq.rig = load_calibration(calib_path);
  if (seq.rig.view_count() != views) {
    fail(Errc::dimension_mismatch, calib_path, "view count differs from sequence");
  }

  seq.frames.resize(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    seq.frames[t].t = t;
    seq.frames[t].views.resize(static_cast<std::size_t>(views));
    for (int v = 0; v < views; ++v) {
      const int w = integer(field(resolutions[v], "width", seq_path), "width", seq_path);
      const int h = integer(field(resolutions[v], "height", seq_path), "height", seq_path);
      const std::string rgb_path = (fs::path(dir) / "rgb" / frame_name(v, t, "ppm")).string();
      const std::string depth_path =
          (fs::path(dir) / "depth" / frame_name(v, t, "orgd")).string();
      ViewImages& view = seq.frames[t].views[v];
      view.rgb = load_ppm(rgb_path);
      view.depth = load_depth(depth_path);
      if (view.rgb.width != w || view.rgb.height != h) {
        fail(Errc::dimension_mismatch, rgb_path, "resolution differs from sequence document");
      }
      if (view.depth.width != w || view.depth.height != h) {
        fail(Errc::dimension_mismatch, depth_path, "resolution differs from sequence document");
      }
    }
  }

  const fs::path queries_path = fs::path(dir) / "queries.json";
  if (fs::exists(queries_path)) seq.queries = load_queries(queries_path.string());
  const fs::path gt_path = fs::path(dir) / "gt_tracks.json";
  if (fs::exists(gt_path)) seq.gt = load_gt_tracks(gt_path.string());
  return seq;
}

namespace {

Json track_eval_json(const TrackEval& eval) {
  Json thresholds = Json::array();
  for (const double th : eval.thresholds) thresholds.push_back(th);
  return Json{{"aj", eval.aj},
              {"delta_avg", eval.delta_avg},
              {"oa", eval.oa},
              {"mte", eval.mte},
              {"thresholds", thresholds}};
}

}  // namespace

void save_track_report(const std::string& path, const TrackEval& aggregate,
                       const std::vector<TrackEval>& per_track) {
  Json list = Json::array();
  for (const TrackEval& eval : per_track) list.push_back(track_eval_json(eval));
  write_file(path, dump_doc(Json{{"format", "roomtrack-track-report"},
                                 {"aggregate", track_eval_json(aggregate)},
                                 {"per_track", list}}));
}

void save_depth_report(const std::string& path, const DepthEval& eval) {
  write_file(path, dump_doc(Json{{"format", "roomtrack-depth-report"},
                                 {"abs_rel", eval.abs_rel},
                                 {"rmse", eval.rmse},
                                 {"valid_pixels", static_cast<std::int64_t>(eval.valid_pixels)}}));
}

void save_consistency_report(const std::string& path, const ConsistencyEval& eval) {
  write_file(path, dump_doc(Json{{"format", "roomtrack-consistency-report"},
                                 {"mean", eval.mean},
                                 {"median", eval.median},
                                 {"samples", static_cast<std::int64_t>(eval.samples)}}));
}

}  // namespace roomtrack
