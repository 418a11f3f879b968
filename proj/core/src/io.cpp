#include "orthotour/io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace orthotour {
namespace {

using nlohmann::json;

constexpr Coord kCoordBound = Coord{1} << 30;

Coord as_coord(const json& j) {
  if (!j.is_number_integer()) throw ParseError("coordinate must be an integer");
  Coord v = j.get<std::int64_t>();
  if (v < -kCoordBound || v > kCoordBound)
    throw ParseError("coordinate out of range");
  return v;
}

json coord_pair(Point2 p) { return json::array({p.x, p.y}); }
json coord_triple(Point3 p) { return json::array({p.x, p.y, p.z}); }

Point2 as_point2(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected [x, y]");
  return {as_coord(j[0]), as_coord(j[1])};
}

Point3 as_point3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("expected [x, y, z]");
  return {as_coord(j[0]), as_coord(j[1]), as_coord(j[2])};
}

OrthoPolygon canonical(const OrthoPolygon& poly) {
  // Lexicographic-min start, CCW, collinear vertices merged. Rings that do
  // not normalize are kept verbatim so validate_instance can report them.
  auto norm = normalize_polygon(poly.vertices);
  return norm ? *norm : poly;
}

Polytope3 canonical(const Polytope3& pt) {
  Polytope3 out = pt;
  std::sort(out.boxes.begin(), out.boxes.end(), [](const Box3& a, const Box3& b) {
    return std::tie(a.lo, a.hi) < std::tie(b.lo, b.hi);
  });
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
  return buf;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  Instance inst;
  try {
    const auto& dims = j.at("dims");
    if (!dims.is_number_integer() ||
        (dims.get<int>() != 2 && dims.get<int>() != 3))
      throw ParseError("dims must be 2 or 3");
    inst.dims = dims.get<int>();
    const auto& cls = j.at("class");
    if (!cls.is_string()) throw ParseError("class must be a string");
    auto parsed = instance_class_from_string(cls.get<std::string>());
    if (!parsed) throw ParseError("unknown class: " + cls.get<std::string>());
    inst.declared_class = *parsed;
    if (inst.dims == 2) {
      const auto& polys = j.at("polygons");
      if (!polys.is_array()) throw ParseError("polygons must be an array");
      for (const auto& ring : polys) {
        if (!ring.is_array() || ring.empty())
          throw ParseError("polygon must be a non-empty vertex array");
        OrthoPolygon poly;
        for (const auto& v : ring) poly.vertices.push_back(as_point2(v));
        inst.polygons.push_back(canonical(poly));
      }
    } else {
      const auto& polytopes = j.at("boxes");
      if (!polytopes.is_array()) throw ParseError("boxes must be an array");
      for (const auto& boxes : polytopes) {
        if (!boxes.is_array() || boxes.empty())
          throw ParseError("polytope must be a non-empty box array");
        Polytope3 pt;
        for (const auto& b : boxes) {
          if (!b.is_array() || b.size() != 2)
            throw ParseError("box must be [[x1,y1,z1],[x2,y2,z2]]");
          pt.boxes.push_back({as_point3(b[0]), as_point3(b[1])});
        }
        inst.polytopes.push_back(canonical(pt));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  return inst;
}

std::string emit_instance(const Instance& inst) {
  json j;
  j["dims"] = inst.dims;
  j["class"] = to_string(inst.declared_class);
  if (inst.dims == 2) {
    json polys = json::array();
    for (const auto& poly : inst.polygons) {
      json ring = json::array();
      for (auto v : canonical(poly).vertices) ring.push_back(coord_pair(v));
      polys.push_back(std::move(ring));
    }
    j["polygons"] = std::move(polys);
  } else {
    json polytopes = json::array();
    for (const auto& pt : inst.polytopes) {
      json boxes = json::array();
      for (const auto& b : canonical(pt).boxes)
        boxes.push_back(json::array({coord_triple(b.lo), coord_triple(b.hi)}));
      polytopes.push_back(std::move(boxes));
    }
    j["boxes"] = std::move(polytopes);
  }
  return j.dump();
}

std::string instance_hash(const Instance& inst) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : emit_instance(inst)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return hex64(h);
}

std::string emit_result(const ResultRecord& rec) {
  json j;
  j["instance"] = rec.instance;
  j["solver"] = rec.solver;
  j["length"] = rec.length;
  j["wall_ms"] = rec.wall_ms;
  j["counters"] = {{"hubs", rec.hubs},
                   {"fragments", rec.fragments},
                   {"stabbing", rec.stabbing}};
  if (rec.has_witness) {
    if (!rec.witness3.points.empty()) {
      json w = json::array();
      for (auto p : rec.witness3.points) w.push_back(coord_triple(p));
      j["witness3"] = std::move(w);
    } else {
      json w = json::array();
      for (const auto& e : rec.witness.entries)
        w.push_back(json::array({json(e.index), e.point.x, e.point.y}));
      j["witness"] = std::move(w);
    }
  }
  return j.dump();
}

ResultRecord parse_result(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  ResultRecord rec;
  try {
    rec.instance = j.at("instance").get<std::string>();
    rec.solver = j.at("solver").get<std::string>();
    if (!j.at("length").is_number_integer())
      throw ParseError("length must be an integer");
    rec.length = j.at("length").get<std::int64_t>();
    rec.wall_ms = j.at("wall_ms").get<double>();
    const auto& c = j.at("counters");
    rec.hubs = c.at("hubs").get<std::uint64_t>();
    rec.fragments = c.at("fragments").get<std::uint64_t>();
    rec.stabbing = c.at("stabbing").get<std::uint64_t>();
    if (j.contains("witness")) {
      rec.has_witness = true;
      for (const auto& e : j.at("witness")) {
        if (!e.is_array() || e.size() != 3)
          throw ParseError("witness entry must be [index, x, y]");
        if (!e[0].is_number_unsigned() && !e[0].is_number_integer())
          throw ParseError("witness index must be an integer");
        rec.witness.entries.push_back(
            {e[0].get<std::size_t>(), {as_coord(e[1]), as_coord(e[2])}});
      }
    } else if (j.contains("witness3")) {
      rec.has_witness = true;
      for (const auto& e : j.at("witness3"))
        rec.witness3.points.push_back(as_point3(e));
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  return rec;
}

std::string render_svg(const Instance& inst, const Skeleton* witness) {
  static const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f",
                                         "#e15759", "#b07aa1", "#76b7b2",
                                         "#edc948", "#9c755f"};
  Coord minx = 0, miny = 0, maxx = 1, maxy = 1;
  bool first = true;
  auto grow = [&](Point2 p) {
    if (first) {
      minx = maxx = p.x;
      miny = maxy = p.y;
      first = false;
    } else {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  };
  for (const auto& poly : inst.polygons)
    for (auto v : poly.vertices) grow(v);
  if (witness)
    for (const auto& e : witness->entries) grow(e.point);
  const Coord span = std::max<Coord>({maxx - minx, maxy - miny, 1});
  const Coord margin = std::max<Coord>(2, span / 10);
  const Coord sw = std::max<Coord>(1, span / 200);  // stroke width
  const Coord fs = std::max<Coord>(2, span / 30);   // label font size

  // SVG y grows downward; flip via y -> (maxy + miny) - y to keep the
  // mathematical orientation.
  auto fy = [&](Coord y) { return maxy + miny - y; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << minx - margin << " " << miny - margin << " "
      << (maxx - minx) + 2 * margin << " " << (maxy - miny) + 2 * margin
      << "\">\n";
  for (std::size_t i = 0; i < inst.polygons.size(); ++i) {
    const auto& poly = inst.polygons[i];
    out << "  <path d=\"";
    for (std::size_t t = 0; t < poly.vertices.size(); ++t)
      out << (t == 0 ? "M" : " L") << poly.vertices[t].x << " "
          << fy(poly.vertices[t].y);
    out << " Z\" fill=\"" << kPalette[i % std::size(kPalette)]
        << "\" fill-opacity=\"0.45\" stroke=\"#333\" stroke-width=\"" << sw
        << "\"/>\n";
    auto [lo, hi] = poly.bbox();
    out << "  <text x=\"" << (lo.x + hi.x) / 2 << "\" y=\""
        << fy((lo.y + hi.y) / 2) << "\" font-size=\"" << fs
        << "\" text-anchor=\"middle\">" << i + 1 << "</text>\n";
  }
  if (witness && !witness->entries.empty()) {
    out << "  <polyline points=\"";
    for (std::size_t t = 0; t < witness->entries.size(); ++t) {
      if (t) out << " ";
      out << witness->entries[t].point.x << ","
          << fy(witness->entries[t].point.y);
    }
    out << "\" fill=\"none\" stroke=\"#c00\" stroke-width=\"" << sw
        << "\" stroke-linejoin=\"round\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace orthotour
