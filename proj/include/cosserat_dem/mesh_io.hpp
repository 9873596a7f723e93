#pragma once

#include "cosserat_dem/mesh.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>

namespace cosserat_dem {

enum class MeshFormat { GmshMsh, InternalJson };

inline MeshFormat mesh_format_from_path(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".msh") return MeshFormat::GmshMsh;
  return MeshFormat::InternalJson;
}

namespace detail {

inline void expect_section(std::istream& in, const std::string& name) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == name) return;
  }
  throw Error("gmsh: missing section " + name);
}

}  // namespace detail

/// Gmsh MSH 2.2 ASCII reader. Triangles (2D) or tetrahedra (3D) become cells;
/// lines (2D) or triangles (3D) carrying a physical tag become boundary tags,
/// named through $PhysicalNames when present and by the tag number otherwise.
inline Mesh read_gmsh(std::istream& in) {
  std::string line;
  detail::expect_section(in, "$MeshFormat");
  double version = 0.0;
  int file_type = 0, data_size = 0;
  if (!(in >> version >> file_type >> data_size)) throw Error("gmsh: malformed $MeshFormat");
  if (version < 2.0 || version >= 3.0) throw Error("gmsh: only MSH 2.x is supported");
  if (file_type != 0) throw Error("gmsh: binary files are not supported");

  std::map<std::pair<int, int>, std::string> physical_names;
  std::unordered_map<long, Index> node_index;
  std::vector<Point> nodes;
  struct Element {
    int type;
    int physical;
    std::vector<long> nodes;
  };
  std::vector<Element> elements;
  bool have_nodes = false, have_elements = false;

  while (in >> line) {
    if (line == "$PhysicalNames") {
      int n = 0;
      in >> n;
      for (int i = 0; i < n; ++i) {
        int dim = 0, tag = 0;
        std::string name;
        in >> dim >> tag;
        std::getline(in, name);
        const auto a = name.find('"');
        const auto b = name.rfind('"');
        if (a == std::string::npos || b == a) throw Error("gmsh: malformed physical name");
        physical_names[{dim, tag}] = name.substr(a + 1, b - a - 1);
      }
    } else if (line == "$Nodes") {
      long n = 0;
      if (!(in >> n) || n < 0) throw Error("gmsh: malformed $Nodes");
      nodes.reserve(static_cast<std::size_t>(n));
      for (long i = 0; i < n; ++i) {
        long id = 0;
        Point p;
        if (!(in >> id >> p.x() >> p.y() >> p.z())) throw Error("gmsh: truncated $Nodes");
        node_index[id] = nodes.size();
        nodes.push_back(p);
      }
      have_nodes = true;
    } else if (line == "$Elements") {
      long n = 0;
      if (!(in >> n) || n < 0) throw Error("gmsh: malformed $Elements");
      for (long i = 0; i < n; ++i) {
        long id = 0;
        int type = 0, ntags = 0;
        if (!(in >> id >> type >> ntags)) throw Error("gmsh: truncated $Elements");
        std::vector<int> tags(static_cast<std::size_t>(ntags));
        for (auto& t : tags) in >> t;
        int nn = 0;
        switch (type) {
          case 15: nn = 1; break;
          case 1: nn = 2; break;
          case 2: nn = 3; break;
          case 4: nn = 4; break;
          default: throw Error("gmsh: unsupported element type " + std::to_string(type));
        }
        Element e{type, ntags > 0 ? tags[0] : 0, std::vector<long>(static_cast<std::size_t>(nn))};
        for (auto& v : e.nodes) in >> v;
        if (!in) throw Error("gmsh: truncated element record");
        elements.push_back(std::move(e));
      }
      have_elements = true;
    } else if (!line.empty() && line[0] == '$' && line.rfind("$End", 0) != 0) {
      // unknown section: skip to its end
      const std::string end = "$End" + line.substr(1);
      while (in >> line && line != end) {
      }
    }
  }
  if (!have_nodes || !have_elements) throw Error("gmsh: missing $Nodes or $Elements");

  int dim = 2;
  for (const auto& e : elements)
    if (e.type == 4) dim = 3;
  const int cell_type = dim == 2 ? 2 : 4;
  const int facet_type = dim == 2 ? 1 : 2;

  auto lookup = [&](long id) {
    auto it = node_index.find(id);
    if (it == node_index.end()) throw Error("gmsh: element references unknown node " + std::to_string(id));
    return it->second;
  };
  std::vector<std::vector<Index>> cells;
  std::map<std::string, std::vector<std::vector<Index>>> tags;
  for (const auto& e : elements) {
    if (e.type == cell_type) {
      std::vector<Index> c;
      for (long v : e.nodes) c.push_back(lookup(v));
      cells.push_back(std::move(c));
    } else if (e.type == facet_type && e.physical != 0) {
      std::vector<Index> f;
      for (long v : e.nodes) f.push_back(lookup(v));
      auto it = physical_names.find({dim - 1, e.physical});
      tags[it != physical_names.end() ? it->second : std::to_string(e.physical)].push_back(std::move(f));
    }
  }
  if (cells.empty()) throw Error("gmsh: no cells found");
  Mesh m = Mesh::from_cells(dim, std::move(nodes), std::move(cells));
  m.tag_boundary(tags);
  return m;
}

/// Internal JSON mesh: {dim, vertices, cells, boundary_tags: {tag: [[v...], ...]}}.
inline Mesh mesh_from_json(const nlohmann::json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<Point> X;
    for (const auto& v : j.at("vertices")) {
      Point p = Point::Zero();
      if (v.size() < static_cast<std::size_t>(dim)) throw Error("vertex with too few coordinates");
      for (std::size_t k = 0; k < v.size() && k < 3; ++k) p[static_cast<Eigen::Index>(k)] = v[k].get<double>();
      X.push_back(p);
    }
    auto cells = j.at("cells").get<std::vector<std::vector<Index>>>();
    Mesh m = Mesh::from_cells(dim, std::move(X), std::move(cells));
    if (j.contains("boundary_tags"))
      m.tag_boundary(j.at("boundary_tags").get<std::map<std::string, std::vector<std::vector<Index>>>>());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("mesh json: ") + e.what());
  }
}

inline nlohmann::json mesh_to_json(const Mesh& m) {
  nlohmann::json j;
  j["dim"] = m.dim();
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const auto& p : m.vertices()) {
    if (m.dim() == 2)
      verts.push_back({p.x(), p.y()});
    else
      verts.push_back({p.x(), p.y(), p.z()});
  }
  auto& cells = j["cells"] = nlohmann::json::array();
  for (const auto& c : m.cells()) cells.push_back(c.vertices);
  std::map<std::string, std::vector<std::vector<Index>>> tags;
  for (const auto& f : m.facets())
    if (f.is_boundary() && !f.tag.empty()) tags[f.tag].push_back(f.vertices);
  j["boundary_tags"] = tags;
  return j;
}

inline Mesh load_mesh(const std::string& path, MeshFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file " + path);
  if (format == MeshFormat::GmshMsh) return read_gmsh(in);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("mesh json parse failure in " + path + ": " + e.what());
  }
  return mesh_from_json(j);
}

inline Mesh load_mesh(const std::string& path) { return load_mesh(path, mesh_format_from_path(path)); }

}  // namespace cosserat_dem
