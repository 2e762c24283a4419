#include "coarsekit/io.hpp"

#include <openssl/sha.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace coarsekit::io {

namespace {

[[noreturn]] void schema(const std::string& message) { throw Error(ErrorKind::InvalidInput, message); }

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(where + ": missing \"" + key + "\"");
  return *it;
}

std::int64_t as_int(const Json& value, const std::string& where) {
  if (!value.is_number_integer()) schema(where + ": expected an integer");
  return value.get<std::int64_t>();
}

std::size_t as_index(const Json& value, const std::string& where) {
  const auto v = as_int(value, where);
  if (v < 0) schema(where + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) schema("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    schema(path.string() + ": " + e.what());
  }
}

SpaceDocument parse_space(const Json& doc, bool validate) {
  const auto& comps = field(doc, "components", "space");
  if (!comps.is_array() || comps.empty()) schema("space: \"components\" must be a nonempty array");
  SpaceDocument out;
  std::vector<FiniteSpace> parts;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    const auto where = "component " + std::to_string(c);
    if (!comp.is_object()) schema(where + ": expected an object");
    out.names.push_back(comp.contains("name") && comp["name"].is_string() ? comp["name"].get<std::string>()
                                                                            : "X" + std::to_string(c));
    if (comp.contains("dist")) {
      const auto& rows_json = comp["dist"];
      if (!rows_json.is_array()) schema(where + ": \"dist\" must be an array of rows");
      std::vector<std::vector<Dist>> rows;
      for (const auto& row : rows_json) {
        if (!row.is_array() || row.size() != rows_json.size()) schema(where + ": distance matrix is not square");
        std::vector<Dist> r;
        for (const auto& v : row) r.push_back(as_int(v, where));
        rows.push_back(std::move(r));
      }
      FiniteSpace space(std::move(rows));
      if (validate) {
        const auto violations = verify_metric(space);
        if (!violations.empty()) {
          schema(where + ": not a metric (" + std::string(to_string(violations.front().kind)) + ")");
        }
      }
      parts.push_back(std::move(space));
      out.graphs.emplace_back(std::nullopt);
    } else if (comp.contains("n")) {
      const auto n = as_index(comp["n"], where + " n");
      std::vector<Edge> edges;
      if (comp.contains("edges")) {
        const auto& list = comp["edges"];
        if (!list.is_array()) schema(where + ": \"edges\" must be an array");
        for (const auto& e : list) {
          if (!e.is_array() || e.size() != 2) schema(where + ": each edge is a pair [u, v]");
          edges.push_back({as_index(e[0], where), as_index(e[1], where)});
        }
      }
      GraphSpace graph{Graph(n, edges)};
      parts.push_back(graph.metric());
      out.graphs.emplace_back(std::move(graph));
    } else {
      schema(where + ": needs \"dist\" or \"n\" and \"edges\"");
    }
  }
  const Dist gap = doc.contains("base_gap") ? as_int(doc["base_gap"], "base_gap") : 1;
  std::vector<std::size_t> basepoints;
  if (doc.contains("basepoints")) {
    if (!doc["basepoints"].is_array()) schema("\"basepoints\" must be an array");
    for (const auto& b : doc["basepoints"]) basepoints.push_back(as_index(b, "basepoints"));
  }
  if (doc.contains("levels")) out.levels = as_index(doc["levels"], "levels");
  out.space = share(assemble_union(std::move(parts), gap, std::move(basepoints)));
  return out;
}

Json space_to_json(const SpaceDocument& doc) {
  Json comps = Json::array();
  const auto& space = *doc.space;
  for (std::size_t c = 0; c < space.component_count(); ++c) {
    Json comp;
    comp["name"] = c < doc.names.size() ? doc.names[c] : "X" + std::to_string(c);
    if (c < doc.graphs.size() && doc.graphs[c]) {
      comp["n"] = doc.graphs[c]->size();
      Json edges = Json::array();
      for (const auto& e : doc.graphs[c]->graph().edges()) edges.push_back({e.u, e.v});
      comp["edges"] = std::move(edges);
    } else {
      comp["dist"] = space.component(c).rows();
    }
    comps.push_back(std::move(comp));
  }
  Json out{{"components", std::move(comps)}, {"base_gap", space.base_gap()}, {"basepoints", space.basepoints()}};
  if (doc.levels) out["levels"] = *doc.levels;
  return out;
}

SpaceDocument document_for(const UnionPtr& space) {
  SpaceDocument doc;
  doc.space = space;
  for (std::size_t c = 0; c < space->component_count(); ++c) doc.names.push_back("X" + std::to_string(c));
  doc.graphs.assign(space->component_count(), std::nullopt);
  return doc;
}

SpaceDocument resolve_space(const Json& ref, const std::filesystem::path& base_dir, bool validate) {
  if (ref.is_string()) {
    const auto path = base_dir / ref.get<std::string>();
    return parse_space(read_json_file(path), validate);
  }
  if (ref.is_object()) return parse_space(ref, validate);
  schema("a space reference must be a path or an inline object");
}

Json ref_to_json(PointRef ref) { return Json::array({ref.component, ref.point}); }

PointRef ref_from_json(const Json& value, const CoarseUnion& space) {
  if (!value.is_array() || value.size() != 2) schema("a point reference is a pair [component, point]");
  PointRef ref{as_index(value[0], "point reference"), as_index(value[1], "point reference")};
  if (ref.component >= space.component_count() || ref.point >= space.component_size(ref.component)) {
    throw Error(ErrorKind::OutOfRange, "point [" + std::to_string(ref.component) + ", " +
                                           std::to_string(ref.point) + "] is not in the space");
  }
  return ref;
}

Json refs_to_json(const CoarseUnion& space, std::span<const std::size_t> globals) {
  Json out = Json::array();
  for (auto g : globals) out.push_back(ref_to_json(space.ref(g)));
  return out;
}

MapDocument parse_map(const Json& doc, const std::filesystem::path& base_dir) {
  const auto& dom_ref = field(doc, "domain", "map");
  const auto& cod_ref = field(doc, "codomain", "map");
  auto domain = resolve_space(dom_ref, base_dir);
  auto codomain = dom_ref == cod_ref ? domain : resolve_space(cod_ref, base_dir);
  const auto& list = field(doc, "image", "map");
  if (!list.is_array() || list.size() != domain.space->size()) {
    schema("map: \"image\" must list one point per domain point (" + std::to_string(domain.space->size()) + ")");
  }
  std::vector<PointRef> image;
  for (const auto& v : list) image.push_back(ref_from_json(v, *codomain.space));
  auto map = CoarseMap::from_refs(domain.space, codomain.space, image);
  return {std::move(domain), std::move(codomain), std::move(map)};
}

Json map_to_json(const MapDocument& doc) {
  Json image = Json::array();
  for (const auto& r : doc.map.image_refs()) image.push_back(ref_to_json(r));
  return {{"domain", space_to_json(doc.domain)}, {"codomain", space_to_json(doc.codomain)}, {"image", image}};
}

Json map_to_json(const CoarseMap& map) {
  return map_to_json(MapDocument{document_for(map.domain_ptr()), document_for(map.codomain_ptr()), map});
}

ChainDocument parse_chain(const Json& doc, const std::filesystem::path& base_dir) {
  auto ambient = resolve_space(field(doc, "ambient", "chain"), base_dir);
  const auto& list = field(doc, "coefficients", "chain");
  if (!list.is_array()) schema("chain: \"coefficients\" must be an array");
  Chain0 chain;
  for (const auto& entry : list) {
    if (!entry.is_array() || entry.size() != 2) schema("chain: each coefficient is [[component, point], value]");
    chain.add(ref_from_json(entry[0], *ambient.space), as_int(entry[1], "coefficient"));
  }
  return {std::move(ambient), std::move(chain)};
}

Json chain0_to_json(const Chain0& chain) {
  Json out = Json::array();
  for (const auto& [ref, value] : chain.coefficients()) out.push_back({ref_to_json(ref), value});
  return out;
}

Json chain_to_json(const ChainDocument& doc) {
  return {{"ambient", space_to_json(doc.ambient)}, {"coefficients", chain0_to_json(doc.chain)}};
}

Json chain1_to_json(const Chain1& chain) {
  Json out = Json::array();
  for (const auto& [pair, value] : chain.coefficients()) {
    out.push_back({ref_to_json(pair.first), ref_to_json(pair.second), value});
  }
  return out;
}

Json modulus_to_json(const std::vector<std::pair<Dist, Dist>>& table) {
  Json out = Json::array();
  for (const auto& [r, w] : table) out.push_back({r, w});
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  std::string hex;
  char buf[3];
  for (auto b : digest) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    hex += buf;
  }
  return hex;
}

}  // namespace coarsekit::io
