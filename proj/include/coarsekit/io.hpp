#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarsekit/coarse_map.hpp"
#include "coarsekit/metric.hpp"
#include "coarsekit/rational.hpp"
#include "coarsekit/uf_homology.hpp"

namespace coarsekit::io {

using Json = nlohmann::json;

/// A parsed space file. Components given by edges keep their graph.
struct SpaceDocument {
  UnionPtr space;
  std::vector<std::string> names;
  std::vector<std::optional<GraphSpace>> graphs;
  std::optional<std::size_t> levels;  // set for stacked spaces
};

struct MapDocument {
  SpaceDocument domain;
  SpaceDocument codomain;
  CoarseMap map;
};

struct ChainDocument {
  SpaceDocument ambient;
  Chain0 chain;
};

/// Parses JSON text from a file. Throws InvalidInput on I/O or syntax errors.
Json read_json_file(const std::filesystem::path& path);

/// With `validate`, distance matrices must satisfy the metric axioms.
SpaceDocument parse_space(const Json& doc, bool validate = true);
Json space_to_json(const SpaceDocument& doc);
/// Every component written as a distance matrix, names "X0", "X1", ...
SpaceDocument document_for(const UnionPtr& space);

/// `ref` is a path relative to `base_dir` or an inline object.
SpaceDocument resolve_space(const Json& ref, const std::filesystem::path& base_dir, bool validate = true);

MapDocument parse_map(const Json& doc, const std::filesystem::path& base_dir);
Json map_to_json(const MapDocument& doc);
Json map_to_json(const CoarseMap& map);

ChainDocument parse_chain(const Json& doc, const std::filesystem::path& base_dir);
Json chain_to_json(const ChainDocument& doc);

Json ref_to_json(PointRef ref);
PointRef ref_from_json(const Json& value, const CoarseUnion& space);
Json refs_to_json(const CoarseUnion& space, std::span<const std::size_t> globals);
Json chain0_to_json(const Chain0& chain);
Json chain1_to_json(const Chain1& chain);
Json modulus_to_json(const std::vector<std::pair<Dist, Dist>>& table);
inline Json rational_to_json(const Rational& q) { return to_string(q); }

std::string sha256_hex(const std::string& bytes);

}  // namespace coarsekit::io
