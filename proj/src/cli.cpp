#include "coarsekit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "coarsekit/constructions.hpp"
#include "coarsekit/expansion.hpp"
#include "coarsekit/io.hpp"
#include "coarsekit/matching.hpp"
#include "coarsekit/rigidity.hpp"
#include "coarsekit/uf_homology.hpp"

namespace coarsekit::cli {

using io::Json;
namespace fs = std::filesystem;

std::size_t exact_cap_from_env(std::size_t fallback) {
  const char* raw = std::getenv("COARSEKIT_EXACT_CAP");
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const auto value = std::strtoull(raw, &end, 10);
  if (*end != '\0') throw Error(ErrorKind::InvalidInput, "COARSEKIT_EXACT_CAP must be a nonnegative integer");
  return static_cast<std::size_t>(value);
}

namespace {

struct Options {
  std::string input;
  std::string second_input;
  std::size_t k = 0;
  std::string h;
  std::string variant = "ball";
  std::optional<Dist> r;
  Dist t = 1;
  std::optional<std::size_t> component;
  std::optional<std::string> constant;  // --C
  std::optional<std::size_t> exact_cap;
  std::optional<std::size_t> levels;
  std::string sizes;
  std::uint64_t seed = 0;
  std::size_t budget = kDefaultSearchBudget;
  Dist radius = 3;
  Dist base_gap = 1;
};

/// Collects everything that goes into the manifest.
class Session {
 public:
  Session(std::string command, std::size_t cap) : command_(std::move(command)), cap_(cap) {}

  std::size_t cap() const { return cap_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_truncation(std::size_t length) { truncation_ = length; }
  void flag(const std::string& name, Json value) { flags_[name] = std::move(value); }

  /// Reads and hashes a JSON file, plus any space files it references.
  Json load(const fs::path& path) {
    auto doc = read_hashed(path);
    for (const char* key : {"domain", "codomain", "ambient"}) {
      if (doc.is_object() && doc.contains(key) && doc[key].is_string()) {
        read_hashed(path.parent_path() / doc[key].get<std::string>());
      }
    }
    return doc;
  }

  Json manifest() const {
    Json m{{"command", command_},
           {"inputs", inputs_},
           {"exact_cap", cap_},
           {"version", std::string(kVersion)},
           {"flags", flags_}};
    m["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    m["truncation_length"] = truncation_ ? Json(*truncation_) : Json(nullptr);
    return m;
  }

 private:
  Json read_hashed(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto bytes = buffer.str();
    Json entry{{"path", path.generic_string()}, {"sha256", io::sha256_hex(bytes)}};
    if (std::find(inputs_.begin(), inputs_.end(), entry) == inputs_.end()) inputs_.push_back(std::move(entry));
    try {
      return Json::parse(bytes);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::InvalidInput, path.string() + ": " + e.what());
    }
  }

  std::string command_;
  std::size_t cap_;
  Json inputs_ = Json::array();
  Json flags_ = Json::object();
  std::optional<std::uint64_t> seed_;
  std::optional<std::size_t> truncation_;
};

fs::path dir_of(const std::string& path) { return fs::path(path).parent_path(); }

Json local_refs(std::size_t component, const PointSet& locals) {
  Json out = Json::array();
  for (auto p : locals) out.push_back(io::ref_to_json({component, p}));
  return out;
}

const GraphSpace& graph_of(const io::SpaceDocument& doc, std::size_t c) {
  if (!doc.graphs[c]) {
    throw Error(ErrorKind::InvalidInput, "component " + std::to_string(c) + " is given by distances, not edges");
  }
  return *doc.graphs[c];
}

std::vector<std::size_t> selected_components(const Options& opt, const CoarseUnion& space) {
  if (opt.component) {
    if (*opt.component >= space.component_count()) {
      throw Error(ErrorKind::OutOfRange, "component " + std::to_string(*opt.component) + " does not exist");
    }
    return {*opt.component};
  }
  std::vector<std::size_t> all(space.component_count());
  for (std::size_t c = 0; c < all.size(); ++c) all[c] = c;
  return all;
}

Json certificate_json(std::size_t c, const ExpanderCertificate& cert) {
  Json j{{"component", c},
         {"k", cert.k},
         {"h_star", io::rational_to_json(cert.h_star)},
         {"witness", local_refs(c, cert.witness)},
         {"method", std::string(to_string(cert.method))}};
  if (cert.half_ratio) {
    j["half_ratio"] = io::rational_to_json(*cert.half_ratio);
    j["half_witness"] = local_refs(c, cert.half_witness);
  }
  return j;
}

Json injective_report_json(const InjectiveConditionReport& r) {
  return {{"pass", r.pass},
          {"n0", r.n0 ? Json(*r.n0) : Json(nullptr)},
          {"truncation_length", r.truncation_length},
          {"preimage_sizes", r.preimage_sizes},
          {"component_sizes", r.component_sizes},
          {"overfull", r.overfull}};
}

Json routing_json(const RoutingReport& r) {
  Json index_map = Json::array();
  for (const auto& i : r.index_map) index_map.push_back(i ? Json(*i) : Json(nullptr));
  return {{"truncation_length", r.truncation_length},
          {"targets", r.targets},
          {"n0", r.n0 ? Json(*r.n0) : Json(nullptr)},
          {"index_map", index_map}};
}

Json condition_json(const Condition2Report& r) {
  Json j{{"pass", r.pass},
         {"truncation_length", r.truncation_length},
         {"n0", r.n0 ? Json(*r.n0) : Json(nullptr)},
         {"N", r.domain_tail},
         {"M", r.codomain_tail},
         {"leftover_X", r.leftover_x},
         {"leftover_Y", r.leftover_y},
         {"routing", routing_json(r.routing)}};
  if (!r.pass) {
    Json mismatches = Json::array();
    for (const auto& m : r.cardinality_mismatches) {
      mismatches.push_back({{"domain_component", m.domain_component},
                            {"codomain_component", m.codomain_component},
                            {"domain_size", m.domain_size},
                            {"codomain_size", m.codomain_size}});
    }
    Json collisions = Json::array();
    for (const auto& [a, b] : r.index_collisions) collisions.push_back({a, b});
    j["obstruction"] = {{"kind", std::string(to_string(r.obstruction))},
                        {"description", r.description},
                        {"cardinality_mismatches", mismatches},
                        {"index_collisions", collisions}};
  }
  return j;
}

Json whyte_json(const CoarseUnion& space, const WhyteReport& w) {
  Json j{{"component", w.component},
         {"t", w.t},
         {"c_star", io::rational_to_json(w.c_star)},
         {"witness", io::refs_to_json(space, w.witness)},
         {"infinite_obstruction", w.infinite_obstruction}};
  if (w.infinite_obstruction) {
    j["obstruction_witness"] = io::refs_to_json(space, w.obstruction_witness);
    j["obstruction_sum"] = w.obstruction_sum;
  }
  return j;
}

io::MapDocument load_map(Session& s, const std::string& path) {
  auto doc = io::parse_map(s.load(path), dir_of(path));
  s.set_truncation(doc.map.domain().component_count());
  return doc;
}

// --------------------------------------------------------------------------

Json cmd_verify_space(Session& s, const Options& opt) {
  auto doc = io::parse_space(s.load(opt.input), false);
  const auto& space = *doc.space;
  s.set_truncation(space.component_count());
  Json violations = Json::array();
  Json sizes = Json::array();
  for (std::size_t c = 0; c < space.component_count(); ++c) {
    sizes.push_back(space.component_size(c));
    for (const auto& v : verify_metric(space.component(c))) {
      violations.push_back({{"component", c}, {"kind", std::string(to_string(v.kind))}, {"points", v.points}});
    }
  }
  return {{"valid", violations.empty()}, {"violations", violations}, {"component_sizes", sizes}};
}

Json cmd_cheeger(Session& s, const Options& opt) {
  auto doc = io::parse_space(s.load(opt.input));
  s.set_truncation(doc.space->component_count());
  Json comps = Json::array();
  std::optional<Rational> least;
  for (auto c : selected_components(opt, *doc.space)) {
    const auto cert = cheeger_exact(graph_of(doc, c), s.cap());
    least = least ? std::min(*least, cert.h_star) : cert.h_star;
    comps.push_back(certificate_json(c, cert));
  }
  return {{"h_star", io::rational_to_json(*least)}, {"components", comps}};
}

Json cmd_verify_expander(Session& s, const Options& opt) {
  auto doc = io::parse_space(s.load(opt.input));
  s.set_truncation(doc.space->component_count());
  s.set_seed(opt.seed);
  const auto h = parse_rational(opt.h);
  Json comps = Json::array();
  bool holds = true;
  for (auto c : selected_components(opt, *doc.space)) {
    const auto v = verify_expander(graph_of(doc, c), opt.k, h, s.cap(), opt.budget, opt.seed);
    holds = holds && v.holds;
    Json j{{"component", c}, {"holds", v.holds}, {"method", std::string(to_string(v.method))}};
    j["degree_witness"] = v.degree_witness ? io::ref_to_json({c, *v.degree_witness}) : Json(nullptr);
    j["witness"] = v.witness ? local_refs(c, *v.witness) : Json(nullptr);
    j["witness_ratio"] = v.witness_ratio ? io::rational_to_json(*v.witness_ratio) : Json(nullptr);
    j["h_star"] = v.h_star ? io::rational_to_json(*v.h_star) : Json(nullptr);
    comps.push_back(std::move(j));
  }
  return {{"holds", holds}, {"k", opt.k}, {"h", io::rational_to_json(h)}, {"components", comps}};
}

Json cmd_analyze_map(Session& s, const Options& opt) {
  const auto doc = load_map(s, opt.input);
  const auto& f = doc.map;
  const auto g = pseudo_inverse(f);
  const auto eq = verify_coarse_equivalence(f, g, opt.radius);
  Json fibers = Json::array();
  for (auto size : f.fiber_sizes()) fibers.push_back(size);
  return {{"modulus", io::modulus_to_json(f.modulus_table())},
          {"finite_to_one", f.finite_to_one()},
          {"fiber_sizes", fibers},
          {"injective", f.injective()},
          {"routing", routing_json(component_routing(f))},
          {"pseudo_inverse", io::map_to_json(g)},
          {"coarse_equivalence",
           {{"radius", eq.radius},
            {"modulus_f", eq.modulus_f},
            {"modulus_g", eq.modulus_g},
            {"g_after_f_to_identity", eq.g_after_f_to_identity},
            {"f_after_g_to_identity", eq.f_after_g_to_identity},
            {"consistent", eq.consistent}}}};
}

Json cmd_injectivize(Session& s, const Options& opt) {
  const auto doc = load_map(s, opt.input);
  const auto& f = doc.map;
  if (opt.variant == "selection") {
    if (!opt.r) throw Error(ErrorKind::InvalidInput, "--variant selection needs --r");
    auto result = injectivize_selection(f, *opt.r);
    if (auto* cert = std::get_if<DeficiencyCertificate>(&result)) {
      return {{"result", "deficient"},
              {"variant", "selection"},
              {"r", *opt.r},
              {"certificate",
               {{"left", io::refs_to_json(f.domain(), cert->left)},
                {"candidate_union", io::refs_to_json(f.codomain(), cert->candidate_union)}}}};
    }
    const auto& g = std::get<CoarseMap>(result);
    return {{"result", "injective"},
            {"variant", "selection"},
            {"r", *opt.r},
            {"map", io::map_to_json(io::MapDocument{doc.domain, doc.codomain, g})},
            {"closeness", closeness(g, f)}};
  }
  if (opt.variant != "ball") throw Error(ErrorKind::InvalidInput, "unknown variant " + opt.variant);
  const auto best = injectivize_minimal(f);
  return {{"result", "injective"},
          {"variant", "ball"},
          {"s_star", best.s_star},
          {"map", io::map_to_json(io::MapDocument{doc.domain, doc.codomain, best.map})},
          {"closeness", closeness(best.map, f)}};
}

Json cmd_check_injective(Session& s, const Options& opt) {
  const auto doc = load_map(s, opt.input);
  const auto& f = doc.map;
  const auto report = check_injective_condition(f);
  Json j = injective_report_json(report);
  if (!report.pass) return j;
  const auto target = build_target_set(f, *report.n0);
  j["target_set"] = io::refs_to_json(f.codomain(), target);
  std::optional<Rational> threshold;
  if (opt.k > 0 && !opt.h.empty()) threshold = whyte_threshold(opt.k, parse_rational(opt.h), f.finite_to_one());
  j["threshold"] = threshold ? io::rational_to_json(*threshold) : Json(nullptr);
  Json obstructions = Json::array();
  for (auto n = *report.n0; n < f.codomain().component_count(); ++n) {
    if (f.codomain().component_size(n) > s.cap()) {
      obstructions.push_back({{"component", n}, {"skipped", "component exceeds the exact cap"}});
      continue;
    }
    const auto w = injectivity_obstruction(f, target, opt.t, n, s.cap());
    auto wj = whyte_json(f.codomain(), w);
    if (threshold) wj["below_threshold"] = !w.infinite_obstruction && w.c_star <= *threshold;
    obstructions.push_back(std::move(wj));
  }
  j["obstructions"] = std::move(obstructions);
  return j;
}

Json cmd_check_bijective(Session& s, const Options& opt) {
  const auto doc = load_map(s, opt.input);
  return condition_json(check_bijective_condition(doc.map));
}

Json cmd_bijectivize(Session& s, const Options& opt) {
  const auto doc = load_map(s, opt.input);
  const auto report = check_bijective_condition(doc.map);
  Json j{{"condition", condition_json(report)}, {"pass", report.pass}};
  if (!report.pass) {
    j["obstruction"] = j["condition"]["obstruction"];
    return j;
  }
  const auto result = bijectivize_expander(doc.map, report);
  j["bijection"] = io::map_to_json(io::MapDocument{doc.domain, doc.codomain, result.bijection});
  j["closeness_to_f"] = result.closeness_to_f;
  j["per_component_radius"] = result.per_component_radius;
  j["modulus"] = io::modulus_to_json(result.modulus);
  j["inverse_modulus"] = io::modulus_to_json(result.inverse_modulus);
  j["radii_growing"] = result.radii_growing;
  return j;
}

Json cmd_sb(Session& s, const Options& opt) {
  const auto g = load_map(s, opt.input);
  const auto h = io::parse_map(s.load(opt.second_input), dir_of(opt.second_input));
  const auto result = sb_bijection(g.map, h.map);
  const auto& X = g.map.domain();
  const auto& Y = g.map.codomain();
  Json image = Json::array();
  for (const auto& y : result.chains.bijection) image.push_back(y ? io::ref_to_json(Y.ref(*y)) : Json(nullptr));
  Json uses_g = Json::array();
  for (bool b : result.chains.uses_g) uses_g.push_back(b);
  Json j{{"bijective", result.chains.bijective()},
         {"image", image},
         {"uses_g", uses_g},
         {"unmatched_domain", io::refs_to_json(X, result.chains.unmatched_domain)},
         {"unmatched_codomain", io::refs_to_json(Y, result.chains.unmatched_codomain)}};
  j["closeness_to_g"] = result.map ? Json(closeness(*result.map, g.map)) : Json(nullptr);
  return j;
}

Json cmd_whyte_check(Session& s, const Options& opt) {
  const auto path = opt.input;
  const auto doc = io::parse_chain(s.load(path), dir_of(path));
  const auto& space = *doc.ambient.space;
  s.set_truncation(space.component_count());
  Json comps = Json::array();
  for (auto c : selected_components(opt, space)) {
    if (space.component_size(c) > s.cap() && opt.constant) {
      s.set_seed(opt.seed);
      const auto C = parse_rational(*opt.constant);
      const auto witness = whyte_falsify(space, doc.chain, opt.t, c, C, opt.budget, opt.seed);
      comps.push_back({{"component", c},
                       {"method", witness ? "falsified" : "inconclusive"},
                       {"C", io::rational_to_json(C)},
                       {"witness", witness ? io::refs_to_json(space, *witness) : Json(nullptr)}});
      continue;
    }
    auto wj = whyte_json(space, whyte_check_exact(space, doc.chain, opt.t, c, s.cap()));
    wj["method"] = "exact";
    comps.push_back(std::move(wj));
  }
  return {{"t", opt.t}, {"components", comps}};
}

Json cmd_fill_chain(Session& s, const Options& opt) {
  const auto doc = io::parse_chain(s.load(opt.input), dir_of(opt.input));
  const auto& space = *doc.ambient.space;
  s.set_truncation(space.component_count());
  const auto result = fill_chain(space, doc.chain, opt.t);
  if (const auto* cert = std::get_if<FillingCertificate>(&result)) {
    return {{"fillable", true},
            {"t", cert->t},
            {"c", cert->c},
            {"propagation", cert->chain.propagation(space)},
            {"chain", io::chain1_to_json(cert->chain)}};
  }
  const auto& obs = std::get<FillObstruction>(result);
  return {{"fillable", false}, {"t", opt.t}, {"cut", io::refs_to_json(space, obs.cut)}, {"total", obs.total}};
}

Json stacking_json(const StackingReport& r) {
  Json table = Json::array();
  for (const auto& row : r.distortion_table) table.push_back({row.base_distance, row.min_candidate, row.max_candidate});
  return {{"labeling_bijective", r.labeling_bijective},
          {"distortion_table", table},
          {"inclusion_distortion", r.inclusion_distortion},
          {"fiber_diameter", r.fiber_diameter}};
}

Json cmd_stack(Session& s, const Options& opt) {
  auto doc = io::parse_space(s.load(opt.input));
  s.set_truncation(doc.space->component_count());
  if (opt.k == 0) throw Error(ErrorKind::InvalidInput, "--k must be at least 1");
  const auto stacked = stack_union(doc.space, opt.k);
  const auto labels = stacked.labels();
  Json checks = Json::array();
  for (std::size_t c = 0; c < doc.space->component_count(); ++c) {
    const auto& base = doc.space->component(c);
    std::vector<std::pair<std::size_t, std::size_t>> local;
    for (std::size_t p = 0; p < stacked.stacked->component_size(c); ++p) local.emplace_back(p % base.size(), p / base.size());
    auto report = stacking_json(verify_stacking(base, stacked.stacked->component(c), opt.k, local));
    report["component"] = c;
    checks.push_back(std::move(report));
  }
  auto out_doc = io::document_for(stacked.stacked);
  for (std::size_t c = 0; c < doc.names.size(); ++c) out_doc.names[c] = doc.names[c];
  out_doc.levels = opt.k;
  return {{"space", io::space_to_json(out_doc)}, {"verification", checks}};
}

Json cmd_double(Session& s, const Options& opt) {
  auto doc = io::parse_space(s.load(opt.input));
  s.set_truncation(doc.space->component_count());
  io::SpaceDocument out_doc;
  std::vector<FiniteSpace> parts;
  Json comps = Json::array();
  for (std::size_t c = 0; c < doc.space->component_count(); ++c) {
    const auto& base = graph_of(doc, c);
    auto dbl = bipartite_double(base);
    Json j{{"component", c},
           {"base_max_degree", base.max_degree()},
           {"max_degree", dbl.graph.max_degree()},
           {"side1", local_refs(c, dbl.side1)},
           {"side2", local_refs(c, dbl.side2)}};
    if (base.size() >= 2 && base.size() <= s.cap()) {
      const auto bip = bipartite_expansion_exact(dbl.graph, dbl.side1, dbl.side2, s.cap());
      j["bipartite_h"] = io::rational_to_json(bip.h);
      j["bipartite_witness"] = local_refs(c, bip.witness);
      const auto cert = cheeger_exact(base, s.cap());
      j["base_h_star"] = io::rational_to_json(cert.h_star);
      if (cert.half_ratio) j["base_half_ratio"] = io::rational_to_json(*cert.half_ratio);
    }
    parts.push_back(dbl.graph.metric());
    out_doc.names.push_back(doc.names[c]);
    out_doc.graphs.emplace_back(std::move(dbl.graph));
    comps.push_back(std::move(j));
  }
  out_doc.space = share(assemble_union(std::move(parts), doc.space->base_gap()));
  return {{"space", io::space_to_json(out_doc)}, {"components", comps}};
}

Json cmd_unstack(Session& s, const Options& opt) {
  const auto doc = load_map(s, opt.input);
  const auto k = opt.levels ? *opt.levels : (doc.domain.levels ? *doc.domain.levels : 0);
  if (k == 0) throw Error(ErrorKind::BadLabeling, "the number of levels is unknown; pass --k");
  if (doc.codomain.levels && *doc.codomain.levels != k) {
    throw Error(ErrorKind::BadLabeling, "domain and codomain have different numbers of levels");
  }
  const auto dom = recognize_stacking(doc.map.domain_ptr(), k);
  const auto cod = recognize_stacking(doc.map.codomain_ptr(), k);
  const auto g = unstack_map(doc.map, dom, cod);
  return {{"levels", k},
          {"map", io::map_to_json(g)},
          {"modulus", io::modulus_to_json(g.modulus_table())},
          {"condition", condition_json(check_bijective_condition(g))}};
}

Json cmd_generate(Session& s, const Options& opt) {
  std::vector<std::size_t> sizes;
  std::stringstream list(opt.sizes);
  for (std::string item; std::getline(list, item, ',');) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "bad size \"" + item + "\"");
    }
  }
  s.set_seed(opt.seed);
  s.set_truncation(sizes.size());
  const auto seq = expander_sequence(sizes, opt.k, opt.seed, opt.base_gap, s.cap(), opt.budget);
  io::SpaceDocument doc;
  doc.space = seq.space;
  for (std::size_t c = 0; c < seq.graphs.size(); ++c) {
    doc.names.push_back("G" + std::to_string(c));
    doc.graphs.emplace_back(seq.graphs[c]);
  }
  Json certs = Json::array();
  for (std::size_t c = 0; c < seq.certificates.size(); ++c) certs.push_back(certificate_json(c, seq.certificates[c]));
  return {{"space", io::space_to_json(doc)},
          {"certificates", certs},
          {"min_exact_h", seq.min_exact_h ? io::rational_to_json(*seq.min_exact_h) : Json(nullptr)}};
}

void emit_error(std::ostream& out, std::string_view kind, const std::string& message) {
  Json e{{"error", {{"kind", std::string(kind)}, {"message", message}}}};
  out << e.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coarse geometry toolkit: expanders, coarse maps, rigidity checks"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", std::string(kVersion));
  Options opt;

  using Handler = std::function<Json(Session&, const Options&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler handler) {
    auto* sub = app.add_subcommand(name, help);
    sub->set_help_flag("--help", "print help");
    commands.emplace_back(sub, std::move(handler));
    return sub;
  };
  auto input = [&](CLI::App* sub, const char* what) { sub->add_option("input", opt.input, what)->required(); };
  auto cap_opt = [&](CLI::App* sub) { sub->add_option("--exact-cap", opt.exact_cap, "enumeration cap"); };
  auto seed_opt = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--budget", opt.budget, "local search budget");
  };
  auto comp_opt = [&](CLI::App* sub) { sub->add_option("--component", opt.component, "restrict to one component"); };

  auto* sub = add("verify-space", "check the metric axioms of a space file", cmd_verify_space);
  input(sub, "space file");

  sub = add("cheeger", "exact expansion constant of graph components", cmd_cheeger);
  input(sub, "space file");
  cap_opt(sub);
  comp_opt(sub);

  sub = add("verify-expander", "decide (k, h)-expansion", cmd_verify_expander);
  input(sub, "space file");
  sub->add_option("--k", opt.k, "degree bound")->required();
  sub->add_option("--h", opt.h, "expansion constant p/q")->required();
  cap_opt(sub);
  seed_opt(sub);
  comp_opt(sub);

  sub = add("analyze-map", "moduli, fibres and component routing of a map", cmd_analyze_map);
  input(sub, "map file");
  sub->add_option("--radius", opt.radius, "radius for the coarse equivalence check");

  sub = add("injectivize", "close injective map by matching", cmd_injectivize);
  input(sub, "map file");
  sub->add_option("--variant", opt.variant, "selection | ball")->check(CLI::IsMember({"selection", "ball"}));
  sub->add_option("--r", opt.r, "selection radius");

  sub = add("check-injective", "cardinality condition for a close injective map", cmd_check_injective);
  input(sub, "map file");
  sub->add_option("--t", opt.t, "boundary scale");
  sub->add_option("--k", opt.k, "degree bound for the threshold");
  sub->add_option("--h", opt.h, "expansion constant for the threshold");
  cap_opt(sub);

  sub = add("check-bijective", "routing and cardinality condition for a close bijection", cmd_check_bijective);
  input(sub, "map file");

  sub = add("bijectivize", "construct a close bijection", cmd_bijectivize);
  input(sub, "map file");

  sub = add("sb", "bijection from two opposite injections", cmd_sb);
  input(sub, "map file for g: X -> Y");
  sub->add_option("second", opt.second_input, "map file for h: Y -> X")->required();

  sub = add("whyte-check", "partial sums against boundary sizes", cmd_whyte_check);
  input(sub, "chain file");
  sub->add_option("--t", opt.t, "boundary scale");
  sub->add_option("--C", opt.constant, "constant to falsify above the cap");
  cap_opt(sub);
  seed_opt(sub);
  comp_opt(sub);

  sub = add("fill-chain", "minimal filling of a 0-chain", cmd_fill_chain);
  input(sub, "chain file");
  sub->add_option("--t", opt.t, "propagation bound");

  sub = add("stack", "k-stacking of a space", cmd_stack);
  input(sub, "space file");
  sub->add_option("--k", opt.k, "number of levels")->required();

  sub = add("double", "bipartite double of graph components", cmd_double);
  input(sub, "space file");
  cap_opt(sub);

  sub = add("unstack", "base map of a map between stackings", cmd_unstack);
  input(sub, "map file");
  sub->add_option("--k", opt.levels, "number of levels");

  sub = add("generate", "union of random regular graphs", cmd_generate);
  sub->add_option("--sizes", opt.sizes, "comma separated, strictly increasing")->required();
  sub->add_option("--k", opt.k, "degree")->required();
  sub->add_option("--base-gap", opt.base_gap, "gap between components");
  cap_opt(sub);
  seed_opt(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    emit_error(out, "Usage", e.what());
    err << e.what() << '\n';
    return kExitInputError;
  }

  for (auto& [cmd, handler] : commands) {
    if (!cmd->parsed()) continue;
    try {
      const auto cap = opt.exact_cap ? *opt.exact_cap : exact_cap_from_env(kDefaultExactCap);
      Session session(cmd->get_name(), cap);
      for (const auto* o : cmd->get_options()) {
        if (o->get_name() == "--help" || o->count() == 0) continue;
        const auto results = o->results();
        session.flag(o->get_name(), results.size() == 1 ? Json(results.front()) : Json(results));
      }
      Json report = handler(session, opt);
      Json doc{{"manifest", session.manifest()}, {"report", std::move(report)}};
      out << doc.dump(2) << '\n';
      return 0;
    } catch (const Error& e) {
      emit_error(out, to_string(e.kind()), e.what());
      err << to_string(e.kind()) << ": " << e.what() << '\n';
      return kExitInputError;
    } catch (const std::exception& e) {
      emit_error(out, "InvalidInput", e.what());
      err << e.what() << '\n';
      return kExitInputError;
    }
  }
  return kExitInputError;
}

}  // namespace coarsekit::cli
