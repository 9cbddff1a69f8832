#include "upb/io.hpp"

#include <fstream>
#include <sstream>

namespace upb {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("complex numbers must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v[k]));
  return out;
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("local vectors must be non-empty arrays");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = complex_from_json(j[k]);
  return v;
}

Json state_set_to_json(const StateSet& set) {
  Json states = Json::array();
  for (const auto& s : set.states) {
    Json locals = Json::array();
    for (const auto& v : s.locals) locals.push_back(vector_to_json(v));
    states.push_back({{"label", {{"name", s.label.name},
                                 {"tile", to_string(s.label.tile)},
                                 {"layer", s.label.layer},
                                 {"index", s.label.index}}},
                      {"locals", std::move(locals)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"dims", set.dims.dims()},
          {"parties", set.dims.labels()},
          {"family", to_string(set.family)},
          {"layer", set.layer_depth},
          {"states", std::move(states)}};
}

StateSet state_set_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw std::invalid_argument("state set file must be a JSON object");
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw std::invalid_argument("unsupported schema_version");
    StateSet set;
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    std::vector<std::string> labels;
    if (j.contains("parties")) labels = j.at("parties").get<std::vector<std::string>>();
    set.dims = SystemDims(dims, labels);
    if (j.contains("family")) set.family = family_from_string(j.at("family").get<std::string>());
    if (j.contains("layer")) set.layer_depth = j.at("layer").get<int>();
    for (const auto& js : j.at("states")) {
      ProductState s;
      const auto& label = js.at("label");
      if (label.is_string()) {
        s.label.name = label.get<std::string>();
      } else {
        s.label.name = label.at("name").get<std::string>();
        if (label.contains("tile")) s.label.tile = tile_from_string(label.at("tile").get<std::string>());
        if (label.contains("layer")) s.label.layer = label.at("layer").get<int>();
        if (label.contains("index")) s.label.index = label.at("index").get<std::vector<int>>();
      }
      for (const auto& v : js.at("locals")) s.locals.push_back(vector_from_json(v));
      set.states.push_back(std::move(s));
    }
    set.validate();
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed state set file: ") + e.what());
  }
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_state_set(const StateSet& set, const std::string& path) { write_json(state_set_to_json(set), path); }

StateSet read_state_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return state_set_from_json(j);
}

Json to_json(const ToleranceConfig& tol) {
  return {{"zero_tol", tol.zero_tol}, {"rank_tol", tol.rank_tol}, {"eig_tol", tol.eig_tol}};
}

Json to_json(const OrthogonalityReport& r) {
  Json j = {{"passed", r.passed}, {"max_overlap", r.max_overlap}};
  if (r.worst_pair) j["worst_pair"] = {r.worst_pair->first, r.worst_pair->second};
  return j;
}

Json to_json(const CompletenessReport& r) {
  return {{"complete", r.complete}, {"count", r.count}, {"expected", r.expected}, {"max_overlap", r.max_overlap}};
}

Json to_json(const SeesawResult& r, std::size_t restarts) {
  Json witness = Json::array();
  for (const auto& v : r.witness.locals) witness.push_back(vector_to_json(v));
  std::ostringstream summary;
  summary << "no product state found; max overlap " << r.best_overlap << " after " << restarts << " restarts";
  return {{"best_overlap", r.best_overlap}, {"margin", 1.0 - r.best_overlap}, {"restarts_used", r.restarts_used},
          {"iterations", r.iterations},     {"converged", r.converged},        {"monotone", r.monotone},
          {"witness", std::move(witness)},  {"summary", summary.str()}};
}

Json to_json(const NonlocalityReport& r) {
  Json provenance = Json::array();
  for (auto [a, b] : r.provenance) provenance.push_back({a, b});
  return {{"cut", r.cut},
          {"joint_dim", r.joint_dim},
          {"rows", r.rows},
          {"solution_dim", r.solution_dim},
          {"contains_identity", r.contains_identity},
          {"identity_residual", r.identity_residual},
          {"certified_trivial", r.certified_trivial},
          {"verdict", r.certified_trivial ? "certified" : "inconclusive"},
          {"provenance", std::move(provenance)}};
}

Json to_json(const PPTReport& r) {
  return {{"ppt", r.ppt},
          {"min_pt_eigenvalue", r.min_pt_eigenvalue},
          {"pt_trace", r.pt_trace},
          {"rank", r.rank},
          {"range_best_product_overlap", r.range_evidence.best_overlap},
          {"range_has_product", r.range_has_product},
          {"entangled_evidence", r.ppt && !r.range_has_product}};
}

Json to_json(const RunTrace& r) {
  Json branches = Json::array();
  for (const auto& b : r.branches) {
    Json path = Json::array();
    for (const auto& s : b.path) path.push_back({{"node", s.node}, {"outcome", s.outcome}, {"probability", s.probability}});
    branches.push_back({{"path", std::move(path)}, {"probability", b.probability}, {"verdict", b.verdict}});
  }
  return {{"input", r.input},
          {"success", r.success},
          {"verdict", r.verdict},
          {"total_probability", r.total_probability},
          {"branches", std::move(branches)}};
}

Json to_json(const ResourceLedger& r) {
  auto link = [](const EntanglementLink& l) { return Json{{"count", l.count}, {"dim", l.dim}}; };
  return {{"AB", link(r.ab)}, {"AC", link(r.ac)}, {"BC", link(r.bc)}, {"ebits", resource_cost(r)}};
}

}  // namespace upb
