#include "geomlab/io.hpp"

#include "geomlab/error.hpp"

namespace geomlab {

namespace {

Json point_rows(const PointTuple& x) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = x[i];
    rows.push_back(Json(std::vector<double>(p.begin(), p.end())));
  }
  return rows;
}

}  // namespace

Json tuple_to_json(const PointTuple& x, const std::string& space_label) {
  Json j;
  j["schema"] = kSchema;
  j["space"] = space_label;
  j["dim"] = x.dim();
  j["n"] = x.size();
  j["points"] = point_rows(x);
  return j;
}

PointTuple tuple_from_json(const Json& j) {
  if (!j.contains("points") || !j["points"].is_array())
    throw PreconditionError("tuple JSON: missing 'points' array");
  const auto& rows = j["points"];
  std::size_t dim = j.contains("dim") ? j["dim"].get<std::size_t>() : 0;
  if (dim == 0 && !rows.empty()) dim = rows[0].size();
  PointTuple out(dim);
  for (const auto& row : rows) {
    const auto v = row.get<std::vector<double>>();
    if (v.size() != dim)
      throw PreconditionError("tuple JSON: row of length " + std::to_string(v.size()) +
                              ", expected " + std::to_string(dim));
    out.push_back(v);
  }
  return out;
}

Json net_to_json(const Net& net) {
  Json j;
  j["center"] = net.center;
  j["radius"] = net.radius;
  j["mesh"] = net.mesh;
  j["size"] = net.points.size();
  j["samples_drawn"] = net.samples_drawn;
  j["points"] = point_rows(net.points);
  return j;
}

Json attempt_to_json(const EmbeddingAttempt& a) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "stress";
  j["space"] = a.space_label;
  j["success"] = a.success;
  j["edge_violations"] = a.edge_violations;
  j["nonedge_violations"] = a.nonedge_violations;
  Json v = Json::array();
  for (const auto& pv : a.violations)
    v.push_back({{"i", pv.i}, {"j", pv.j}, {"edge", pv.is_edge}, {"distance", pv.distance}});
  j["violations"] = v;
  j["violations_truncated"] = a.edge_violations + a.nonedge_violations > a.violations.size();
  j["restart"] = a.restart;
  j["stream_key"] = a.stream_key;
  j["objective_trace"] = a.objective_trace;
  j["dim"] = a.tuple.dim();
  j["points"] = point_rows(a.tuple);
  return j;
}

Json landmark_to_json(const LandmarkEmbedding& e) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "landmark";
  j["space"] = "linf";
  j["dim"] = e.dim;
  j["n"] = e.size();
  j["landmarks"] = e.landmarks;
  Json rows = Json::array();
  for (std::size_t i = 0; i < e.size(); ++i)
    rows.push_back(std::vector<std::int32_t>(e.coords.begin() + static_cast<std::ptrdiff_t>(i * e.dim),
                                             e.coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * e.dim)));
  j["points"] = rows;
  return j;
}

Json report_to_json(const ObstructionReport& r) {
  Json j;
  j["schema"] = kSchema;
  j["n"] = r.n;
  j["delta"] = r.degree;
  j["d"] = r.dim;
  j["space"] = r.space_label;
  j["p"] = r.p;
  j["c_naor"] = r.c_naor;
  j["lambda2"] = r.lambda2;
  j["gap"] = r.gap;
  j["gamma_upper"] = r.gamma_upper;
  j["gamma_lower"] = r.gamma_lower ? Json(*r.gamma_lower) : Json(nullptr);
  j["vol_threshold"] = r.vol_threshold;
  j["vol_certifying"] = r.vol_certifying;
  j["mean_pairwise"] = r.mean_pairwise ? Json(*r.mean_pairwise) : Json(nullptr);
  j["certificate_threshold"] = r.certificate.threshold;
  j["verdict"] = to_string(r.certificate.verdict);
  j["reason"] = r.certificate.reason;
  j["consistency_violation"] = r.consistency_violation;
  j["dimension_threshold"] = r.dimension_threshold;
  return j;
}

Json params_to_json(const Params& p) {
  Json j;
  j["eps"] = p.eps;
  j["c0"] = p.c0;
  j["D"] = p.D;
  j["C_BM"] = p.C_BM;
  j["c_main"] = p.c_main;
  j["ell_min"] = p.ell_min;
  j["ell_max"] = p.ell_max ? Json(*p.ell_max) : Json(nullptr);
  j["tolerance"] = p.tolerance;
  j["max_retries"] = p.max_retries;
  j["seed_completion"] = p.seed_completion;
  j["defaults"] = p.is_default();
  return j;
}

Json long_distances_to_json(const LongDistanceSet& L) {
  Json j;
  j["encoding"] = "complement";
  j["n"] = L.n();
  j["ordered_size"] = L.ordered_size();
  j["unordered_size"] = L.unordered_size();
  Json pairs = Json::array();
  for (const auto& [a, b] : L.short_pairs()) pairs.push_back({a, b});
  j["short_pairs"] = pairs;
  return j;
}

LongDistanceSet long_distances_from_json(const Json& j) {
  if (j.value("encoding", "") != "complement")
    throw PreconditionError("long-distance JSON: unsupported encoding");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& p : j["short_pairs"]) pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
  return LongDistanceSet::from_short_pairs(j["n"].get<std::size_t>(), pairs);
}

Json record_to_json(const DiscretizationRecord& rec) {
  Json j;
  j["schema"] = kSchema;
  j["space"] = rec.space_label;
  j["n"] = rec.size();
  j["delta"] = rec.degree;
  j["params"] = params_to_json(rec.params);
  Json profile;
  profile["threshold"] = rec.profile.threshold;
  profile["ell_min"] = rec.profile.ell_min;
  profile["ell_max"] = rec.profile.ell_max;
  profile["ells"] = rec.profile.ells;
  std::vector<std::size_t> sat;
  for (std::size_t i = 0; i < rec.profile.saturated.size(); ++i)
    if (rec.profile.saturated[i]) sat.push_back(i);
  profile["saturated"] = sat;
  j["profile"] = profile;
  Json seeds = Json::array();
  for (const auto& l : rec.seeds.levels)
    seeds.push_back({{"level", l.level},
                     {"members", l.members},
                     {"attempts", l.attempts},
                     {"completed", l.completed},
                     {"seeds", l.seeds},
                     {"projected", l.projected}});
  j["seeds"] = seeds;
  j["base_size"] = rec.base_size;
  j["local_size"] = rec.local_size;
  j["touched_local_nets"] = rec.touched.size();
  j["anchors"] = rec.anchors;
  j["local_indices"] = rec.local_indices;
  j["xhat"] = point_rows(rec.xhat);
  j["L"] = long_distances_to_json(rec.L);
  return j;
}

Json audit_to_json(const DiscretizationAudit& a) {
  Json j;
  j["schema"] = kSchema;
  j["n"] = a.n;
  j["d"] = a.dim;
  j["delta"] = a.degree;
  j["ok"] = a.ok();
  j["proximity"] = {{"checked", a.proximity_checked}, {"violations", a.proximity_violations}};
  j["profile_violations"] = a.profile_violations;
  j["chain"] = {{"close_pairs", a.close_pairs}, {"violations", a.chain_violations}};
  j["regime"] = {{"holds", a.regime}, {"lhs_log", a.regime_lhs}, {"rhs_log", a.regime_rhs}};
  j["conditional"] = {{"min_radius", a.min_radius},
                      {"scale_lb_violations", a.scale_lb_violations},
                      {"close_preserved_violations", a.close_preserved_violations},
                      {"crowd_violations", a.crowd_violations},
                      {"crowd_max_count", a.crowd_max_count},
                      {"exclusion_violations", a.exclusion_violations}};
  j["factorization"] = a.factorization;
  j["L"] = {{"ordered", a.L_ordered}, {"unordered", a.L_unordered}};
  j["cardinality"] = {{"base_size", a.base_size},
                      {"base_bound", a.base_bound},
                      {"local_size", a.local_size},
                      {"local_bound", a.local_bound},
                      {"ok", a.cardinality_ok}};
  Json v = Json::array();
  for (const auto& x : a.violations)
    v.push_back({{"check", x.check},
                 {"i", x.i},
                 {"j", x.j ? Json(*x.j) : Json(nullptr)},
                 {"value", x.value},
                 {"bound", x.bound}});
  j["violations"] = v;
  return j;
}

Json count_to_json(const CountResult& c) {
  Json j;
  j["schema"] = kSchema;
  if (c.exact) j["exact"] = c.exact->str();
  j["approx"] = c.approx;
  j["log_value"] = c.log_value;
  j["mode"] = c.mode;
  return j;
}

Json rational_to_json(const Rational& q) {
  Json j;
  j["numerator"] = BigInt(boost::multiprecision::numerator(q)).str();
  j["denominator"] = BigInt(boost::multiprecision::denominator(q)).str();
  j["value"] = to_double(q);
  j["log_value"] = q > 0 ? Json(log_of(q)) : Json(nullptr);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace geomlab
