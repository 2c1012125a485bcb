#include "helixlab/report.hpp"

namespace helixlab {

Json make_document(const std::string& command, Json instance, Json params, Json result) {
    Json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["tool"] = "helixlab";
    doc["tool_version"] = kToolVersion;
    doc["command"] = command;
    doc["instance"] = std::move(instance);
    doc["params"] = std::move(params);
    doc["result"] = std::move(result);
    return doc;
}

Json verdict_json(const HelixVerdict& v) {
    Json j;
    j["is_helix"] = v.is_helix;
    j["theta_mean"] = v.theta_mean;
    j["theta_spread"] = v.theta_spread;
    j["grid_points"] = v.grid_size;
    j["tolerance"] = v.tolerance;
    return j;
}

Json weak_helix_json(const WeakHelixResult& r) {
    Json j;
    j["rank"] = r.independence_rank;
    Json dirs = Json::array();
    for (std::size_t i = 0; i < r.directions.size(); ++i) {
        Json entry;
        entry["direction"] = std::vector<double>(r.directions[i].data(),
                                                 r.directions[i].data() + r.directions[i].size());
        entry["theta"] = r.thetas[i];
        dirs.push_back(std::move(entry));
    }
    j["directions"] = std::move(dirs);
    return j;
}

Json theorem_report_json(const TheoremReport& r) {
    Json j;
    j["theorem"] = r.theorem_id;
    j["instance"] = r.instance;
    j["verdict"] = to_string(r.verdict);
    j["tolerance"] = r.tolerance;
    Json hyp;
    for (const auto& [name, value] : r.hypothesis) hyp[name] = value;
    j["hypothesis"] = std::move(hyp);
    Json concl;
    for (const auto& [name, value] : r.conclusion) concl[name] = value;
    j["conclusion"] = std::move(concl);
    Json obs;
    for (const auto& [name, value] : r.observed) obs[name] = value;
    j["observed"] = std::move(obs);
    j["samples"] = r.samples_used;
    return j;
}

Json params_json(const VerifyParams& p) {
    Json j;
    j["grid"] = p.grid_per_axis;
    j["step"] = p.step;
    j["s_max"] = p.s_max;
    j["tol"] = p.tol;
    j["nonzero_floor"] = p.nonzero_floor;
    j["curvature_match_tol"] = p.curvature_match_tol;
    j["discrete_tol"] = p.discrete_tol;
    j["seed"] = p.seed;
    j["test_curves"] = p.test_curves;
    j["sample_points"] = p.sample_points;
    return j;
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

} // namespace helixlab
