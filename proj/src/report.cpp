#include "rieszlab/report.hpp"

#include <cstdio>
#include <fstream>

namespace rieszlab {

namespace {

nlohmann::ordered_json point_json(const Point& x) {
  return nlohmann::ordered_json::array({x[0], x[1], x[2]});
}

nlohmann::ordered_json ball_json(const Ball& b) {
  nlohmann::ordered_json j;
  j["center"] = point_json(b.center);
  j["radius"] = b.radius;
  j["dim"] = b.dim;
  return j;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

nlohmann::ordered_json to_json(const ExtReal& v) {
  nlohmann::ordered_json j;
  j["divergent"] = v.divergent;
  j["value"] = v.divergent ? 0.0 : v.value;
  return j;
}

nlohmann::ordered_json to_json(const ConditionReport& rep) {
  nlohmann::ordered_json j;
  j["id"] = rep.id;
  j["holds"] = rep.holds;
  j["empirical_C"] = to_json(rep.empirical_C);
  j["r_star"] = rep.r_star;
  j["x_star"] = point_json(rep.x_star);
  j["stable"] = rep.stable;
  j["note"] = rep.note;
  return j;
}

nlohmann::ordered_json to_json(const NormResult& rep) {
  nlohmann::ordered_json j;
  j["value"] = rep.value;
  j["r_star"] = rep.r_star;
  j["center_star"] = point_json(rep.center_star);
  j["refined_value"] = rep.refined_value;
  j["stable"] = rep.stable;
  return j;
}

nlohmann::ordered_json to_json(const GrowthReport& rep) {
  nlohmann::ordered_json j;
  j["id"] = "kernel-growth";
  j["holds"] = rep.holds;
  j["empirical_C"] = rep.empirical_c;
  j["bound_C"] = rep.bound_c;
  j["worst_r"] = rep.worst_r;
  j["worst_s"] = rep.worst_s;
  return j;
}

nlohmann::ordered_json to_json(const DoublingReport& rep) {
  nlohmann::ordered_json j;
  j["id"] = "kernel-doubling";
  j["holds"] = rep.holds;
  j["empirical_C"] = rep.empirical_c;
  j["bound_C"] = rep.bound_c;
  j["worst_r"] = rep.worst_r;
  j["worst_t"] = rep.worst_t;
  return j;
}

nlohmann::ordered_json to_json(const ApqReport& rep) {
  nlohmann::ordered_json j;
  j["id"] = "apq-characteristic";
  j["value"] = to_json(rep.value);
  j["maximizer"] = ball_json(rep.maximizer);
  j["refined_value"] = rep.refined_value;
  j["stable"] = rep.stable;
  j["p"] = rep.p;
  j["q"] = rep.q;
  return j;
}

nlohmann::ordered_json to_json(const HolderReport& rep) {
  nlohmann::ordered_json j;
  j["id"] = "apq-lower-bound";
  j["holds"] = rep.holds;
  j["min_value"] = rep.min_value;
  j["minimizer"] = ball_json(rep.minimizer);
  j["slack"] = rep.slack;
  return j;
}

nlohmann::ordered_json to_json(const ReverseDoublingReport& rep) {
  nlohmann::ordered_json j;
  j["id"] = "reverse-doubling";
  j["holds"] = rep.holds;
  j["worst_ratio"] = rep.worst_ratio;
  j["worst"] = ball_json(rep.worst);
  j["alpha1"] = rep.alpha1;
  j["alpha2"] = rep.alpha2;
  return j;
}

nlohmann::ordered_json to_json(const BoundednessReport& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = rep.schema_version;
  j["kind"] = rep.kind;
  j["preset"] = rep.preset;
  j["radius_convention"] = rep.radius_convention;

  nlohmann::ordered_json params;
  for (const auto& [key, value] : rep.parameters) {
    params[key] = value;
  }
  j["parameters"] = params;

  nlohmann::ordered_json conds = nlohmann::ordered_json::array();
  for (const auto& c : rep.conditions) {
    conds.push_back(to_json(c));
  }
  j["conditions"] = conds;

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rep.rows) {
    nlohmann::ordered_json r;
    r["function_id"] = row.function_id;
    r["source_norm"] = row.source_norm;
    r["target_norm"] = row.target_norm;
    r["ratio_defined"] = row.ratio_defined;
    r["ratio"] = row.ratio;
    r["refined_ratio"] = row.refined_ratio;
    r["stable"] = row.stable;
    r["error"] = row.error;
    rows.push_back(r);
  }
  j["rows"] = rows;

  j["sup_ratio_defined"] = rep.sup_defined;
  j["sup_ratio"] = rep.sup_ratio;
  j["refined_sup_ratio"] = rep.refined_sup_ratio;
  j["sup_stable"] = rep.sup_stable;

  if (rep.hedberg_present) {
    nlohmann::ordered_json h;
    h["constant"] = rep.hedberg_constant;
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (const auto& s : rep.hedberg) {
      nlohmann::ordered_json sj;
      sj["function_id"] = s.function_id;
      sj["offset"] = s.offset;
      sj["value"] = s.value;
      sj["bound"] = s.bound;
      sj["ratio"] = s.ratio;
      samples.push_back(sj);
    }
    h["samples"] = samples;
    j["hedberg"] = h;
  }

  j["verdict"] = rep.verdict;

  nlohmann::ordered_json w;
  w["rows"] = rep.workload.rows;
  w["conditions"] = rep.workload.conditions;
  w["hedberg_samples"] = rep.workload.hedberg_samples;
  w["r_grid_points"] = rep.workload.r_grid_points;
  j["workload"] = w;
  return j;
}

std::string report_csv(const BoundednessReport& rep) {
  std::string out = "function_id,source_norm,target_norm,ratio,stable\n";
  for (const auto& row : rep.rows) {
    out += row.function_id;
    out += ',';
    out += csv_number(row.source_norm);
    out += ',';
    out += csv_number(row.target_norm);
    out += ',';
    if (row.ratio_defined) {
      out += csv_number(row.ratio);
    }
    out += ',';
    out += row.stable ? "true" : "false";
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw ConfigError("cannot open output path: " + path);
  }
  f << contents;
  f.flush();
  if (!f) {
    throw ConfigError("write failed for output path: " + path);
  }
}

void emit_report(const BoundednessReport& rep, const std::string& format,
                 const std::string& path) {
  if (format == "json") {
    write_text_file(path, to_json(rep).dump(2) + "\n");
  } else if (format == "csv") {
    write_text_file(path, report_csv(rep));
  } else {
    throw ConfigError("unknown report format: " + format +
                      " (expected json or csv)");
  }
}

}  // namespace rieszlab
