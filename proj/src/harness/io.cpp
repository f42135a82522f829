#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <system_error>

#include "nsmlimit/harness.hpp"

namespace nsmlimit {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json values(const ScalarField& f) { return json(f.values()); }

json values(const VectorField& v) { return json::array({values(v[0]), values(v[1]), values(v[2])}); }

ScalarField scalar_from(const json& j, const Grid& g) {
  auto v = j.get<std::vector<double>>();
  if (v.size() != g.size()) throw std::invalid_argument("snapshot field size does not match its grid");
  return ScalarField(g, std::move(v));
}

VectorField vector_from(const json& j, const Grid& g) {
  return VectorField(scalar_from(j.at(0), g), scalar_from(j.at(1), g), scalar_from(j.at(2), g));
}

json certificates(const RunRecord& r) {
  return json{{"hypothesis_norm", r.hypothesis_norm}, {"hypothesis_bound", r.hypothesis_bound},
              {"initial_divE", r.initial_divE},       {"initial_divB", r.initial_divB},
              {"max_divE", r.max_divE},               {"max_divB", r.max_divB},
              {"max_mass_err", r.max_mass_err}};
}

}  // namespace

std::string ledger_csv(const RunRecord& r) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& row : r.rows) {
    const double cols[] = {row.t,      row.gamma,       row.norm_N,        row.norm_U,   row.norm_J,
                           row.norm_E, row.norm_B,      row.enthalpy_fn,   row.weighted_high, row.diss_U,
                           row.diss_J, row.divE,        row.divB,          row.mass_err};
    for (std::size_t i = 0; i < std::size(cols); ++i) out << (i ? "," : "") << num(cols[i]);
    out << '\n';
  }
  return out.str();
}

std::string record_json(const RunRecord& r) {
  const BoundVerdict b = r.rows.empty() ? BoundVerdict{} : bound_monitor(r.gamma_samples(), 1.0, r.kappa);
  json j{{"config", r.config_echo},
         {"config_hash", config_hash(r.config_echo)},
         {"kappa", r.kappa},
         {"status", r.status},
         {"message", r.message},
         {"rows", r.rows.size()},
         {"final_time", r.rows.empty() ? 0.0 : r.rows.back().t},
         {"sup_error", r.sup_error()},
         {"certificates", certificates(r)},
         {"bound", {{"sup_gamma_over_kappa2", b.sup_ratio}, {"C_hat", b.C_hat}, {"c_hat", b.c_hat}}}};
  return j.dump(2) + "\n";
}

std::string summary_json(const SweepSummary& s) {
  json j{{"kappa", s.kappa}, {"sup_error", s.sup_error}, {"config_hash", s.config_hash}};
  if (s.fit.valid) {
    j["slope"] = s.fit.slope;
    j["intercept"] = s.fit.intercept;
    j["r2"] = s.fit.r2;
  } else {
    j["slope"] = nullptr;
    j["intercept"] = nullptr;
    j["r2"] = nullptr;
  }
  json ratios = json::array();
  for (const auto& b : s.bounds) ratios.push_back(b.sup_ratio);
  j["sup_gamma_over_kappa2"] = ratios;
  j["bounds_stable"] = s.bounds_stable;
  json warnings = s.warnings;
  for (const auto& w : s.fit.warnings) warnings.push_back(w);
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

std::string snapshots_json(const std::vector<AuditSnapshot>& window) {
  json arr = json::array();
  for (const auto& s : window) {
    const Grid& g = s.full.grid();
    arr.push_back(json{{"t", s.t},
                       {"grid", {{"dims", g.dims}, {"points", g.points}, {"period", g.period}}},
                       {"n", values(s.full.n)},
                       {"u", values(s.full.u)},
                       {"J", values(s.full.J)},
                       {"E", values(s.full.E)},
                       {"B", values(s.full.B)},
                       {"n0", values(s.limit.n0)},
                       {"u0", values(s.limit.u0)}});
  }
  return arr.dump() + "\n";
}

std::vector<AuditSnapshot> parse_snapshots(const std::string& text) {
  std::vector<AuditSnapshot> out;
  const json arr = json::parse(text);
  for (const auto& s : arr) {
    const Grid g{s.at("grid").at("dims").get<int>(), s.at("grid").at("points").get<int>(),
                 s.at("grid").at("period").get<double>()};
    g.validate();
    AuditSnapshot snap;
    snap.t = s.at("t").get<double>();
    snap.full = FullState{scalar_from(s.at("n"), g), vector_from(s.at("u"), g), vector_from(s.at("J"), g),
                          vector_from(s.at("E"), g), vector_from(s.at("B"), g)};
    snap.limit = LimitState{scalar_from(s.at("n0"), g), vector_from(s.at("u0"), g)};
    out.push_back(std::move(snap));
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_sweep(const SweepSummary& s, const std::filesystem::path& dir) {
  std::ostringstream timing;
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const RunRecord& r = s.records[i];
    write_atomic(dir / ("run_" + std::to_string(i) + ".csv"), ledger_csv(r));
    write_atomic(dir / ("record_" + std::to_string(i) + ".json"), record_json(r));
    timing << "kappa=" << num(r.kappa) << " wall_seconds=" << r.wall_seconds << '\n';
  }
  write_atomic(dir / "summary.json", summary_json(s));
  write_atomic(dir / "timing.txt", timing.str());
}

}  // namespace nsmlimit
