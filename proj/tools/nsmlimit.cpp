// Command-line driver: single runs, κ-sweeps, energy audits, the Moser
// inequality suite and the reformulation check.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "nsmlimit/errors.hpp"
#include "nsmlimit/harness.hpp"

namespace {

using namespace nsmlimit;
using nlohmann::json;

enum Exit { kOk = 0, kConfig = 2, kBlowUp = 3, kFit = 4 };

struct Options {
  std::string config;
  std::string out;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> seed;
  std::string snapshots;
};

RunConfig load(const Options& o) {
  RunConfig c = load_config(o.config);
  if (o.seed) c.initial.seed = *o.seed;
  if (!o.out.empty()) c.output_dir = o.out;
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json audit_points(const AuditReport& r) {
  json arr = json::array();
  for (const auto& p : r.points)
    arr.push_back({{"t", p.t}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"residual", p.residual}, {"terms", p.terms}});
  return arr;
}

int cmd_run(const Options& o) {
  const RunConfig c = load(o);
  const RunRecord r = run_single(c, c.params.kappa);
  const std::filesystem::path dir = c.output_dir;
  write_atomic(dir / "run.csv", ledger_csv(r));
  write_atomic(dir / "record.json", record_json(r));
  std::ostringstream timing;
  timing << "kappa=" << r.kappa << " wall_seconds=" << r.wall_seconds << '\n';
  write_atomic(dir / "timing.txt", timing.str());
  std::printf("kappa=%g status=%s rows=%zu sup_error=%.6e\n", r.kappa, r.status.c_str(), r.rows.size(),
              r.sup_error());
  if (!r.ok()) std::fprintf(stderr, "%s\n", r.message.c_str());
  return r.ok() ? kOk : kBlowUp;
}

int cmd_sweep(const Options& o) {
  const RunConfig c = load(o);
  const SweepSummary s = run_sweep(c, o.jobs);
  write_sweep(s, c.output_dir);
  for (std::size_t i = 0; i < s.kappa.size(); ++i)
    std::printf("kappa=%-8g sup_error=%.6e status=%s\n", s.kappa[i], s.sup_error[i], s.records[i].status.c_str());
  for (const auto& w : s.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& w : s.fit.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (!s.fit.valid) return kFit;
  std::printf("slope=%.4f intercept=%.4f r2=%.5f\n", s.fit.slope, s.fit.intercept, s.fit.r2);
  const bool accepted = s.fit.slope >= 0.8 && s.fit.slope <= 1.3 && s.fit.r2 >= 0.98;
  return accepted ? kOk : kFit;
}

int cmd_audit(const Options& o) {
  const RunConfig c = load(o);
  const std::filesystem::path dir = c.output_dir;
  json j;
  bool accepted = true;
  if (!o.snapshots.empty()) {
    const auto window = parse_snapshots(read_file(o.snapshots));
    const AuditReport r = energy_identity_audit(window, c.params);
    j = {{"max_residual", r.max_residual}, {"points", audit_points(r)}};
    std::printf("max_residual=%.6e\n", r.max_residual);
  } else {
    const AuditRun a = run_audit(c);
    write_atomic(dir / "snapshots.json", snapshots_json(a.window));
    j = {{"dt", c.step.dt},
         {"residual_dt", a.coarse.max_residual},
         {"residual_half_dt", a.fine.max_residual},
         {"ratio", a.ratio},
         {"fault_residual", a.faulty.max_residual},
         {"fault_ratio", a.fault_ratio},
         {"points", audit_points(a.fine)}};
    accepted = a.ratio >= 3.5 && a.fault_ratio >= 10.0;
    std::printf("residual(dt)=%.6e residual(dt/2)=%.6e ratio=%.3f fault_ratio=%.1f\n", a.coarse.max_residual,
                a.fine.max_residual, a.ratio, a.fault_ratio);
  }
  write_atomic(dir / "audit.json", j.dump(2) + "\n");
  return accepted ? kOk : kFit;
}

int cmd_moser(const Options& o) {
  const RunConfig c = load(o);
  const MoserRun m = run_moser(c);
  const json j{{"pairs", c.moser.pairs},
               {"s", c.moser.s},
               {"points", {c.moser.points, 2 * c.moser.points}},
               {"product", {m.base.product, m.doubled.product}},
               {"commutator", {m.base.commutator, m.doubled.commutator}},
               {"growth", m.growth}};
  write_atomic(std::filesystem::path(c.output_dir) / "moser.json", j.dump(2) + "\n");
  std::printf("product C=%.6f/%.6f commutator C=%.6f/%.6f growth=%.3e\n", m.base.product, m.doubled.product,
              m.base.commutator, m.doubled.commutator, m.growth);
  return m.growth < 0.05 ? kOk : kFit;
}

int cmd_reform(const Options& o) {
  const RunConfig c = load(o);
  const ReformRun r = run_reform_check(c);
  json arr = json::array();
  for (const auto& x : r.reports)
    arr.push_back({{"continuity", x.continuity},
                   {"momentum", x.momentum},
                   {"current", x.current},
                   {"electric", x.electric},
                   {"magnetic", x.magnetic},
                   {"scaled_continuity", x.scaled_continuity},
                   {"scaled_momentum", x.scaled_momentum},
                   {"scaled_current", x.scaled_current},
                   {"scaled_electric", x.scaled_electric},
                   {"scaled_magnetic", x.scaled_magnetic},
                   {"current_divergence", x.current_divergence}});
  const json j{{"samples", arr}, {"max_residual", r.max_residual}};
  write_atomic(std::filesystem::path(c.output_dir) / "reform.json", j.dump(2) + "\n");
  std::printf("samples=%zu max_residual=%.3e\n", r.reports.size(), r.max_residual);
  return r.max_residual <= 1e-9 ? kOk : kFit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular-limit experiments for the two-fluid Navier-Stokes-Maxwell system"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (overrides [output] dir)");
    sub->add_option("--seed", o.seed, "seed (overrides [initial] seed)");
    return sub;
  };
  auto* run = add_common(app.add_subcommand("run", "single paired run at [params] kappa"));
  auto* sweep = add_common(app.add_subcommand("sweep", "paired runs over [sweep] kappa and rate fit"));
  sweep->add_option("--jobs", o.jobs, "parallel runs")->check(CLI::PositiveNumber);
  auto* audit = add_common(app.add_subcommand("audit", "zero-order energy identity audit"));
  audit->add_option("--snapshots", o.snapshots, "audit a stored snapshots.json instead of running");
  auto* moser = add_common(app.add_subcommand("moser", "Moser-type inequality ensemble"));
  auto* reform = add_common(app.add_subcommand("reform-check", "reformulation residuals"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (audit->parsed()) return cmd_audit(o);
    if (moser->parsed()) return cmd_moser(o);
    if (reform->parsed()) return cmd_reform(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const BlowUp& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kBlowUp;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kOk;
}
