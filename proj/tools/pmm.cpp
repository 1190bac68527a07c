#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pmm/errors.hpp"
#include "pmm/generator.hpp"
#include "pmm/instance.hpp"
#include "pmm/oracle.hpp"
#include "pmm/pipeline.hpp"
#include "pmm/solution.hpp"

namespace {

using nlohmann::ordered_json;
using namespace pmm;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

std::string rat_or_null(const std::optional<Rat>& r) {
  return r ? rat_to_string(*r) : "null";
}

ordered_json ledger_json(const Ledger& ledger) {
  ordered_json rows = ordered_json::array();
  for (const LedgerRow& row : ledger.rows()) {
    ordered_json r;
    r["name"] = row.name;
    r["op"] = row.op;
    if (row.op != "bool") {
      r["lhs"] = rat_to_string(row.lhs);
      r["rhs"] = rat_to_string(row.rhs);
    }
    r["holds"] = row.holds;
    if (!row.witness.empty()) r["witness"] = row.witness;
    rows.push_back(r);
  }
  return rows;
}

std::vector<std::string> mask_ids(const Instance& inst, Mask m) {
  std::vector<std::string> out;
  for (Mask rest = m; rest; rest &= rest - 1)
    out.push_back(inst.facilities[__builtin_ctz(rest)].id);
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

void dump_stage2(const RunReport& rep) {
  const Instance& red = rep.reduced;
  for (int t = 0; t < red.nc(); ++t) {
    std::cerr << "stage2: center " << red.clients[t].id
              << " F={" << join(mask_ids(red, rep.sets.F[t])) << "}"
              << " F'={" << join(mask_ids(red, rep.sets.Fprime[t])) << "}"
              << " G={" << join(mask_ids(red, rep.sets.G[t])) << "}"
              << " B={" << join(mask_ids(red, rep.sets.B[t])) << "}"
              << " gamma=" << rat_or_inf_to_string(rep.sets.gamma[t])
              << " rho=" << rat_to_string(rep.sets.rho[t])
              << " regime=" << (rep.sets.small[t] ? "small" : "large") << "\n";
  }
  for (int t = 0; t < red.nc(); ++t)
    std::cerr << "stage2: center " << red.clients[t].id << " i1=" << red.facilities[rep.half.i1[t]].id
              << " i2=" << red.facilities[rep.half.i2[t]].id
              << " sigma=" << red.clients[rep.half.sigma[t]].id
              << " chat=" << rat_to_string(rep.half.chat[t]) << "\n";
}

void dump_stage3(const RunReport& rep) {
  const Instance& red = rep.reduced;
  std::string picks;
  for (int u : rep.clustering.cprime) picks += (picks.empty() ? "" : ",") + red.clients[u].id;
  std::cerr << "stage3: representatives=[" << picks << "]\n";
  for (int t = 0; t < red.nc(); ++t)
    std::cerr << "stage3: center " << red.clients[t].id << " block={"
              << join(mask_ids(red, rep.clustering.S[t])) << "} ctr="
              << red.clients[rep.clustering.ctr[t]].id << "\n";
}

int cmd_solve(const std::string& path, const std::string& mode_str, const std::string& out_path,
              int cap, bool decimal, bool timings, bool skip_metric, bool dump_lp_flag,
              bool dump_s2, bool dump_s3) {
  Mode mode = mode_from_name(mode_str);
  if (mode == Mode::Custom)
    throw ValidationError("custom phi/lambda tables are a library feature, not a CLI mode");
  Instance inst = instance_from_json_text(read_file(path));
  validate_instance_or_throw(inst, {skip_metric});
  if (dump_lp_flag) std::cerr << dump_lp(build_main_lp(inst).lp);

  PipelineOptions po;
  po.mode = mode;
  po.enum_cap = cap;
  RunReport rep = run_pipeline(inst, po);
  if (dump_s2) dump_stage2(rep);
  if (dump_s3) dump_stage3(rep);

  std::string sol_text = solution_to_json_text(inst, rep.sol, mode_name(mode), rep.ledger, decimal);
  if (!out_path.empty()) write_file(out_path, sol_text);

  ordered_json report;
  report["mode"] = mode_name(mode);
  report["instance"] = path;
  report["lp_value"] = rat_to_string(rep.lp_value);
  ordered_json stages;
  stages["reduced_frac_cost"] = rat_to_string(rep.reduced_frac_cost);
  stages["t_yprime"] = rat_to_string(rep.t_yprime);
  stages["t_yhat"] = rat_to_string(rep.t_yhat);
  stages["half_cost"] = rat_to_string(rep.half_cost);
  stages["h_yhat_prime"] = rat_to_string(rep.h_yhat_prime);
  stages["h_ztilde"] = rat_to_string(rep.h_ztilde);
  stages["reduced_int_cost"] = rat_to_string(rep.reduced_int_cost);
  report["stage_values"] = stages;
  report["final_cost"] = rat_to_string(rep.final_cost);
  report["cost_ratio"] = rep.cost_ratio ? ordered_json(rat_to_string(*rep.cost_ratio))
                                        : ordered_json(nullptr);
  report["max_dilation"] = rep.dil.max_dilation
                               ? ordered_json(rat_to_string(*rep.dil.max_dilation))
                               : ordered_json(nullptr);
  report["zero_radius_served_at_zero"] = rep.dil.zero_radius_served_at_zero;
  if (decimal) {
    report["lp_value_decimal"] = rat_to_double(rep.lp_value);
    report["final_cost_decimal"] = rat_to_double(rep.final_cost);
    if (rep.cost_ratio) report["cost_ratio_decimal"] = rat_to_double(*rep.cost_ratio);
    if (rep.dil.max_dilation)
      report["max_dilation_decimal"] = rat_to_double(*rep.dil.max_dilation);
  }
  report["solution"] = ordered_json::parse(sol_text);
  report["lp_stats"] = {{"pivots", rep.relax.pivots}, {"cuts", rep.relax.cuts_added}};
  report["ledger"] = ledger_json(rep.ledger);
  if (timings) {
    ordered_json ms;
    for (const auto& [name, t] : rep.stage_ms) ms[name] = t;
    report["timings_ms"] = ms;
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& inst_path, const std::string& sol_path, bool skip_metric) {
  Instance inst = instance_from_json_text(read_file(inst_path));
  validate_instance_or_throw(inst, {skip_metric});
  ParsedSolution sol = solution_from_json_text(read_file(sol_path));
  std::vector<std::string> problems = verify_solution(inst, sol);
  if (!sol.all_ledger_rows_hold)
    problems.push_back("solution file records a failing ledger row");
  if (problems.empty()) {
    std::cout << "verify: ok (cost " << rat_to_string(sol.cost) << ", "
              << sol.open_ids.size() << " open)\n";
    return 0;
  }
  for (const std::string& p : problems) std::cout << "verify: mismatch: " << p << "\n";
  return 1;
}

int cmd_gen(GenOptions base, int count, const std::string& out_path,
            const std::string& out_dir) {
  if (count > 1 && out_dir.empty())
    throw ValidationError("--count needs --out-dir");
  if (count == 1 && out_dir.empty()) {
    std::string text = generate_instance_text(base);
    if (out_path.empty())
      std::cout << text;
    else
      write_file(out_path, text);
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  for (int c = 0; c < count; ++c) {
    GenOptions o = base;
    o.seed = base.seed + static_cast<std::uint64_t>(c);
    std::string name = out_dir + "/gen-" + std::to_string(o.seed) + ".json";
    write_file(name, generate_instance_text(o));
    std::cout << name << "\n";
  }
  return 0;
}

int cmd_bench(const std::string& dir, const std::string& modes_csv, const std::string& csv_path,
              int cap, bool timings) {
  std::vector<Mode> modes;
  {
    std::stringstream ss(modes_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) modes.push_back(mode_from_name(tok));
  }
  std::vector<std::string> files;
  if (std::filesystem::exists(dir))
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".json") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());

  struct Row {
    std::string file, mode, status, lp, cost, ratio, dil;
    int ledger_failures = 0;
    double ms = 0;
  };
  std::vector<Row> rows;
  int total_ledger_failures = 0;
  for (const std::string& file : files) {
    for (Mode m : modes) {
      Row row;
      row.file = std::filesystem::path(file).filename().string();
      row.mode = mode_name(m);
      try {
        Instance inst = instance_from_json_text(read_file(file));
        validate_instance_or_throw(inst);
        PipelineOptions po;
        po.mode = m;
        po.enum_cap = cap;
        po.throw_on_ledger_failure = false;
        RunReport rep = run_pipeline(inst, po);
        for (const LedgerRow& lr : rep.ledger.rows())
          if (!lr.holds) ++row.ledger_failures;
        total_ledger_failures += row.ledger_failures;
        row.status = row.ledger_failures ? "ledger-fail" : "ok";
        row.lp = rat_to_string(rep.lp_value);
        row.cost = rat_to_string(rep.final_cost);
        row.ratio = rat_or_null(rep.cost_ratio);
        row.dil = rat_or_null(rep.dil.max_dilation);
        for (const auto& [_, t] : rep.stage_ms) row.ms += t;
      } catch (const InfeasibleError&) {
        row.status = "infeasible";
      } catch (const PmmError& e) {
        row.status = std::string("error: ") + e.what();
      }
      rows.push_back(std::move(row));
    }
  }

  std::ostringstream csv;
  csv << "file,mode,status,lp_value,final_cost,cost_ratio,max_dilation,ledger_failures";
  if (timings) csv << ",ms";
  csv << "\n";
  for (const Row& r : rows) {
    csv << r.file << "," << r.mode << "," << r.status << "," << r.lp << "," << r.cost << ","
        << r.ratio << "," << r.dil << "," << r.ledger_failures;
    if (timings) csv << "," << r.ms;
    csv << "\n";
  }
  if (!csv_path.empty()) write_file(csv_path, csv.str());

  std::cout << "instances: " << files.size() << ", runs: " << rows.size() << "\n";
  for (Mode m : modes) {
    std::optional<Rat> worst_ratio, worst_dil;
    int ok = 0, infeasible = 0, failed = 0;
    for (const Row& r : rows) {
      if (r.mode != mode_name(m)) continue;
      if (r.status == "ok") {
        ++ok;
        if (r.ratio != "null") {
          Rat rr = rat_from_string(r.ratio);
          if (!worst_ratio || rr > *worst_ratio) worst_ratio = rr;
        }
        if (r.dil != "null") {
          Rat dd = rat_from_string(r.dil);
          if (!worst_dil || dd > *worst_dil) worst_dil = dd;
        }
      } else if (r.status == "infeasible") {
        ++infeasible;
      } else {
        ++failed;
      }
    }
    std::cout << mode_name(m) << ": ok " << ok << ", infeasible " << infeasible << ", failed "
              << failed << ", max cost ratio " << rat_or_null(worst_ratio) << ", max dilation "
              << rat_or_null(worst_dil) << "\n";
  }
  if (total_ledger_failures) {
    std::cout << "ledger failures: " << total_ledger_failures << "\n";
    return kExitInternal;
  }
  return 0;
}

int cmd_oracle(const std::string& path, int cap, const std::string& modes_csv) {
  Instance inst = instance_from_json_text(read_file(path));
  validate_instance_or_throw(inst);

  ordered_json report;
  report["instance"] = path;
  ExactOpt exact = exact_opt(inst, cap);

  std::optional<Rat> lp;
  try {
    lp = solve_relaxation(inst).lp_value;
  } catch (const InfeasibleError&) {
  }
  check_internal(!(exact.feasible && !lp),
                 "relaxation reported infeasible on an instance with a feasible set");
  report["lp_value"] = lp ? ordered_json(rat_to_string(*lp)) : ordered_json("infeasible");
  ordered_json ex;
  ex["feasible"] = exact.feasible;
  if (exact.feasible) {
    check_internal(lp.has_value() && *lp <= exact.opt, "relaxation value above the exact optimum");
    ex["opt"] = rat_to_string(exact.opt);
    ex["open"] = mask_ids(inst, exact.best_set);
  }
  report["exact"] = ex;

  if (exact.feasible) {
    ordered_json per_mode;
    std::stringstream ss(modes_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      Mode m = mode_from_name(tok);
      if (m == Mode::Uniform && !inst.uniform_radii()) {
        per_mode[mode_name(m)] = "skipped: radii not uniform";
        continue;
      }
      PipelineOptions po;
      po.mode = m;
      RunReport rep = run_pipeline(inst, po);
      const ModeConstants mc = mode_constants(m);
      ordered_json entry;
      entry["cost"] = rat_to_string(rep.final_cost);
      entry["cost_le_factor_opt"] = rep.final_cost <= mc.cost * exact.opt;
      entry["ratio_vs_opt"] =
          exact.opt != 0 ? ordered_json(rat_to_string(rep.final_cost / exact.opt))
                         : ordered_json(nullptr);
      entry["max_dilation"] = rep.dil.max_dilation
                                  ? ordered_json(rat_to_string(*rep.dil.max_dilation))
                                  : ordered_json(nullptr);
      bool radius_ok = rep.dil.zero_radius_served_at_zero;
      for (int k = 0; k < inst.nc(); ++k)
        if (inst.dfc(rep.sol.assign[k], k) > mc.end * inst.clients[k].radius) radius_ok = false;
      entry["radius_factor_ok"] = radius_ok;
      per_mode[mode_name(m)] = entry;
    }
    report["modes"] = per_mode;
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic solver for matroid-constrained facility placement with "
               "per-client radius guarantees"};
  app.require_subcommand(1);

  std::string inst_path, sol_path, out_path, out_dir, csv_path;
  std::string mode_str = "general21", modes_csv = "general21,general36,uniform";
  int cap = 22, oracle_cap = 14, count = 1;
  bool decimal = false, timings = false, skip_metric = false;
  bool dump_lp_flag = false, dump_s2 = false, dump_s3 = false;
  GenOptions gen;
  std::string slack_str = "1";

  auto* solve = app.add_subcommand("solve", "Run the rounding pipeline on an instance");
  solve->add_option("instance", inst_path, "instance JSON file")->required();
  solve->add_option("--mode", mode_str, "general21 | general36 | uniform");
  solve->add_option("--out", out_path, "write the solution JSON here");
  solve->add_option("--cap", cap, "matroid separation enumeration cap");
  solve->add_flag("--decimal", decimal, "add approximate decimal fields");
  solve->add_flag("--timings", timings, "include wall-clock stage times in the report");
  solve->add_flag("--skip-metric-check", skip_metric, "skip the cubic triangle-inequality check");
  solve->add_flag("--dump-lp", dump_lp_flag, "print the relaxation LP to stderr");
  solve->add_flag("--dump-stage2", dump_s2, "print half-integral stage structure to stderr");
  solve->add_flag("--dump-stage3", dump_s3, "print final clustering structure to stderr");

  auto* verify = app.add_subcommand("verify", "Recompute and check a solution file's claims");
  verify->add_option("instance", inst_path, "instance JSON file")->required();
  verify->add_option("solution", sol_path, "solution JSON file")->required();
  verify->add_flag("--skip-metric-check", skip_metric, "skip the cubic triangle-inequality check");

  auto* gen_cmd = app.add_subcommand("gen", "Generate random instances (deterministic in seed)");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--facilities", gen.facilities, "facility count");
  gen_cmd->add_option("--clients", gen.clients, "client count");
  gen_cmd->add_option("--matroid", gen.matroid, "uniform | partition | laminar | graphic");
  gen_cmd->add_option("--q", gen.q, "radius reaches the q-th nearest facility");
  gen_cmd->add_option("--slack", slack_str, "radius slack factor, e.g. 3/2");
  gen_cmd->add_option("--grid", gen.grid, "coordinate range");
  gen_cmd->add_option("--dims", gen.dims, "coordinate dimensions");
  gen_cmd->add_option("--max-cost", gen.max_cost, "max facility cost");
  gen_cmd->add_option("--max-demand", gen.max_demand, "max client demand");
  gen_cmd->add_option("--zero-radius-pct", gen.zero_radius_percent,
                      "chance of a radius-0 client on a facility");
  gen_cmd->add_flag("--uniform", gen.uniform_radius, "equal radius for all clients");
  gen_cmd->add_flag("--plant-infeasible", gen.plant_infeasible,
                    "force one client below every facility distance");
  bool no_feas = false;
  gen_cmd->add_flag("--no-feasibility-check", no_feas, "emit the first draw untested");
  gen_cmd->add_option("--count", count, "number of instances (needs --out-dir)");
  gen_cmd->add_option("--out", out_path, "output file (single instance)");
  gen_cmd->add_option("--out-dir", out_dir, "output directory (with --count)");

  auto* bench = app.add_subcommand("bench", "Run every instance in a directory across modes");
  bench->add_option("directory", inst_path, "directory of instance JSON files")->required();
  bench->add_option("--modes", modes_csv, "comma-separated mode list");
  bench->add_option("--csv", csv_path, "write per-run rows as CSV here");
  bench->add_option("--cap", cap, "matroid separation enumeration cap");
  bench->add_flag("--timings", timings, "add wall-clock times to the CSV");

  auto* oracle = app.add_subcommand("oracle", "Brute-force ground truth for a small instance");
  oracle->add_option("instance", inst_path, "instance JSON file")->required();
  oracle->add_option("--cap", oracle_cap, "max facilities for subset enumeration");
  oracle->add_option("--modes", modes_csv, "comma-separated mode list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUser;
  }

  try {
    if (*solve)
      return cmd_solve(inst_path, mode_str, out_path, cap, decimal, timings, skip_metric,
                       dump_lp_flag, dump_s2, dump_s3);
    if (*verify) return cmd_verify(inst_path, sol_path, skip_metric);
    if (*gen_cmd) {
      gen.slack = rat_from_string(slack_str);
      gen.check_feasibility = !no_feas;
      return cmd_gen(gen, count, out_path, out_dir);
    }
    if (*bench) return cmd_bench(inst_path, modes_csv, csv_path, cap, timings);
    if (*oracle) return cmd_oracle(inst_path, oracle_cap, modes_csv);
  } catch (const PmmError& e) {
    std::cerr << "pmm: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "pmm: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUser;
}
