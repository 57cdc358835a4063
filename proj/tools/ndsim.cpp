// ndsim: generate benchmark instances, run the online engines over them,
// compare against the clairvoyant optimum, and re-audit saved reports.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "netd/errors.hpp"
#include "netd/generators.hpp"
#include "netd/offline_opt.hpp"
#include "netd/report.hpp"

namespace {

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw netd::input_error("cannot open output file: " + path);
  out << text;
}

std::string read_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw netd::input_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_run(const std::vector<std::string>& inputs, const std::string& oracle,
            const std::string& regime, const std::string& serve, bool with_opt, int opt_cap,
            const std::string& out_path, const std::string& format, bool include_timing) {
  netd::SimConfig config;
  config.oracle = netd::oracle_from_name(oracle);
  config.regime = netd::regime_from_name(regime);
  config.serve = netd::serve_from_name(serve);

  std::vector<netd::RunReport> reports;
  for (const std::string& path : inputs)
    reports.push_back(
        netd::make_report(netd::spec_from_text(read_in(path)), config, with_opt, opt_cap));

  write_out(out_path, format == "csv" ? netd::report_to_csv(reports, include_timing)
                                      : netd::report_to_json(reports, include_timing));

  bool clean = true;
  for (const netd::RunReport& rep : reports)
    if (!netd::all_passed(rep.checks)) {
      clean = false;
      for (const netd::CheckResult& c : rep.checks)
        if (!c.pass)
          std::cerr << rep.trace.spec.name << ": check failed: " << c.name << " (" << c.detail
                    << ")\n";
    }
  return clean ? 0 : 1;
}

int cmd_opt(const std::string& input, int cap, const std::string& out_path) {
  netd::InstanceSpec spec = netd::spec_from_text(read_in(input));
  netd::OfflineOptimum opt = spec.mode == netd::RunMode::deadline
                                 ? netd::opt_deadline(spec.instance, spec.requests, cap)
                                 : netd::opt_delay(spec.instance, spec.requests, cap);
  std::ostringstream out;
  out << "cost " << netd::to_fraction(opt.cost) << "\n";
  for (const netd::OfflineBatch& b : opt.batches) {
    out << "batch at " << netd::to_fraction(b.time) << " cost " << netd::to_fraction(b.cost)
        << " ids";
    for (int id : b.ids) out << ' ' << id;
    out << "\n";
  }
  write_out(out_path, out.str());
  return 0;
}

int cmd_check(const std::string& input) {
  std::vector<netd::RunReport> reports = netd::reports_from_json(read_in(input));
  bool clean = true;
  for (const netd::RunReport& rep : reports) {
    std::vector<netd::CheckResult> fresh = netd::audit_trace(rep.trace);
    bool ok = netd::all_passed(fresh);
    if (ok && rep.opt) {
      if (rep.opt->cost > rep.trace.alg_total) {
        ok = false;
        std::cerr << rep.trace.spec.name << ": clairvoyant optimum exceeds the online cost\n";
      }
      if (rep.opt->cost > 0 &&
          (!rep.ratio || *rep.ratio != rep.trace.alg_total / rep.opt->cost)) {
        ok = false;
        std::cerr << rep.trace.spec.name << ": stored ratio disagrees with the trace\n";
      }
    }
    for (const netd::CheckResult& c : fresh)
      if (!c.pass)
        std::cerr << rep.trace.spec.name << ": check failed: " << c.name << " (" << c.detail
                  << ")\n";
    std::cout << (ok ? "ok " : "FAIL ") << rep.trace.spec.name << "\n";
    clean = clean && ok;
  }
  return clean ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online network design benchmark driver"};
  app.require_subcommand(1);

  // run
  std::vector<std::string> run_inputs;
  std::string run_oracle = "exact", run_regime = "classic", run_serve = "all-satisfied";
  bool run_opt = true, run_timing = false;
  int run_opt_cap = netd::kDefaultOptCap;
  std::string run_out, run_format = "json";
  CLI::App* run = app.add_subcommand("run", "simulate instance files and report");
  run->add_option("--in", run_inputs, "instance file (repeatable)")->required()->expected(-1);
  run->add_option("--oracle", run_oracle, "exact|gw|pcgw|jv");
  run->add_option("--regime", run_regime, "classic|request-based");
  run->add_option("--serve", run_serve, "all-satisfied|batch-only");
  run->add_flag("--opt,!--no-opt", run_opt, "compare against the clairvoyant optimum");
  run->add_option("--opt-cap", run_opt_cap, "largest request count the optimum will attempt");
  run->add_option("--out", run_out, "output path (default stdout)");
  run->add_option("--format", run_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--include-timing", run_timing, "include wall-clock timing in the report");

  // gen
  netd::GenParams gp;
  std::string gen_mode = "deadline", gen_family = "steiner_forest", gen_out;
  std::uint64_t gen_seed = 1;
  int lb_levels = 0;
  std::string lb_form = "node";
  CLI::App* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--mode", gen_mode, "deadline|delay");
  gen->add_option("--family", gen_family, "problem family");
  gen->add_option("--nodes", gp.nodes, "node count");
  gen->add_option("--extra-edges", gp.extra_edges, "edges beyond the spanning tree");
  gen->add_option("--requests", gp.requests, "request count");
  gen->add_option("--max-cost", gp.max_cost, "largest element cost");
  gen->add_option("--max-window", gp.max_window, "largest deadline window");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--name", gp.name, "instance name");
  gen->add_option("--set-cover-lb", lb_levels, "emit the lower-bound family at this size");
  gen->add_option("--lb-form", lb_form, "node|directed")
      ->check(CLI::IsMember({"node", "directed"}));
  gen->add_option("--out", gen_out, "output path (default stdout)");

  // opt
  std::string opt_in, opt_out;
  int opt_cap = netd::kDefaultOptCap;
  CLI::App* opt = app.add_subcommand("opt", "clairvoyant optimum of one instance");
  opt->add_option("--in", opt_in, "instance file")->required();
  opt->add_option("--cap", opt_cap, "largest request count to attempt");
  opt->add_option("--out", opt_out, "output path (default stdout)");

  // check
  std::string check_in;
  CLI::App* check = app.add_subcommand("check", "re-audit a saved JSON report");
  check->add_option("--in", check_in, "report file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(run_inputs, run_oracle, run_regime, run_serve, run_opt, run_opt_cap, run_out,
                     run_format, run_timing);
    if (gen->parsed()) {
      auto make_spec = [&]() {
        if (lb_levels > 0)
          return netd::gen_set_cover_lb(lb_levels, netd::mode_from_name(gen_mode),
                                        lb_form == "directed");
        gp.mode = netd::mode_from_name(gen_mode);
        gp.kind = netd::kind_from_name(gen_family);
        return netd::gen_random(gp, gen_seed);
      };
      write_out(gen_out, netd::spec_to_text(make_spec()));
      return 0;
    }
    if (opt->parsed()) return cmd_opt(opt_in, opt_cap, opt_out);
    if (check->parsed()) return cmd_check(check_in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
