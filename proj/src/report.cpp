#include "netd/report.hpp"

#include <algorithm>
#include <chrono>
#include <json.hpp>
#include <sstream>

#include "netd/errors.hpp"

namespace netd {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kReportVersion = 1;

ordered_json rat(const Rational& x) { return to_fraction(x); }

Rational unrat(const ordered_json& j) {
  if (!j.is_string()) throw input_error("rational values must be \"p/q\" strings");
  return parse_fraction(j.get<std::string>());
}

ordered_json ids_of(const ElementSet& s) { return s.ids(); }

ElementSet set_from(const ordered_json& j, int universe) {
  ElementSet s(universe);
  for (const auto& e : j) s.insert(e.get<int>());
  return s;
}

ordered_json rat_map(const std::map<int, Rational>& m) {
  ordered_json out = ordered_json::object();
  for (const auto& [id, v] : m) out[std::to_string(id)] = rat(v);
  return out;
}

std::map<int, Rational> rat_map_from(const ordered_json& j) {
  std::map<int, Rational> out;
  for (auto it = j.begin(); it != j.end(); ++it) out[std::stoi(it.key())] = unrat(it.value());
  return out;
}

ordered_json fl_of(const std::optional<FLSolution>& fl) {
  if (!fl) return nullptr;
  ordered_json out;
  out["facilities"] = fl->facilities;
  ordered_json asg = ordered_json::object();
  for (const auto& [id, node] : fl->assignment) asg[std::to_string(id)] = node;
  out["assignment"] = std::move(asg);
  return out;
}

std::optional<FLSolution> fl_from(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  FLSolution fl;
  fl.facilities = j.at("facilities").get<std::vector<int>>();
  const ordered_json& asg = j.at("assignment");
  for (auto it = asg.begin(); it != asg.end(); ++it)
    fl.assignment[std::stoi(it.key())] = it.value().get<int>();
  return fl;
}

ordered_json deadline_record(const DeadlineServiceRecord& r) {
  ordered_json out;
  out["time"] = rat(r.time);
  out["free_service"] = r.free_service;
  out["trigger"] = r.trigger;
  out["level"] = r.level;
  out["e0_mode"] = regime_name(r.e0_mode);
  out["e0"] = ids_of(r.e0);
  out["transmitted"] = ids_of(r.transmitted);
  out["fl"] = fl_of(r.fl);
  out["batch"] = r.batch;
  out["rider"] = r.rider ? ordered_json(*r.rider) : ordered_json(nullptr);
  out["e0_cost"] = rat(r.e0_cost);
  out["shared_cost"] = rat(r.shared_cost);
  out["rider_cost"] = rat(r.rider_cost);
  out["transmit_cost"] = rat(r.transmit_cost);
  out["e0_limit"] = rat(r.e0_limit);
  out["shared_limit"] = rat(r.shared_limit);
  out["rider_limit"] = rat(r.rider_limit);
  out["total_limit"] = rat(r.total_limit);
  out["served"] = r.served;
  out["upgraded"] = r.upgraded;
  out["oracle_calls"] = r.oracle_calls;
  return out;
}

DeadlineServiceRecord deadline_record_from(const ordered_json& j, int universe) {
  DeadlineServiceRecord r;
  r.time = unrat(j.at("time"));
  r.free_service = j.at("free_service").get<bool>();
  r.trigger = j.at("trigger").get<int>();
  r.level = j.at("level").get<int>();
  r.e0_mode = regime_from_name(j.at("e0_mode").get<std::string>());
  r.e0 = set_from(j.at("e0"), universe);
  r.transmitted = set_from(j.at("transmitted"), universe);
  r.fl = fl_from(j.at("fl"));
  r.batch = j.at("batch").get<std::vector<int>>();
  if (!j.at("rider").is_null()) r.rider = j.at("rider").get<int>();
  r.e0_cost = unrat(j.at("e0_cost"));
  r.shared_cost = unrat(j.at("shared_cost"));
  r.rider_cost = unrat(j.at("rider_cost"));
  r.transmit_cost = unrat(j.at("transmit_cost"));
  r.e0_limit = unrat(j.at("e0_limit"));
  r.shared_limit = unrat(j.at("shared_limit"));
  r.rider_limit = unrat(j.at("rider_limit"));
  r.total_limit = unrat(j.at("total_limit"));
  r.served = j.at("served").get<std::vector<int>>();
  r.upgraded = j.at("upgraded").get<std::vector<int>>();
  r.oracle_calls = j.at("oracle_calls").get<int>();
  return r;
}

ordered_json delay_record(const DelayServiceRecord& r) {
  ordered_json out;
  out["time"] = rat(r.time);
  out["critical_level"] = r.critical_level;
  out["level"] = r.level;
  out["free_service"] = r.free_service;
  out["e0_mode"] = regime_name(r.e0_mode);
  out["q_lambda"] = r.q_lambda;
  out["h_before"] = rat_map(r.h_before);
  out["cleaning"] = rat_map(r.cleaning);
  out["h_frozen"] = rat_map(r.h_frozen);
  out["tau"] = rat(r.tau);
  out["imperfect"] = r.imperfect;
  out["forward_iterations"] = r.forward_iterations;
  out["e0"] = ids_of(r.e0);
  out["s_elements"] = ids_of(r.s_elements);
  out["transmitted"] = ids_of(r.transmitted);
  out["singleton"] = r.singleton ? ordered_json(*r.singleton) : ordered_json(nullptr);
  out["fl"] = fl_of(r.fl);
  out["investments"] = rat_map(r.investments);
  out["connections"] = rat_map(r.connections);
  out["h_after"] = rat_map(r.h_after);
  out["served"] = r.served;
  out["upgraded"] = r.upgraded;
  out["cleaning_cost"] = rat(r.cleaning_cost);
  out["e0_cost"] = rat(r.e0_cost);
  out["pc_part"] = rat(r.pc_part);
  out["singleton_cost"] = rat(r.singleton_cost);
  out["budget_cost"] = rat(r.budget_cost);
  out["transmit_cost"] = rat(r.transmit_cost);
  out["cleaning_limit"] = rat(r.cleaning_limit);
  out["e0_limit"] = rat(r.e0_limit);
  out["pc_limit"] = rat(r.pc_limit);
  out["singleton_limit"] = rat(r.singleton_limit);
  out["budget_limit"] = rat(r.budget_limit);
  out["oracle_calls"] = r.oracle_calls;
  return out;
}

DelayServiceRecord delay_record_from(const ordered_json& j, int universe) {
  DelayServiceRecord r;
  r.time = unrat(j.at("time"));
  r.critical_level = j.at("critical_level").get<int>();
  r.level = j.at("level").get<int>();
  r.free_service = j.at("free_service").get<bool>();
  r.e0_mode = regime_from_name(j.at("e0_mode").get<std::string>());
  r.q_lambda = j.at("q_lambda").get<std::vector<int>>();
  r.h_before = rat_map_from(j.at("h_before"));
  r.cleaning = rat_map_from(j.at("cleaning"));
  r.h_frozen = rat_map_from(j.at("h_frozen"));
  r.tau = unrat(j.at("tau"));
  r.imperfect = j.at("imperfect").get<bool>();
  r.forward_iterations = j.at("forward_iterations").get<int>();
  r.e0 = set_from(j.at("e0"), universe);
  r.s_elements = set_from(j.at("s_elements"), universe);
  r.transmitted = set_from(j.at("transmitted"), universe);
  if (!j.at("singleton").is_null()) r.singleton = j.at("singleton").get<int>();
  r.fl = fl_from(j.at("fl"));
  r.investments = rat_map_from(j.at("investments"));
  r.connections = rat_map_from(j.at("connections"));
  r.h_after = rat_map_from(j.at("h_after"));
  r.served = j.at("served").get<std::vector<int>>();
  r.upgraded = j.at("upgraded").get<std::vector<int>>();
  r.cleaning_cost = unrat(j.at("cleaning_cost"));
  r.e0_cost = unrat(j.at("e0_cost"));
  r.pc_part = unrat(j.at("pc_part"));
  r.singleton_cost = unrat(j.at("singleton_cost"));
  r.budget_cost = unrat(j.at("budget_cost"));
  r.transmit_cost = unrat(j.at("transmit_cost"));
  r.cleaning_limit = unrat(j.at("cleaning_limit"));
  r.e0_limit = unrat(j.at("e0_limit"));
  r.pc_limit = unrat(j.at("pc_limit"));
  r.singleton_limit = unrat(j.at("singleton_limit"));
  r.budget_limit = unrat(j.at("budget_limit"));
  r.oracle_calls = j.at("oracle_calls").get<int>();
  return r;
}

ordered_json report_json(const RunReport& rep, bool include_timing) {
  const RunTrace& t = rep.trace;
  ordered_json out;
  out["name"] = t.spec.name;
  out["mode"] = mode_name(t.spec.mode);
  out["oracle"] = oracle_name(t.config.oracle);
  out["regime"] = regime_name(t.config.regime);
  out["serve"] = serve_name(t.config.serve);
  out["spec"] = ordered_json::parse(spec_to_text(t.spec));

  ordered_json tr;
  tr["doubling_guesses"] = t.doubling_guesses;
  tr["served_at"] = rat_map(t.served_at);
  tr["realized_delay"] = rat_map(t.realized_delay);
  tr["final_h"] = rat_map(t.final_h);
  tr["transmit_total"] = rat(t.transmit_total);
  tr["delay_total"] = rat(t.delay_total);
  tr["h_total"] = rat(t.h_total);
  tr["alg_total"] = rat(t.alg_total);
  tr["oracle_calls"] = t.oracle_calls;
  ordered_json dls = ordered_json::array();
  for (const auto& r : t.deadline_services) dls.push_back(deadline_record(r));
  tr["deadline_services"] = std::move(dls);
  ordered_json dys = ordered_json::array();
  for (const auto& r : t.delay_services) dys.push_back(delay_record(r));
  tr["delay_services"] = std::move(dys);
  out["trace"] = std::move(tr);

  ordered_json checks = ordered_json::array();
  for (const CheckResult& c : rep.checks) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["detail"] = c.detail;
    checks.push_back(std::move(jc));
  }
  out["checks"] = std::move(checks);

  if (rep.opt) {
    ordered_json jo;
    jo["cost"] = rat(rep.opt->cost);
    ordered_json batches = ordered_json::array();
    for (const OfflineBatch& b : rep.opt->batches) {
      ordered_json jb;
      jb["ids"] = b.ids;
      jb["time"] = rat(b.time);
      jb["cost"] = rat(b.cost);
      batches.push_back(std::move(jb));
    }
    jo["batches"] = std::move(batches);
    out["opt"] = std::move(jo);
  } else {
    out["opt"] = nullptr;
  }
  out["ratio"] = rep.ratio ? ordered_json(to_fraction(*rep.ratio)) : ordered_json(nullptr);
  out["ratio_double"] = rep.ratio ? ordered_json(to_double(*rep.ratio)) : ordered_json(nullptr);
  if (include_timing) out["wall_ms"] = rep.wall_ms;
  return out;
}

std::vector<const RunReport*> by_name(const std::vector<RunReport>& reports) {
  std::vector<const RunReport*> order;
  order.reserve(reports.size());
  for (const RunReport& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const RunReport* a, const RunReport* b) {
                     return a->trace.spec.name < b->trace.spec.name;
                   });
  return order;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

RunReport make_report(const InstanceSpec& spec, const SimConfig& config, bool compute_opt,
                      int opt_cap) {
  auto start = std::chrono::steady_clock::now();
  RunReport rep(simulate(spec, config));
  rep.checks = audit_trace(rep.trace);
  if (compute_opt) {
    try {
      rep.opt = spec.mode == RunMode::deadline
                    ? opt_deadline(spec.instance, spec.requests, opt_cap)
                    : opt_delay(spec.instance, spec.requests, opt_cap);
    } catch (const capacity_error&) {
      // instance too large for the clairvoyant baseline; report without it
    }
    if (rep.opt && rep.opt->cost > 0) rep.ratio = rep.trace.alg_total / rep.opt->cost;
  }
  rep.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rep;
}

std::string report_to_json(const std::vector<RunReport>& reports, bool include_timing) {
  ordered_json out;
  out["format_version"] = kReportVersion;
  ordered_json arr = ordered_json::array();
  for (const RunReport* rep : by_name(reports)) arr.push_back(report_json(*rep, include_timing));
  out["reports"] = std::move(arr);
  return out.dump(2) + "\n";
}

std::string report_to_csv(const std::vector<RunReport>& reports, bool include_timing) {
  std::ostringstream out;
  out << "name,mode,oracle,regime,serve,requests,services,transmit_total,delay_total,"
         "alg_total,opt,ratio,ratio_double,checks_passed,checks_failed,oracle_calls";
  if (include_timing) out << ",wall_ms";
  out << "\n";
  for (const RunReport* rp : by_name(reports)) {
    const RunTrace& t = rp->trace;
    int passed = 0, failed = 0;
    for (const CheckResult& c : rp->checks) (c.pass ? passed : failed)++;
    std::size_t services = t.deadline_services.size() + t.delay_services.size();
    out << csv_field(t.spec.name) << ',' << mode_name(t.spec.mode) << ','
        << oracle_name(t.config.oracle) << ',' << regime_name(t.config.regime) << ','
        << serve_name(t.config.serve) << ',' << t.spec.requests.size() << ',' << services << ','
        << to_fraction(t.transmit_total) << ',' << to_fraction(t.delay_total) << ','
        << to_fraction(t.alg_total) << ',' << (rp->opt ? to_fraction(rp->opt->cost) : "") << ','
        << (rp->ratio ? to_fraction(*rp->ratio) : "") << ','
        << (rp->ratio ? std::to_string(to_double(*rp->ratio)) : "") << ',' << passed << ','
        << failed << ',' << t.oracle_calls;
    if (include_timing) out << ',' << rp->wall_ms;
    out << "\n";
  }
  return out.str();
}

std::vector<RunReport> reports_from_json(const std::string& text) {
  try {
    ordered_json root = ordered_json::parse(text);
    if (root.at("format_version").get<int>() != kReportVersion)
      throw input_error("unsupported report format version");
    std::vector<RunReport> out;
    for (const ordered_json& j : root.at("reports")) {
      InstanceSpec spec = spec_from_text(j.at("spec").dump());
      SimConfig config;
      config.oracle = oracle_from_name(j.at("oracle").get<std::string>());
      config.regime = regime_from_name(j.at("regime").get<std::string>());
      config.serve = serve_from_name(j.at("serve").get<std::string>());
      int universe = spec.instance.element_count();

      RunTrace trace(std::move(spec), config);
      const ordered_json& tr = j.at("trace");
      trace.doubling_guesses = tr.at("doubling_guesses").get<std::vector<long long>>();
      trace.served_at = rat_map_from(tr.at("served_at"));
      trace.realized_delay = rat_map_from(tr.at("realized_delay"));
      trace.final_h = rat_map_from(tr.at("final_h"));
      trace.transmit_total = unrat(tr.at("transmit_total"));
      trace.delay_total = unrat(tr.at("delay_total"));
      trace.h_total = unrat(tr.at("h_total"));
      trace.alg_total = unrat(tr.at("alg_total"));
      trace.oracle_calls = tr.at("oracle_calls").get<int>();
      for (const ordered_json& r : tr.at("deadline_services"))
        trace.deadline_services.push_back(deadline_record_from(r, universe));
      for (const ordered_json& r : tr.at("delay_services"))
        trace.delay_services.push_back(delay_record_from(r, universe));

      RunReport rep(std::move(trace));
      for (const ordered_json& c : j.at("checks"))
        rep.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(),
                              c.at("detail").get<std::string>()});
      if (!j.at("opt").is_null()) {
        OfflineOptimum opt;
        opt.cost = unrat(j.at("opt").at("cost"));
        for (const ordered_json& b : j.at("opt").at("batches"))
          opt.batches.push_back({b.at("ids").get<std::vector<int>>(), unrat(b.at("time")),
                                 unrat(b.at("cost"))});
        rep.opt = std::move(opt);
      }
      if (!j.at("ratio").is_null()) rep.ratio = unrat(j.at("ratio"));
      if (j.contains("wall_ms")) rep.wall_ms = j.at("wall_ms").get<long long>();
      out.push_back(std::move(rep));
    }
    return out;
  } catch (const ordered_json::exception& e) {
    throw input_error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace netd
