#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "capgame/best_response.hpp"
#include "capgame/dynamics.hpp"
#include "capgame/equilibrium.hpp"
#include "capgame/io.hpp"
#include "capgame/oracle.hpp"
#include "capgame/wardrop.hpp"
#include "capgame/welfare.hpp"

namespace capgame::cli {

namespace {

using io::Json;

struct Options {
  std::string instance_path;
  std::string profile_path;
  std::string firm_id;
  bool json = false;
  bool csv = false;
  double tol = 1e-13;
  std::size_t grid = 0;
  std::string m_values = "1,2,5,10,100";
  std::string out_path;
  std::string init = "zero";
  std::string order = "rr";
  std::size_t max_iters = 200;
  double dyn_tol = 1e-9;
  std::string trace_path;
};

/// Result of a subcommand before it is rendered.
struct Outcome {
  Json payload;
  Json tolerances = Json::object();
  std::string table;
  std::string digest;
  int exit_code = kExitOk;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt6(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(6) << v;
  return os.str();
}

std::string fmt17(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

std::size_t firm_index(const Instance &instance, const std::string &id) {
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (instance.firms[i].id == id) return i;
  }
  throw ValidationError(
      {{ErrorCode::ProfileMismatch, "--firm", "unknown firm id '" + id + "'"}});
}

/// Accepts a bare profile document or the JSON envelope printed by `solve`.
Profile load_profile_any(const std::string &path, const Instance &instance) {
  const Json doc = io::read_json_file(path);
  if (doc.is_object() && doc.contains("result") &&
      doc["result"].contains("profile")) {
    return io::profile_from_json(doc["result"]["profile"], instance);
  }
  return io::profile_from_json(doc, instance);
}

Json report_json(const CertificationReport &report, const Instance &instance) {
  Json checks = Json::array();
  for (const CertificationCheck &c : report.checks) {
    Json entry = {{"name", c.name},
                  {"firm", c.firm ? Json(instance.firms[*c.firm].id)
                                  : Json(nullptr)},
                  {"residual", std::isfinite(c.residual) ? Json(c.residual)
                                                         : Json(nullptr)},
                  {"tolerance", c.tolerance},
                  {"passed", c.passed}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    checks.push_back(std::move(entry));
  }
  return {{"passed", report.passed()},
          {"precondition_met", report.precondition_met},
          {"K", report.K},
          {"checks", std::move(checks)}};
}

std::string report_table(const CertificationReport &report,
                         const Instance &instance) {
  std::ostringstream os;
  os << "certification: " << (report.passed() ? "PASSED" : "FAILED") << '\n';
  for (const CertificationCheck &c : report.checks) {
    if (c.passed) continue;
    os << "  failed " << c.name;
    if (c.firm) os << " [" << instance.firms[*c.firm].id << ']';
    os << " residual=" << fmt6(c.residual);
    if (!c.detail.empty()) os << " (" << c.detail << ')';
    os << '\n';
  }
  return os.str();
}

Json ids(const Instance &instance, const std::vector<std::size_t> &which) {
  Json out = Json::array();
  for (std::size_t i : which) out.push_back(instance.firms[i].id);
  return out;
}

Json equilibrium_json(const Equilibrium &eq, const Instance &instance) {
  Json firms = Json::array();
  for (std::size_t i = 0; i < eq.firms.size(); ++i) {
    const FirmOutcome &f = eq.firms[i];
    firms.push_back({{"id", instance.firms[i].id},
                     {"regime", to_string(f.regime)},
                     {"z", f.strategy.z},
                     {"p", f.strategy.p},
                     {"x", f.flow},
                     {"profit", f.profit},
                     {"price_unique", f.price_unique},
                     {"at_branch_boundary", f.at_branch_boundary}});
  }
  return {{"K", eq.K},
          {"B", eq.B},
          {"active", ids(instance, eq.active())},
          {"interior_price", ids(instance, eq.interior_price())},
          {"capped_price", ids(instance, eq.capped_price())},
          {"firms", std::move(firms)},
          {"profile", io::to_json(eq.profile(), instance)}};
}

std::string equilibrium_table(const Equilibrium &eq, const Instance &instance) {
  std::ostringstream os;
  os << "K = " << fmt6(eq.K) << "   B = " << fmt6(eq.B) << '\n';
  os << std::left << std::setw(12) << "firm" << std::setw(16) << "regime"
     << std::setw(14) << "z" << std::setw(14) << "p" << std::setw(14) << "x"
     << "profit\n";
  for (std::size_t i = 0; i < eq.firms.size(); ++i) {
    const FirmOutcome &f = eq.firms[i];
    os << std::setw(12) << instance.firms[i].id << std::setw(16)
       << to_string(f.regime) << std::setw(14) << fmt6(f.strategy.z)
       << std::setw(14) << (fmt6(f.strategy.p) + (f.price_unique ? "" : "*"))
       << std::setw(14) << fmt6(f.flow) << fmt6(f.profit) << '\n';
  }
  if (!eq.active().empty() && eq.active().size() < eq.firms.size()) {
    os << "(* price of an inactive firm is arbitrary in [0, C])\n";
  }
  return os.str();
}

Outcome run_wardrop(const Options &o) {
  const Instance inst = io::load_instance(o.instance_path);
  const Profile profile = load_profile_any(o.profile_path, inst);
  const WardropOutcome w = wardrop_flow(inst, profile);
  Outcome out;
  out.digest = io::instance_digest(inst);
  Json flows = Json::array();
  std::ostringstream table;
  table << "K = " << fmt6(w.K) << '\n';
  for (std::size_t i = 0; i < inst.size(); ++i) {
    flows.push_back({{"id", inst.firms[i].id}, {"x", w.x[i]}});
    table << "  " << inst.firms[i].id << ": x = " << fmt6(w.x[i]) << '\n';
  }
  out.payload = {{"K", w.K}, {"flows", std::move(flows)}};
  out.table = table.str();
  return out;
}

Outcome run_best_response(const Options &o) {
  const Instance inst = io::load_instance(o.instance_path);
  const Profile profile = load_profile_any(o.profile_path, inst);
  const std::size_t firm = firm_index(inst, o.firm_id);
  const BestResponseSet br = best_response(inst, profile, firm);
  Outcome out;
  out.digest = io::instance_digest(inst);
  out.tolerances = {{"capped_slope", kCappedSlopeTolerance},
                    {"capped_bisection", kCappedBisectionTolerance}};
  out.payload = {{"firm", o.firm_id}, {"case", response_kind(br)}};
  std::ostringstream table;
  table << "best response of " << o.firm_id << ": " << response_kind(br)
        << '\n';
  if (const auto *u = std::get_if<UniqueResponse>(&br)) {
    const char *branch =
        u->problem == AuxProblem::CappedPrice ? "capped_price" : "interior_price";
    out.payload["branch"] = branch;
    out.payload["K"] = u->routing_cost;
    out.payload["z"] = u->strategy.z;
    out.payload["p"] = u->strategy.p;
    out.payload["profit"] = u->profit;
    table << "  branch = " << branch << "\n  K* = " << fmt6(u->routing_cost)
          << "\n  z = " << fmt6(u->strategy.z) << "\n  p = "
          << fmt6(u->strategy.p) << "\n  profit = " << fmt6(u->profit) << '\n';
  } else if (const auto *seg = std::get_if<ZeroCapacitySegment>(&br)) {
    out.payload["z"] = 0.0;
    out.payload["p_range"] = {0.0, seg->price_cap};
    out.payload["profit"] = 0.0;
    table << "  z = 0, any p in [0, " << fmt6(seg->price_cap) << "]\n";
  } else {
    table << "  no best response: every opponent has zero capacity\n";
  }
  out.table = table.str();
  return out;
}

Outcome run_solve(const Options &o) {
  const Instance inst = io::load_instance(o.instance_path);
  const Equilibrium eq = solve_equilibrium(inst, {o.tol});
  const CertificationReport report = verify_equilibrium(inst, eq.profile());
  Outcome out;
  out.digest = io::instance_digest(inst);
  const CertifyOptions certify;
  out.tolerances = {{"k_relative", o.tol},
                    {"wardrop", certify.wardrop_tolerance},
                    {"profit", certify.profit_tolerance},
                    {"strategy", certify.strategy_tolerance},
                    {"identity", certify.identity_tolerance},
                    {"gamma_sum", certify.gamma_sum_tolerance}};
  out.payload = equilibrium_json(eq, inst);
  out.payload["certification"] = report_json(report, inst);
  if (o.csv) {
    std::ostringstream csv;
    csv << "id,regime,z,p,x,profit\n";
    for (std::size_t i = 0; i < eq.firms.size(); ++i) {
      const FirmOutcome &f = eq.firms[i];
      csv << inst.firms[i].id << ',' << to_string(f.regime) << ','
          << fmt17(f.strategy.z) << ',' << fmt17(f.strategy.p) << ','
          << fmt17(f.flow) << ',' << fmt17(f.profit) << '\n';
    }
    out.table = csv.str();
  } else {
    out.table = equilibrium_table(eq, inst) + report_table(report, inst);
  }
  if (!report.passed()) out.exit_code = kExitCertificationFailed;
  return out;
}

Outcome run_verify(const Options &o) {
  const Instance inst = io::load_instance(o.instance_path);
  const Profile profile = load_profile_any(o.profile_path, inst);
  CertificationReport report = verify_equilibrium(inst, profile);
  Outcome out;
  out.digest = io::instance_digest(inst);
  const CertifyOptions certify;
  out.tolerances = {{"wardrop", certify.wardrop_tolerance},
                    {"profit", certify.profit_tolerance},
                    {"strategy", certify.strategy_tolerance},
                    {"identity", certify.identity_tolerance},
                    {"gamma_sum", certify.gamma_sum_tolerance}};
  if (o.grid >= 2 && report.precondition_met) {
    out.tolerances["grid_resolution"] = o.grid;
    const std::vector<double> current = profit(inst, profile);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const GridResult g = grid_best_response(inst, profile, i, o.grid);
      const double slack = 2.0 * g.spacing * (inst.params(i).gamma + 1.0);
      const double gain = g.profit - current[i];
      report.checks.push_back({"grid_best_response", i, std::max(0.0, gain),
                               slack, gain <= slack,
                               "grid resolution " + std::to_string(o.grid)});
    }
  }
  out.payload = report_json(report, inst);
  out.table = report_table(report, inst);
  if (!report.passed()) out.exit_code = kExitCertificationFailed;
  return out;
}

Outcome run_poa(const Options &o) {
  const Instance inst = io::load_instance(o.instance_path);
  const WelfareReport r = poa(inst);
  Outcome out;
  out.digest = io::instance_digest(inst);
  out.payload = {{"social_cost_pne", r.equilibrium_cost},
                 {"opt", r.optimum.value},
                 {"opt_firm", inst.firms[r.optimum.firm].id},
                 {"poa", r.ratio},
                 {"equilibrium", equilibrium_json(r.equilibrium, inst)},
                 {"opt_witness", io::to_json(r.optimum.witness, inst)}};
  std::ostringstream table;
  table << "social cost (PNE) = " << fmt6(r.equilibrium_cost) << '\n'
        << "OPT               = " << fmt6(r.optimum.value) << " (all demand on "
        << inst.firms[r.optimum.firm].id << ")\n"
        << "PoA               = " << fmt6(r.ratio) << '\n';
  out.table = table.str();
  return out;
}

std::vector<double> parse_m_values(const std::string &text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw UsageError("--m-values: cannot parse '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw UsageError("--m-values: empty list");
  return values;
}

Outcome run_sweep_gm(const Options &o) {
  const std::vector<double> ms = parse_m_values(o.m_values);
  const std::vector<SweepRow> rows = sweep_gm(ms);
  std::ostringstream csv;
  csv << "M,K,social_cost_pne,opt,poa\n";
  Json payload = Json::array();
  for (const SweepRow &r : rows) {
    csv << fmt17(r.M) << ',' << fmt17(r.K) << ',' << fmt17(r.social_cost_pne)
        << ',' << fmt17(r.opt) << ',' << fmt17(r.poa) << '\n';
    payload.push_back({{"M", r.M},
                       {"K", r.K},
                       {"social_cost_pne", r.social_cost_pne},
                       {"opt", r.opt},
                       {"poa", r.poa}});
  }
  Outcome out;
  out.payload = {{"rows", std::move(payload)}};
  if (!o.out_path.empty()) {
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) {
      throw ValidationError(
          {{ErrorCode::ParseError, "--out", "cannot write " + o.out_path}});
    }
    file << csv.str();
    out.payload["out"] = o.out_path;
    out.table = "wrote " + std::to_string(rows.size()) + " rows to " +
                o.out_path + '\n';
  } else {
    out.table = csv.str();
  }
  return out;
}

std::uint64_t parse_seed(const std::string &text, const std::string &flag) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception &) {
  }
  throw UsageError(flag + ": invalid seed '" + text + "'");
}

Outcome run_dynamics_cmd(const Options &o) {
  const Instance inst = io::load_instance(o.instance_path);
  Profile init;
  if (o.init == "zero") {
    init.strategies.assign(inst.size(), Strategy{0.0, 0.0});
  } else if (o.init.rfind("random:", 0) == 0) {
    init = random_profile(inst, parse_seed(o.init.substr(7), "--init"));
  } else {
    init = load_profile_any(o.init, inst);
  }
  MoveOrder order;
  if (o.order == "rr") {
    order = MoveOrder::round_robin();
  } else if (o.order.rfind("random:", 0) == 0) {
    order = MoveOrder::random(parse_seed(o.order.substr(7), "--order"));
  } else {
    throw UsageError("--order must be 'rr' or 'random:<seed>'");
  }

  const Trace trace = run_dynamics(inst, init, order, o.max_iters, o.dyn_tol);
  if (!o.trace_path.empty()) {
    std::ofstream file(o.trace_path, std::ios::binary);
    if (!file) {
      throw ValidationError(
          {{ErrorCode::ParseError, "--trace", "cannot write " + o.trace_path}});
    }
    file << "iter,firm,z,p,profit,max_change\n";
    for (const TraceStep &s : trace.steps) {
      file << s.round << ',' << inst.firms[s.firm].id << ','
           << fmt17(s.strategy.z) << ',' << fmt17(s.strategy.p) << ','
           << fmt17(s.profit_after) << ','
           << fmt17(trace.round_max_change[s.round]) << '\n';
    }
  }

  const Profile &final_profile = trace.final_profile();
  const CertificationReport report = verify_equilibrium(inst, final_profile);
  Outcome out;
  out.digest = io::instance_digest(inst);
  out.tolerances = {{"dynamics_tol", o.dyn_tol}};
  out.payload = {{"reason", to_string(trace.reason)},
                 {"rounds", trace.rounds},
                 {"empirical", true},
                 {"final_profile", io::to_json(final_profile, inst)},
                 {"certification", report_json(report, inst)}};
  std::ostringstream table;
  table << "termination: " << to_string(trace.reason) << " after "
        << trace.rounds << " rounds (empirical)\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    table << "  " << inst.firms[i].id << ": z = " << fmt6(final_profile[i].z)
          << ", p = " << fmt6(final_profile[i].p) << '\n';
  }
  table << report_table(report, inst);
  out.table = table.str();
  return out;
}

void emit(const Outcome &outcome, const std::string &command,
          const std::vector<std::string> &args, bool json, double elapsed_ms,
          std::ostream &out) {
  if (!json) {
    out << outcome.table;
    return;
  }
  Json envelope = {{"schema_version", kSchemaVersion},
                   {"command", command},
                   {"args", args},
                   {"instance_digest", outcome.digest.empty()
                                           ? Json(nullptr)
                                           : Json(outcome.digest)},
                   {"tolerances", outcome.tolerances},
                   {"result", outcome.payload},
                   {"duration_ms", elapsed_ms}};
  out << envelope.dump(2) << '\n';
}

} // namespace

int dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err) {
  CLI::App app{"Capacity and price competition games: Wardrop flows, best "
               "responses, equilibria and welfare"};
  app.name("capgame");
  app.require_subcommand(1);
  Options o;

  auto *wardrop = app.add_subcommand("wardrop", "Wardrop flow of a profile");
  wardrop->add_option("--instance", o.instance_path)->required();
  wardrop->add_option("--profile", o.profile_path)->required();
  wardrop->add_flag("--json", o.json);

  auto *br = app.add_subcommand("best-response", "Best response of one firm");
  br->add_option("--instance", o.instance_path)->required();
  br->add_option("--profile", o.profile_path)->required();
  br->add_option("--firm", o.firm_id, "Firm id")->required();
  br->add_flag("--json", o.json);

  auto *solve = app.add_subcommand("solve", "Compute and certify the equilibrium");
  solve->add_option("--instance", o.instance_path)->required();
  auto *solve_json = solve->add_flag("--json", o.json);
  solve->add_flag("--csv", o.csv)->excludes(solve_json);
  solve->add_option("--tol", o.tol, "Relative tolerance on K")
      ->check(CLI::PositiveNumber);

  auto *verify = app.add_subcommand("verify", "Certify a profile as equilibrium");
  verify->add_option("--instance", o.instance_path)->required();
  verify->add_option("--profile", o.profile_path)->required();
  verify->add_option("--grid", o.grid, "Grid oracle resolution (>= 2)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  verify->add_flag("--json", o.json);

  auto *poa_cmd = app.add_subcommand("poa", "Social cost, optimum and PoA");
  poa_cmd->add_option("--instance", o.instance_path)->required();
  poa_cmd->add_flag("--json", o.json);

  auto *sweep = app.add_subcommand("sweep-gm", "PoA over the two-firm G_M family");
  sweep->add_option("--m-values", o.m_values, "Comma-separated M >= 1");
  sweep->add_option("--out", o.out_path, "CSV output file (default stdout)");
  sweep->add_flag("--json", o.json);

  auto *dyn = app.add_subcommand("dynamics", "Best-response dynamics");
  dyn->add_option("--instance", o.instance_path)->required();
  dyn->add_option("--init", o.init, "Profile file, 'zero' or 'random:<seed>'");
  dyn->add_option("--order", o.order, "'rr' or 'random:<seed>'");
  dyn->add_option("--max-iters", o.max_iters, "Maximum rounds");
  dyn->add_option("--tol", o.dyn_tol, "Convergence threshold per round")
      ->check(CLI::PositiveNumber);
  dyn->add_option("--trace", o.trace_path, "Trace CSV output file");
  dyn->add_flag("--json", o.json);

  std::vector<std::string> argv_store{"capgame"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char *> argv;
  for (std::string &s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App *cmd = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome outcome;
    const std::string name = cmd->get_name();
    if (name == "wardrop") outcome = run_wardrop(o);
    else if (name == "best-response") outcome = run_best_response(o);
    else if (name == "solve") outcome = run_solve(o);
    else if (name == "verify") outcome = run_verify(o);
    else if (name == "poa") outcome = run_poa(o);
    else if (name == "sweep-gm") outcome = run_sweep_gm(o);
    else outcome = run_dynamics_cmd(o);
    const double elapsed = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    emit(outcome, name, args, o.json, elapsed, out);
    return outcome.exit_code;
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitInvalidInput;
  }
}

} // namespace capgame::cli
