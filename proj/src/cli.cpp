#include "nicd/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nicd/gaussian.hpp"
#include "nicd/io.hpp"
#include "nicd/markov.hpp"
#include "nicd/tree_nicd.hpp"
#include "nicd/verify.hpp"

namespace nicd {

namespace {

struct Common {
  int jobs = 1;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1000;
  std::string format = "json";
  std::string output;
};

struct EvalArgs {
  std::string input;
  std::string protocol;
  bool allow_unbalanced = false;
  bool brute_force = false;
};

struct SearchArgs {
  std::string input;
  std::string family = "all";
  std::vector<std::string> named;
  bool exhaustive = false;
};

struct CounterexampleArgs {
  double rho = 0.9;
  int n = 4;
  int k1_min = 0, k1_max = 200, k2_min = 0, k2_max = 200;
  std::string family = "all";
};

struct StarArgs {
  double rho = 0.5;
  std::optional<int> k;
  int k_min = 100, k_max = 10000, points = 10;
};

struct MarkovArgs {
  std::string chain;
  std::string set;
  std::vector<std::string> sets;
  int k = 1;
};

struct WalkArgs {
  double sigma = 0.5;
  double alpha = 1.0;
  double tau = 0.2;
  int n = 100;
};

struct VerifyArgs {
  std::string check;
  std::optional<int> n;
  std::optional<double> rho;
  std::optional<int> r;
  std::optional<int> k_max;
};

StateSet parse_set(const std::string& text) {
  StateSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      require(used == item.size(), ErrorCode::MalformedInput, "bad state '" + item + "'");
    } catch (const std::logic_error&) {
      throw NicdError(ErrorCode::MalformedInput, "bad state '" + item + "'");
    }
  }
  return out;
}

FunctionFamily make_family(const std::string& kind, const std::vector<std::string>& named, int n) {
  FunctionFamily fam;
  if (kind == "all") {
    fam.kind = FamilyKind::AllBalanced;
  } else if (kind == "monotone") {
    fam.kind = FamilyKind::MonotoneBalanced;
  } else if (kind == "named") {
    fam.kind = FamilyKind::Named;
    require(!named.empty(), ErrorCode::MalformedInput, "named family needs --function");
    for (const auto& enc : named) fam.named.push_back(BooleanFunction::parse(enc, n));
  } else {
    throw NicdError(ErrorCode::MalformedInput, "family must be all, monotone or named");
  }
  return fam;
}

// Gaps between consecutive players along a path, or nothing when the tree is
// not a path.
std::optional<std::vector<int>> path_player_gaps(const NicdInstance& inst) {
  const auto& adj = inst.adjacency();
  int start = -1;
  for (int v = 0; v < inst.vertex_count(); ++v) {
    if (adj[v].size() > 2) return std::nullopt;
    if (adj[v].size() <= 1 && start < 0) start = v;
  }
  if (start < 0) return std::nullopt;
  std::vector<int> order{start};
  int prev = -1, cur = start;
  while (true) {
    int next = -1;
    for (int w : adj[cur]) {
      if (w != prev) next = w;
    }
    if (next < 0) break;
    prev = cur;
    cur = next;
    order.push_back(cur);
  }
  std::vector<int> gaps;
  int last = -1;
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    if (!inst.is_player(order[i])) continue;
    if (last >= 0) gaps.push_back(i - last);
    last = i;
  }
  return gaps;
}

std::string describe_instance(const NicdInstance& inst) {
  std::string s = "V=" + std::to_string(inst.vertex_count()) + ";n=" + std::to_string(inst.n()) +
                  ";rho=" + format_number(inst.rho().rho()) + ";players=" + std::to_string(inst.players().size());
  return s;
}

int cmd_eval(const EvalArgs& a, const Common& c, std::ostream& out) {
  auto file = load_instance(a.input, a.allow_unbalanced);
  if (!a.protocol.empty()) {
    file.protocol = Protocol::simple(file.instance.players(), BooleanFunction::parse(a.protocol, file.instance.n()),
                                     a.allow_unbalanced);
  }
  require(file.protocol.has_value(), ErrorCode::MissingPlayerFunction,
          "instance has no protocol; pass --protocol");
  const auto& inst = file.instance;
  const auto& prot = *file.protocol;
  ReportRow row{describe_instance(inst), prot.describe(), success_probability(inst, prot), std::nullopt, ""};
  if (is_simple_dictator(prot)) {
    if (auto gaps = path_player_gaps(inst)) {
      row.bound = path_closed_form(*gaps, inst.rho());
      row.note = "bound=dictator closed form on path";
    }
  }
  if (a.brute_force) {
    const double bf = brute_force_success(inst, prot);
    row.note += (row.note.empty() ? "" : ";") + std::string("brute_force=") + format_number(bf);
  }
  if (prot.allow_unbalanced()) row.note += (row.note.empty() ? "" : ";") + std::string("unbalanced allowed");
  write_rows(out, {row}, parse_format(c.format));
  return kExitOk;
}

int cmd_search(const SearchArgs& a, const Common& c, std::ostream& out) {
  const auto file = load_instance(a.input);
  const auto& inst = file.instance;
  std::vector<ReportRow> rows;
  if (a.exhaustive) {
    const auto res = exhaustive_protocol_search(inst);
    for (const auto& p : res.optimal) {
      rows.push_back({describe_instance(inst), p.describe(), res.best_value, std::nullopt,
                      "optimal of " + std::to_string(res.protocols) + (is_simple_dictator(p) ? ";simple dictator" : "")});
    }
  } else {
    const auto res = best_simple_protocol(inst, make_family(a.family, a.named, inst.n()), c.jobs);
    rows.push_back({describe_instance(inst), res.best.encoding(), res.value, std::nullopt,
                    "best simple of " + std::to_string(res.candidates)});
  }
  write_rows(out, rows, parse_format(c.format));
  return kExitOk;
}

int cmd_counterexample(const CounterexampleArgs& a, const Common& c, std::ostream& out) {
  const auto rep = counterexample_search(CorrelationParam(a.rho), a.n, a.k1_min, a.k1_max, a.k2_min, a.k2_max,
                                         make_family(a.family, {}, a.n), c.jobs);
  std::vector<ReportRow> rows;
  for (const auto& e : rep.entries) {
    rows.push_back({"star_plus_path(k1=" + std::to_string(e.k1) + ",k2=" + std::to_string(e.k2) + ")",
                    "mixed dict:1/maj(last three)", e.mixed, e.best_simple, "best simple " + e.best_simple_encoding});
  }
  write_rows(out, rows, parse_format(c.format));
  return kExitOk;
}

int cmd_star(const StarArgs& a, const Common& c, std::ostream& out) {
  require(a.rho > 0.0 && a.rho < 1.0, ErrorCode::RhoOutOfRange, "rho must lie in (0,1)");
  std::vector<int> grid;
  if (a.k) {
    require(*a.k >= 1, ErrorCode::DomainError, "k must be positive");
    grid = {*a.k};
  } else {
    require(a.k_min >= 1 && a.k_max >= a.k_min && a.points >= 1, ErrorCode::DomainError, "bad k range");
    grid = geometric_grid(a.k_min, a.k_max, a.points);
  }
  const double nu = nu_of_rho(a.rho);
  // A single k gets the local slope between k and 2k.
  const double slope = grid.size() >= 2 ? rate_slope_diagnostic(a.rho, grid)
                                        : rate_slope_diagnostic(a.rho, std::vector<int>{grid[0], 2 * grid[0]});
  std::vector<std::vector<double>> rows;
  for (int k : grid) {
    rows.push_back({static_cast<double>(k), a.rho, nu, star_majority_limit(k, a.rho),
                    star_majority_lower_estimate(k, nu), slope});
  }
  write_table(out, {"k", "rho", "nu", "limit_prob", "lower_estimate", "slope"}, rows, parse_format(c.format));
  return kExitOk;
}

int cmd_markov(const MarkovArgs& a, const Common& c, std::ostream& out) {
  const auto chain = load_chain(a.chain);
  std::vector<StateSet> sets;
  if (!a.sets.empty()) {
    for (const auto& s : a.sets) sets.push_back(parse_set(s));
    require(sets.size() >= 2, ErrorCode::MalformedInput, "need at least two sets");
  } else {
    require(!a.set.empty(), ErrorCode::MalformedInput, "pass --set with --k, or --sets");
    require(a.k >= 1, ErrorCode::DomainError, "k must be positive");
    sets.assign(a.k + 1, parse_set(a.set));
  }
  const int k = static_cast<int>(sets.size()) - 1;
  const StayQuery q(std::vector<ReversibleChain>(k, chain), sets);
  const double exact = stay_probability_exact(q);
  const double bound = aks_bound(q);
  const double gap = spectral_gap(chain);
  const double ratio = bound > 0.0 ? exact / bound : std::numeric_limits<double>::quiet_NaN();

  nlohmann::json eq;
  if (!a.set.empty() && a.sets.empty()) {
    try {
      const auto d = equality_case_check(chain, sets.front());
      eq = {{"applicable", true}, {"equality", d.equality}, {"residual", d.residual},
            {"max_bound_gap", d.max_bound_gap}};
    } catch (const NicdError& e) {
      if (e.code() != ErrorCode::InapplicableHypotheses) throw;
      eq = {{"applicable", false}};
    }
  }
  if (parse_format(c.format) == OutputFormat::Csv) {
    write_table(out, {"k", "exact", "bound", "ratio", "gap"}, {{static_cast<double>(k), exact, bound, ratio, gap}},
                OutputFormat::Csv);
  } else {
    nlohmann::json o = {{"k", k}, {"exact", exact}, {"bound", bound}, {"gap", gap}};
    o["ratio"] = std::isfinite(ratio) ? nlohmann::json(ratio) : nlohmann::json(nullptr);
    if (!eq.is_null()) o["equality_case"] = eq;
    out << o.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_walk(const WalkArgs& a, const Common& c, std::ostream& out) {
  const auto w = walk_bound(a.sigma, a.alpha, a.tau, a.n);
  write_table(out, {"sigma", "alpha", "tau", "n", "exponent", "main", "error"},
              {{a.sigma, a.alpha, a.tau, static_cast<double>(a.n), w.exponent, w.main, w.error}},
              parse_format(c.format));
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, const Common& c, std::ostream& out) {
  CheckOptions o;
  o.n = a.n;
  o.rho = a.rho;
  o.r = a.r;
  o.k_max = a.k_max;
  o.jobs = c.jobs;
  const auto rep = run_check(a.check, c.seed, c.trials, o);
  out << check_report_json(rep) << '\n';
  return rep.passed ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-interactive correlation distillation toolkit"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", common.seed, "Seed for all randomness");
    sub->add_option("--trials", common.trials, "Trial budget")->check(CLI::PositiveNumber);
    sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", common.output, "Write the report here instead of stdout");
  };

  std::function<int(std::ostream&)> action;

  EvalArgs eval;
  auto* s_eval = app.add_subcommand("eval", "Success probability of a protocol on an instance file");
  s_eval->add_option("--input", eval.input, "Instance file")->required();
  s_eval->add_option("--protocol", eval.protocol, "Simple protocol encoding, overrides the file");
  s_eval->add_flag("--allow-unbalanced", eval.allow_unbalanced, "Accept unbalanced functions");
  s_eval->add_flag("--brute-force", eval.brute_force, "Cross-check by enumeration");
  add_common(s_eval);
  s_eval->callback([&] { action = [&](std::ostream& o) { return cmd_eval(eval, common, o); }; });

  SearchArgs search;
  auto* s_search = app.add_subcommand("search", "Best simple protocol, or exhaustive search at n <= 2");
  s_search->add_option("--input", search.input, "Instance file")->required();
  s_search->add_option("--family", search.family, "all, monotone or named");
  s_search->add_option("--function", search.named, "Function encoding for the named family");
  s_search->add_flag("--exhaustive", search.exhaustive, "Search all balanced protocols");
  add_common(s_search);
  s_search->callback([&] { action = [&](std::ostream& o) { return cmd_search(search, common, o); }; });

  CounterexampleArgs cx;
  auto* s_cx = app.add_subcommand("counterexample", "Star-plus-path scan for non-simple optimal protocols");
  s_cx->add_option("--rho", cx.rho, "Correlation");
  s_cx->add_option("--n", cx.n, "Bits per player");
  s_cx->add_option("--k1-min", cx.k1_min);
  s_cx->add_option("--k1-max", cx.k1_max);
  s_cx->add_option("--k2-min", cx.k2_min);
  s_cx->add_option("--k2-max", cx.k2_max);
  s_cx->add_option("--family", cx.family, "all or monotone");
  add_common(s_cx);
  s_cx->callback([&] { action = [&](std::ostream& o) { return cmd_counterexample(cx, common, o); }; });

  StarArgs star;
  auto* s_star = app.add_subcommand("star-asym", "Large-n majority success on the star");
  s_star->add_option("--rho", star.rho, "Correlation");
  s_star->add_option("--k", star.k, "Single number of players");
  s_star->add_option("--k-min", star.k_min);
  s_star->add_option("--k-max", star.k_max);
  s_star->add_option("--points", star.points);
  add_common(s_star);
  s_star->callback([&] { action = [&](std::ostream& o) { return cmd_star(star, common, o); }; });

  MarkovArgs mk;
  auto* s_mk = app.add_subcommand("markov-bound", "Exact stay probability against the spectral bound");
  s_mk->add_option("--chain", mk.chain, "Chain file")->required();
  s_mk->add_option("--set", mk.set, "Comma-separated states, used at every step");
  s_mk->add_option("--k", mk.k, "Steps for --set");
  s_mk->add_option("--sets", mk.sets, "One comma-separated set per time, A_0 first");
  add_common(s_mk);
  s_mk->callback([&] { action = [&](std::ostream& o) { return cmd_markov(mk, common, o); }; });

  WalkArgs walk;
  auto* s_walk = app.add_subcommand("walk", "Random-walk hitting bound on the cube");
  s_walk->add_option("--sigma", walk.sigma);
  s_walk->add_option("--alpha", walk.alpha);
  s_walk->add_option("--tau", walk.tau);
  s_walk->add_option("--n", walk.n);
  add_common(s_walk);
  s_walk->callback([&] { action = [&](std::ostream& o) { return cmd_walk(walk, common, o); }; });

  VerifyArgs ver;
  auto* s_ver = app.add_subcommand("verify", "Run a seeded property check");
  s_ver->add_option("check", ver.check, "Check name")->required()->check(CLI::IsMember(check_names()));
  s_ver->add_option("--n", ver.n);
  s_ver->add_option("--rho", ver.rho);
  s_ver->add_option("--r", ver.r);
  s_ver->add_option("--k-max", ver.k_max);
  add_common(s_ver);
  s_ver->callback([&] { action = [&](std::ostream& o) { return cmd_verify(ver, common, o); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (common.output.empty()) return action(out);
    std::ostringstream buffer;
    const int code = action(buffer);
    std::ofstream file(common.output, std::ios::binary);
    require(static_cast<bool>(file), ErrorCode::MalformedInput, "cannot write '" + common.output + "'");
    file << buffer.str();
    return code;
  } catch (const NicdError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  }
}

}  // namespace nicd
