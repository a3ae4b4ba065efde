#include "conflab/cli_runner.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "conflab/ambient.hpp"
#include "conflab/branches.hpp"
#include "conflab/commutators.hpp"
#include "conflab/conformal.hpp"
#include "conflab/operators.hpp"
#include "conflab/yamabe.hpp"

namespace conflab {

namespace {

using Json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw ConfigError("bad value for " + key + ": '" + value + "'");
  return out;
}

// Shortest round-trip representation, identical on every run.
std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : "nan";
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + items[i];
  return s;
}

std::string scheme_name(QuadScheme s) {
  switch (s) {
    case QuadScheme::Gauss:
      return "gauss";
    case QuadScheme::Qmc:
      return "qmc";
    default:
      return "auto";
  }
}

std::string selector_kind(const std::string& op) { return op.substr(0, op.find(':')); }

HandlePtr build_handle(const RunConfig& cfg) {
  try {
    return handle_from_selector(cfg.op, cfg.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

bool gjms_constructible(int n, int k) { return k >= 1 && (2 * k < n || (n % 2 == 0 && 2 * k <= n)); }

Json exact_check(const std::string& name, bool passed, long checked, long failures) {
  Json j;
  j["name"] = name;
  j["kind"] = "exact";
  j["passed"] = passed;
  j["checked"] = checked;
  j["failures"] = failures;
  return j;
}

// Harmonic degree of the spectral model when the config leaves it at 0:
// exact quadrature of |u|^{r*} keeps the tensor grid small at these values.
int default_degree(const OperatorHandle& h) {
  if (h.rank == 2) return h.n == 3 ? 6 : 2;
  return 1;
}

SphereGrid model_grid(const RunConfig& cfg, int L, double p) {
  if (cfg.quad.scheme == QuadScheme::Auto) return grid_for_exponent(cfg.n, L, p);
  try {
    return make_grid(cfg.n, cfg.quad);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

MinimizeOptions minimize_options(const RunConfig& cfg) {
  MinimizeOptions opt;
  opt.tolerance = cfg.tolerance;
  opt.max_iterations = cfg.max_iterations;
  return opt;
}

void add_row(CommandResult& r, std::vector<std::string> row) { r.csv_rows.push_back(std::move(row)); }

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "n") {
    n = parse_number<int>(key, value);
  } else if (key == "op") {
    op = value;
  } else if (key == "quad.scheme") {
    if (value == "auto") quad.scheme = QuadScheme::Auto;
    else if (value == "gauss") quad.scheme = QuadScheme::Gauss;
    else if (value == "qmc") quad.scheme = QuadScheme::Qmc;
    else throw ConfigError("quad.scheme must be auto, gauss or qmc");
  } else if (key == "quad.nodes") {
    quad.nodes = parse_number<int>(key, value);
  } else if (key == "quad.azimuth") {
    quad.azimuth_nodes = parse_number<int>(key, value);
  } else if (key == "quad.qmc_points") {
    quad.qmc_points = parse_number<long>(key, value);
  } else if (key == "tol") {
    tolerance = parse_number<double>(key, value);
  } else if (key == "max_iter") {
    max_iterations = parse_number<int>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "format") {
    if (value != "json" && value != "csv") throw ConfigError("format must be json or csv");
    format = value;
  } else if (key == "suite") {
    suite.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      static const std::vector<std::string> known = {"sl2",          "spectrum",   "tangential",
                                                     "self_adjoint", "commutator", "associated"};
      if (std::find(known.begin(), known.end(), item) == known.end()) throw ConfigError("unknown suite item: " + item);
      suite.push_back(item);
    }
  } else if (key == "k") {
    k = parse_number<int>(key, value);
  } else if (key == "lmax") {
    lmax = parse_number<int>(key, value);
  } else if (key == "degree") {
    degree = parse_number<int>(key, value);
  } else if (key == "amplitude") {
    amplitude = parse_number<double>(key, value);
  } else if (key == "length") {
    length = parse_number<double>(key, value);
  } else if (key == "rapidity") {
    rapidity = parse_number<double>(key, value);
  } else if (key == "boost") {
    boosts.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ConfigError("boost expects axis:rapidity, got " + item);
      boosts.emplace_back(parse_number<int>(key, trim(item.substr(0, colon))),
                          parse_number<double>(key, trim(item.substr(colon + 1))));
    }
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

void RunConfig::validate() const {
  if (n < 3 || n + 1 > kMaxVars) throw ConfigError("n must lie in [3, " + std::to_string(kMaxVars - 1) + "]");
  if (!(tolerance > 0.0)) throw ConfigError("tol must be positive");
  if (max_iterations <= 0) throw ConfigError("max_iter must be positive");
  if (lmax < 0 || degree < 0) throw ConfigError("lmax and degree must be nonnegative");
  if (!(amplitude >= 0.0) || !(length > 0.0) || !(rapidity >= 0.0)) {
    throw ConfigError("amplitude and rapidity must be nonnegative, length positive");
  }
  for (const auto& [axis, r] : boosts) {
    if (axis < 0 || axis > n) throw ConfigError("boost axis must lie in [0, n]");
    if (!std::isfinite(r)) throw ConfigError("boost rapidity must be finite");
  }
  if (quad.nodes < 0 || quad.azimuth_nodes < 0 || quad.qmc_points <= 0) throw ConfigError("bad quadrature sizes");
  build_handle(*this);
}

Json RunConfig::to_json() const {
  Json j;
  j["n"] = n;
  j["op"] = op;
  j["quad.scheme"] = scheme_name(quad.scheme);
  j["quad.nodes"] = quad.nodes;
  j["quad.azimuth"] = quad.azimuth_nodes;
  j["quad.qmc_points"] = quad.qmc_points;
  j["tol"] = tolerance;
  j["max_iter"] = max_iterations;
  j["seed"] = seed;
  j["suite"] = join(suite);
  j["k"] = k;
  j["lmax"] = lmax;
  j["degree"] = degree;
  j["amplitude"] = amplitude;
  j["length"] = length;
  j["rapidity"] = rapidity;
  std::vector<std::string> bs;
  for (const auto& [axis, r] : boosts) bs.push_back(std::to_string(axis) + ":" + format_double(r));
  j["boost"] = join(bs);
  return j;
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::string output_directory(const RunConfig& cfg) {
  if (const char* env = std::getenv("CONFLAB_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return cfg.out_dir;
}

CommandResult cmd_verify(const RunConfig& cfg) {
  cfg.validate();
  const HandlePtr h = build_handle(cfg);
  const std::string kind = selector_kind(cfg.op);
  CommandResult r;
  r.csv_header = {"check", "passed", "checked", "failures", "value", "expected"};
  Json checks = Json::array();
  auto record = [&](Json j, const std::string& value = "", const std::string& expected = "") {
    if (!value.empty()) j["value"] = value;
    if (!expected.empty()) j["expected"] = expected;
    add_row(r, {j["name"], j["passed"].get<bool>() ? "true" : "false", std::to_string(j["checked"].get<long>()),
                std::to_string(j["failures"].get<long>()), value, expected});
    if (!j["passed"].get<bool>()) r.exit_code = kExitIdentity;
    checks.push_back(std::move(j));
  };
  auto has = [&](const std::string& item) {
    return std::find(cfg.suite.begin(), cfg.suite.end(), item) != cfg.suite.end();
  };

  if (has("sl2")) {
    for (const Sl2Report& rep : check_sl2_range(3, cfg.n, 3)) {
      record(exact_check("sl2 k=" + std::to_string(rep.k), rep.passed(), rep.checked, rep.failures));
    }
  }
  if (has("spectrum")) {
    for (int k = 1; k <= 3 && gjms_constructible(cfg.n, k); ++k) {
      const auto ambient = rank2_spectrum(*gjms(cfg.n, k), cfg.lmax);
      long failures = 0;
      for (int l = 0; l <= cfg.lmax; ++l) failures += ambient[l] != gjms_eigenvalue(cfg.n, k, l);
      record(exact_check("gjms spectrum k=" + std::to_string(k), failures == 0, cfg.lmax + 1, failures),
             to_string(ambient[0]), to_string(gjms_eigenvalue(cfg.n, k, 0)));
    }
  }
  if (has("tangential")) {
    std::vector<HandlePtr> targets = {h};
    for (const auto& c : h->constraints) targets.push_back(c);
    for (const auto& t : targets) {
      const ExactCheck c = check_tangentiality(*t, 3, cfg.seed);
      record(exact_check(c.name, c.passed(), c.checked, c.failures));
    }
  }
  if (has("self_adjoint") && h->self_adjoint) {
    const int degree = h->rank == 2 ? 3 : 2;
    const ExactCheck c = check_self_adjointness(*h, 10, degree, h->rank == 4 ? 4 : 0, cfg.seed);
    record(exact_check(c.name, c.passed(), c.checked, c.failures));
  }
  if (has("commutator")) {
    std::vector<CommutatorReport> reps;
    if (kind == "gjms" || kind == "gjms4") reps.push_back(check_gjms_commutator(cfg.n, h->k));
    if (kind == "or" && h->k >= 1) reps.push_back(check_or_commutator(cfg.n, h->k));
    if (kind == "sigma2") reps.push_back(check_sigma2_commutator(cfg.n));
    for (const auto& rep : reps) {
      Json j = exact_check(rep.identity + " commutator k=" + std::to_string(rep.k), rep.exact_equal, rep.basis_size,
                           static_cast<long>(rep.failures.size()));
      record(std::move(j), rep.fitted_constant ? to_string(*rep.fitted_constant) : "",
             rep.stated_constant ? to_string(*rep.stated_constant) : "");
    }
  }
  if (has("associated")) {
    // D(1, ..., 1) = ((n - 2k)/r)^{r-1} I with I the round-sphere invariant.
    const SpherePoly one = SpherePoly::constant(cfg.n, 1);
    const Rational value = h->evaluate_diagonal(one).component(0).terms().empty()
                               ? Rational(0)
                               : h->evaluate_diagonal(one).component(0).terms().front().coeff;
    std::optional<Rational> invariant;
    if (kind == "gjms" || kind == "gjms4") invariant = q_curvature(cfg.n, h->k);
    if (kind == "sigma2") invariant = ratio(cfg.n * (cfg.n - 1), 8);
    if (invariant) {
      const Rational expected = power(ratio(cfg.n - 2 * h->k, h->rank), h->rank - 1) * *invariant;
      record(exact_check(h->name + " associated constant", value == expected, 1, value == expected ? 0 : 1),
             to_string(value), to_string(expected));
    } else {
      // No stated invariant for this family; the value is reported only.
      Json j = exact_check(h->name + " associated constant", true, 0, 0);
      j["asserted"] = false;
      record(std::move(j), to_string(value));
    }
  }

  r.report["command"] = "verify";
  r.report["config"] = cfg.to_json();
  r.report["checks"] = std::move(checks);
  r.report["passed"] = r.exit_code == kExitOk;
  return r;
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
  cfg.validate();
  if (!gjms_constructible(cfg.n, cfg.k)) {
    throw ConfigError("gjms needs n > 2k, or n even with k <= n/2 (n = " + std::to_string(cfg.n) +
                      ", k = " + std::to_string(cfg.k) + ")");
  }
  const auto ambient = rank2_spectrum(*gjms(cfg.n, cfg.k), cfg.lmax);
  CommandResult r;
  r.csv_header = {"l", "ambient", "factorization", "agreement"};
  Json rows = Json::array();
  for (int l = 0; l <= cfg.lmax; ++l) {
    const Rational f = gjms_eigenvalue(cfg.n, cfg.k, l);
    const std::string agreement = ambient[l] == f ? "exact" : "mismatch";
    if (ambient[l] != f) r.exit_code = kExitIdentity;
    Json row;
    row["l"] = l;
    row["ambient"] = to_string(ambient[l]);
    row["factorization"] = to_string(f);
    row["agreement"] = agreement;
    rows.push_back(std::move(row));
    add_row(r, {std::to_string(l), to_string(ambient[l]), to_string(f), agreement});
  }
  r.report["command"] = "spectrum";
  r.report["n"] = cfg.n;
  r.report["k"] = cfg.k;
  r.report["rows"] = std::move(rows);
  return r;
}

CommandResult cmd_minimize(const RunConfig& cfg) {
  cfg.validate();
  const HandlePtr h = build_handle(cfg);
  const int L = cfg.degree > 0 ? cfg.degree : default_degree(*h);
  const double p = critical_exponent(*h);
  const SpectralModel model(h, L, p, model_grid(cfg, L, p));
  const YamabeResult res = minimize(model, perturbed_constant(model, cfg.amplitude, cfg.seed), minimize_options(cfg));
  const double reference = model.functional(model.constant_state());

  CommandResult r;
  r.exit_code = res.converged ? kExitOk : kExitNoConvergence;
  r.report["command"] = "minimize";
  r.report["config"] = cfg.to_json();
  r.report["degree"] = L;
  r.report["grid"] = model.grid().description;
  r.report["exponent"] = p;
  r.report["Y"] = res.value;
  r.report["F_constant"] = reference;
  r.report["relative_gap"] = (res.value - reference) / reference;
  r.report["converged"] = res.converged;
  r.report["iterations"] = res.iterations;
  r.report["gradient_norm"] = res.gradient_norm;
  r.report["sup_distance"] = res.sup_distance;
  r.report["balance_residual"] = res.balance_residual;
  r.report["cone_member"] = res.cone_member;
  r.report["min_value"] = res.min_value;
  r.csv_header = {"key", "value"};
  for (const auto& [key, value] : r.report.items()) {
    if (key == "config") continue;
    add_row(r, {key, value.is_number_float() ? format_double(value.get<double>()) : value.dump()});
  }
  return r;
}

CommandResult cmd_eigenvalue(const RunConfig& cfg) {
  cfg.validate();
  const HandlePtr h = build_handle(cfg);
  const int L = cfg.degree > 0 ? cfg.degree : (h->rank == 2 ? 2 : 1);
  const EigenvalueResult e = first_nonlinear_eigenvalue(h, L, cfg.seed, minimize_options(cfg));
  CommandResult r;
  r.exit_code = e.run.converged ? kExitOk : kExitNoConvergence;
  r.report["command"] = "eigenvalue";
  r.report["config"] = cfg.to_json();
  r.report["degree"] = L;
  r.report["lambda"] = e.lambda;
  r.report["converged"] = e.run.converged;
  r.report["iterations"] = e.run.iterations;
  r.report["gradient_norm"] = e.run.gradient_norm;
  r.csv_header = {"key", "value"};
  for (const auto& [key, value] : r.report.items()) {
    if (key == "config") continue;
    add_row(r, {key, value.is_number_float() ? format_double(value.get<double>()) : value.dump()});
  }
  return r;
}

CommandResult cmd_branches(const RunConfig& cfg) {
  cfg.validate();
  BranchSet set;
  try {
    set = count_branches(cfg.n, cfg.length);
  } catch (const std::runtime_error& e) {
    CommandResult fail;
    fail.exit_code = kExitNoConvergence;
    fail.report["command"] = "branches";
    fail.report["error"] = e.what();
    return fail;
  }
  CommandResult r;
  r.csv_header = {"multiplicity", "amplitude", "minimum", "period", "energy", "functional", "pde_residual"};
  Json rows = Json::array();
  for (const BranchRecord& b : set.records) {
    if (!(b.pde_residual < cfg.tolerance)) r.exit_code = kExitNoConvergence;
    Json row;
    row["multiplicity"] = b.multiplicity;
    row["amplitude"] = b.amplitude;
    row["minimum"] = b.minimum;
    row["period"] = b.period;
    row["energy"] = b.energy_level;
    row["functional"] = b.functional;
    row["pde_residual"] = b.pde_residual;
    rows.push_back(std::move(row));
    add_row(r, {std::to_string(b.multiplicity), format_double(b.amplitude), format_double(b.minimum),
                format_double(b.period), format_double(b.energy_level), format_double(b.functional),
                format_double(b.pde_residual)});
  }
  r.report["command"] = "branches";
  r.report["n"] = cfg.n;
  r.report["length"] = cfg.length;
  r.report["residual_tolerance"] = cfg.tolerance;
  r.report["nonconstant_classes"] = set.nonconstant_classes();
  r.report["monotone_scan_passed"] = set.monotone_scan_passed;
  r.report["records"] = std::move(rows);
  return r;
}

CommandResult cmd_balance(const RunConfig& cfg) {
  cfg.validate();
  const HandlePtr h = build_handle(cfg);
  const Frac w = h->input_weights.front();
  if (w.num() >= 0) throw ConfigError("balance needs a negative input weight");
  SphereGrid grid;
  try {
    grid = make_grid(cfg.n, cfg.quad);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  // A pulled-back constant: balancing must undo the boost.
  MobiusMap phi = MobiusMap::boost_axis(cfg.n, 0, cfg.boosts.empty() ? cfg.rapidity : 0.0);
  for (const auto& [axis, r] : cfg.boosts) phi = phi * MobiusMap::boost_axis(cfg.n, axis, r);
  const SphereFunction bubble = act([](const double*) { return 1.0; }, phi, w);
  BalanceOptions opt;
  opt.tolerance = cfg.tolerance;
  opt.max_iterations = cfg.max_iterations;
  const BalanceResult bal = balance(bubble, w, grid, opt);
  const SphereFunction v = act(bubble, bal.phi, w);
  double lo = 1e300;
  double hi = -1e300;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double x = v(grid.point(p));
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CommandResult r;
  r.exit_code = bal.converged ? kExitOk : kExitNoConvergence;
  r.report["command"] = "balance";
  r.report["config"] = cfg.to_json();
  r.report["grid"] = grid.description;
  r.report["weight"] = to_string(w);
  r.report["residual_norm"] = bal.residual_norm;
  r.report["iterations"] = bal.iterations;
  r.report["converged"] = bal.converged;
  r.report["balanced_oscillation"] = (hi - lo) / 2.0;
  r.csv_header = {"key", "value"};
  for (const auto& [key, value] : r.report.items()) {
    if (key == "config") continue;
    add_row(r, {key, value.is_number_float() ? format_double(value.get<double>()) : value.dump()});
  }
  return r;
}

std::string write_result(const RunConfig& cfg, const std::string& name, const CommandResult& result) {
  const std::filesystem::path dir = output_directory(cfg);
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / (name + "." + cfg.format);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  if (cfg.format == "json") {
    out << result.report.dump(2) << "\n";
  } else {
    out << join(result.csv_header) << "\n";
    for (const auto& row : result.csv_rows) out << join(row) << "\n";
  }
  return path.string();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformally covariant operators on the round sphere: exact identities and Yamabe-type problems"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "key = value config file");
  app.add_option("--set", overrides, "override as key=value (repeatable)");
  std::vector<std::string> boost_flags;
  CLI::Option* boost_opt = app.add_option("--boost", boost_flags, "axis:rapidity (repeatable)");

  // Each flag maps onto a config key and overrides the file.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"-n,--n", "n"},
      {"--op", "op"},
      {"--quad-scheme", "quad.scheme"},
      {"--quad-nodes", "quad.nodes"},
      {"--quad-azimuth", "quad.azimuth"},
      {"--quad-qmc-points", "quad.qmc_points"},
      {"--tol", "tol"},
      {"--max-iter", "max_iter"},
      {"--seed", "seed"},
      {"--out-dir", "out_dir"},
      {"--format", "format"},
      {"--suite", "suite"},
      {"-k,--k", "k"},
      {"--lmax", "lmax"},
      {"--degree", "degree"},
      {"--amplitude", "amplitude"},
      {"--length", "length"},
      {"--rapidity", "rapidity"},
  };
  std::map<std::string, std::string> flag_values;
  std::vector<std::pair<CLI::Option*, std::string>> flag_options;
  for (const auto& [name, key] : flags) flag_options.emplace_back(app.add_option(name, flag_values[key], "config key " + key), key);

  const std::map<std::string, std::function<CommandResult(const RunConfig&)>> commands = {
      {"verify", cmd_verify},     {"spectrum", cmd_spectrum}, {"minimize", cmd_minimize},
      {"eigenvalue", cmd_eigenvalue}, {"branches", cmd_branches}, {"balance", cmd_balance},
  };
  const std::map<std::string, std::string> help = {
      {"verify", "run the exact identity suite"},
      {"spectrum", "GJMS eigenvalues, ambient against factorization"},
      {"minimize", "minimize the Yamabe-type functional from a perturbed constant"},
      {"eigenvalue", "first nonlinear eigenvalue"},
      {"branches", "periodic solutions of the reduced equation on S^1(length) x S^{n-1}"},
      {"balance", "balance a boosted constant under the conformal group"},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    for (const auto& [opt, key] : flag_options) {
      if (opt->count() > 0) cfg.set(key, flag_values[key]);
    }
    if (boost_opt->count() > 0) cfg.set("boost", join(boost_flags));
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
      cfg.set(trim(kv.substr(0, eq)), kv.substr(eq + 1));
    }
    const CommandResult result = commands.at(command)(cfg);
    const std::string path = write_result(cfg, command, result);
    out << command << ": exit " << result.exit_code << " -> " << path << "\n";
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }
}

}  // namespace conflab
