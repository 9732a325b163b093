#include "almostsq/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "almostsq/construct.hpp"
#include "almostsq/enumerate.hpp"
#include "almostsq/gaps.hpp"
#include "almostsq/structure.hpp"
#include "almostsq/window.hpp"

namespace almostsq::cli {

namespace {

using json = nlohmann::ordered_json;

// Settings shared by every command; resolved as flag > environment > config file > default.
struct Common {
  std::string format = "json";
  std::string output;
  std::string config_path;
  std::optional<std::uint64_t> budget;
  std::optional<unsigned> threads;
  std::optional<unsigned> precision_cap;
};

struct Resolved {
  ScanOptions scan;
  PrecisionLadder ladder;
};

std::map<std::string, std::string> read_config(const std::string& path) {
  std::map<std::string, std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(what + ": expected a nonnegative integer, got '" + text + "'");
  }
}

Resolved resolve(const Common& common, const EnvLookup& env) {
  const auto file = read_config(common.config_path);
  auto pick = [&](const std::string& key, const std::string& env_name) -> std::optional<std::string> {
    if (auto v = env(env_name)) return v;
    if (auto it = file.find(key); it != file.end()) return it->second;
    return std::nullopt;
  };
  Resolved r;
  if (common.budget) {
    r.scan.budget = *common.budget;
  } else if (auto v = pick("budget", "ALMOSTSQ_BUDGET")) {
    r.scan.budget = parse_u64(*v, "budget");
  }
  if (common.threads) {
    r.scan.threads = *common.threads;
  } else if (auto v = pick("threads", "ALMOSTSQ_THREADS")) {
    r.scan.threads = static_cast<unsigned>(parse_u64(*v, "threads"));
  }
  if (common.precision_cap) {
    r.ladder.cap_bits = *common.precision_cap;
  } else if (auto v = pick("precision_cap", "ALMOSTSQ_PRECISION_CAP")) {
    r.ladder.cap_bits = static_cast<unsigned>(parse_u64(*v, "precision_cap"));
  }
  r.scan.ladder = r.ladder;
  if (r.scan.budget == 0) throw InvalidArgument("budget must be positive");
  if (r.ladder.cap_bits < r.ladder.start_bits) {
    throw InvalidArgument("precision cap must be at least " + std::to_string(r.ladder.start_bits));
  }
  return r;
}

Ratio parse_ratio(const std::string& text, const std::string& what) {
  const Ratio r = Ratio::parse(text);
  if (r.den() > WindowSpec::kMaxDenominator) {
    throw InvalidArgument(what + " denominator must be <= 64, got " + r.str());
  }
  return r;
}

BigInt parse_big(const std::string& text, const std::string& what) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw InvalidArgument(what + ": expected a nonnegative integer, got '" + text + "'");
  }
  return BigInt(text);
}

json big(const BigInt& v) {
  if (auto i = to_i64(v)) return *i;
  return to_string(v);
}

json pairs_json(const std::vector<FactorPair>& pairs) {
  json arr = json::array();
  for (const auto& p : pairs) arr.push_back({p.a, p.b});
  return arr;
}

json interval_json(const IntegerInterval& iv) { return {{"lo", big(iv.lo)}, {"hi", big(iv.hi)}}; }

void check_format(const std::string& format) {
  if (format != "json" && format != "csv") throw InvalidArgument("--format must be json or csv");
}

// find --------------------------------------------------------------------

struct FindArgs {
  std::string lo, hi, x, theta, c2, method = "quadruples";
};

void cmd_find(const FindArgs& a, const Common& common, const Resolved& cfg, std::ostream& out) {
  const BigInt lo = parse_big(a.lo, "--lo");
  const BigInt hi = parse_big(a.hi, "--hi");
  if (lo > hi) throw InvalidArgument("--lo must not exceed --hi");
  const BigInt x = a.x.empty() ? BigInt((lo + hi) / 2) : parse_big(a.x, "--x");
  const WindowSpec spec(x, parse_ratio(a.theta, "--theta"), parse_ratio(a.c2, "--c2"));
  if (a.method != "quadruples" && a.method != "products") {
    throw InvalidArgument("--method must be quadruples or products");
  }
  const IntegerInterval target{lo, hi};
  const auto records = a.method == "products" ? scan_products(target, spec, cfg.scan)
                                              : scan_quadruples(target, spec, cfg.scan);
  if (common.format == "csv") {
    out << "n,pair_count,pairs\n";
    for (const auto& r : records) {
      out << r.n() << ',' << r.pairs().size() << ',';
      for (std::size_t i = 0; i < r.pairs().size(); ++i) {
        out << (i ? ";" : "") << r.pairs()[i].a << 'x' << r.pairs()[i].b;
      }
      out << '\n';
    }
    return;
  }
  for (const auto& r : records) out << json{{"n", r.n()}, {"pairs", pairs_json(r.pairs())}}.dump() << '\n';
}

// construct ---------------------------------------------------------------

struct ConstructArgs {
  std::string x, epsilon, c = "8", c_prime = "32";
};

json construction_json(const ConstructionResult& r, const ConstructionReport& report) {
  json clauses = json::object();
  for (const auto& c : report.clauses) clauses[c.name] = {{"pass", c.pass}, {"detail", c.detail}};
  const auto f = r.factors();
  return {
      {"x", big(r.x)},
      {"epsilon", r.epsilon.str()},
      {"theta_effective", r.theta_effective.str()},
      {"N", big(r.N)},
      {"xi", {{"mantissa", big(r.xi.mantissa)},
              {"scale_bits", r.xi.scale_bits},
              {"error_bound", to_string(r.xi.error_bound)},
              {"approx", static_cast<double>(r.xi.value())}}},
      {"dirichlet_limit", big(r.dirichlet_limit)},
      {"p", big(r.p)},
      {"q", big(r.q)},
      {"s1", big(r.s1)},
      {"s2", big(r.s2)},
      {"r1", big(r.r1)},
      {"r2", big(r.r2)},
      {"d1", big(r.d1)},
      {"d2", big(r.d2)},
      {"e1", big(r.e1)},
      {"e2", big(r.e2)},
      {"factors", {big(f[0]), big(f[1]), big(f[2]), big(f[3])}},
      {"n", big(r.n)},
      {"abs_error", big(r.abs_error)},
      {"middle_pair_tie", r.middle_pair_tie},
      {"verification",
       {{"C", report.C.str()}, {"C_prime", report.C_prime.str()}, {"pass", report.pass()},
        {"clauses", clauses}}},
  };
}

// RFC 4180 quoting for fields holding commas, quotes or newlines.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void write_key_values(const json& doc, std::ostream& out, const std::string& prefix = "") {
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      write_key_values(value, out, prefix + key + ".");
    } else {
      out << prefix << key << ',' << csv_field(value.is_string() ? value.get<std::string>() : value.dump())
          << '\n';
    }
  }
}

void cmd_construct(const ConstructArgs& a, const Common& common, const Resolved& cfg,
                   std::ostream& out) {
  const BigInt x = parse_big(a.x, "--x");
  if (x < 1) throw InvalidArgument("--x must be positive");
  const Ratio epsilon = parse_ratio(a.epsilon, "--epsilon");
  const Ratio C = parse_ratio(a.c, "--C");
  const Ratio C_prime = parse_ratio(a.c_prime, "--C-prime");
  if (C <= Ratio(0) || C_prime <= Ratio(0)) throw InvalidArgument("--C and --C-prime must be positive");
  const ConstructionResult res = construct_near(x, epsilon, cfg.ladder);
  const ConstructionReport report = verify_construction(res, x, epsilon, C, C_prime, cfg.ladder);
  const json doc = construction_json(res, report);
  if (common.format == "csv") {
    out << "key,value\n";
    write_key_values(doc, out);
  } else {
    out << doc.dump(2) << '\n';
  }
}

// gaps --------------------------------------------------------------------

struct GapsArgs {
  std::string lo, hi, theta, c2;
  std::uint64_t chunk = 0;
  bool histogram = false;
  double slack = 0.25;
};

json gap_json(const GapReport& r) {
  json doc = {
      {"theta", r.theta.str()},
      {"c2", r.c2.str()},
      {"range_lo", r.range_lo},
      {"range_hi", r.range_hi},
      {"instance_count", r.instance_count},
      {"max_gap", r.max_gap},
      {"histogram_mode", r.histogram_mode},
      {"window_segments", r.window_segments},
      {"exponent_slack", r.exponent_slack},
      {"predicted_gap_exponent_lower", r.predicted_gap_exponent_lower},
      {"predicted_gap_exponent_upper", r.predicted_gap_exponent_upper
                                           ? json(*r.predicted_gap_exponent_upper)
                                           : json(nullptr)},
      {"fitted_exponent", r.fitted_exponent ? json(*r.fitted_exponent) : json(nullptr)},
      {"fit_note", r.fit_note},
  };
  if (r.histogram_mode) {
    json bins = json::array();
    for (const auto& b : r.histogram) bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
    doc["histogram"] = bins;
  } else {
    doc["instances"] = r.instances ? json(*r.instances) : json::array();
    doc["gaps"] = r.gaps;
  }
  return doc;
}

void cmd_gaps(const GapsArgs& a, const Common& common, const Resolved& cfg, std::ostream& out) {
  const auto lo = to_u64(parse_big(a.lo, "--lo"));
  const auto hi = to_u64(parse_big(a.hi, "--hi"));
  if (!lo || !hi) throw InvalidArgument("--lo/--hi must fit in 64 bits");
  if (*lo > *hi) throw InvalidArgument("--lo must not exceed --hi");
  GapScanOptions options;
  options.scan = cfg.scan;
  options.ladder = cfg.ladder;
  options.chunk_width = a.chunk;
  options.histogram = a.histogram;
  options.exponent_slack = a.slack;
  const GapReport report =
      gap_scan(*lo, *hi, parse_ratio(a.theta, "--theta"), parse_ratio(a.c2, "--c2"), options);
  if (common.format == "csv") {
    if (report.histogram_mode) {
      out << "gap_lo,gap_hi,count\n";
      for (const auto& b : report.histogram) out << b.lo << ',' << b.hi << ',' << b.count << '\n';
    } else {
      out << "n,gap_from_previous\n";
      const auto& inst = *report.instances;
      for (std::size_t i = 0; i < inst.size(); ++i) {
        out << inst[i] << ',';
        if (i > 0) out << report.gaps[i - 1];
        out << '\n';
      }
    }
    return;
  }
  out << gap_json(report).dump(2) << '\n';
}

// decompose ---------------------------------------------------------------

struct DecomposeArgs {
  std::string n, pairs, theta, c2 = "1", x;
};

void cmd_decompose(const DecomposeArgs& a, const Common& common, const Resolved& cfg,
                   std::ostream& out) {
  const BigInt n = parse_big(a.n, "--n");
  std::vector<BigInt> values;
  std::stringstream ss(a.pairs);
  for (std::string item; std::getline(ss, item, ',');) values.push_back(parse_big(item, "--pairs"));
  if (values.size() != 4) throw InvalidArgument("--pairs expects a1,b1,a2,b2");
  if (values[0] * values[1] != n || values[2] * values[3] != n) {
    throw InvalidArgument("--pairs do not multiply to --n");
  }
  std::array<std::uint64_t, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto u = to_u64(values[i]);
    if (!u) throw InvalidArgument("--pairs entries must fit in 64 bits");
    v[i] = *u;
  }
  const Decomposition dec = decompose({v[0], v[1]}, {v[2], v[3]});
  json doc = {{"n", big(n)},
              {"d1", dec.d1()},
              {"d2", dec.d2()},
              {"e1", dec.e1()},
              {"e2", dec.e2()},
              {"range", nullptr}};
  std::optional<RangeReport> range;
  if (!a.theta.empty()) {
    const BigInt x = a.x.empty() ? n : parse_big(a.x, "--x");
    const WindowSpec spec(x, parse_ratio(a.theta, "--theta"), parse_ratio(a.c2, "--c2"));
    range = verify_range(dec, spec, cfg.ladder);
    doc["range"] = {{"x", big(x)},
                    {"interval", interval_json(range->range)},
                    {"in_range", range->in_range},
                    {"pass", range->pass}};
  }
  if (common.format == "csv") {
    out << "n,d1,d2,e1,e2,range_lo,range_hi,range_pass\n";
    out << n << ',' << dec.d1() << ',' << dec.d2() << ',' << dec.e1() << ',' << dec.e2() << ',';
    if (range) {
      out << range->range.lo << ',' << range->range.hi << ',' << (range->pass ? "true" : "false");
    } else {
      out << ",,";
    }
    out << '\n';
    return;
  }
  out << doc.dump(2) << '\n';
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "Output format: json or csv");
  cmd->add_option("--output,-o", common.output, "Write output to this file instead of stdout");
  cmd->add_option("--config", common.config_path, "key = value file (budget, threads, precision_cap)");
  cmd->add_option("--budget", common.budget, "Enumeration budget (steps)");
  cmd->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--precision-cap", common.precision_cap, "Largest precision in bits");
}

}  // namespace

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env) {
  CLI::App app{"Doubly-factorable almost squares: find, construct, decompose, survey gaps"};
  app.name("almostsq");
  app.require_subcommand(1);
  Common common;

  FindArgs find;
  auto* find_cmd = app.add_subcommand("find", "List n in [lo, hi] with two factorizations in the window");
  find_cmd->add_option("--lo", find.lo, "Lower end of the target interval")->required();
  find_cmd->add_option("--hi", find.hi, "Upper end of the target interval")->required();
  find_cmd->add_option("--x", find.x, "Window center (default: midpoint of the target)");
  find_cmd->add_option("--theta", find.theta, "Window exponent u/v in [0, 1/2)")->required();
  find_cmd->add_option("--c2", find.c2, "Window coefficient u/v")->default_val("1");
  find_cmd->add_option("--method", find.method, "quadruples (default) or products");
  add_common(find_cmd, common);

  ConstructArgs construct;
  auto* construct_cmd = app.add_subcommand("construct", "Build an almost square near x");
  construct_cmd->add_option("--x", construct.x, "Target")->required();
  construct_cmd->add_option("--epsilon", construct.epsilon, "u/v in (0, 1/3]")->required();
  construct_cmd->add_option("--C", construct.c, "Factor window constant")->default_val("8");
  construct_cmd->add_option("--C-prime", construct.c_prime, "Error constant")->default_val("32");
  add_common(construct_cmd, common);

  GapsArgs gaps;
  auto* gaps_cmd = app.add_subcommand("gaps", "Scan a range and report gaps between almost squares");
  gaps_cmd->add_option("--lo", gaps.lo, "Range start")->required();
  gaps_cmd->add_option("--hi", gaps.hi, "Range end")->required();
  gaps_cmd->add_option("--theta", gaps.theta, "Window exponent u/v")->required();
  gaps_cmd->add_option("--c2", gaps.c2, "Window coefficient u/v")->default_val("1");
  gaps_cmd->add_option("--chunk", gaps.chunk, "Chunk width (0 = about sqrt(hi))");
  gaps_cmd->add_flag("--histogram", gaps.histogram, "Bin gaps by powers of two");
  gaps_cmd->add_option("--exponent-slack", gaps.slack, "Recorded exponent tolerance");
  add_common(gaps_cmd, common);

  DecomposeArgs decompose_args;
  auto* decompose_cmd = app.add_subcommand("decompose", "Recover (d1, d2, e1, e2) from two factorizations");
  decompose_cmd->add_option("--n", decompose_args.n, "The integer")->required();
  decompose_cmd->add_option("--pairs", decompose_args.pairs, "a1,b1,a2,b2")->required();
  decompose_cmd->add_option("--theta", decompose_args.theta, "Check the quadruple range for this theta");
  decompose_cmd->add_option("--c2", decompose_args.c2, "Window coefficient u/v")->default_val("1");
  decompose_cmd->add_option("--x", decompose_args.x, "Window center (default: n)");
  add_common(decompose_cmd, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "almostsq: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    check_format(common.format);
    const Resolved cfg = resolve(common, env);
    std::ostringstream buffer;
    if (*find_cmd) cmd_find(find, common, cfg, buffer);
    if (*construct_cmd) cmd_construct(construct, common, cfg, buffer);
    if (*gaps_cmd) cmd_gaps(gaps, common, cfg, buffer);
    if (*decompose_cmd) cmd_decompose(decompose_args, common, cfg, buffer);
    if (common.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(common.output, std::ios::binary);
      if (!file) throw InvalidArgument("cannot write " + common.output);
      file << buffer.str();
    }
    return kExitOk;
  } catch (const InvalidArgument& e) {
    err << "almostsq: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityExceeded& e) {
    err << "almostsq: capacity exceeded: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const PrecisionExhausted& e) {
    err << "almostsq: precision exhausted: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const TargetTooSmall& e) {
    err << "almostsq: target too small: " << e.what() << '\n';
    return kExitTargetTooSmall;
  } catch (const StructureViolation& e) {
    err << "almostsq: structure violation: " << e.what() << '\n';
    return kExitStructure;
  } catch (const std::exception& e) {
    err << "almostsq: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace almostsq::cli
