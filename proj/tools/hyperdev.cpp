// hyperdev: build the structured families, analyze regularity, verify the
// martingale identity, evaluate tail bounds, and run subset-model
// simulations. Every file-producing run drops a manifest next to its output;
// `rerun` replays a manifest and reproduces the outputs byte for byte.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperdev/ap3_kernel.hpp"
#include "hyperdev/bounds.hpp"
#include "hyperdev/families.hpp"
#include "hyperdev/partite.hpp"
#include "hyperdev/regularity.hpp"
#include "hyperdev/sampling.hpp"
#include "hyperdev/trajectory.hpp"

using nlohmann::json;
using namespace hyperdev;

namespace {

constexpr const char* kVersion = "hyperdev 1.0.0";

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// "3/4", "0.25", "-2" -> exact rational
Rat parse_rat(const std::string& s) {
  static const std::regex frac(R"(^([+-]?\d+)/(\d+)$)");
  static const std::regex dec(R"(^([+-]?)(\d*)\.(\d+)$)");
  static const std::regex integer(R"(^[+-]?\d+$)");
  std::smatch m;
  if (std::regex_match(s, m, frac)) {
    Int den(m[2].str());
    if (den == 0) throw config_error("rational with zero denominator: " + s);
    return Rat(Int(m[1].str()), den);
  }
  if (std::regex_match(s, m, dec)) {
    std::string digits = m[2].str() + m[3].str();
    Int num(digits.empty() ? "0" : digits);
    Int den = 1;
    for (size_t i = 0; i < m[3].str().size(); ++i) den *= 10;
    Rat r(num, den);
    return m[1].str() == "-" ? -r : r;
  }
  if (std::regex_match(s, integer)) return Rat(Int(s));
  throw config_error("cannot parse rational: " + s);
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw io_error("cannot open for writing: " + tmp);
    os << content;
    if (!os) throw io_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("rename failed: " + path + " (" + ec.message() + ")");
}

// emit to the file when a path is set, otherwise to stdout
void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    atomic_write(path, content);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Accept strict JSON, a JSON file path, or the lax {N:101,m:50} form with
// bare keys.
json parse_params(const std::string& arg) {
  std::string text = arg;
  auto trimmed = text.find_first_not_of(" \t\n");
  if (trimmed == std::string::npos) throw config_error("empty params");
  if (text[trimmed] != '{') text = slurp(arg);
  std::string fixed =
      std::regex_replace(text, std::regex(R"(([\{,]\s*)([A-Za-z_][A-Za-z0-9_.]*)(\s*:))"),
                         "$1\"$2\"$3");
  try {
    return json::parse(fixed);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("bad params JSON: ") + e.what());
  }
}

struct GridSpec {
  std::string name;
  std::vector<double> values;
};

// "a=0:8000:250" (inclusive endpoints) or "a=1,2,5"
GridSpec parse_grid(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos) throw config_error("grid must be name=lo:hi:step or name=v1,v2,...");
  GridSpec g;
  g.name = s.substr(0, eq);
  std::string rest = s.substr(eq + 1);
  if (rest.find(':') != std::string::npos) {
    double lo, hi, step;
    if (std::sscanf(rest.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0)
      throw config_error("bad grid range: " + rest);
    for (double v = lo; v <= hi + step * 1e-9; v += step) g.values.push_back(v);
  } else {
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) g.values.push_back(std::stod(tok));
  }
  if (g.values.empty()) throw config_error("empty grid");
  return g;
}

// ----- options -----

struct GlobalOpts {
  std::uint64_t seed = 1;
  int threads = 1;
  long long budget = kDefaultBudget;
  std::string constants_path;  // JSON {"c1":..., "log_c2":...}
  std::string manifest_path;   // default: first output + ".manifest.json"
};

struct FamilyOpts {
  std::string family;  // kap | schur | sidon | linsys
  int n = 0;
  int k = 0;
  std::string matrix_path;  // linsys: l rows of k integers
  bool exclude_zero = false;
  std::string in_path;  // alternative: read an edge list
};

Hypergraph load_family(const FamilyOpts& fo, long long budget) {
  if (!fo.in_path.empty()) {
    std::ifstream is(fo.in_path);
    if (!is) throw io_error("cannot open: " + fo.in_path);
    return read_edge_list(is);
  }
  if (fo.family == "kap") return build_kap(fo.n, fo.k);
  if (fo.family == "schur") return build_schur(fo.n);
  if (fo.family == "sidon") return build_sidon(fo.n);
  if (fo.family == "linsys") {
    if (fo.matrix_path.empty()) throw config_error("linsys needs --matrix");
    LinearSystemSpec spec;
    spec.N = fo.n;
    spec.exclude_zero = fo.exclude_zero;
    std::ifstream is(fo.matrix_path);
    if (!is) throw io_error("cannot open: " + fo.matrix_path);
    std::string line;
    while (std::getline(is, line)) {
      std::stringstream ss(line);
      std::vector<long long> row;
      long long v;
      while (ss >> v) row.push_back(v);
      if (!row.empty()) spec.A.push_back(row);
    }
    if (spec.A.empty()) throw config_error("matrix file is empty");
    return build_linear_system(spec, budget);
  }
  throw config_error("unknown family: " + fo.family + " (want kap|schur|sidon|linsys)");
}

ConstantsPack load_constants(const std::string& path, int k, int r) {
  if (path.empty()) return default_constants(k, r);
  json j = parse_params(path);
  ConstantsPack p;
  p.c1 = j.at("c1").get<double>();
  p.log_c2 = j.at("log_c2").get<double>();
  p.defaulted = false;
  return p;
}

void add_family_flags(CLI::App* cmd, FamilyOpts& fo, bool allow_in = true) {
  cmd->add_option("--family", fo.family, "kap | schur | sidon | linsys");
  cmd->add_option("--n", fo.n, "modulus / vertex parameter N");
  cmd->add_option("--k", fo.k, "uniformity (kap only; schur=3, sidon=4)");
  cmd->add_option("--matrix", fo.matrix_path, "linsys coefficient matrix file (l rows of k ints)");
  cmd->add_flag("--exclude-zero", fo.exclude_zero, "linsys over nonzero residues");
  if (allow_in) cmd->add_option("--in", fo.in_path, "read an edge-list file instead of a family");
}

json family_json(const FamilyOpts& fo) {
  return json{{"family", fo.family}, {"n", fo.n},        {"k", fo.k},
              {"matrix", fo.matrix_path}, {"exclude_zero", fo.exclude_zero},
              {"in", fo.in_path}};
}

void family_from_json(const json& j, FamilyOpts& fo) {
  fo.family = j.at("family").get<std::string>();
  fo.n = j.at("n").get<int>();
  fo.k = j.at("k").get<int>();
  fo.matrix_path = j.at("matrix").get<std::string>();
  fo.exclude_zero = j.at("exclude_zero").get<bool>();
  fo.in_path = j.at("in").get<std::string>();
}

json global_json(const GlobalOpts& g) {
  return json{{"seed", g.seed},
              {"threads", g.threads},
              {"budget", g.budget},
              {"constants", g.constants_path}};
}

void global_from_json(const json& j, GlobalOpts& g) {
  g.seed = j.at("seed").get<std::uint64_t>();
  g.threads = j.at("threads").get<int>();
  g.budget = j.at("budget").get<long long>();
  g.constants_path = j.at("constants").get<std::string>();
}

void write_manifest(const GlobalOpts& g, const std::string& subcommand, const json& options,
                    const std::vector<std::string>& outputs) {
  std::string path = g.manifest_path;
  if (path.empty()) {
    for (const auto& o : outputs)
      if (!o.empty()) {
        path = o + ".manifest.json";
        break;
      }
  }
  if (path.empty()) return;  // stdout-only run, nothing to replay against
  json m{{"version", kVersion},
         {"subcommand", subcommand},
         {"global", global_json(g)},
         {"options", options},
         {"outputs", outputs}};
  atomic_write(path, m.dump(2) + "\n");
}

// ----- build -----

struct BuildOpts {
  FamilyOpts fam;
  std::string out;
};

int run_build(const GlobalOpts& g, const BuildOpts& o) {
  Hypergraph H = load_family(o.fam, g.budget);
  std::ostringstream ss;
  write_edge_list(ss, H);
  emit(o.out, ss.str());
  write_manifest(g, "build", json{{"fam", family_json(o.fam)}, {"out", o.out}}, {o.out});
  return 0;
}

// ----- analyze -----

struct AnalyzeOpts {
  FamilyOpts fam;
  std::vector<int> rs = {1};
  std::string out;
};

int run_analyze(const GlobalOpts& g, const AnalyzeOpts& o) {
  Hypergraph H = load_family(o.fam, g.budget);
  json reports = json::array();
  for (int r : o.rs) {
    auto rep = regularity_report(H, r, g.budget, g.seed);
    reports.push_back(json{{"r", rep.r},
                           {"avg_degree", to_string(rep.avg_degree)},
                           {"avg_degree_float", to_double(rep.avg_degree)},
                           {"max_degree", rep.max_degree},
                           {"min_degree", rep.min_degree},
                           {"eta", to_string(rep.eta)},
                           {"eta_float", to_double(rep.eta)},
                           {"exact", rep.exact},
                           {"sampled_sets", rep.sampled_sets},
                           {"sample_seed", rep.sample_seed}});
  }
  json doc{{"N", H.N}, {"k", H.k}, {"h", H.h()}, {"reports", reports}};
  emit(o.out, doc.dump(2) + "\n");
  write_manifest(g, "analyze", json{{"fam", family_json(o.fam)}, {"rs", o.rs}, {"out", o.out}},
                 {o.out});
  return 0;
}

// ----- verify-martingale -----

struct VerifyOpts {
  FamilyOpts fam;
  int trials = 50;
  std::string out;
};

int run_verify(const GlobalOpts& g, const VerifyOpts& o) {
  Hypergraph H = load_family(o.fam, g.budget);
  auto below = regularity_report(H, H.k - 1, g.budget, g.seed);
  if (!below.exact)
    throw budget_error("verify-martingale: eta_{k-1} needs the exact regularity budget");
  Rat eta = below.eta;
  long long exact_trials = 0;
  double max_ratio = 0.0;
  bool all_exact = true;
  for (int trial = 1; trial <= o.trials; ++trial) {
    auto gen = rng::make_stream(g.seed, static_cast<std::uint64_t>(trial));
    std::vector<int> perm(H.N);
    for (int i = 0; i < H.N; ++i) perm[i] = i;
    for (int i = H.N - 1; i > 0; --i) {
      auto j = static_cast<int>(rng::uniform_below(gen, static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[i], perm[j]);
    }
    auto t = run_trajectory(H, perm);
    auto table = martingale_reconstruct_table(t);
    bool ok = true;
    for (int j = 1; j <= H.k && ok; ++j)
      for (int m = 0; m <= H.N && ok; ++m) {
        Rat direct = Rat(t.partial[m][j]) - expected_partial(H.N, H.k, H.h(), j, m);
        if (direct != table[j][m]) ok = false;
      }
    auto bound_rep = check_increment_bound(t, H.k - 1, eta);
    max_ratio = std::max(max_ratio, bound_rep.max_ratio);
    if (ok) ++exact_trials;
    all_exact = all_exact && ok;
    std::cout << "trial " << trial << ": " << (ok ? "exact" : "MISMATCH")
              << " (max |X| ratio " << fmt17(bound_rep.max_ratio) << ")\n";
  }
  std::cout << "verify-martingale: " << exact_trials << "/" << o.trials
            << " exact, eta_{k-1} = " << to_string(eta) << ", max |X| ratio "
            << fmt17(max_ratio) << "\n";
  if (!o.out.empty()) {
    json doc{{"trials", o.trials},
             {"exact", exact_trials},
             {"eta", to_string(eta)},
             {"max_ratio", max_ratio}};
    atomic_write(o.out, doc.dump(2) + "\n");
  }
  write_manifest(g, "verify-martingale",
                 json{{"fam", family_json(o.fam)}, {"trials", o.trials}, {"out", o.out}},
                 {o.out});
  if (!all_exact) throw check_failure("martingale reconstruction mismatch");
  return 0;
}

// ----- bounds -----

struct BoundsOpts {
  std::string theorem;
  std::string params;
  std::string grid;
  std::string out;
};

int run_bounds(const GlobalOpts& g, const BoundsOpts& o) {
  json P = parse_params(o.params);
  std::optional<GridSpec> grid;
  if (!o.grid.empty()) grid = parse_grid(o.grid);
  auto vary = [&](const std::string& name) -> std::vector<double> {
    if (grid && grid->name == name) return grid->values;
    if (!P.contains(name)) throw config_error("params missing \"" + name + "\"");
    return {P.at(name).get<double>()};
  };
  std::ostringstream csv;
  if (o.theorem == "thm5.2") {
    long long N = P.at("N").get<long long>();
    long long m = P.at("m").get<long long>();
    csv << "N,m,a,value,log_value,a_star,nontrivial\n";
    for (double a : vary("a")) {
      auto b = ap3_explicit_bound(N, m, a);
      csv << N << ',' << m << ',' << fmt17(a) << ',' << fmt17(b.value) << ','
          << fmt17(std::log(b.value)) << ',' << fmt17(b.a_star) << ',' << (a > b.a_star ? 1 : 0)
          << '\n';
    }
  } else if (o.theorem == "nearreg" || o.theorem == "nearreg-regular") {
    NearRegQuery q;
    q.N = P.at("N").get<long long>();
    q.k = P.at("k").get<int>();
    q.r = P.at("r").get<int>();
    q.m = P.at("m").get<long long>();
    q.eta = P.at("eta").get<double>();
    q.delta_r = P.at("delta_r").get<double>();
    q.h = P.at("h").get<long long>();
    q.constants = load_constants(g.constants_path, q.k, q.r);
    csv << "N,k,r,m,eta,delta_r,h,c1,log_c2,a,value,log_value,valid,log_threshold\n";
    for (double a : vary("a")) {
      q.a = a;
      BoundResult b = o.theorem == "nearreg" ? nearreg_bound(q) : regular_variant_bound(q);
      csv << q.N << ',' << q.k << ',' << q.r << ',' << q.m << ',' << fmt17(q.eta) << ','
          << fmt17(q.delta_r) << ',' << q.h << ',' << fmt17(q.constants.c1) << ','
          << fmt17(q.constants.log_c2) << ',' << fmt17(a) << ',' << fmt17(b.value) << ','
          << fmt17(b.log_value) << ',' << (b.valid ? 1 : 0) << ',' << fmt17(b.threshold) << '\n';
    }
  } else if (o.theorem == "azuma") {
    std::vector<double> c;
    if (P.contains("c"))
      for (const auto& v : P.at("c")) c.push_back(v.get<double>());
    else if (P.contains("sum_c2"))
      c.push_back(std::sqrt(P.at("sum_c2").get<double>()));
    else
      throw config_error("azuma needs \"c\" (array) or \"sum_c2\"");
    csv << "a,sum_c2,value,log_value,valid\n";
    double s2 = 0;
    for (double ci : c) s2 += ci * ci;
    for (double a : vary("a")) {
      auto b = azuma(c, a);
      csv << fmt17(a) << ',' << fmt17(s2) << ',' << fmt17(b.value) << ',' << fmt17(b.log_value)
          << ',' << (b.valid ? 1 : 0) << '\n';
    }
  } else if (o.theorem == "pmodel-rate") {
    int k = P.at("k").get<int>();
    double p = P.at("p").get<double>();
    long long N = P.at("N").get<long long>();
    RateVariant variant = RateVariant::generic;
    if (P.contains("variant")) {
      std::string v = P.at("variant").get<std::string>();
      if (v == "triangle-free")
        variant = RateVariant::triangle_free_k3;
      else if (v == "sidon")
        variant = RateVariant::sidon_k4;
      else if (v != "generic")
        throw config_error("variant must be generic|triangle-free|sidon");
    }
    csv << "N,k,p,delta,rate,value\n";
    for (double delta : vary("delta")) {
      double rate = pmodel_rate(k, delta, p, N, variant);
      csv << N << ',' << k << ',' << fmt17(p) << ',' << fmt17(delta) << ',' << fmt17(rate) << ','
          << fmt17(std::exp(-rate)) << '\n';
    }
  } else {
    throw config_error("unknown theorem: " + o.theorem +
                       " (want thm5.2|nearreg|nearreg-regular|azuma|pmodel-rate)");
  }
  emit(o.out, csv.str());
  write_manifest(g, "bounds",
                 json{{"theorem", o.theorem}, {"params", o.params}, {"grid", o.grid}, {"out", o.out}},
                 {o.out});
  return 0;
}

// ----- simulate -----

struct SimulateOpts {
  FamilyOpts fam;
  std::string model;  // m | p
  std::string param;  // m value or p as exact rational text
  std::vector<double> thresholds;
  long long samples = 100000;
  std::string bound = "none";  // none | thm5.2
  std::string kernel = "auto";  // auto | naive | ap3
  std::string out;
};

int run_simulate(const GlobalOpts& g, const SimulateOpts& o) {
  Hypergraph H = load_family(o.fam, g.budget);
  if (o.model != "m" && o.model != "p") throw config_error("model must be m or p");
  if (o.thresholds.empty()) throw config_error("need at least one threshold");
  Rat param = parse_rat(o.param);
  Rat mean;
  double param_f = to_double(param);
  if (o.model == "m") {
    if (denominator(param) != 1 || param < 0 || param > H.N)
      throw config_error("m must be an integer in [0, N]");
    mean = expected_partial(H.N, H.k, H.h(), H.k, numerator(param).convert_to<long long>());
  } else {
    if (param <= 0 || param >= 1) throw config_error("p must lie in (0,1)");
    Rat pk = 1;
    for (int i = 0; i < H.k; ++i) pk *= param;
    mean = pk * H.h();
  }
  bool use_kernel = o.kernel == "ap3" ||
                    (o.kernel == "auto" && o.fam.family == "kap" && H.k == 3 && is_prime(H.N));
  if (o.kernel == "ap3" && !(H.k == 3 && is_prime(H.N)))
    throw config_error("ap3 kernel needs the 3-AP family on a prime modulus");
  std::function<long long(const std::vector<int>&)> counter;
  if (use_kernel) {
    int N = H.N;
    counter = [N](const std::vector<int>& B) -> long long {
      thread_local std::unique_ptr<Ap3Kernel> ker;
      thread_local int kerN = -1;
      if (kerN != N) {
        ker = std::make_unique<Ap3Kernel>(N);
        kerN = N;
      }
      return ker->count(B);
    };
  } else {
    counter = [&H](const std::vector<int>& B) { return count_induced(H, B); };
  }
  TailEstimateConfig cfg;
  cfg.n_samples = o.samples;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  auto st = tail_estimate(H.N, o.model, param_f, counter, mean, o.thresholds, cfg);

  bool want_bound = o.bound == "thm5.2";
  if (o.bound != "none" && o.bound != "thm5.2")
    throw config_error("bound must be none or thm5.2");
  if (want_bound && !(o.model == "m" && o.fam.family == "kap" && H.k == 3))
    throw config_error("thm5.2 applies to the 3-AP family in the m-model");
  std::ostringstream csv;
  csv << "threshold,side,exceedances,samples,estimate,ci_lo,ci_hi,bound_value,bound_valid\n";
  const char* sides[3] = {"abs", "plus", "minus"};
  for (size_t i = 0; i < st.thresholds.size(); ++i) {
    long long counts[3] = {st.exceed_abs[i], st.exceed_plus[i], st.exceed_minus[i]};
    for (int s = 0; s < 3; ++s) {
      auto ci = clopper_pearson(counts[s], st.n_samples, 0.95);
      std::string bv = "nan";
      int bvalid = 0;
      if (want_bound && s == 0) {
        auto b = ap3_explicit_bound(H.N, numerator(param).convert_to<long long>(),
                                    st.thresholds[i]);
        bv = fmt17(b.value);
        bvalid = st.thresholds[i] > 0 ? 1 : 0;
      }
      csv << fmt17(st.thresholds[i]) << ',' << sides[s] << ',' << counts[s] << ','
          << st.n_samples << ',' << fmt17(static_cast<double>(counts[s]) / st.n_samples) << ','
          << fmt17(ci.lo) << ',' << fmt17(ci.hi) << ',' << bv << ',' << bvalid << '\n';
    }
  }
  emit(o.out, csv.str());
  write_manifest(g, "simulate",
                 json{{"fam", family_json(o.fam)},
                      {"model", o.model},
                      {"param", o.param},
                      {"thresholds", o.thresholds},
                      {"samples", o.samples},
                      {"bound", o.bound},
                      {"kernel", o.kernel},
                      {"out", o.out}},
                 {o.out});
  return 0;
}

// ----- construct -----

struct ConstructOpts {
  int r = 2;
  int l = 0;
  int s = 0;
  std::string gamma = "1/4";
  bool relaxed = false;
  std::string out;
  std::string report;
};

int run_construct(const GlobalOpts& g, const ConstructOpts& o) {
  PartiteSpec spec;
  spec.r = o.r;
  spec.l = o.l;
  spec.s = o.s;
  spec.gamma = parse_rat(o.gamma);
  spec.strict_mode = !o.relaxed;
  auto warnings = validate_partite_spec(spec);
  auto weights = build_weights(spec);
  PartiteFamily F = build_partite(spec, weights);
  Hypergraph H = F.materialize(g.budget);
  std::ostringstream ss;
  write_edge_list(ss, H);
  emit(o.out, ss.str());

  auto nice = niceness_check(H, spec, Rat(1, 10), g.budget);
  auto q = q_coefficients(F);
  json qj = json::array();
  for (const auto& c : q) qj.push_back(c.str());
  json wj = json::object();
  for (const auto& [x, a] : weights) wj[x.str()] = to_string(a);
  json dj = json::object();
  for (const auto& [x, a] : weights) {
    auto d = abstract_degree(x, weights, spec, g.budget);
    dj[x.str()] = json{{"value", d.value}, {"exact", d.exact}};
  }
  json doc{{"r", o.r},
           {"l", o.l},
           {"s", o.s},
           {"gamma", to_string(spec.gamma)},
           {"relaxed", o.relaxed},
           {"N", spec.N()},
           {"h", H.h()},
           {"weights", wj},
           {"abstract_degrees", dj},
           {"q_coefficients", qj},
           {"niceness",
            json{{"eta", to_string(nice.eta)},
                 {"eta_float", to_double(nice.eta)},
                 {"density", to_string(nice.density)},
                 {"density_float", to_double(nice.density)},
                 {"delta_r", nice.delta_r},
                 {"c_r", nice.c_r.str()},
                 {"near_regular_ok", nice.near_regular_ok},
                 {"density_ok", nice.density_ok},
                 {"max_degree_ok", nice.max_degree_ok},
                 {"coefficient_ok", nice.coefficient_ok},
                 {"strict_regime", nice.strict_regime}}},
           {"warnings", warnings}};
  if (!o.report.empty()) atomic_write(o.report, doc.dump(2) + "\n");
  write_manifest(g, "construct",
                 json{{"r", o.r},
                      {"l", o.l},
                      {"s", o.s},
                      {"gamma", o.gamma},
                      {"relaxed", o.relaxed},
                      {"out", o.out},
                      {"report", o.report}},
                 {o.out, o.report});
  return 0;
}

// ----- transfer -----

struct TransferOpts {
  FamilyOpts fam;
  std::string p = "1/2";
  std::string a = "0";
  std::string out;
};

int run_transfer(const GlobalOpts& g, const TransferOpts& o) {
  Hypergraph H = load_family(o.fam, g.budget);
  Rat p = parse_rat(o.p), a = parse_rat(o.a);
  Rat value = pmodel_transfer_exact(H, p, a, g.budget);
  json doc{{"N", H.N},
           {"k", H.k},
           {"h", H.h()},
           {"p", to_string(p)},
           {"a", to_string(a)},
           {"probability", to_string(value)},
           {"probability_float", to_double(value)}};
  emit(o.out, doc.dump(2) + "\n");
  write_manifest(g, "transfer",
                 json{{"fam", family_json(o.fam)}, {"p", o.p}, {"a", o.a}, {"out", o.out}},
                 {o.out});
  return 0;
}

// ----- rerun -----

int dispatch(const GlobalOpts& g, const std::string& sub, const json& opt) {
  if (sub == "build") {
    BuildOpts o;
    family_from_json(opt.at("fam"), o.fam);
    o.out = opt.at("out").get<std::string>();
    return run_build(g, o);
  }
  if (sub == "analyze") {
    AnalyzeOpts o;
    family_from_json(opt.at("fam"), o.fam);
    o.rs = opt.at("rs").get<std::vector<int>>();
    o.out = opt.at("out").get<std::string>();
    return run_analyze(g, o);
  }
  if (sub == "verify-martingale") {
    VerifyOpts o;
    family_from_json(opt.at("fam"), o.fam);
    o.trials = opt.at("trials").get<int>();
    o.out = opt.at("out").get<std::string>();
    return run_verify(g, o);
  }
  if (sub == "bounds") {
    BoundsOpts o;
    o.theorem = opt.at("theorem").get<std::string>();
    o.params = opt.at("params").get<std::string>();
    o.grid = opt.at("grid").get<std::string>();
    o.out = opt.at("out").get<std::string>();
    return run_bounds(g, o);
  }
  if (sub == "simulate") {
    SimulateOpts o;
    family_from_json(opt.at("fam"), o.fam);
    o.model = opt.at("model").get<std::string>();
    o.param = opt.at("param").get<std::string>();
    o.thresholds = opt.at("thresholds").get<std::vector<double>>();
    o.samples = opt.at("samples").get<long long>();
    o.bound = opt.at("bound").get<std::string>();
    o.kernel = opt.at("kernel").get<std::string>();
    o.out = opt.at("out").get<std::string>();
    return run_simulate(g, o);
  }
  if (sub == "construct") {
    ConstructOpts o;
    o.r = opt.at("r").get<int>();
    o.l = opt.at("l").get<int>();
    o.s = opt.at("s").get<int>();
    o.gamma = opt.at("gamma").get<std::string>();
    o.relaxed = opt.at("relaxed").get<bool>();
    o.out = opt.at("out").get<std::string>();
    o.report = opt.at("report").get<std::string>();
    return run_construct(g, o);
  }
  if (sub == "transfer") {
    TransferOpts o;
    family_from_json(opt.at("fam"), o.fam);
    o.p = opt.at("p").get<std::string>();
    o.a = opt.at("a").get<std::string>();
    o.out = opt.at("out").get<std::string>();
    return run_transfer(g, o);
  }
  throw config_error("manifest has unknown subcommand: " + sub);
}

int run_rerun(const std::string& manifest_path) {
  json m;
  try {
    m = json::parse(slurp(manifest_path));
  } catch (const json::parse_error& e) {
    throw config_error(std::string("bad manifest: ") + e.what());
  }
  if (m.at("version").get<std::string>() != kVersion)
    throw config_error("manifest version mismatch: " + m.at("version").get<std::string>());
  GlobalOpts g;
  global_from_json(m.at("global"), g);
  g.manifest_path = manifest_path;  // keep the manifest where it was
  return dispatch(g, m.at("subcommand").get<std::string>(), m.at("options"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured hypergraph families, martingale verification, tail bounds"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  GlobalOpts g;
  if (const char* env = std::getenv("HYPERDEV_BUDGET")) g.budget = std::atoll(env);
  app.add_option("--seed", g.seed, "master RNG seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker thread cap")->capture_default_str();
  app.add_option("--budget", g.budget, "enumeration budget (env HYPERDEV_BUDGET)")
      ->capture_default_str();
  app.add_option("--constants", g.constants_path, "constants pack JSON {c1, log_c2}");
  app.add_option("--manifest", g.manifest_path, "manifest output path");

  BuildOpts bo;
  auto* cb = app.add_subcommand("build", "emit a family as an edge list");
  add_family_flags(cb, bo.fam, false);
  cb->add_option("--out", bo.out, "output path (default stdout)");

  AnalyzeOpts ao;
  auto* ca = app.add_subcommand("analyze", "regularity report (JSON)");
  add_family_flags(ca, ao.fam);
  ca->add_option("--r", ao.rs, "degree orders, e.g. --r 1 2")->delimiter(',');
  ca->add_option("--out", ao.out, "output path (default stdout)");

  VerifyOpts vo;
  auto* cv = app.add_subcommand("verify-martingale",
                                "check the exact deviation reconstruction along trajectories");
  add_family_flags(cv, vo.fam);
  cv->add_option("--trials", vo.trials, "number of random trajectories")->capture_default_str();
  cv->add_option("--out", vo.out, "JSON summary path");

  BoundsOpts bdo;
  auto* cbd = app.add_subcommand("bounds", "evaluate a tail bound over a parameter grid (CSV)");
  cbd->add_option("--theorem", bdo.theorem, "thm5.2 | nearreg | nearreg-regular | azuma | pmodel-rate")
      ->required();
  cbd->add_option("--params", bdo.params, "JSON object or file; bare keys accepted")->required();
  cbd->add_option("--grid", bdo.grid, "vary one key: name=lo:hi:step or name=v1,v2,...");
  cbd->add_option("--out", bdo.out, "output path (default stdout)");

  SimulateOpts so;
  auto* cs = app.add_subcommand("simulate", "Monte Carlo deviation tails (CSV)");
  add_family_flags(cs, so.fam);
  cs->add_option("--model", so.model, "m (uniform m-subset) or p (binomial)")->required();
  cs->add_option("--param", so.param, "m value or p as a rational/decimal")->required();
  cs->add_option("--thresholds", so.thresholds, "deviation thresholds, ascending")
      ->required()
      ->delimiter(',');
  cs->add_option("--samples", so.samples, "Monte Carlo samples")->capture_default_str();
  cs->add_option("--bound", so.bound, "none | thm5.2 (abs rows get bound columns)")
      ->capture_default_str();
  cs->add_option("--kernel", so.kernel, "auto | naive | ap3")->capture_default_str();
  cs->add_option("--out", so.out, "output path (default stdout)");

  ConstructOpts co;
  auto* cc = app.add_subcommand("construct", "build an l-part family, emit edges + niceness report");
  cc->add_option("--r", co.r, "niceness order r (edges are (r+1)-sets)")->required();
  cc->add_option("--l", co.l, "number of parts")->required();
  cc->add_option("--s", co.s, "part size")->required();
  cc->add_option("--gamma", co.gamma, "density knob (rational)")->capture_default_str();
  cc->add_flag("--relaxed", co.relaxed, "drop the strict l = 4(r+1)! regime");
  cc->add_option("--out", co.out, "edge list path (default stdout)");
  cc->add_option("--report", co.report, "niceness report JSON path");

  TransferOpts to;
  auto* ct = app.add_subcommand("transfer", "exact p-model tail via the m-model mixture (JSON)");
  add_family_flags(ct, to.fam);
  ct->add_option("--p", to.p, "inclusion probability (rational)")->capture_default_str();
  ct->add_option("--a", to.a, "deviation threshold (rational)")->capture_default_str();
  ct->add_option("--out", to.out, "output path (default stdout)");

  std::string rerun_manifest;
  auto* cr = app.add_subcommand("rerun", "replay a manifest; outputs reproduce byte for byte");
  cr->add_option("--manifest", rerun_manifest, "manifest path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cb->parsed()) return run_build(g, bo);
    if (ca->parsed()) return run_analyze(g, ao);
    if (cv->parsed()) return run_verify(g, vo);
    if (cbd->parsed()) return run_bounds(g, bdo);
    if (cs->parsed()) return run_simulate(g, so);
    if (cc->parsed()) return run_construct(g, co);
    if (ct->parsed()) return run_transfer(g, to);
    if (cr->parsed()) return run_rerun(rerun_manifest);
    throw config_error("no subcommand");
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const check_failure& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
