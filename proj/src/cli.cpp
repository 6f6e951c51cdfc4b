#include "fermikit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <sstream>
#include <variant>

#include "fermikit/acceptance.hpp"
#include "fermikit/errors.hpp"
#include "fermikit/identities.hpp"
#include "fermikit/multitime.hpp"
#include "fermikit/oracle.hpp"
#include "fermikit/parallel.hpp"
#include "fermikit/statistics.hpp"

namespace fermikit {

namespace {

constexpr double kPi = std::numbers::pi;

using Cell = std::variant<double, long, std::string>;
using Config = std::vector<std::pair<std::string, std::string>>;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : cols_(std::move(columns)) {}
  void add(std::vector<Cell> row) {
    if (row.size() != cols_.size()) throw std::logic_error("table row width mismatch");
    rows_.push_back(std::move(row));
  }

  void write_csv(std::ostream& os, const Config& cfg) const {
    for (const auto& [k, v] : cfg) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < cols_.size(); ++i) os << (i ? "," : "") << csv_field(cols_[i]);
    os << "\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ",";
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) os << fmt17(v);
              else if constexpr (std::is_same_v<T, long>) os << v;
              else os << csv_field(v);
            },
            row[i]);
      }
      os << "\n";
    }
  }

  void write_json(std::ostream& os, const Config& cfg) const {
    nlohmann::ordered_json doc;
    doc["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg) doc["config"][k] = v;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) std::visit([&](const auto& v) { obj[cols_[i]] = v; }, row[i]);
      doc["rows"].push_back(obj);
    }
    os << doc.dump(2) << "\n";
  }

 private:
  std::vector<std::string> cols_;
  std::vector<std::vector<Cell>> rows_;
};

// "a:b:step" inclusive of b up to rounding; a single number gives one point.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0])
    throw DomainError("grid '" + text + "' must be lo:hi:step with step > 0 and hi >= lo");
  const long count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  if (count > 1000000) throw DomainError("grid '" + text + "' has too many points");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(parts[0] + i * parts[2]);
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw DomainError("empty list '" + text + "'");
  return out;
}

// "0.3", "-0.2i", "0.3+0.2i", "0.3-0.2i".
cplx parse_complex(const std::string& text) {
  if (text.empty()) throw DomainError("empty complex number");
  if (text.back() != 'i') return std::stod(text);
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i)
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') split = i;
  auto imag_of = [](const std::string& s) {
    if (s == "+" || s.empty()) return 1.0;
    if (s == "-") return -1.0;
    return std::stod(s);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {std::stod(body.substr(0, split)), imag_of(body.substr(split))};
}

ContourPath parse_path(const std::string& s) {
  if (s == "auto") return ContourPath::automatic;
  if (s == "z") return ContourPath::z_contour;
  if (s == "theta") return ContourPath::theta;
  throw DomainError("path must be auto, z or theta");
}

std::string path_name(ContourPath p) {
  switch (p) {
    case ContourPath::z_contour: return "z";
    case ContourPath::theta: return "theta";
    default: return "auto";
  }
}

struct Common {
  std::string format = "csv";
  std::string output;
  int threads = 0;
};

struct ModelOpts {
  int n = 3;
  double q = 0.5;
  double tol = 1e-10;
  double series_tol = 1e-14;
  std::string path = "auto";
  int max_nodes = 1024;

  EvalOptions eval() const {
    EvalOptions o;
    o.tol = tol;
    o.series_tol = series_tol;
    o.path = parse_path(path);
    o.max_nodes = max_nodes;
    return o;
  }
};

void add_model(CLI::App* sub, ModelOpts& m, bool with_n = true) {
  if (with_n) sub->add_option("--n", m.n, "particle number")->check(CLI::PositiveNumber);
  sub->add_option("--q", m.q, "Boltzmann parameter in (0,1)");
  sub->add_option("--tol", m.tol, "contour refinement tolerance");
  sub->add_option("--series-tol", m.series_tol, "Hermite series truncation");
  sub->add_option("--path", m.path, "auto | z | theta");
  sub->add_option("--max-nodes", m.max_nodes, "contour node budget");
}

// Every option of the app and the chosen subcommand, given or defaulted.
Config resolved_config(const CLI::App& app, const CLI::App* sub) {
  Config cfg;
  cfg.emplace_back("command", sub->get_name());
  auto collect = [&cfg](const CLI::App* a) {
    for (const CLI::Option* opt : a->get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
      std::string value;
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
      } else {
        value = opt->get_default_str();
      }
      cfg.emplace_back(opt->get_lnames()[0], value);
    }
  };
  collect(&app);
  collect(sub);
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-n statistics of free fermions in a harmonic trap at finite temperature"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Common common;
  app.add_option("--format", common.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", common.output, "output file (default stdout)");
  app.add_option("--threads", common.threads, "worker cap (overrides FERMIKIT_THREADS)");

  std::function<int(Table&)> action;
  std::string table_kind;

  // gap
  ModelOpts gap_m;
  std::string gap_region = "-inf:0";
  auto* gap = app.add_subcommand("gap", "probability that all particles lie in a region");
  add_model(gap, gap_m);
  gap->add_option("--region", gap_region, "union of intervals lo:hi,...");
  gap->callback([&] {
    action = [&](Table& t) {
      const ContourValue v = gap_probability(RegionSet::parse(gap_region), ModelParams(gap_m.n, gap_m.q), gap_m.eval());
      t.add({gap_region, v.clamped, v.value, v.im_residual, v.err_est, long(v.nodes), path_name(v.path)});
      return 0;
    };
    table_kind = "gap";
  });

  // rightmost
  ModelOpts rm_m;
  std::string rm_grid = "0";
  auto* rightmost = app.add_subcommand("rightmost", "CDF of the rightmost particle");
  add_model(rightmost, rm_m);
  rightmost->add_option("--s-grid", rm_grid, "lo:hi:step or a single s");
  rightmost->callback([&] {
    action = [&](Table& t) {
      for (double s : parse_grid(rm_grid)) {
        const ContourValue v = rightmost_cdf(s, ModelParams(rm_m.n, rm_m.q), rm_m.eval());
        t.add({s, v.clamped, v.im_residual});
      }
      return 0;
    };
    table_kind = "rightmost";
  });

  // corr
  ModelOpts corr_m;
  std::string corr_points = "0";
  auto* corr = app.add_subcommand("corr", "m-point correlation function");
  add_model(corr, corr_m);
  corr->add_option("--points", corr_points, "x_1,...,x_m");
  corr->callback([&] {
    action = [&](Table& t) {
      const ContourValue v = correlation({parse_list(corr_points), ModelParams(corr_m.n, corr_m.q), corr_m.tol}, corr_m.eval());
      t.add({corr_points, v.value, v.im_residual, long(v.nodes)});
      return 0;
    };
    table_kind = "corr";
  });

  // density
  ModelOpts dens_m;
  std::string dens_grid = "-3:3:0.5";
  auto* dens = app.add_subcommand("density", "one-point density R1/n");
  add_model(dens, dens_m);
  dens->add_option("--x-grid", dens_grid, "lo:hi:step");
  dens->callback([&] {
    action = [&](Table& t) {
      for (double x : parse_grid(dens_grid)) {
        const ContourValue v = density(x, ModelParams(dens_m.n, dens_m.q), dens_m.eval());
        t.add({x, v.value, v.im_residual});
      }
      return 0;
    };
    table_kind = "density";
  });

  // multitime-corr
  ModelOpts mtc_m;
  std::string mtc_points = "0,0.5", mtc_times = "0,0.3";
  auto* mtc = app.add_subcommand("multitime-corr", "multi-time correlation function");
  add_model(mtc, mtc_m);
  mtc->add_option("--points", mtc_points, "x_1,...,x_m");
  mtc->add_option("--times", mtc_times, "tau_1,...,tau_m in [0, -log q)");
  mtc->callback([&] {
    action = [&](Table& t) {
      const ModelParams p(mtc_m.n, mtc_m.q);
      const ContourValue v = multitime_correlation(parse_list(mtc_points), TimeGrid(parse_list(mtc_times), p), p, mtc_m.eval());
      t.add({mtc_points, mtc_times, v.value, v.im_residual, long(v.nodes)});
      return 0;
    };
    table_kind = "multitime-corr";
  });

  // multitime-gap
  ModelOpts mtg_m;
  std::string mtg_regions = "-inf:1;-inf:1", mtg_times = "0,0.3";
  auto* mtg = app.add_subcommand("multitime-gap", "multi-time gap probability");
  add_model(mtg, mtg_m);
  mtg->add_option("--regions", mtg_regions, "one region per time, separated by ';'");
  mtg->add_option("--times", mtg_times, "distinct tau_1,...,tau_m in [0, -log q)");
  mtg->callback([&] {
    action = [&](Table& t) {
      const ModelParams p(mtg_m.n, mtg_m.q);
      std::vector<RegionSet> regions;
      std::stringstream ss(mtg_regions);
      std::string tok;
      while (std::getline(ss, tok, ';')) regions.push_back(RegionSet::parse(tok));
      const ContourValue v = multitime_gap(regions, TimeGrid(parse_list(mtg_times), p), p, mtg_m.eval());
      t.add({mtg_regions, mtg_times, v.clamped, v.value, v.im_residual, long(v.nodes)});
      return 0;
    };
    table_kind = "multitime-gap";
  });

  // limit
  std::string lim_kind;
  std::string lim_t = "0", lim_points = "0,0.5", lim_x = "-1.5:1.5:0.5";
  double lim_c = 1.0, lim_a = 1.0;
  auto* limit = app.add_subcommand("limit", "limiting laws: tw, crossover, sine, interp, bulk-density");
  limit->add_option("kind", lim_kind, "tw | crossover | sine | interp | bulk-density")
      ->required()
      ->check(CLI::IsMember({"tw", "crossover", "sine", "interp", "bulk-density"}));
  limit->add_option("--t", lim_t, "t or lo:hi:step (tw, crossover)");
  limit->add_option("--c", lim_c, "crossover or bulk-density parameter");
  limit->add_option("--points", lim_points, "points (sine, interp)");
  limit->add_option("--a", lim_a, "interp parameter a");
  limit->add_option("--x", lim_x, "x or lo:hi:step (bulk-density)");
  limit->callback([&] {
    table_kind = "limit-" + lim_kind;
    action = [&](Table& t) {
      if (lim_kind == "tw")
        for (double v : parse_grid(lim_t)) t.add({v, limit_tracy_widom(v)});
      else if (lim_kind == "crossover")
        for (double v : parse_grid(lim_t)) t.add({v, limit_crossover(v, lim_c)});
      else if (lim_kind == "sine")
        t.add({lim_points, limit_corr_sine(parse_list(lim_points))});
      else if (lim_kind == "interp")
        t.add({lim_points, limit_corr_interp(parse_list(lim_points), lim_a)});
      else
        for (double v : parse_grid(lim_x)) t.add({v, limit_bulk_density(v, lim_c)});
      return 0;
    };
  });

  // edge-scan
  std::string es_ns = "25,50,100", es_t = "-2:2:1";
  double es_q = 0.1, es_c = 0.0;
  auto* es = app.add_subcommand("edge-scan", "rightmost CDF at 2 sqrt(n) + t n^{-1/6} against its limit");
  es->add_option("--ns", es_ns, "particle numbers");
  es->add_option("--t", es_t, "lo:hi:step");
  es->add_option("--q", es_q, "fixed q (Tracy-Widom regime)");
  es->add_option("--c", es_c, "if > 0, q = exp(-c n^{-1/3}) (crossover regime)");
  es->callback([&] {
    table_kind = "edge-scan";
    action = [&](Table& t) {
      const std::vector<double> ts = parse_grid(es_t);
      std::vector<double> lim;
      for (double v : ts) lim.push_back(es_c > 0 ? limit_crossover(v, es_c) : limit_tracy_widom(v));
      for (double nd : parse_list(es_ns)) {
        const int n = static_cast<int>(nd);
        const double q = es_c > 0 ? std::exp(-es_c * std::pow(n, -1.0 / 3.0)) : es_q;
        for (std::size_t i = 0; i < ts.size(); ++i) {
          const double s = 2 * std::sqrt(n) + ts[i] * std::pow(n, -1.0 / 6.0);
          const double f = rightmost_cdf(s, ModelParams(n, q)).value;
          t.add({long(n), q, ts[i], s, f, lim[i], std::abs(f - lim[i])});
        }
      }
      return 0;
    };
  });

  // bulk-scan
  std::string bs_ns = "25,50,100", bs_xi = "0,0.5", bs_regime = "sine";
  double bs_x = 0.3, bs_q = 0.2, bs_c = 2.0;
  auto* bs = app.add_subcommand("bulk-scan", "scaled bulk correlations against the sine or interpolating limit");
  bs->add_option("--regime", bs_regime, "sine (fixed q) | interp (q = exp(-c/n))")->check(CLI::IsMember({"sine", "interp"}));
  bs->add_option("--ns", bs_ns, "particle numbers");
  bs->add_option("--x", bs_x, "macroscopic position");
  bs->add_option("--xi", bs_xi, "microscopic offsets xi_1,...,xi_m");
  bs->add_option("--q", bs_q, "q for the sine regime");
  bs->add_option("--c", bs_c, "c for the interpolating regime");
  bs->callback([&] {
    table_kind = "bulk-scan";
    action = [&](Table& t) {
      const std::vector<double> xi = parse_list(bs_xi);
      const bool sine = bs_regime == "sine";
      const double a = std::exp(bs_c * bs_x * bs_x) / std::expm1(bs_c);
      const double lim = sine ? limit_corr_sine(xi) : limit_corr_interp(xi, a);
      for (double nd : parse_list(bs_ns)) {
        const int n = static_cast<int>(nd);
        const double q = sine ? bs_q : std::exp(-bs_c / n);
        const double unit = sine ? kPi / (std::sqrt(1 - bs_x * bs_x) * std::sqrt(n)) : kPi / std::sqrt(n / bs_c);
        std::vector<double> pts;
        for (double v : xi) pts.push_back(2 * bs_x * std::sqrt(n) + v * unit);
        EvalOptions o;
        o.max_nodes = 4096;
        const double scaled = correlation({pts, ModelParams(n, q), 1e-10}, o).value * std::pow(unit, double(xi.size()));
        t.add({long(n), q, scaled, lim, std::abs(scaled - lim)});
      }
      return 0;
    };
  });

  // sample
  int smp_n = 3;
  double smp_q = 0.5;
  long smp_draws = 10;
  std::uint64_t smp_seed = 1;
  auto* smp = app.add_subcommand("sample", "draw eigenstates and particle positions");
  smp->add_option("--n", smp_n, "particle number")->check(CLI::Range(1, kOracleMaxN));
  smp->add_option("--q", smp_q, "Boltzmann parameter");
  smp->add_option("--draws", smp_draws, "number of draws")->check(CLI::PositiveNumber);
  smp->add_option("--seed", smp_seed, "stream seed");
  smp->callback([&] {
    table_kind = "sample";
    action = [&](Table& t) {
      const ModelParams p(smp_n, smp_q);
      const RngStream root(smp_seed);
      for (long i = 0; i < smp_draws; ++i) {
        RngStream rng = root.split(static_cast<std::uint64_t>(i));
        const EigenstateSample st = sample_eigenstate(p, rng);
        const std::vector<double> xs = sample_positions(st, rng);
        std::string ks, pos;
        for (long k : st.ks) ks += (ks.empty() ? "" : " ") + std::to_string(k);
        for (double x : xs) pos += (pos.empty() ? "" : " ") + fmt17(x);
        t.add({i, ks, pos});
      }
      return 0;
    };
  });

  // verify-identities
  std::string vi_model = "qtazrp", vi_z = "0.3", vi_mode = "series";
  double vi_q = 0.4, vi_tol = 1e-6;
  int vi_order = 96;
  std::vector<std::string> vi_params;
  auto* vi = app.add_subcommand("verify-identities", "contour-kernel Fredholm identity for a model preset");
  vi->add_option("--model", vi_model, "whittaker | qtasep | qtazrp | asep")
      ->check(CLI::IsMember({"whittaker", "qtasep", "qtazrp", "asep"}));
  vi->add_option("--q", vi_q, "q (tau for asep)");
  vi->add_option("--z", vi_z, "z, e.g. 0.3 or 0.3+0.2i");
  vi->add_option("--order", vi_order, "nodes per circle");
  vi->add_option("--mode", vi_mode, "series | mb")->check(CLI::IsMember({"series", "mb"}));
  vi->add_option("--param", vi_params, "key=v1,v2 model parameter (repeatable)");
  vi->add_option("--tol", vi_tol, "pass threshold on the gap");
  vi->callback([&] {
    table_kind = "verify-identities";
    action = [&](Table& t) {
      std::map<std::string, std::vector<double>> params;
      for (const auto& kv : vi_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw DomainError("--param expects key=values, got '" + kv + "'");
        params[kv.substr(0, eq)] = parse_list(kv.substr(eq + 1));
      }
      const ContourKernelConfig cfg = preset(parse_preset(vi_model), params, vi_q);
      const cplx z = parse_complex(vi_z);
      const KMode mode = vi_mode == "mb" ? KMode::mellin_barnes : KMode::series;
      bool ok = true;
      for (auto form : {IdentityForm::main, IdentityForm::alt}) {
        const IdentityCheck r = verify_identity(cfg, z, vi_order, mode, form);
        ok = ok && r.gap < vi_tol;
        t.add({std::string(form == IdentityForm::main ? "main" : "alt"), r.lhs.real(), r.lhs.imag(), r.rhs.real(),
               r.rhs.imag(), r.gap});
      }
      return ok ? 0 : 3;
    };
  });

  // self-test
  std::uint64_t st_seed = AcceptanceOptions{}.seed;
  std::vector<int> st_only;
  auto* st = app.add_subcommand("self-test", "run the acceptance criteria");
  st->add_option("--seed", st_seed, "seed for the Monte Carlo oracle");
  st->add_option("--only", st_only, "criterion ids to run")->delimiter(',');
  st->callback([&] {
    table_kind = "self-test";
    action = [&](Table& t) {
      AcceptanceOptions o;
      o.seed = st_seed;
      o.only = st_only;
      bool ok = true;
      for (const CriterionResult& r : run_acceptance(o)) {
        ok = ok && r.pass;
        t.add({long(r.id), r.name, std::string(r.pass ? "PASS" : "FAIL"), r.detail});
      }
      return ok ? 0 : 3;
    };
  });

  const std::map<std::string, std::vector<std::string>> columns = {
      {"gap", {"region", "probability", "raw", "im_residual", "err_est", "nodes", "path"}},
      {"rightmost", {"s", "cdf", "im_residual"}},
      {"corr", {"points", "value", "im_residual", "nodes"}},
      {"density", {"x", "density", "im_residual"}},
      {"multitime-corr", {"points", "times", "value", "im_residual", "nodes"}},
      {"multitime-gap", {"regions", "times", "probability", "raw", "im_residual", "nodes"}},
      {"limit-tw", {"t", "F"}},
      {"limit-crossover", {"t", "F"}},
      {"limit-sine", {"points", "R"}},
      {"limit-interp", {"points", "R"}},
      {"limit-bulk-density", {"x", "rho"}},
      {"edge-scan", {"n", "q", "t", "s", "finite", "limit", "abs_error"}},
      {"bulk-scan", {"n", "q", "scaled", "limit", "abs_error"}},
      {"sample", {"draw", "levels", "positions"}},
      {"verify-identities", {"form", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "gap"}},
      {"self-test", {"id", "criterion", "result", "detail"}},
  };

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (common.threads > 0) set_thread_limit(common.threads);
    Table table(columns.at(table_kind));
    const int code = action(table);
    const Config cfg = resolved_config(app, app.get_subcommands().front());
    std::ofstream file;
    if (!common.output.empty()) {
      file.open(common.output);
      if (!file) throw DomainError("cannot open output file '" + common.output + "'");
    }
    std::ostream& os = common.output.empty() ? out : file;
    if (common.format == "json") table.write_json(os, cfg);
    else table.write_csv(os, cfg);
    return code;
  } catch (const ConvergenceError& e) {
    err << "non-convergence: " << e.what() << " (achieved " << e.achieved << ")\n";
    return 3;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace fermikit
