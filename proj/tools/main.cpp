#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gibbsrec/config.hpp"
#include "gibbsrec/counterexample.hpp"
#include "gibbsrec/detect.hpp"
#include "gibbsrec/errors.hpp"
#include "gibbsrec/experiment.hpp"
#include "gibbsrec/ifs.hpp"
#include "gibbsrec/rate.hpp"
#include "gibbsrec/report.hpp"
#include "gibbsrec/sampling.hpp"
#include "gibbsrec/series.hpp"
#include "gibbsrec/sft.hpp"
#include "gibbsrec/thermo.hpp"

namespace {

using namespace gibbsrec;
namespace fs = std::filesystem;

struct CliOpts {
  std::string config;
  std::string out = ".";
  int workers = 1;
  bool svg = false;
};

void emit_error(const char* code, const std::string& detail) {
  Json err;
  err["error"] = code;
  err["detail"] = detail;
  std::cerr << err.dump() << "\n";
}

fs::path ensure_out(const CliOpts& o) {
  fs::path out{o.out};
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out.string());
  return out;
}

const Json& section(const RunConfig& cfg, const char* name) {
  if (!cfg.raw.contains(name))
    throw ConfigError(std::string("config needs a \"") + name + "\" section");
  return cfg.raw.at(name);
}

std::int64_t need_i64(const Json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw ConfigError(std::string(where) + "." + key + " must be an integer");
  return j.at(key).get<std::int64_t>();
}

double need_f64(const Json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ConfigError(std::string(where) + "." + key + " must be a number");
  return j.at(key).get<double>();
}

// Every report repeats the input document and the seed, so a result file
// alone identifies the run that produced it.  The worker count is absent on
// purpose: output never depends on it.
Json report_head(const char* command, const RunConfig& cfg) {
  Json j;
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["config"] = cfg.raw;
  return j;
}

void write_json(const fs::path& out, const char* name, const Json& j) {
  write_file(out / name, j.dump(2) + "\n");
}

int status_code(EventStatus s) {
  switch (s) {
    case EventStatus::kSatisfied:
      return 1;
    case EventStatus::kUnsatisfied:
      return 0;
    case EventStatus::kUndecidable:
      return -1;
  }
  return -1;
}

const char* verdict_name(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::kConverged:
      return "converged";
    case SeriesVerdict::kDiverging:
      return "diverging";
    case SeriesVerdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

const char* gkind_name(GKind k) {
  switch (k) {
    case GKind::kSqrtLogLog:
      return "sqrt_loglog";
    case GKind::kScaledSqrtLogLog:
      return "scaled_sqrt_loglog";
    case GKind::kConst:
      return "const";
  }
  return "const";
}

Json model_json(const GibbsModel& m) {
  Json j;
  j["K"] = m.K();
  j["mixing_exponent"] = m.mixing_exponent;
  j["lambda"] = m.lambda;
  j["pressure"] = m.P;
  j["h_mu"] = m.h_mu;
  j["rho_mu"] = m.rho_mu;
  j["rho_tail_bound"] = m.rho_tail_bound;
  j["slow_mixing"] = m.slow_mixing;
  j["gibbs_C"] = m.C;
  j["decay_D"] = m.D;
  j["decay_gamma"] = m.gamma;
  j["decay_D_raw"] = m.D_raw;
  j["decay_gamma_raw"] = m.gamma_raw;
  j["cohomologous_to_constant"] = m.cohomologous_to_constant();
  j["stationary"] = m.pi;
  Json rows = Json::array();
  for (int i = 1; i <= m.K(); ++i) {
    Json row = Json::array();
    for (int k = 1; k <= m.K(); ++k) row.push_back(m.p(i, k));
    rows.push_back(std::move(row));
  }
  j["transition"] = rows;
  j["h_vec"] = m.h_vec;
  j["l_vec"] = m.l_vec;
  return j;
}

void cmd_gibbs(const CliOpts& o) {
  RunConfig cfg = load_config(o.config);
  const fs::path out = ensure_out(o);
  GibbsModel m = config_model(cfg);
  Json j = report_head("gibbs", cfg);
  j["model"] = model_json(m);
  write_json(out, "gibbs.json", j);
  // The report is still written: the flag and the zero variance are visible
  // in it, but a degenerate model supports none of the downstream scalings,
  // so the run as a whole does not succeed.
  if (m.cohomologous_to_constant())
    throw DegenerateModelError(
        "potential is cohomologous to a constant (rho_mu = 0)");
}

void cmd_threshold(const CliOpts& o) {
  RunConfig cfg = load_config(o.config);
  const fs::path out = ensure_out(o);
  GibbsModel m = config_model(cfg);
  const Json& t = section(cfg, "threshold");
  const double eps = need_f64(t, "eps", "threshold");
  const std::int64_t n_max = need_i64(t, "n_max", "threshold");
  if (n_max < 1) throw ConfigError("threshold.n_max must be >= 1");
  if (n_max > 10000000)
    throw ConfigError("threshold.n_max is limited to 1e7 rows");

  CsvWriter csv({"n", "psi_minus", "psi_plus"});
  for (std::int64_t n = 1; n <= n_max; ++n)
    csv.row({fmt_int(n), fmt_int(psi_minus_value(n, m.h_mu, m.rho_mu, eps)),
             fmt_int(psi_plus_value(n, m.h_mu, m.rho_mu, eps))});
  write_file(out / "threshold.csv", csv.text());

  Json j = report_head("threshold", cfg);
  j["h_mu"] = m.h_mu;
  j["rho_mu"] = m.rho_mu;
  j["eps"] = eps;
  j["n_max"] = n_max;
  j["psi_minus_at_n_max"] = psi_minus_value(n_max, m.h_mu, m.rho_mu, eps);
  j["psi_plus_at_n_max"] = psi_plus_value(n_max, m.h_mu, m.rho_mu, eps);
  write_json(out, "threshold.json", j);
}

void cmd_series(const CliOpts& o) {
  RunConfig cfg = load_config(o.config);
  const fs::path out = ensure_out(o);
  GibbsModel m = config_model(cfg);
  RateFunction psi = config_rate(cfg, &m);
  const Json& s = section(cfg, "series");
  const double eps = need_f64(s, "eps", "series");
  const std::int64_t N = need_i64(s, "N", "series");
  const double tol = s.contains("tol") ? need_f64(s, "tol", "series") : 1e-3;

  SeriesReport rep = convergence_series(psi, m.h_mu, m.rho_mu, eps, N, tol);

  CsvWriter csv({"n", "partial_sum"});
  std::vector<double> xs, ys;
  for (const auto& ps : rep.partial_sums) {
    csv.row({fmt_int(ps.n), fmt_double(ps.value)});
    xs.push_back(std::log10(static_cast<double>(ps.n)));
    ys.push_back(ps.value);
  }
  write_file(out / "series.csv", csv.text());
  if (o.svg)
    write_file(out / "series.svg",
               svg_line_plot(xs, ys, "partial sums over log10 n"));

  Json j = report_head("series", cfg);
  j["verdict"] = verdict_name(rep.verdict);
  j["h_mu"] = m.h_mu;
  j["rho_mu"] = m.rho_mu;
  j["eps_requested"] = rep.eps_requested;
  j["eps_used"] = rep.eps_used;
  j["N"] = rep.N;
  j["tol"] = rep.tol;
  j["sum_at_N"] = rep.sum_at_N;
  j["tail_past_N"] = rep.tail_past_N;
  j["certified_tail"] = rep.certified_tail;
  Json geo;
  geo["valid"] = rep.geometric.valid;
  geo["audited_from"] = rep.geometric.audited_from;
  geo["q"] = rep.geometric.q;
  geo["log_term_at_end"] = rep.geometric.log_term_at_end;
  geo["tail_bound"] = rep.geometric.tail_bound;
  Json ana;
  ana["valid"] = rep.analytic.valid;
  ana["eps_used"] = rep.analytic.eps_used;
  ana["u0"] = rep.analytic.u0;
  ana["U"] = rep.analytic.U;
  ana["margin_at_u0"] = rep.analytic.margin_at_u0;
  ana["margin_at_end"] = rep.analytic.margin_at_end;
  ana["first_term"] = rep.analytic.first_term;
  ana["integral_piece"] = rep.analytic.integral_piece;
  ana["tail_beyond_audit"] = rep.analytic.tail_beyond_audit;
  ana["tail_bound"] = rep.analytic.tail_bound;
  Json gro;
  gro["valid"] = rep.growth.valid;
  gro["increments"] = rep.growth.increments;
  Json certs;
  certs["geometric"] = geo;
  certs["analytic"] = ana;
  certs["growth"] = gro;
  j["certificates"] = certs;
  write_json(out, "series.json", j);
}

void cmd_recur(const CliOpts& o) {
  RunConfig cfg = load_config(o.config);
  const fs::path out = ensure_out(o);
  GibbsModel m = config_model(cfg);
  RateFunction psi = config_rate(cfg, &m);
  const Json& e = section(cfg, "experiment");
  const std::int64_t length = need_i64(e, "length", "experiment");
  const std::int64_t trials = need_i64(e, "trials", "experiment");
  std::vector<CountWindow> windows = config_windows(e);
  if (windows.empty()) windows.push_back(CountWindow{1, length});
  if (length < 1 || trials < 1)
    throw ConfigError("experiment needs length >= 1 and trials >= 1");

  SamplePlan plan(length, trials, cfg.seed);
  ExperimentSummary sum = run_experiment(m, psi, plan, windows, o.workers);

  CsvWriter wcsv({"lo", "hi", "total_events", "trials_hit", "mean_events",
                  "hit_fraction"});
  for (const auto& ws : sum.windows)
    wcsv.row({fmt_int(ws.window.lo), fmt_int(ws.window.hi),
              fmt_int(ws.total_events), fmt_int(ws.trials_hit),
              fmt_double(ws.mean_events), fmt_double(ws.hit_fraction)});
  write_file(out / "recur_windows.csv", wcsv.text());

  CsvWriter tcsv({"trial", "events", "last_event"});
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < sum.per_trial.size(); ++i) {
    tcsv.row({fmt_int(static_cast<std::int64_t>(i)),
              fmt_int(sum.per_trial[i].events),
              fmt_int(sum.per_trial[i].last_event)});
    xs.push_back(static_cast<double>(i));
    ys.push_back(static_cast<double>(sum.per_trial[i].events));
  }
  write_file(out / "recur_trials.csv", tcsv.text());
  if (o.svg)
    write_file(out / "recur_hits.svg",
               svg_line_plot(xs, ys, "events per trial"));

  CsvWriter hcsv({"events", "trials"});
  for (std::size_t c = 0; c < sum.histogram.size(); ++c)
    hcsv.row({fmt_int(static_cast<std::int64_t>(c)),
              fmt_int(sum.histogram[c])});
  write_file(out / "recur_histogram.csv", hcsv.text());

  Json j = report_head("recur", cfg);
  j["trials"] = sum.trials;
  j["horizon"] = sum.horizon;
  j["word_length"] = sum.word_length;
  j["mean_events"] = sum.mean_events;
  Json wj = Json::array();
  for (const auto& ws : sum.windows) {
    Json one;
    one["lo"] = ws.window.lo;
    one["hi"] = ws.window.hi;
    one["total_events"] = ws.total_events;
    one["trials_hit"] = ws.trials_hit;
    one["mean_events"] = ws.mean_events;
    one["hit_fraction"] = ws.hit_fraction;
    wj.push_back(std::move(one));
  }
  j["windows"] = wj;
  write_json(out, "recur.json", j);
}

GFunction parse_g(const Json& cj) {
  if (!cj.contains("g")) throw ConfigError("counterexample.g is required");
  const Json& gj = cj.at("g");
  std::string kind;
  double scale = 1.0;
  bool has_scale = false;
  if (gj.is_string()) {
    kind = gj.get<std::string>();
  } else if (gj.is_object()) {
    if (!gj.contains("kind") || !gj.at("kind").is_string())
      throw ConfigError("counterexample.g.kind must be a string");
    kind = gj.at("kind").get<std::string>();
    if (gj.contains("c")) {
      if (!gj.at("c").is_number())
        throw ConfigError("counterexample.g.c must be a number");
      scale = gj.at("c").get<double>();
      has_scale = true;
    }
  } else {
    throw ConfigError("counterexample.g must be a string or an object");
  }
  if (kind == "sqrt_loglog") return GFunction::sqrt_loglog();
  if (kind == "scaled_sqrt_loglog") {
    if (!has_scale)
      throw ConfigError("counterexample.g needs \"c\" for scaled_sqrt_loglog");
    return GFunction::scaled_sqrt_loglog(scale);
  }
  if (kind == "const") {
    if (!has_scale) throw ConfigError("counterexample.g needs \"c\" for const");
    return GFunction::constant(scale);
  }
  throw ConfigError("unknown counterexample.g kind \"" + kind + "\"");
}

void cmd_counterexample(const CliOpts& o) {
  RunConfig cfg = load_config(o.config);
  const fs::path out = ensure_out(o);
  GibbsModel m = config_model(cfg);
  const Json& c = section(cfg, "counterexample");
  const GFunction g = parse_g(c);
  const std::int64_t horizon = need_i64(c, "horizon", "counterexample");
  const std::int64_t level_cap =
      c.contains("level_cap") ? need_i64(c, "level_cap", "counterexample")
                              : std::int64_t{1000000000};

  Counterexample cx =
      counterexample_rate(g, m.h_mu, m.rho_mu, horizon, level_cap);
  const auto trace = divergence_trace(cx, m.h_mu, m.rho_mu, g);

  CsvWriter counts({"n", "on_levels", "exact", "a", "log_a"});
  for (const auto& en : cx.entries)
    counts.row({fmt_int(en.n), fmt_int(en.on_levels ? 1 : 0),
                fmt_int(en.exact ? 1 : 0), fmt_int(en.exact ? en.a : 0),
                fmt_double(en.log_a)});
  write_file(out / "counterexample_counts.csv", counts.text());

  CsvWriter tr({"k", "level", "term", "running"});
  for (const auto& t : trace)
    tr.row({fmt_int(t.k), fmt_int(t.level), fmt_double(t.term),
            fmt_double(t.running)});
  write_file(out / "counterexample_trace.csv", tr.text());

  Json j = report_head("counterexample", cfg);
  j["h_mu"] = m.h_mu;
  j["rho_mu"] = m.rho_mu;
  Json gj;
  gj["kind"] = gkind_name(g.kind());
  gj["c"] = g.scale();
  j["g"] = gj;
  j["horizon"] = horizon;
  j["level_cap"] = level_cap;
  j["levels"] = cx.levels;
  j["exact_horizon"] = cx.exact_horizon;
  j["domain_end"] = cx.domain_end;
  j["trace_terms"] = static_cast<std::int64_t>(trace.size());
  if (!trace.empty()) j["running_sum"] = trace.back().running;

  // The escape diagnostic needs exact preimage counts, so it sees only the
  // levels inside the exactly held range.
  std::vector<std::int64_t> in_domain;
  for (std::int64_t lv : cx.levels)
    if (lv <= cx.exact_horizon) in_domain.push_back(lv);
  Json c2j;
  c2j["levels"] = in_domain;
  if (!in_domain.empty()) {
    Cond2Report c2 = cond2_check(cx.psi, in_domain, g, m.h_mu, m.rho_mu);
    c2j["passed"] = c2.passed;
    c2j["escape_level"] = c2.escape_level;
    c2j["trace"] = c2.trace;
  } else {
    c2j["passed"] = false;
  }
  j["escape_check"] = c2j;
  write_json(out, "counterexample.json", j);
}

void cmd_ifs(const CliOpts& o) {
  RunConfig cfg = load_config(o.config);
  const fs::path out = ensure_out(o);
  IfsSpec ifs = config_ifs(cfg);
  const Json& ij = section(cfg, "ifs");

  std::optional<GibbsModel> model;
  if (cfg.raw.contains("model")) model.emplace(config_model(cfg));
  RateFunction psi = config_rate(cfg, model ? &*model : nullptr);

  Word w;
  const char* word_source = "config";
  if (ij.contains("word")) {
    const Json& wj = ij.at("word");
    if (!wj.is_array())
      throw ConfigError("ifs.word must be an array of symbols");
    std::vector<std::int32_t> sym;
    for (const auto& s : wj) {
      if (!s.is_number_integer())
        throw ConfigError("ifs.word must be an array of symbols");
      sym.push_back(s.get<std::int32_t>());
    }
    try {
      w = Word(std::move(sym), SftSpec::full_shift(ifs.K()));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("ifs.word: ") + e.what());
    }
  } else {
    if (!model)
      throw ConfigError("ifs needs \"word\" or a model section to sample one");
    if (model->K() != ifs.K())
      throw ConfigError("model alphabet size and ifs map count differ");
    const std::int64_t len = need_i64(ij, "word_length", "ifs");
    if (len < 1) throw ConfigError("ifs.word_length must be >= 1");
    w = sample_sequence(*model, len, derive_trial_seed(cfg.seed, 0));
    word_source = "sampled";
  }
  const std::int64_t L = static_cast<std::int64_t>(w.size());

  std::int64_t lo = 1, hi = L;
  if (ij.contains("range")) {
    const Json& rj = ij.at("range");
    if (!rj.is_array() || rj.size() != 2 || !rj[0].is_number_integer() ||
        !rj[1].is_number_integer())
      throw ConfigError("ifs.range must be [lo, hi]");
    lo = rj[0].get<std::int64_t>();
    hi = rj[1].get<std::int64_t>();
  }
  if (lo < 1 || hi < lo || hi > L)
    throw ConfigError("ifs.range must satisfy 1 <= lo <= hi <= word length");

  SandwichResult sw = tilde_recurrence_sandwich(w, psi, ifs, lo, hi);

  CsvWriter csv({"n", "required_plus", "certified", "required_minus",
                 "possible", "numeric_dist", "numeric_slack"});
  std::vector<double> xs, ys;
  std::int64_t cert_sat = 0, poss_sat = 0, cert_und = 0, violations = 0;
  for (std::size_t i = 0; i < sw.certified.size(); ++i) {
    const RecurrenceEvent& cert = sw.certified[i];
    const RecurrenceEvent& poss = sw.possible[i];
    // The shifted word is empty at n = |w|; no distance to corroborate.
    const NumericGap gap =
        cert.n < L ? numeric_recurrence_gap(w, ifs, cert.n)
                   : NumericGap{std::nan(""), std::nan("")};
    csv.row({fmt_int(cert.n), fmt_int(cert.required),
             fmt_int(status_code(cert.status)), fmt_int(poss.required),
             fmt_int(status_code(poss.status)), fmt_double(gap.dist),
             fmt_double(gap.slack)});
    cert_sat += cert.satisfied() ? 1 : 0;
    poss_sat += poss.satisfied() ? 1 : 0;
    cert_und += cert.decidable() ? 0 : 1;
    violations += cert.satisfied() && !poss.satisfied() ? 1 : 0;
    xs.push_back(static_cast<double>(cert.n));
    ys.push_back(gap.dist);
  }
  write_file(out / "ifs_sandwich.csv", csv.text());
  if (o.svg)
    write_file(out / "ifs_gap.svg",
               svg_line_plot(xs, ys, "projected distance at shift n"));

  Json j = report_head("ifs", cfg);
  Json geo;
  geo["dimension"] = ifs.dimension;
  geo["r"] = ifs.r;
  geo["maps"] = ifs.K();
  geo["center"] = Json::array({ifs.center.x, ifs.center.y});
  geo["radius"] = ifs.radius;
  geo["diam_upper"] = ifs.diam_upper;
  geo["diam_lower"] = ifs.diam_lower;
  geo["diam_capped"] = ifs.diam_capped;
  geo["sep_lower"] = ifs.sep_lower;
  geo["N"] = ifs.N;
  j["ifs"] = geo;
  j["word_source"] = word_source;
  j["word_length"] = L;
  j["range"] = Json::array({lo, hi});
  j["certified_satisfied"] = cert_sat;
  j["possible_satisfied"] = poss_sat;
  j["certified_undecidable"] = cert_und;
  j["containment_violations"] = violations;
  write_json(out, "ifs.json", j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Gibbs measures on mixing subshifts: recurrence rates, series "
      "diagnostics, and attractor projections"};
  app.require_subcommand(1);

  CliOpts o;
  std::function<void(const CliOpts&)> run;
  auto add = [&](const char* name, const char* desc,
                 void (*fn)(const CliOpts&)) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", o.config, "run description (JSON file)")
        ->required();
    sub->add_option("--workers", o.workers, "worker thread count")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "output directory");
    sub->add_flag("--svg", o.svg, "also emit the static plot");
    sub->callback([&run, fn] { run = fn; });
    return sub;
  };

  add("gibbs", "build the model and report its constants", cmd_gibbs);
  add("threshold", "tabulate the lower and upper critical rates",
      cmd_threshold);
  add("series", "diagnose convergence of the recurrence series", cmd_series);
  add("recur", "sample words and count recurrence events", cmd_recur);
  add("counterexample",
      "construct the divergent rate with escaping level terms",
      cmd_counterexample);
  add("ifs", "certify a similarity system and bracket attractor recurrence",
      cmd_ifs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit_error("usage", e.what());
    return 2;
  }

  try {
    if (!run) {
      emit_error("usage", "missing subcommand");
      return 2;
    }
    run(o);
  } catch (const ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const DomainError& e) {
    emit_error("domain", e.what());
    return 2;
  } catch (const NotMixingError& e) {
    emit_error("not_mixing", e.what());
    return 3;
  } catch (const DegenerateModelError& e) {
    emit_error("degenerate_model", e.what());
    return 4;
  } catch (const CannotCertifyError& e) {
    emit_error("cannot_certify", e.what());
    return 5;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
  return 0;
}
