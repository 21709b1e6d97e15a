#include "gibbsrec/config.hpp"

#include <fstream>

#include "gibbsrec/errors.hpp"

namespace gibbsrec {

namespace {

const Json& need(const Json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string(where) + " section needs \"" + key + "\"");
  return *it;
}

std::int64_t need_int(const Json& j, const char* key, const char* where) {
  const Json& v = need(j, key, where);
  if (!v.is_number_integer())
    throw ConfigError(std::string(where) + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

double need_num(const Json& j, const char* key, const char* where) {
  const Json& v = need(j, key, where);
  if (!v.is_number())
    throw ConfigError(std::string(where) + "." + key + " must be a number");
  return v.get<double>();
}

std::vector<std::int64_t> int_list(const Json& v, const char* what) {
  if (!v.is_array())
    throw ConfigError(std::string(what) + " must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& e : v) {
    if (!e.is_number_integer())
      throw ConfigError(std::string(what) + " must be an array of integers");
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) throw ConfigError("cannot read config file " + file.string());
  RunConfig cfg;
  try {
    f >> cfg.raw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.raw.is_object()) throw ConfigError("config root must be an object");
  auto seed = cfg.raw.find("seed");
  if (seed == cfg.raw.end() || !seed->is_number_unsigned())
    throw ConfigError("config needs a nonnegative integer \"seed\"");
  cfg.seed = seed->get<std::uint64_t>();
  cfg.dir = file.has_parent_path() ? file.parent_path()
                                   : std::filesystem::path(".");
  return cfg;
}

GibbsModel config_model(const RunConfig& cfg) {
  const Json& model = need(cfg.raw, "model", "config");
  const bool has_bern = model.contains("bernoulli");
  const bool has_sft = model.contains("sft");
  if (has_bern == has_sft)
    throw ConfigError("model needs exactly one of \"bernoulli\" or \"sft\"");

  if (has_bern) {
    const Json& b = model["bernoulli"];
    const Json& pj = need(b, "p", "model.bernoulli");
    if (!pj.is_array())
      throw ConfigError("model.bernoulli.p must be an array of numbers");
    std::vector<double> p;
    for (const auto& e : pj) {
      if (!e.is_number())
        throw ConfigError("model.bernoulli.p must be an array of numbers");
      p.push_back(e.get<double>());
    }
    try {
      return build_gibbs(BernoulliSpec(std::move(p)));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("model.bernoulli: ") + e.what());
    }
  }

  const Json& s = model["sft"];
  const Json& adj = need(s, "adjacency", "model.sft");
  if (!adj.is_array() || adj.empty())
    throw ConfigError("model.sft.adjacency must be a nonempty 0/1 matrix");
  const int K = static_cast<int>(adj.size());
  std::vector<std::vector<int>> rows;
  for (const auto& r : adj) {
    auto vals = int_list(r, "model.sft.adjacency row");
    rows.emplace_back(vals.begin(), vals.end());
  }
  SftSpec sft = [&] {
    try {
      return SftSpec(K, rows);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("model.sft.adjacency: ") + e.what());
    }
  }();

  const Json& potj = need(s, "potential", "model.sft");
  const int depth = static_cast<int>(need_int(potj, "depth", "potential"));
  try {
    if (potj.contains("constant")) {
      return build_gibbs(
          sft, Potential::constant(sft, depth,
                                   need_num(potj, "constant", "potential")));
    }
    const Json& entries = need(potj, "entries", "potential");
    if (!entries.is_array())
      throw ConfigError("potential.entries must be an array");
    std::vector<std::pair<std::vector<std::int32_t>, double>> tab;
    for (const auto& e : entries) {
      auto word = int_list(need(e, "word", "potential entry"),
                           "potential entry word");
      tab.emplace_back(
          std::vector<std::int32_t>(word.begin(), word.end()),
          need_num(e, "value", "potential entry"));
    }
    return build_gibbs(sft, Potential(sft, depth, tab));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model.sft.potential: ") + e.what());
  }
}

RateFunction config_rate(const RunConfig& cfg, const GibbsModel* model) {
  const Json& rate = need(cfg.raw, "rate", "config");
  const Json& kindj = need(rate, "kind", "rate");
  if (!kindj.is_string()) throw ConfigError("rate.kind must be a string");
  const std::string kind = kindj.get<std::string>();
  const bool clamp = rate.value("clamp", false);

  if (kind == "psi_plus" || kind == "psi_minus") {
    if (model == nullptr)
      throw ConfigError("rate." + kind + " needs a model section for (h, rho)");
    const double eps = need_num(rate, "eps", "rate");
    return kind == "psi_plus"
               ? RateFunction::closed_form_plus(model->h_mu, model->rho_mu,
                                                eps, clamp)
               : RateFunction::closed_form_minus(model->h_mu, model->rho_mu,
                                                 eps, clamp);
  }
  if (kind == "table") {
    std::vector<std::int64_t> values;
    if (rate.contains("values")) {
      values = int_list(rate["values"], "rate.values");
    } else if (rate.contains("path")) {
      const std::filesystem::path p =
          cfg.dir / rate["path"].get<std::string>();
      std::ifstream f(p);
      if (!f) throw ConfigError("cannot read rate table " + p.string());
      std::int64_t v;
      while (f >> v) values.push_back(v);
      if (!f.eof())
        throw ConfigError("rate table " + p.string() +
                          " has non-integer content");
    } else {
      throw ConfigError("rate.table needs \"values\" or \"path\"");
    }
    try {
      return RateFunction::from_table(std::move(values), clamp);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("rate.table: ") + e.what());
    }
  }
  if (kind == "constructed") {
    try {
      return RateFunction::constructed(
          int_list(need(rate, "breakpoints", "rate"), "rate.breakpoints"),
          clamp);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("rate.constructed: ") + e.what());
    }
  }
  throw ConfigError("unknown rate.kind \"" + kind + "\"");
}

IfsSpec config_ifs(const RunConfig& cfg) {
  const Json& ifsj = need(cfg.raw, "ifs", "config");
  const int dim = static_cast<int>(need_int(ifsj, "dimension", "ifs"));
  const double r = need_num(ifsj, "r", "ifs");
  const Json& mapsj = need(ifsj, "maps", "ifs");
  if (!mapsj.is_array()) throw ConfigError("ifs.maps must be an array");
  std::vector<IfsMap> maps;
  try {
    for (const auto& m : mapsj) {
      if (dim == 1) {
        maps.push_back(map_1d(static_cast<int>(need_int(m, "sign", "ifs map")),
                              need_num(m, "t", "ifs map")));
      } else {
        auto t = need(m, "t", "ifs map");
        if (!t.is_array() || t.size() != 2 || !t[0].is_number() ||
            !t[1].is_number())
          throw ConfigError("2d ifs map needs t = [x, y]");
        maps.push_back(map_2d(need_num(m, "angle", "ifs map"),
                              Vec2{t[0].get<double>(), t[1].get<double>()}));
      }
    }
    const int sep_depth =
        static_cast<int>(ifsj.value("sep_depth", std::int64_t{20}));
    return certify_ifs(dim, r, std::move(maps), sep_depth);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("ifs: ") + e.what());
  }
}

std::vector<CountWindow> config_windows(const Json& experiment) {
  std::vector<CountWindow> out;
  if (!experiment.contains("windows")) return out;
  const Json& w = experiment["windows"];
  if (!w.is_array())
    throw ConfigError("experiment.windows must be an array of [lo, hi] pairs");
  for (const auto& e : w) {
    auto pair = int_list(e, "experiment window");
    if (pair.size() != 2)
      throw ConfigError("experiment window must be a [lo, hi] pair");
    out.push_back(CountWindow{pair[0], pair[1]});
  }
  return out;
}

}  // namespace gibbsrec
