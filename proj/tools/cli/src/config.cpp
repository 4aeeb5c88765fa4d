#include "iterboot/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace iterboot::cli {

namespace {

using nlohmann::json;
using experiments::ModelRecipe;
using experiments::FunctionalRecipe;
using experiments::ThetaRule;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigFileError(field + ": " + message);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!keys.count(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
}

std::string join(const std::string& a, const char* b) { return a.empty() ? std::string(b) : a + "." + b; }

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
    fail(field, "must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "must be a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& field) {
  if (!v.is_boolean()) fail(field, "must be true or false");
  return v.get<bool>();
}

ParamVector vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "must be a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  try {
    return ParamVector(std::move(out));
  } catch (const std::exception&) {
    fail(field, "entries must be finite");
  }
}

Matrix matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "must be a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < v.size(); ++r) {
    const auto row = vector(v[r], field + "[" + std::to_string(r) + "]");
    if (row.size() != v.size()) fail(field, "must be square");
    rows.push_back(row.values());
  }
  return Matrix::from_rows(rows);
}

template <class Enum>
Enum choice(const json& v, const std::string& field, std::initializer_list<std::pair<const char*, Enum>> options) {
  const std::string s = string(v, field);
  std::string names;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    names += names.empty() ? name : std::string(", ") + name;
  }
  fail(field, "'" + s + "' is not one of: " + names);
}

void parse_scaling(const json& j, const std::string& field, ModelRecipe& m) {
  reject_unknown(j, field, {"type", "scale", "a", "b", "matrix"});
  if (!j.contains("type")) fail(join(field, "type"), "required");
  m.scaling = choice<ModelRecipe::Scaling>(j["type"], join(field, "type"),
                                           {{"scalar", ModelRecipe::Scaling::scalar},
                                            {"diagonal_tanh", ModelRecipe::Scaling::diagonal_tanh},
                                            {"constant", ModelRecipe::Scaling::constant}});
  switch (m.scaling) {
    case ModelRecipe::Scaling::scalar:
      if (j.contains("scale")) m.scale = number(j["scale"], join(field, "scale"));
      break;
    case ModelRecipe::Scaling::diagonal_tanh:
      if (!j.contains("a") || !j.contains("b")) fail(field, "diagonal_tanh needs a and b");
      m.tanh_a = number(j["a"], join(field, "a"));
      m.tanh_b = number(j["b"], join(field, "b"));
      if (!(m.tanh_a > std::abs(m.tanh_b))) fail(join(field, "a"), "must exceed |b|");
      break;
    case ModelRecipe::Scaling::constant:
      if (!j.contains("matrix")) fail(join(field, "matrix"), "required for constant scaling");
      m.matrix = matrix(j["matrix"], join(field, "matrix"));
      break;
  }
}

ModelRecipe parse_model(const json& j) {
  const std::string field = "model";
  reject_unknown(j, field, {"type", "scaling", "noise", "directions", "family", "scale", "fallback"});
  if (!j.contains("type")) fail("model.type", "required");
  ModelRecipe m;
  m.kind = choice<ModelRecipe::Kind>(j["type"], "model.type",
                                     {{"gaussian_shift", ModelRecipe::Kind::gaussian_shift},
                                      {"independent_components", ModelRecipe::Kind::independent_components},
                                      {"exponential_family", ModelRecipe::Kind::exponential_family},
                                      {"log_concave_location", ModelRecipe::Kind::log_concave_location}});
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (j.contains(k)) fail(join(field, k), "not valid for this model type");
  };
  switch (m.kind) {
    case ModelRecipe::Kind::gaussian_shift:
      forbid({"noise", "directions", "family", "scale", "fallback"});
      if (j.contains("scaling")) parse_scaling(j["scaling"], "model.scaling", m);
      break;
    case ModelRecipe::Kind::independent_components:
      forbid({"family", "scale", "fallback"});
      if (j.contains("scaling")) parse_scaling(j["scaling"], "model.scaling", m);
      if (j.contains("noise"))
        m.component_noise = choice<models::ComponentNoise>(
            j["noise"], "model.noise",
            {{"rademacher", models::ComponentNoise::rademacher},
             {"uniform", models::ComponentNoise::uniform},
             {"centered_exponential", models::ComponentNoise::centered_exponential},
             {"gaussian", models::ComponentNoise::gaussian}});
      if (j.contains("directions")) {
        const auto& dirs = j["directions"];
        if (!dirs.is_array() || dirs.empty()) fail("model.directions", "must be a nonempty array of vectors");
        std::vector<ParamVector> out;
        for (std::size_t i = 0; i < dirs.size(); ++i)
          out.push_back(vector(dirs[i], "model.directions[" + std::to_string(i) + "]"));
        m.directions = std::move(out);
      }
      break;
    case ModelRecipe::Kind::exponential_family:
      forbid({"scaling", "noise", "directions"});
      if (j.contains("family"))
        m.family = choice<models::ExpFamily>(j["family"], "model.family",
                                             {{"poisson_product", models::ExpFamily::poisson_product},
                                              {"gaussian_mean", models::ExpFamily::gaussian_mean}});
      if (j.contains("scale")) {
        if (m.family != models::ExpFamily::gaussian_mean) fail("model.scale", "only valid for gaussian_mean");
        m.family_scale = number(j["scale"], "model.scale");
        if (!(m.family_scale > 0.0)) fail("model.scale", "must be > 0");
      }
      if (j.contains("fallback")) m.fallback = vector(j["fallback"], "model.fallback");
      break;
    case ModelRecipe::Kind::log_concave_location:
      forbid({"scaling", "directions", "family", "fallback"});
      if (j.contains("noise"))
        m.location_noise = choice<models::LocationNoise>(j["noise"], "model.noise",
                                                         {{"laplace", models::LocationNoise::laplace},
                                                          {"logistic", models::LocationNoise::logistic},
                                                          {"gaussian", models::LocationNoise::gaussian}});
      if (j.contains("scale")) {
        m.location_scale = number(j["scale"], "model.scale");
        if (!(m.location_scale > 0.0)) fail("model.scale", "must be > 0");
      }
      break;
  }
  return m;
}

FunctionalRecipe parse_functional(const json& j) {
  reject_unknown(j, "functional", {"type", "direction", "p", "form", "profile"});
  if (!j.contains("type")) fail("functional.type", "required");
  FunctionalRecipe f;
  f.kind = choice<functionals::Kind>(j["type"], "functional.type",
                                     {{"linear", functionals::Kind::linear},
                                      {"power", functionals::Kind::power},
                                      {"quadratic_form", functionals::Kind::quadratic_form},
                                      {"exp_linear", functionals::Kind::exp_linear},
                                      {"radial", functionals::Kind::radial}});
  if (j.contains("direction")) {
    const auto& d = j["direction"];
    if (d.is_array()) {
      f.direction = FunctionalRecipe::Direction::explicit_values;
      f.u = vector(d, "functional.direction");
    } else {
      f.direction = choice<FunctionalRecipe::Direction>(d, "functional.direction",
                                                        {{"uniform", FunctionalRecipe::Direction::uniform},
                                                         {"first_axis", FunctionalRecipe::Direction::first_axis}});
    }
  }
  if (j.contains("p")) {
    if (f.kind != functionals::Kind::power) fail("functional.p", "only valid for power");
    const auto p = unsigned_integer(j["p"], "functional.p");
    if (p < 1 || p > 64) fail("functional.p", "must lie in [1, 64]");
    f.power = static_cast<int>(p);
  }
  if (j.contains("form")) {
    if (f.kind != functionals::Kind::quadratic_form) fail("functional.form", "only valid for quadratic_form");
    if (j["form"].is_string()) {
      if (j["form"] != "identity") fail("functional.form", "must be \"identity\" or a square matrix");
    } else {
      f.form = matrix(j["form"], "functional.form");
    }
  }
  if (j.contains("profile")) {
    if (f.kind != functionals::Kind::radial) fail("functional.profile", "only valid for radial");
    f.profile = choice<functionals::RadialProfile>(j["profile"], "functional.profile",
                                                   {{"neg_exp", functionals::RadialProfile::neg_exp},
                                                    {"log1p", functionals::RadialProfile::log1p}});
  }
  return f;
}

ThetaRule parse_theta(const json& j) {
  ThetaRule t;
  if (j.is_array()) {
    t.kind = ThetaRule::Kind::explicit_values;
    t.values = vector(j, "theta");
    return t;
  }
  reject_unknown(j, "theta", {"rule", "norm", "values"});
  if (!j.contains("rule")) fail("theta.rule", "required");
  t.kind = choice<ThetaRule::Kind>(j["rule"], "theta.rule",
                                   {{"sine", ThetaRule::Kind::sine},
                                    {"zero", ThetaRule::Kind::zero},
                                    {"explicit", ThetaRule::Kind::explicit_values}});
  if (j.contains("norm")) {
    t.norm = number(j["norm"], "theta.norm");
    if (!(t.norm > 0.0)) fail("theta.norm", "must be > 0");
  }
  if (t.kind == ThetaRule::Kind::explicit_values) {
    if (!j.contains("values")) fail("theta.values", "required for the explicit rule");
    t.values = vector(j["values"], "theta.values");
  }
  return t;
}

}  // namespace

CliConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigFileError(std::string("config: invalid JSON: ") + e.what());
  }
  reject_unknown(root, "", {"experiment", "model", "functional", "theta", "k", "grid", "mc", "delta", "seed",
                            "chains", "compare_plugin", "sigma0", "clt", "outputs"});
  CliConfig cfg;
  auto& e = cfg.experiment;

  if (!root.contains("experiment")) fail("experiment", "required");
  cfg.kind = string(root["experiment"], "experiment");
  for (const char* required : {"model", "functional", "grid"})
    if (!root.contains(required)) fail(required, "required");

  e.model = parse_model(root["model"]);
  e.functional = parse_functional(root["functional"]);
  if (root.contains("theta")) e.theta = parse_theta(root["theta"]);
  if (root.contains("k")) {
    const auto k = unsigned_integer(root["k"], "k");
    if (k > 12) fail("k", "must lie in [0, 12]");
    e.k = static_cast<int>(k);
  }

  const auto& grid = root["grid"];
  reject_unknown(grid, "grid", {"n", "d", "alpha"});
  if (!grid.contains("n") || !grid["n"].is_array() || grid["n"].empty()) fail("grid.n", "must be a nonempty array");
  for (std::size_t i = 0; i < grid["n"].size(); ++i) {
    const auto n = unsigned_integer(grid["n"][i], "grid.n[" + std::to_string(i) + "]");
    e.ns.push_back(static_cast<std::size_t>(n));
  }
  if (grid.contains("d")) e.dimension.fixed = static_cast<std::size_t>(unsigned_integer(grid["d"], "grid.d"));
  if (grid.contains("alpha")) e.dimension.alpha = number(grid["alpha"], "grid.alpha");

  if (root.contains("mc")) {
    const auto& mc = root["mc"];
    reject_unknown(mc, "mc", {"M", "R"});
    if (mc.contains("M")) e.chains = static_cast<std::size_t>(unsigned_integer(mc["M"], "mc.M"));
    if (mc.contains("R")) e.replicates = static_cast<std::size_t>(unsigned_integer(mc["R"], "mc.R"));
  }

  if (root.contains("delta")) {
    const auto& d = root["delta"];
    if (d.is_null()) {
      e.delta_rule = experiments::DeltaRule::none;
    } else if (d.is_string()) {
      if (d != "auto") fail("delta", "must be \"auto\", null, or a positive number");
      e.delta_rule = experiments::DeltaRule::automatic;
    } else {
      e.delta_rule = experiments::DeltaRule::fixed;
      e.delta = number(d, "delta");
    }
  }
  if (root.contains("seed")) e.seed = unsigned_integer(root["seed"], "seed");
  if (root.contains("chains"))
    e.chain_kind = choice<experiments::ChainKind>(root["chains"], "chains",
                                                  {{"bootstrap", experiments::ChainKind::bootstrap},
                                                   {"surrogate", experiments::ChainKind::surrogate}});
  if (root.contains("compare_plugin")) e.compare_plugin = boolean(root["compare_plugin"], "compare_plugin");
  if (root.contains("sigma0")) e.sigma0 = number(root["sigma0"], "sigma0");
  if (root.contains("clt")) {
    const auto& clt = root["clt"];
    reject_unknown(clt, "clt", {"samples", "projection"});
    if (clt.contains("samples")) e.clt_samples = static_cast<std::size_t>(unsigned_integer(clt["samples"], "clt.samples"));
    if (clt.contains("projection")) e.projection = vector(clt["projection"], "clt.projection");
  }
  if (root.contains("outputs")) {
    const auto& out = root["outputs"];
    reject_unknown(out, "outputs", {"csv", "json", "svg", "timing"});
    if (out.contains("csv")) cfg.outputs.csv = string(out["csv"], "outputs.csv");
    if (out.contains("json")) cfg.outputs.json = string(out["json"], "outputs.json");
    if (out.contains("svg")) cfg.outputs.svg = string(out["svg"], "outputs.svg");
    if (out.contains("timing")) e.record_timing = boolean(out["timing"], "outputs.timing");
  }
  if (!cfg.outputs.csv && !cfg.outputs.json) cfg.outputs.csv = "results.csv";
  if (cfg.outputs.svg && cfg.kind != "sweep") fail("outputs.svg", "only sweep experiments produce a chart");

  try {
    experiments::validate(e, cfg.kind);
    // Instantiate every grid point once so model/functional/theta errors
    // surface as config errors before any simulation runs.
    for (std::size_t n : e.ns) {
      const std::size_t d = e.dimension.dim_for(n);
      const auto model = e.model.build(d);
      const auto f = e.functional.build(d);
      const auto theta = e.theta.build(d);
      models::check_domain(model, theta);
      if (e.projection && e.projection->size() != d) fail("clt.projection", "dimension does not match grid d");
    }
  } catch (const ConfigFileError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigFileError(std::string("config: ") + ex.what());
  }
  return cfg;
}

CliConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace iterboot::cli
