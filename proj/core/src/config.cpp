#include "iex/config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "iex/loss_expr.hpp"

namespace iex {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const std::set<std::string> kNamedLosses = {"harmonic",      "euclidean", "weighted-sum",
                                            "lp-norm",       "min",       "geometric-mean"};

std::vector<double> to_doubles(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be a nonempty array");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(std::string(what) + " must contain numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

LossSpec parse_loss_spec(const json& j) {
  LossSpec spec;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (kNamedLosses.count(s)) {
      spec.named = true;
      spec.name = s;
    } else {
      spec.named = false;
      spec.expr = s;
    }
    return spec;
  }
  if (!j.is_object()) throw ConfigError("\"loss\" must be a string or an object");
  if (j.contains("expr")) {
    spec.named = false;
    spec.expr = j.at("expr").get<std::string>();
    return spec;
  }
  spec.named = true;
  spec.name = j.at("name").get<std::string>();
  if (!kNamedLosses.count(spec.name)) throw ConfigError("unknown loss family " + spec.name);
  if (spec.name == "lp-norm") spec.p = j.at("p").get<double>();
  if (spec.name == "weighted-sum") spec.weights = to_doubles(j.at("weights"), "loss weights");
  return spec;
}

ModelSpec parse_model_spec(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("\"model\" needs a \"kind\"");
  ModelSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  const auto positive_alphas = [](const json& a) {
    auto v = to_doubles(a, "model alphas");
    for (double x : v)
      if (!(x > 0.0)) throw ConfigError("model alphas must be positive");
    return v;
  };
  if (kind == "pareto") {
    spec.kind = ModelSpec::Kind::Pareto;
    spec.alphas = positive_alphas(j.at("alphas"));
  } else if (kind == "gaussian-copula") {
    spec.kind = ModelSpec::Kind::GaussianCopula;
    spec.rho = j.at("rho").get<double>();
    if (!(spec.rho > -1.0 && spec.rho < 1.0)) throw ConfigError("rho must lie in (-1, 1)");
  } else if (kind == "limit-law") {
    spec.kind = ModelSpec::Kind::LimitLaw;
    spec.alphas = positive_alphas(j.at("alphas"));
  } else if (kind == "breiman") {
    spec.kind = ModelSpec::Kind::Breiman;
    spec.breiman_alpha = j.at("alpha").get<double>();
    const auto& v = j.at("v");
    const std::string vk = v.at("kind").get<std::string>();
    if (vk == "box") {
      spec.factor.kind = BreimanFactor::Kind::Box;
      spec.factor.low = to_doubles(v.at("low"), "breiman low");
      spec.factor.high = to_doubles(v.at("high"), "breiman high");
    } else if (vk == "point") {
      spec.factor.kind = BreimanFactor::Kind::Fixed;
      spec.factor.point = to_doubles(v.at("coords"), "breiman coords");
    } else {
      throw ConfigError("unknown breiman factor kind " + vk);
    }
  } else if (kind == "uniform01") {
    spec.kind = ModelSpec::Kind::Uniform01;
  } else {
    throw ConfigError("unknown model kind " + kind);
  }
  return spec;
}

FunctionalSpec parse_functional_spec(const json& j) {
  FunctionalSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "one") {
    spec.kind = FunctionalSpec::Kind::One;
  } else if (kind == "indicator-loss-above") {
    spec.kind = FunctionalSpec::Kind::IndicatorLossAbove;
    spec.t = j.at("t").get<double>();
  } else if (kind == "capped-loss") {
    spec.kind = FunctionalSpec::Kind::CappedLoss;
    spec.cap = j.at("cap").get<double>();
  } else if (kind == "capped-power") {
    spec.kind = FunctionalSpec::Kind::CappedPower;
    spec.power = j.at("p").get<double>();
    spec.cap = j.at("cap").get<double>();
  } else if (kind == "indicator-box") {
    spec.kind = FunctionalSpec::Kind::IndicatorBox;
    spec.upper = to_doubles(j.at("upper"), "box corner");
  } else {
    throw ConfigError("unknown functional kind " + kind);
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kKnownKeys = {
      "dimension", "loss",          "model",   "block_size", "replicates", "top_m",
      "mc_size",   "normalization", "seed",    "workers",    "functional"};
  for (const auto& [key, value] : j.items())
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key \"" + key + "\"");
  try {
    ExperimentConfig cfg;
    cfg.dimension = j.value("dimension", 2);
    if (cfg.dimension < 1) throw ConfigError("dimension must be >= 1");
    if (j.contains("loss")) cfg.loss = parse_loss_spec(j.at("loss"));
    if (j.contains("model")) cfg.model = parse_model_spec(j.at("model"));
    cfg.block_size = j.value("block_size", std::size_t{1});
    cfg.replicates = j.value("replicates", std::size_t{1});
    cfg.top_m = j.value("top_m", std::size_t{1});
    cfg.mc_size = j.value("mc_size", std::size_t{100000});
    if (j.contains("seed")) {
      cfg.seed = j.at("seed").get<std::uint64_t>();
      cfg.seed_in_config = true;
    }
    if (j.contains("normalization")) {
      const std::string m = j.at("normalization").get<std::string>();
      if (m == "theoretical")
        cfg.normalization = NormalizingSequence::Mode::Theoretical;
      else if (m == "empirical-quantile")
        cfg.normalization = NormalizingSequence::Mode::EmpiricalQuantile;
      else
        throw ConfigError("normalization must be \"theoretical\" or \"empirical-quantile\"");
    }
    cfg.workers = j.value("workers", 1);
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    if (j.contains("functional")) cfg.functional = parse_functional_spec(j.at("functional"));
    if (cfg.block_size < 1 || cfg.replicates < 1) throw ConfigError("block_size and replicates must be >= 1");
    if (cfg.top_m < 1 || cfg.top_m > cfg.block_size) throw ConfigError("top_m must lie in [1, block_size]");
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

namespace {

ordered_json loss_to_json(const LossSpec& l) {
  if (!l.named) return ordered_json{{"expr", l.expr}};
  ordered_json j{{"name", l.name}};
  if (l.name == "lp-norm") j["p"] = l.p;
  if (l.name == "weighted-sum") j["weights"] = l.weights;
  return j;
}

ordered_json model_to_json(const ModelSpec& m) {
  ordered_json j;
  switch (m.kind) {
    case ModelSpec::Kind::Pareto:
      j["kind"] = "pareto";
      j["alphas"] = m.alphas;
      break;
    case ModelSpec::Kind::GaussianCopula:
      j["kind"] = "gaussian-copula";
      j["rho"] = m.rho;
      break;
    case ModelSpec::Kind::LimitLaw:
      j["kind"] = "limit-law";
      j["alphas"] = m.alphas;
      break;
    case ModelSpec::Kind::Breiman:
      j["kind"] = "breiman";
      j["alpha"] = m.breiman_alpha;
      if (m.factor.kind == BreimanFactor::Kind::Box)
        j["v"] = ordered_json{{"kind", "box"}, {"low", m.factor.low}, {"high", m.factor.high}};
      else
        j["v"] = ordered_json{{"kind", "point"}, {"coords", m.factor.point}};
      break;
    case ModelSpec::Kind::Uniform01:
      j["kind"] = "uniform01";
      break;
  }
  return j;
}

ordered_json functional_to_json(const FunctionalSpec& f) {
  switch (f.kind) {
    case FunctionalSpec::Kind::One:
      return ordered_json{{"kind", "one"}};
    case FunctionalSpec::Kind::IndicatorLossAbove:
      return ordered_json{{"kind", "indicator-loss-above"}, {"t", f.t}};
    case FunctionalSpec::Kind::CappedLoss:
      return ordered_json{{"kind", "capped-loss"}, {"cap", f.cap}};
    case FunctionalSpec::Kind::CappedPower:
      return ordered_json{{"kind", "capped-power"}, {"p", f.power}, {"cap", f.cap}};
    case FunctionalSpec::Kind::IndicatorBox:
      return ordered_json{{"kind", "indicator-box"}, {"upper", f.upper}};
  }
  return {};
}

}  // namespace

std::string canonical_config_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["dimension"] = cfg.dimension;
  j["loss"] = loss_to_json(cfg.loss);
  j["model"] = model_to_json(cfg.model);
  j["block_size"] = cfg.block_size;
  j["replicates"] = cfg.replicates;
  j["top_m"] = cfg.top_m;
  j["mc_size"] = cfg.mc_size;
  j["seed"] = cfg.seed;
  j["normalization"] = cfg.normalization == NormalizingSequence::Mode::Theoretical
                           ? "theoretical"
                           : "empirical-quantile";
  j["functional"] = functional_to_json(cfg.functional);
  return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_config_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

LossFunction build_loss(const ExperimentConfig& cfg) {
  const int d = cfg.dimension;
  if (!cfg.loss.named) return parse_loss(cfg.loss.expr, d);
  const std::string& name = cfg.loss.name;
  if (name == "harmonic") return LossFunction::harmonic(d);
  if (name == "euclidean") return LossFunction::euclidean(d);
  if (name == "min") return LossFunction::min_loss(d);
  if (name == "geometric-mean") return LossFunction::geometric_mean(d);
  if (name == "lp-norm") return LossFunction::lp_norm(d, cfg.loss.p);
  if (name == "weighted-sum") {
    if (static_cast<int>(cfg.loss.weights.size()) != d)
      throw ConfigError("weighted-sum weights must match the dimension");
    return LossFunction::weighted_sum(cfg.loss.weights);
  }
  throw ConfigError("unknown loss family " + name);
}

std::shared_ptr<const ImplicitMaxStableLaw> build_limit_law(const ExperimentConfig& cfg,
                                                            bool standard) {
  std::vector<double> alphas;
  switch (cfg.model.kind) {
    case ModelSpec::Kind::Pareto:
    case ModelSpec::Kind::LimitLaw:
      alphas = cfg.model.alphas;
      break;
    case ModelSpec::Kind::GaussianCopula:
      // hidden regular variation matches the Pareto-Dirichlet family with
      // alpha_1 = alpha_2 = 1/(1+rho)
      alphas = {1.0 / (1.0 + cfg.model.rho), 1.0 / (1.0 + cfg.model.rho)};
      break;
    default:
      throw ConfigError("no limit law is defined for this model kind");
  }
  if (static_cast<int>(alphas.size()) != cfg.dimension)
    throw ConfigError("model alphas must match the dimension");
  const double alpha = std::accumulate(alphas.begin(), alphas.end(), 0.0);
  SpectralMeasure sm = standard ? pareto_dirichlet_spectral_normalized(alphas)
                                : pareto_dirichlet_spectral(alphas);
  RngStream rng(cfg.seed, 0xC0C0ULL << 32);
  return std::make_shared<ImplicitMaxStableLaw>(ImplicitMaxStableLaw::create(
      build_loss(cfg), alpha, std::move(sm), static_cast<int>(cfg.mc_size), rng));
}

PointSampler build_model(const ExperimentConfig& cfg) {
  switch (cfg.model.kind) {
    case ModelSpec::Kind::Pareto:
      if (static_cast<int>(cfg.model.alphas.size()) != cfg.dimension)
        throw ConfigError("model alphas must match the dimension");
      return pareto_model(cfg.model.alphas);
    case ModelSpec::Kind::GaussianCopula:
      if (cfg.dimension != 2) throw ConfigError("gaussian-copula model is bivariate");
      return gaussian_copula_model(cfg.model.rho);
    case ModelSpec::Kind::LimitLaw:
      return limit_law_model(build_limit_law(cfg));
    case ModelSpec::Kind::Breiman:
      return breiman_model(cfg.model.breiman_alpha, cfg.model.factor);
    case ModelSpec::Kind::Uniform01:
      if (cfg.dimension != 1) throw ConfigError("uniform01 model is one-dimensional");
      return uniform01_model();
  }
  throw ConfigError("unknown model kind");
}

double model_tail_alpha(const ExperimentConfig& cfg) {
  switch (cfg.model.kind) {
    case ModelSpec::Kind::Pareto:
    case ModelSpec::Kind::LimitLaw:
      return std::accumulate(cfg.model.alphas.begin(), cfg.model.alphas.end(), 0.0);
    case ModelSpec::Kind::GaussianCopula:
      return 2.0 / (1.0 + cfg.model.rho);
    case ModelSpec::Kind::Breiman:
      return cfg.model.breiman_alpha;
    case ModelSpec::Kind::Uniform01:
      return 1.0;
  }
  throw ConfigError("unknown model kind");
}

std::function<double(const Point&)> build_functional(const FunctionalSpec& spec,
                                                     const LossFunction& f) {
  switch (spec.kind) {
    case FunctionalSpec::Kind::One:
      return [](const Point&) { return 1.0; };
    case FunctionalSpec::Kind::IndicatorLossAbove:
      return [f, t = spec.t](const Point& x) { return f(x) > t ? 1.0 : 0.0; };
    case FunctionalSpec::Kind::CappedLoss:
      return [f, cap = spec.cap](const Point& x) { return std::min(f(x), cap); };
    case FunctionalSpec::Kind::CappedPower:
      return [f, p = spec.power, cap = spec.cap](const Point& x) {
        return std::min(std::pow(f(x), p), cap);
      };
    case FunctionalSpec::Kind::IndicatorBox:
      return [upper = spec.upper](const Point& x) {
        for (std::size_t i = 0; i < x.size(); ++i)
          if (x[i] > upper[i]) return 0.0;
        return 1.0;
      };
  }
  throw ConfigError("unknown functional kind");
}

}  // namespace iex
