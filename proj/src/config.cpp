#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "sobolnoise/errors.hpp"
#include "sobolnoise/harness.hpp"

namespace sobolnoise {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  if (!object.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : object.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) throw ConfigError("unknown field '" + key + "' in " + std::string(where));
  }
}

UniformRange parse_range(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(std::string(what) + " must be [lower, upper]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::size_t parse_count(const json& j, std::string_view what) {
  if (!j.is_number_unsigned()) throw ConfigError(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

ExternalModelConfig parse_external(const json& j) {
  reject_unknown(j, {"command", "inputs", "stochastic"}, "model");
  ExternalModelConfig ext;
  if (!j.contains("command") || !j["command"].is_string()) {
    throw ConfigError("external model needs a 'command' string");
  }
  ext.command = j["command"].get<std::string>();
  if (!j.contains("inputs") || !j["inputs"].is_array() || j["inputs"].empty()) {
    throw ConfigError("external model needs a non-empty 'inputs' array");
  }
  for (const auto& in : j["inputs"]) {
    reject_unknown(in, {"name", "lower", "upper"}, "model.inputs[]");
    if (!in.contains("name") || !in["name"].is_string() || !in.contains("lower") ||
        !in["lower"].is_number() || !in.contains("upper") || !in["upper"].is_number()) {
      throw ConfigError("each input needs 'name', 'lower' and 'upper'");
    }
    ext.inputs.push_back({in["name"].get<std::string>(), in["lower"].get<double>(),
                          in["upper"].get<double>(), InputRole::controlled});
  }
  if (j.contains("stochastic")) {
    if (!j["stochastic"].is_boolean()) throw ConfigError("'stochastic' must be a boolean");
    ext.stochastic = j["stochastic"].get<bool>();
  }
  return ext;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root,
                 {"model", "noise", "budget", "replicates", "bootstrap_resamples", "master_seed",
                  "correction", "variance_form", "outputs"},
                 "config");

  ExperimentConfig config;
  if (!root.contains("model")) throw ConfigError("config needs a 'model'");
  const auto& model = root["model"];
  if (model.is_string()) {
    try {
      config.model = parse_benchmark(model.get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  } else {
    config.model = parse_external(model);
  }

  if (root.contains("noise") && !root["noise"].is_null()) {
    const auto& noise = root["noise"];
    reject_unknown(noise, {"alpha", "beta"}, "noise");
    const UniformRange alpha = noise.contains("alpha") ? parse_range(noise["alpha"], "noise.alpha")
                                                       : UniformRange{};
    const UniformRange beta = noise.contains("beta") ? parse_range(noise["beta"], "noise.beta")
                                                     : UniformRange{};
    config.noise = NoiseSpec(alpha, beta);
  }
  if (root.contains("budget")) config.budget = parse_count(root["budget"], "budget");
  if (root.contains("replicates")) config.replicates = parse_count(root["replicates"], "replicates");
  if (root.contains("bootstrap_resamples")) {
    config.bootstrap_resamples = parse_count(root["bootstrap_resamples"], "bootstrap_resamples");
  }
  if (root.contains("master_seed")) {
    config.master_seed = parse_count(root["master_seed"], "master_seed");
  }
  if (root.contains("correction")) {
    if (!root["correction"].is_boolean()) throw ConfigError("'correction' must be a boolean");
    config.correction = root["correction"].get<bool>();
  }
  if (root.contains("variance_form")) {
    if (!root["variance_form"].is_string()) throw ConfigError("'variance_form' must be a string");
    config.variance_form = parse_variance_form(root["variance_form"].get<std::string>());
  }
  if (root.contains("outputs")) {
    const auto& out = root["outputs"];
    reject_unknown(out, {"csv", "svg"}, "outputs");
    if (out.contains("csv")) config.csv_path = out["csv"].get<std::string>();
    if (out.contains("svg")) config.svg_path = out["svg"].get<std::string>();
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace sobolnoise
