#include "sympflow/config_io.hpp"

#include "sympflow/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace sympflow {

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& why) {
    throw ParseError("model config: " + why);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.contains(it.key()))
            bad_config("unknown key '" + it.key() + "' in " + where);
}

/// JSON numbers round-trip through their shortest decimal form, so plain
/// literals like 0.25 convert exactly; strings ("3/4") are the fully exact
/// spelling.
Rational rational_value(const json& v, const std::string& name) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
        if (v.is_number_float()) return parse_rational(v.dump());
    } catch (const ParseError& e) {
        bad_config("value of '" + name + "': " + e.what());
    }
    bad_config("value of '" + name + "' must be a number or a rational string");
}

Rational require_rational(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) bad_config("missing key '" + key + "' in " + where);
    return rational_value(obj.at(key), key);
}

Polynomial polynomial_value(const json& v, const std::string& name) {
    if (!v.is_string()) bad_config("'" + name + "' must be a polynomial string");
    try {
        return parse_polynomial(v.get<std::string>());
    } catch (const ParseError& e) {
        bad_config("'" + name + "': " + e.what());
    }
}

LoadedModel parse_linear(const json& root, const std::string& path) {
    reject_unknown_keys(root, {"type", "params"}, "linear config");
    if (!root.contains("params")) bad_config("linear config needs 'params'");
    const json& params = root.at("params");
    reject_unknown_keys(params, {"m", "omega", "gamma", "epsilon", "s", "z"}, "linear params");
    LinearModelParams p;
    p.m = require_rational(params, "m", "linear params");
    p.omega = require_rational(params, "omega", "linear params");
    p.gamma = require_rational(params, "gamma", "linear params");
    p.epsilon = require_rational(params, "epsilon", "linear params");
    p.s = require_rational(params, "s", "linear params");
    p.z = require_rational(params, "z", "linear params");
    p.validate();

    LoadedModel out;
    out.type = "linear";
    out.linear = p;
    out.source_path = path;
    try {
        out.spec = build_linear_model(p);
    } catch (const DomainError&) {
        // irrational noise coefficients: numeric-only linear model
    }
    return out;
}

LoadedModel parse_dho(const json& root, const std::string& path) {
    reject_unknown_keys(root, {"type", "params"}, "dho config");
    if (!root.contains("params")) bad_config("dho config needs 'params'");
    const json& params = root.at("params");
    reject_unknown_keys(params, {"m", "omega", "gamma", "zScale"}, "dho params");
    DhoParams p;
    p.m = require_rational(params, "m", "dho params");
    p.omega = require_rational(params, "omega", "dho params");
    p.gamma = require_rational(params, "gamma", "dho params");
    p.z_scale = require_rational(params, "zScale", "dho params");

    LoadedModel out;
    out.type = "dho";
    out.spec = build_dho_model(p);  // DomainError surfaces with its message
    out.source_path = path;
    return out;
}

LoadedModel parse_example1(const json& root, const std::string& path) {
    reject_unknown_keys(root, {"type", "hamiltonian", "params"}, "example1 config");
    if (!root.contains("hamiltonian")) bad_config("example1 config needs 'hamiltonian'");
    if (!root.contains("params")) bad_config("example1 config needs 'params'");
    const json& params = root.at("params");
    reject_unknown_keys(params, {"alphas", "betas"}, "example1 params");
    if (!params.contains("alphas") || !params.contains("betas"))
        bad_config("example1 params need 'alphas' and 'betas'");
    if (!params.at("alphas").is_array() || !params.at("betas").is_array())
        bad_config("'alphas' and 'betas' must be arrays");
    std::vector<Rational> alphas, betas;
    for (const auto& v : params.at("alphas")) alphas.push_back(rational_value(v, "alphas"));
    for (const auto& v : params.at("betas")) betas.push_back(rational_value(v, "betas"));

    LoadedModel out;
    out.type = "example1";
    out.spec = build_example1_model(polynomial_value(root.at("hamiltonian"), "hamiltonian"),
                                    alphas, betas);
    out.source_path = path;
    return out;
}

LoadedModel parse_custom(const json& root, const std::string& path) {
    reject_unknown_keys(root, {"type", "hamiltonian", "channels", "s"}, "custom config");
    if (!root.contains("hamiltonian")) bad_config("custom config needs 'hamiltonian'");
    ModelSpec model;
    model.hamiltonian = polynomial_value(root.at("hamiltonian"), "hamiltonian");
    if (root.contains("channels")) {
        if (!root.at("channels").is_array()) bad_config("'channels' must be an array");
        for (const auto& ch : root.at("channels")) {
            if (!ch.is_object()) bad_config("each channel must be an object");
            reject_unknown_keys(ch, {"F", "G"}, "channel");
            if (!ch.contains("F")) bad_config("each channel needs 'F'");
            const Polynomial f = polynomial_value(ch.at("F"), "F");
            if (ch.contains("G")) {
                model.channels.push_back(
                    NoiseChannel::conjugate_pair(f, polynomial_value(ch.at("G"), "G")));
            } else {
                model.channels.push_back(NoiseChannel::plain(f));
            }
        }
    }
    if (root.contains("s")) model.action_scale = rational_value(root.at("s"), "s");
    model.validate();

    LoadedModel out;
    out.type = "custom";
    out.spec = std::move(model);
    out.source_path = path;
    return out;
}

}  // namespace

SdeSystem LoadedModel::compile() const {
    if (spec) return SdeSystem::from_model(*spec);
    if (linear) return SdeSystem::from_linear(linear_drift_diffusion(*linear));
    throw DomainError("model is neither exactly instantiated nor linear");
}

LoadedModel parse_model_config(const std::string& text, const std::string& source_path) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        bad_config(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) bad_config("top level must be an object");
    if (!root.contains("type")) bad_config("missing 'type'");
    const std::string type = root.at("type").is_string() ? root.at("type").get<std::string>() : "";
    if (type == "linear") return parse_linear(root, source_path);
    if (type == "dho") return parse_dho(root, source_path);
    if (type == "example1") return parse_example1(root, source_path);
    if (type == "custom") return parse_custom(root, source_path);
    bad_config("unknown type '" + type + "' (expected linear|dho|example1|custom)");
}

LoadedModel load_model_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open model file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model_config(buffer.str(), path);
}

std::string model_to_config(const ModelSpec& model) {
    nlohmann::ordered_json root;
    root["type"] = "custom";
    root["hamiltonian"] = to_string(model.hamiltonian);
    nlohmann::ordered_json channels = nlohmann::ordered_json::array();
    for (const auto& ch : model.channels) {
        nlohmann::ordered_json c;
        c["F"] = to_string(ch.F);
        if (ch.is_pair()) c["G"] = to_string(*ch.G);
        channels.push_back(c);
    }
    root["channels"] = channels;
    root["s"] = to_string(model.action_scale);
    return root.dump(2) + "\n";
}

}  // namespace sympflow
