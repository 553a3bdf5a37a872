#pragma once

#include "sympflow/catalog.hpp"
#include "sympflow/sde.hpp"

#include <optional>
#include <string>

namespace sympflow {

/// A model loaded from a JSON config. The exact ModelSpec is present whenever
/// the parameters admit a rational instantiation; "linear" configs always
/// carry their parameter set and remain usable numerically even when the
/// noise coefficients are irrational.
struct LoadedModel {
    std::string type;  ///< "linear" | "dho" | "example1" | "custom"
    std::optional<ModelSpec> spec;
    std::optional<LinearModelParams> linear;
    std::string source_path;

    /// Compiled SDE (exact spec when available, else linear coefficients).
    SdeSystem compile() const;
};

/// Parses a model config file. Config schema (unknown keys rejected):
///   {"type": "linear",   "params": {"m","omega","gamma","epsilon","s","z"}}
///   {"type": "dho",      "params": {"m","omega","gamma","zScale"}}
///   {"type": "example1", "hamiltonian": poly, "params": {"alphas": [...],
///                                                        "betas": [...]}}
///   {"type": "custom",   "hamiltonian": poly,
///                        "channels": [{"F": poly, "G": poly?}, ...], "s": num}
/// Numbers may be JSON numbers or exact strings like "3/4" / "0.25".
LoadedModel load_model_config(const std::string& path);

/// Parses config text (same schema as load_model_config).
LoadedModel parse_model_config(const std::string& text, const std::string& source_path = "");

/// Serializes a ModelSpec as a "custom" config with exact rational literals;
/// parsing the output yields an identical ModelSpec.
std::string model_to_config(const ModelSpec& model);

}  // namespace sympflow
