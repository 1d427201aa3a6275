#pragma once

#include <stdexcept>
#include <string>

#include "igfade/composite.hpp"
#include "igfade/fading.hpp"
#include "json.hpp"

namespace igfade::cli {

/// Malformed or out-of-range user input (config document, grid, CSV).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    double m = 2.0;
    double mean_power = 1.0;
    FadingModel fading;

    CompositeModel model() const { return CompositeModel(m, mean_power, fading); }
};

/// Inline JSON when the text starts with '{', otherwise a path to a JSON file.
nlohmann::json load_document(const std::string& text_or_path);

/// {"type": "twdp", "K": 4, "delta": 0.9} and friends. Unknown keys are rejected.
FadingModel parse_fading(const nlohmann::json& doc);

/// {"shadowing": {"m": 2}, "fading": {...}, "mean_power": 1}.
ModelConfig parse_model(const nlohmann::json& doc);

Strategy parse_strategy(const std::string& name);

/// "start:step:stop", inclusive of stop up to rounding.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace igfade::cli
