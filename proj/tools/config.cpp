#include "config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "igfade/errors.hpp"

namespace igfade::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw InputError(where + ": unknown key '" + key + "'");
    }
}

double number(const json& obj, const std::string& key, const std::string& where, std::optional<double> fallback = {}) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw InputError(where + ": missing '" + key + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) throw InputError(where + ": '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError(where + ": '" + key + "' must be finite");
    return x;
}

}  // namespace

json load_document(const std::string& text_or_path) {
    const auto first = text_or_path.find_first_not_of(" \t\r\n");
    std::string text;
    if (first != std::string::npos && text_or_path[first] == '{') {
        text = text_or_path;
    } else {
        std::ifstream in(text_or_path);
        if (!in) throw InputError("cannot read config file '" + text_or_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("config is not valid JSON: ") + e.what());
    }
}

FadingModel parse_fading(const json& doc) {
    if (!doc.is_object()) throw InputError("fading: expected an object");
    if (!doc.contains("type") || !doc.at("type").is_string()) throw InputError("fading: missing string 'type'");
    const std::string type = doc.at("type").get<std::string>();
    const std::string where = "fading (" + type + ")";
    const auto keys = [&](std::set<std::string> k) {
        k.insert({"type", "omega"});
        reject_unknown(doc, k, where);
    };
    const double omega = number(doc, "omega", where, 1.0);
    FadingModel model;
    if (type == "rayleigh") {
        keys({});
        model = Rayleigh{omega};
    } else if (type == "rician") {
        keys({"K"});
        model = Rician{number(doc, "K", where), omega};
    } else if (type == "nakagami") {
        keys({"m"});
        model = NakagamiM{number(doc, "m", where), omega};
    } else if (type == "hoyt") {
        keys({"q"});
        model = Hoyt{number(doc, "q", where), omega};
    } else if (type == "kappa-mu") {
        keys({"kappa", "mu"});
        model = KappaMu{number(doc, "kappa", where), number(doc, "mu", where), omega};
    } else if (type == "eta-mu") {
        keys({"eta", "mu"});
        model = EtaMu{number(doc, "eta", where), number(doc, "mu", where), omega};
    } else if (type == "kappa-mu-shadowed") {
        keys({"kappa", "mu", "m"});
        model = KappaMuShadowed{number(doc, "kappa", where), number(doc, "mu", where), number(doc, "m", where), omega};
    } else if (type == "twdp") {
        keys({"K", "delta"});
        model = TWDP{number(doc, "K", where), number(doc, "delta", where), omega};
    } else {
        throw InputError("fading: unknown type '" + type +
                         "' (rayleigh, rician, nakagami, hoyt, kappa-mu, eta-mu, kappa-mu-shadowed, twdp)");
    }
    try {
        fading::validate(model);
    } catch (const std::exception& e) {
        throw InputError(where + ": " + e.what());
    }
    return model;
}

ModelConfig parse_model(const json& doc) {
    if (!doc.is_object()) throw InputError("config: expected an object");
    reject_unknown(doc, {"shadowing", "fading", "mean_power"}, "config");
    if (!doc.contains("shadowing") || !doc.at("shadowing").is_object()) throw InputError("config: missing 'shadowing'");
    if (!doc.contains("fading")) throw InputError("config: missing 'fading'");
    const json& sh = doc.at("shadowing");
    reject_unknown(sh, {"m"}, "shadowing");
    ModelConfig cfg;
    cfg.m = number(sh, "m", "shadowing");
    if (!(cfg.m > 1.0)) throw InputError("shadowing: 'm' must exceed 1");
    cfg.mean_power = number(doc, "mean_power", "config", 1.0);
    if (!(cfg.mean_power > 0.0)) throw InputError("config: 'mean_power' must be positive");
    cfg.fading = parse_fading(doc.at("fading"));
    return cfg;
}

Strategy parse_strategy(const std::string& name) {
    static const std::map<std::string, Strategy> names{{"auto", Strategy::Auto},
                                                       {"gmgf-general", Strategy::GmgfGeneral},
                                                       {"gmgf-integer", Strategy::GmgfInteger},
                                                       {"mixture", Strategy::Mixture},
                                                       {"numeric", Strategy::NumericOracle}};
    const auto it = names.find(name);
    if (it == names.end()) throw InputError("unknown strategy '" + name + "'");
    return it->second;
}

std::vector<double> parse_grid(const std::string& spec) {
    double v[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const auto end = i < 2 ? spec.find(':', pos) : spec.size();
        if (end == std::string::npos) throw InputError("grid '" + spec + "': expected start:step:stop");
        const std::string part = spec.substr(pos, end - pos);
        try {
            std::size_t used = 0;
            v[i] = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw InputError("grid '" + spec + "': '" + part + "' is not a number");
        }
        pos = end + 1;
    }
    const double start = v[0], step = v[1], stop = v[2];
    if (!(step > 0.0) || !(stop >= start) || !std::isfinite(stop)) {
        throw InputError("grid '" + spec + "': need step > 0 and stop >= start");
    }
    const double count = std::floor((stop - start) / step + 1e-9) + 1.0;
    if (count > 1e7) throw InputError("grid '" + spec + "': more than 1e7 points");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = start + step * static_cast<double>(i);
    return grid;
}

}  // namespace igfade::cli
