#include "blindssr/io/config.hpp"

#include "json.hpp"

#include <sstream>

namespace blindssr::io {

using nlohmann::json;

ValidationError::ValidationError(const std::vector<std::string>& problems)
    : std::runtime_error(join(problems)), problems_(problems) {}

std::string ValidationError::join(const std::vector<std::string>& problems) {
    std::ostringstream os;
    os << "invalid configuration (" << problems.size() << " problem"
       << (problems.size() == 1 ? "" : "s") << "):";
    for (const auto& p : problems) os << "\n  - " << p;
    return os.str();
}

namespace {

template <typename T>
void get_opt(const json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <typename T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

} // namespace

RunConfig run_config_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError({std::string("config JSON parse error: ") + e.what()});
    }
    if (!j.is_object()) throw ValidationError({"config JSON must be an object"});

    RunConfig c;
    try {
        if (j.contains("command")) c.command = j.at("command").get<std::string>();
        get_opt(j, "alpha", c.alpha);
        if (j.contains("two_sided")) c.two_sided = j.at("two_sided").get<bool>();
        get_opt(j, "power", c.power);
        get_opt(j, "delta", c.delta);
        get_opt(j, "pi", c.pi);
        get_opt(j, "sigma2", c.sigma2);
        if (j.contains("n_int")) {
            const json& v = j.at("n_int");
            if (v.is_array())
                c.n_int = v.get<std::vector<int>>();
            else
                c.n_int = {v.get<int>()};
        }
        get_opt(j, "n1_int", c.n1_int);
        get_opt(j, "n0_int", c.n0_int);
        get_opt(j, "method", c.method);
        get_opt(j, "confidence", c.confidence);
        get_opt(j, "effect_size", c.effect_size);
        get_opt(j, "delta_true", c.delta_true);
        get_opt(j, "n_fin", c.n_fin);
        get_opt(j, "replicates", c.replicates);
        get_opt(j, "seed", c.seed);
        get_opt(j, "data", c.data_path);
        get_opt(j, "grid", c.grid_path);
        get_opt(j, "out", c.out_path);
        get_opt(j, "format", c.format);
        if (j.contains("full_precision")) c.full_precision = j.at("full_precision").get<bool>();
        if (j.contains("floor")) c.floor_at_pilot = j.at("floor").get<bool>();
        if (j.contains("nfin_only")) c.nfin_only = j.at("nfin_only").get<bool>();
        get_opt(j, "perturb_os", c.perturb_os);
        if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    } catch (const json::exception& e) {
        throw ValidationError({std::string("config JSON type error: ") + e.what()});
    }
    return c;
}

std::string run_config_to_json_string(const RunConfig& c) {
    json j = json::object();
    if (!c.command.empty()) j["command"] = c.command;
    put_opt(j, "alpha", c.alpha);
    if (c.two_sided) j["two_sided"] = true;
    put_opt(j, "power", c.power);
    put_opt(j, "delta", c.delta);
    put_opt(j, "pi", c.pi);
    put_opt(j, "sigma2", c.sigma2);
    if (!c.n_int.empty()) j["n_int"] = c.n_int;
    put_opt(j, "n1_int", c.n1_int);
    put_opt(j, "n0_int", c.n0_int);
    put_opt(j, "method", c.method);
    put_opt(j, "confidence", c.confidence);
    put_opt(j, "effect_size", c.effect_size);
    put_opt(j, "delta_true", c.delta_true);
    put_opt(j, "n_fin", c.n_fin);
    put_opt(j, "replicates", c.replicates);
    put_opt(j, "seed", c.seed);
    put_opt(j, "data", c.data_path);
    put_opt(j, "grid", c.grid_path);
    put_opt(j, "out", c.out_path);
    put_opt(j, "format", c.format);
    if (c.full_precision) j["full_precision"] = true;
    if (c.floor_at_pilot) j["floor"] = true;
    if (c.nfin_only) j["nfin_only"] = true;
    put_opt(j, "perturb_os", c.perturb_os);
    if (c.threads > 0) j["threads"] = c.threads;
    return j.dump();
}

void merge_missing(RunConfig& base, const RunConfig& fallback) {
    if (base.command.empty()) base.command = fallback.command;
    if (!base.alpha) base.alpha = fallback.alpha;
    if (!base.two_sided) base.two_sided = fallback.two_sided;
    if (!base.power) base.power = fallback.power;
    if (!base.delta) base.delta = fallback.delta;
    if (!base.pi) base.pi = fallback.pi;
    if (!base.sigma2) base.sigma2 = fallback.sigma2;
    if (base.n_int.empty()) base.n_int = fallback.n_int;
    if (!base.n1_int) base.n1_int = fallback.n1_int;
    if (!base.n0_int) base.n0_int = fallback.n0_int;
    if (!base.method) base.method = fallback.method;
    if (!base.confidence) base.confidence = fallback.confidence;
    if (!base.effect_size) base.effect_size = fallback.effect_size;
    if (!base.delta_true) base.delta_true = fallback.delta_true;
    if (!base.n_fin) base.n_fin = fallback.n_fin;
    if (!base.replicates) base.replicates = fallback.replicates;
    if (!base.seed) base.seed = fallback.seed;
    if (!base.data_path) base.data_path = fallback.data_path;
    if (!base.grid_path) base.grid_path = fallback.grid_path;
    if (!base.out_path) base.out_path = fallback.out_path;
    if (!base.format) base.format = fallback.format;
    if (!base.full_precision) base.full_precision = fallback.full_precision;
    if (!base.floor_at_pilot) base.floor_at_pilot = fallback.floor_at_pilot;
    if (!base.nfin_only) base.nfin_only = fallback.nfin_only;
    if (!base.perturb_os) base.perturb_os = fallback.perturb_os;
    if (base.threads == 0) base.threads = fallback.threads;
}

double effective_alpha(const RunConfig& config) {
    const double a = config.alpha.value_or(0.025);
    return config.two_sided ? 0.5 * a : a;
}

} // namespace blindssr::io
