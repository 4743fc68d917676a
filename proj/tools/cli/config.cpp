#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace resurge::cli {

Json Config::to_json() const
{
    Json j;
    j["precision_bits"] = precision_bits;
    j["tol"] = tol;
    j["fatou_tol"] = fatou_tol;
    j["periodicity_tol"] = periodicity_tol;
    j["convergence"] = convergence;
    j["order"] = order;
    j["henon_order"] = henon_order;
    j["richardson_depth"] = richardson_depth;
    j["quad_nodes"] = quad_nodes;
    j["budget"] = budget;
    j["fourier_samples"] = fourier_samples;
    j["format"] = format;
    j["threads"] = threads;
    return j;
}

namespace {

template <class T>
void read(const Json& j, const char* key, T& out)
{
    if (!j.contains(key))
        return;
    const Json& v = j.at(key);
    if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string())
            throw std::invalid_argument(std::string("config: '") + key + "' must be a string");
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer())
            throw std::invalid_argument(std::string("config: '") + key + "' must be an integer");
        if (v.get<long long>() <= 0)
            throw std::invalid_argument(std::string("config: '") + key + "' must be positive");
    } else {
        if (!v.is_number())
            throw std::invalid_argument(std::string("config: '") + key + "' must be a number");
    }
    out = v.get<T>();
}

}  // namespace

void Config::merge(const Json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("config: top level must be an object");
    const Json known = to_json();
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.contains(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "'");
    read(j, "precision_bits", precision_bits);
    read(j, "tol", tol);
    read(j, "fatou_tol", fatou_tol);
    read(j, "periodicity_tol", periodicity_tol);
    read(j, "convergence", convergence);
    read(j, "order", order);
    read(j, "henon_order", henon_order);
    read(j, "richardson_depth", richardson_depth);
    read(j, "quad_nodes", quad_nodes);
    read(j, "budget", budget);
    read(j, "fourier_samples", fourier_samples);
    read(j, "format", format);
    read(j, "threads", threads);
    validate();
}

void Config::validate() const
{
    auto positive = [](double x, const char* name) {
        if (!(x > 0))
            throw std::invalid_argument(std::string("config: '") + name + "' must be positive");
    };
    positive(precision_bits, "precision_bits");
    positive(tol, "tol");
    positive(fatou_tol, "fatou_tol");
    positive(periodicity_tol, "periodicity_tol");
    positive(convergence, "convergence");
    positive(order, "order");
    positive(henon_order, "henon_order");
    positive(richardson_depth, "richardson_depth");
    positive(quad_nodes, "quad_nodes");
    positive(static_cast<double>(budget), "budget");
    positive(fourier_samples, "fourier_samples");
    positive(threads, "threads");
    if (format != "json" && format != "csv")
        throw std::invalid_argument("config: 'format' must be json or csv");
}

Config load_config(const std::string& explicit_path)
{
    Config c;
    std::string path = explicit_path;
    if (path.empty())
        if (const char* env = std::getenv(kConfigEnv))
            path = env;
    if (path.empty())
        return c;
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config: " + path + ": " + e.what());
    }
    c.merge(j);
    return c;
}

}  // namespace resurge::cli
