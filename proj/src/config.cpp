#include "tumorlin/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tumorlin {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

// assigns one key; returns false for unknown keys
bool assign(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto d = [&] { return std::stod(value); };
    auto i = [&] { return std::stoi(value); };
    if (key == "n") cfg.params.n = i();
    else if (key == "lambda") cfg.params.lambda_nutrient = d();
    else if (key == "k_B") cfg.params.k_B = d();
    else if (key == "k_D") cfg.params.k_D = d();
    else if (key == "k_P") cfg.params.k_P = d();
    else if (key == "k_Q") cfg.params.k_Q = d();
    else if (key == "gamma") cfg.params.gamma = d();
    else if (key == "grid_n") cfg.grid_n = i();
    else if (key == "k_max") cfg.k_max = i();
    else if (key == "gammas") cfg.gammas = parse_list(value);
    else if (key == "T") cfg.T = d();
    else if (key == "dt_cfl") cfg.dt_cfl = d();
    else if (key == "trials") cfg.trials = i();
    else if (key == "alpha") cfg.alpha = d();
    else if (key == "beta") cfg.beta = d();
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "lambda_target") cfg.lambda_target = d();
    else if (key == "gamma_lo") cfg.gamma_lo = d();
    else if (key == "gamma_hi") cfg.gamma_hi = d();
    else if (key == "threads") cfg.threads = i();
    else return false;
    return true;
}

RunConfig from_json(const std::string& path, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": JSON parse error: " + e.what());
    }
    RunConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = it.key();
        std::string value;
        if (it->is_string()) {
            value = it->get<std::string>();
        } else if (it->is_array()) {
            std::string acc;
            for (const auto& x : *it) {
                if (!acc.empty()) acc += ",";
                acc += std::to_string(x.get<double>());
            }
            value = acc;
        } else {
            std::ostringstream os;
            os.precision(17);
            os << it->get<double>();
            value = os.str();
        }
        if (!assign(cfg, key, value))
            throw std::runtime_error(path + ": unknown config key '" + key + "'");
    }
    return cfg;
}

RunConfig from_keyvalue(const std::string& path, const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (!assign(cfg, key, value))
                throw std::runtime_error("unknown config key '" + key + "'");
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    // first non-space byte decides the format
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return from_json(path, text);
        break;
    }
    return from_keyvalue(path, text);
}

} // namespace tumorlin
