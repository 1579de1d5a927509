#include "sqzcool/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "toml.hpp"

#include "sqzcool/errors.hpp"

namespace sqzcool {

namespace {

double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("bad number '" + s + "' for " + what);
    return v;
}

int parse_int(const std::string& s, const std::string& what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("bad integer '" + s + "' for " + what);
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
}

double number_at(const toml::node& n, const std::string& key) {
    if (auto v = n.value<double>()) return *v;
    throw ConfigError("'" + key + "' must be a number");
}

double required_number(const toml::table& t, const std::string& key, const std::string& where) {
    const toml::node* n = t.get(key);
    if (!n) throw ConfigError(where + " is missing '" + key + "'");
    return number_at(*n, where + "." + key);
}

std::string required_string(const toml::table& t, const std::string& key, const std::string& where) {
    const toml::node* n = t.get(key);
    if (!n || !n->is_string()) throw ConfigError(where + " needs string '" + key + "'");
    return *n->value<std::string>();
}

int integer_or(const toml::table& t, const std::string& key, int fallback) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if (auto v = n->value<std::int64_t>()) return static_cast<int>(*v);
    throw ConfigError("'" + key + "' must be an integer");
}

const toml::table* section(const toml::table& root, const char* name) {
    const toml::node* n = root.get(name);
    if (!n) return nullptr;
    if (!n->is_table()) throw ConfigError(std::string("[") + name + "] must be a table");
    return n->as_table();
}

template <typename F>
void for_each_table(const toml::table& t, const char* key, F&& f) {
    const toml::node* n = t.get(key);
    if (!n) return;
    const toml::array* arr = n->as_array();
    if (!arr) throw ConfigError(std::string("'") + key + "' must be an array of tables");
    for (const auto& el : *arr) {
        const toml::table* item = el.as_table();
        if (!item) throw ConfigError(std::string("'") + key + "' entries must be tables");
        f(*item);
    }
}

}  // namespace

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec s;
    s.model = model;
    s.fixed = params;
    s.axes = axes;
    s.minimize_over = free;
    s.method = method;
    s.optimizer = optimizer;
    s.seed = seed;
    s.threads = threads;
    return s;
}

void apply_override(ParamSet& params, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value: '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    if (value == "opt") {
        params.set_optimal(key);
    } else {
        params.set(key, parse_double(value, key));
    }
}

Bound parse_bound(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("bound must be name:lo:hi, got '" + text + "'");
    Bound b{parts[0], parse_double(parts[1], parts[0]), parse_double(parts[2], parts[0])};
    if (!(b.lo < b.hi)) throw ConfigError("bound '" + b.name + "' needs lo < hi");
    return b;
}

Axis parse_axis(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 4 && parts.size() != 5) {
        throw ConfigError("axis must be name:min:max:count[:lin|log], got '" + text + "'");
    }
    Axis a;
    a.name = parts[0];
    a.min = parse_double(parts[1], a.name);
    a.max = parse_double(parts[2], a.name);
    a.count = parse_int(parts[3], a.name);
    if (parts.size() == 5) a.scale = parse_scale(parts[4]);
    return a;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << source << ':' << e.source().begin.line << ':' << e.source().begin.column << ": "
            << e.description();
        throw ConfigError(msg.str());
    }

    RunConfig cfg;
    if (const toml::table* sys = section(root, "system")) {
        for (const auto& [k, node] : *sys) {
            const std::string key(k.str());
            if (key == "model") {
                cfg.model = parse_model(required_string(*sys, "model", "[system]"));
            } else if (key == "omega_m_hz") {
                cfg.omega_m_hz = number_at(node, key);
            } else if (node.is_string()) {
                if (*node.value<std::string>() != "opt") {
                    throw ConfigError("[system]." + key + ": only numbers or \"opt\" are accepted");
                }
                cfg.params.set_optimal(key);
            } else {
                cfg.params.set(key, number_at(node, "[system]." + key));
            }
        }
    }
    if (const toml::table* sw = section(root, "sweep")) {
        if (sw->contains("method")) cfg.method = parse_method(required_string(*sw, "method", "[sweep]"));
        cfg.threads = integer_or(*sw, "threads", cfg.threads);
        cfg.seed = static_cast<std::uint64_t>(integer_or(*sw, "seed", static_cast<int>(cfg.seed)));
        for_each_table(*sw, "axes", [&](const toml::table& t) {
            Axis a;
            a.name = required_string(t, "name", "[sweep].axes");
            a.min = required_number(t, "min", "axis " + a.name);
            a.max = required_number(t, "max", "axis " + a.name);
            a.count = integer_or(t, "count", 0);
            if (t.contains("scale")) a.scale = parse_scale(required_string(t, "scale", "axis " + a.name));
            cfg.axes.push_back(a);
        });
    }
    if (const toml::table* op = section(root, "optimize")) {
        for_each_table(*op, "free", [&](const toml::table& t) {
            Bound b;
            b.name = required_string(t, "name", "[optimize].free");
            b.lo = required_number(t, "lo", "bound " + b.name);
            b.hi = required_number(t, "hi", "bound " + b.name);
            cfg.free.push_back(b);
        });
        cfg.optimizer.starts = integer_or(*op, "starts", cfg.optimizer.starts);
        cfg.optimizer.max_iterations = integer_or(*op, "max_iterations", cfg.optimizer.max_iterations);
        cfg.optimizer.polish_rounds = integer_or(*op, "polish_rounds", cfg.optimizer.polish_rounds);
        if (const toml::node* n = op->get("simplex_tol")) cfg.optimizer.simplex_tol = number_at(*n, "simplex_tol");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace sqzcool
