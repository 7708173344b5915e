#include "genfric/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace genfric {

ConfigError::ConfigError(int line, const std::string& message)
    : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, int line, const std::string& key) {
    const std::string s = trim(raw);
    if (s.empty()) {
        throw ConfigError(line, "'" + key + "' expects a number");
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(line, "'" + key + "' expects a finite number, got '" + s + "'");
    }
    return v;
}

long long parse_integer(const std::string& raw, int line, const std::string& key) {
    const std::string s = trim(raw);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw ConfigError(line, "'" + key + "' expects an integer, got '" + s + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& raw, int line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number(item, line, key));
    }
    if (out.empty()) {
        throw ConfigError(line, "'" + key + "' expects a comma-separated list of numbers");
    }
    return out;
}

bool parse_bool(const std::string& raw, int line, const std::string& key) {
    const std::string s = trim(raw);
    if (s == "true") {
        return true;
    }
    if (s == "false") {
        return false;
    }
    throw ConfigError(line, "'" + key + "' expects true or false, got '" + s + "'");
}

Vector to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Entry {
    std::string value;
    int line;
};

using Handler = std::function<void(RunConfig&, const Entry&, const std::string&)>;

const std::map<std::string, std::map<std::string, Handler>>& schema() {
    static const std::map<std::string, std::map<std::string, Handler>> table = [] {
        std::map<std::string, std::map<std::string, Handler>> t;
        auto number = [](auto setter) {
            return Handler([setter](RunConfig& c, const Entry& e, const std::string& k) {
                setter(c, parse_number(e.value, e.line, k));
            });
        };
        auto integer = [](auto setter) {
            return Handler([setter](RunConfig& c, const Entry& e, const std::string& k) {
                setter(c, parse_integer(e.value, e.line, k));
            });
        };
        auto text = [](auto setter) {
            return Handler([setter](RunConfig& c, const Entry& e, const std::string&) {
                setter(c, trim(e.value));
            });
        };

        t["system"]["omegas"] = [](RunConfig& c, const Entry& e, const std::string& k) {
            c.omegas = parse_list(e.value, e.line, k);
        };
        t["system"]["state"] = [](RunConfig& c, const Entry& e, const std::string& k) {
            c.state = to_vector(parse_list(e.value, e.line, k));
        };

        t["support"]["nodes"] = integer([](RunConfig& c, long long v) {
            c.quadrature.nodes_per_axis = static_cast<int>(v);
        });
        t["support"]["scheme"] = [](RunConfig& c, const Entry& e, const std::string&) {
            try {
                c.quadrature.scheme = scheme_from_string(trim(e.value));
            } catch (const ValidationError& err) {
                throw ConfigError(e.line, err.what());
            }
        };
        t["support"]["z"] = [](RunConfig& c, const Entry& e, const std::string& k) {
            c.support_z = to_vector(parse_list(e.value, e.line, k));
        };
        t["support"]["p"] = [](RunConfig& c, const Entry& e, const std::string& k) {
            c.support_p = to_vector(parse_list(e.value, e.line, k));
        };

        t["dual"]["tol"] = number([](RunConfig& c, double v) { c.sim.dual.tol = v; });
        t["dual"]["max_iter"] = integer([](RunConfig& c, long long v) {
            c.sim.dual.max_iter = static_cast<int>(v);
        });
        t["dual"]["freeze_ratio"] = number([](RunConfig& c, double v) { c.sim.dual.freeze_ratio = v; });

        t["control"]["epsilon"] = [](RunConfig& c, const Entry& e, const std::string& k) {
            if (trim(e.value) == "auto") {
                c.epsilon_auto = true;
            } else {
                c.epsilon_auto = false;
                c.sim.law.epsilon = parse_number(e.value, e.line, k);
            }
        };
        t["control"]["smoother"] = [](RunConfig& c, const Entry& e, const std::string&) {
            try {
                c.sim.law.smoother = smoother_from_string(trim(e.value));
            } catch (const ValidationError& err) {
                throw ConfigError(e.line, err.what());
            }
        };
        t["control"]["amplitude"] = number([](RunConfig& c, double v) { c.sim.law.amplitude = v; });

        t["stages"]["rho_hi"] = number([](RunConfig& c, double v) { c.sim.stages.rho_hi = v; });
        t["stages"]["rho_lo"] = number([](RunConfig& c, double v) { c.sim.stages.rho_lo = v; });
        t["stages"]["a_mid"] = number([](RunConfig& c, double v) { c.sim.stages.a_mid = v; });

        t["sim"]["t_max"] = number([](RunConfig& c, double v) { c.sim.t_max = v; });
        t["sim"]["initial_step"] = number([](RunConfig& c, double v) { c.sim.step.initial_step = v; });
        t["sim"]["max_step"] = number([](RunConfig& c, double v) { c.sim.step.max_step = v; });
        t["sim"]["min_step"] = number([](RunConfig& c, double v) { c.sim.step.min_step = v; });
        t["sim"]["rtol"] = number([](RunConfig& c, double v) { c.sim.step.rtol = v; });
        t["sim"]["atol"] = number([](RunConfig& c, double v) { c.sim.step.atol = v; });
        t["sim"]["max_steps"] = integer([](RunConfig& c, long long v) { c.sim.step.max_steps = v; });
        t["sim"]["stall_window"] = [](RunConfig& c, const Entry& e, const std::string& k) {
            c.sim.standstill.window = trim(e.value) == "auto" ? 0.0 : parse_number(e.value, e.line, k);
        };
        t["sim"]["stall_threshold"] = number([](RunConfig& c, double v) { c.sim.standstill.threshold = v; });
        t["sim"]["record_stride"] = integer([](RunConfig& c, long long v) {
            c.sim.record_stride = static_cast<int>(v);
        });
        t["sim"]["reuse_delta"] = number([](RunConfig& c, double v) { c.sim.dual_reuse_delta = v; });
        t["sim"]["drift_only"] = [](RunConfig& c, const Entry& e, const std::string& k) {
            c.sim.drift_only = parse_bool(e.value, e.line, k);
        };

        t["sweep"]["ladder"] = [](RunConfig& c, const Entry& e, const std::string& k) {
            c.sweep.ladder = parse_list(e.value, e.line, k);
        };
        t["sweep"]["max_ratio"] = number([](RunConfig& c, double v) { c.sweep.max_ratio = v; });
        t["sweep"]["probes"] = [](RunConfig& c, const Entry& e, const std::string& k) {
            c.sweep.probe_perturbations = parse_list(e.value, e.line, k);
        };

        t["check"]["samples"] = integer([](RunConfig& c, long long v) { c.check.samples = static_cast<int>(v); });
        t["check"]["seed"] = integer([](RunConfig& c, long long v) {
            c.check.seed = static_cast<std::uint64_t>(v);
        });
        t["check"]["band_factor"] = number([](RunConfig& c, double v) { c.check.band_factor = v; });
        t["check"]["resonance_bound"] = integer([](RunConfig& c, long long v) { c.check.resonance_bound = v; });

        t["output"]["dir"] = text([](RunConfig& c, std::string v) { c.output.dir = std::move(v); });
        t["output"]["trajectory"] = text([](RunConfig& c, std::string v) { c.output.trajectory = std::move(v); });
        t["output"]["summary"] = text([](RunConfig& c, std::string v) { c.output.summary = std::move(v); });
        t["output"]["sweep"] = text([](RunConfig& c, std::string v) { c.output.sweep = std::move(v); });
        t["output"]["check"] = text([](RunConfig& c, std::string v) { c.output.check = std::move(v); });
        t["output"]["plot"] = text([](RunConfig& c, std::string v) { c.output.plot = std::move(v); });
        return t;
    }();
    return table;
}

/// Runs `fn`, re-raising any ValidationError as a ConfigError at `line`.
template <class F>
void at_line(int line, F&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(line, e.what());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, int> seen;  // "section.key" -> line
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError(line_no, "malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (schema().count(section) == 0) {
                throw ConfigError(line_no, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line_no, "expected 'key = value', got '" + line + "'");
        }
        if (section.empty()) {
            throw ConfigError(line_no, "key outside of any [section]");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = schema().at(section);
        const auto handler = keys.find(key);
        if (handler == keys.end()) {
            throw ConfigError(line_no, "unknown key '" + key + "' in [" + section + "]");
        }
        const std::string qualified = section + "." + key;
        if (const auto prev = seen.find(qualified); prev != seen.end()) {
            throw ConfigError(line_no, "duplicate key '" + qualified + "' (first set on line " +
                                           std::to_string(prev->second) + ")");
        }
        seen.emplace(qualified, line_no);
        if (value.empty()) {
            throw ConfigError(line_no, "missing value for '" + qualified + "'");
        }
        handler->second(cfg, Entry{value, line_no}, qualified);
    }

    auto line_of = [&](const std::string& k) {
        const auto it = seen.find(k);
        return it == seen.end() ? 0 : it->second;
    };

    if (cfg.omegas.empty()) {
        throw ConfigError(0, "missing required key 'system.omegas'");
    }
    at_line(line_of("system.omegas"), [&] { (void)cfg.system(); });
    const auto n = static_cast<Eigen::Index>(cfg.omegas.size());
    if (cfg.state && cfg.state->size() != 2 * n) {
        throw ConfigError(line_of("system.state"),
                          "system.state needs 2N = " + std::to_string(2 * n) + " entries (x1, y1, ..., xN, yN)");
    }
    if (cfg.support_z && cfg.support_z->size() == 0) {
        throw ConfigError(line_of("support.z"), "support.z must be nonempty");
    }
    if (cfg.support_p && cfg.support_p->size() != 2 * n) {
        throw ConfigError(line_of("support.p"), "support.p needs 2N entries (xi1, eta1, ...)");
    }
    at_line(line_of("support.nodes"), [&] { cfg.quadrature.validate(); });
    cfg.sim.dual.quadrature = cfg.quadrature;
    if (!(cfg.sim.dual.tol > 0.0)) {
        throw ConfigError(line_of("dual.tol"), "dual.tol must be > 0");
    }
    if (cfg.sim.dual.max_iter < 1) {
        throw ConfigError(line_of("dual.max_iter"), "dual.max_iter must be >= 1");
    }
    if (!(cfg.sim.dual.freeze_ratio >= 0.0 && cfg.sim.dual.freeze_ratio < 1.0)) {
        throw ConfigError(line_of("dual.freeze_ratio"), "dual.freeze_ratio must lie in [0, 1)");
    }
    if (!cfg.epsilon_auto && !(cfg.sim.law.epsilon > 0.0)) {
        throw ConfigError(line_of("control.epsilon"), "control.epsilon must be > 0 (regularization width)");
    }
    if (!(cfg.sim.law.amplitude > 0.0 && cfg.sim.law.amplitude <= 1.0)) {
        throw ConfigError(line_of("control.amplitude"), "control.amplitude must lie in (0, 1] (|u| <= 1)");
    }
    {
        const int l = std::max({line_of("stages.rho_hi"), line_of("stages.rho_lo"), line_of("stages.a_mid")});
        at_line(l, [&] { cfg.sim.stages.validate(); });
    }
    {
        int l = 0;
        for (const char* k : {"sim.t_max", "sim.initial_step", "sim.max_step", "sim.min_step", "sim.rtol",
                              "sim.atol", "sim.stall_threshold", "sim.record_stride", "sim.reuse_delta"}) {
            l = std::max(l, line_of(k));
        }
        at_line(l, [&] { cfg.sim.validate(); });
    }
    if (cfg.sim.standstill.window < 0.0) {
        throw ConfigError(line_of("sim.stall_window"), "sim.stall_window must be > 0 or auto");
    }
    if (cfg.sim.step.max_steps < 1) {
        throw ConfigError(line_of("sim.max_steps"), "sim.max_steps must be >= 1");
    }
    {
        const int l = line_of("sweep.ladder");
        if (cfg.sweep.ladder.size() < 3) {
            throw ConfigError(l, "sweep.ladder needs at least 3 values");
        }
        for (std::size_t k = 0; k < cfg.sweep.ladder.size(); ++k) {
            if (!(cfg.sweep.ladder[k] > 0.0)) {
                throw ConfigError(l, "sweep.ladder values must be > 0");
            }
            if (k > 0 && cfg.sweep.ladder[k] > cfg.sweep.ladder[k - 1]) {
                throw ConfigError(l, "sweep.ladder must be nonincreasing");
            }
        }
    }
    if (!(cfg.sweep.max_ratio > 0.0)) {
        throw ConfigError(line_of("sweep.max_ratio"), "sweep.max_ratio must be > 0");
    }
    for (double p : cfg.sweep.probe_perturbations) {
        if (!(p > 0.0)) {
            throw ConfigError(line_of("sweep.probes"), "sweep.probes must be > 0");
        }
    }
    if (cfg.check.samples < 0) {
        throw ConfigError(line_of("check.samples"), "check.samples must be >= 0");
    }
    if (!(cfg.check.band_factor > 0.0)) {
        throw ConfigError(line_of("check.band_factor"), "check.band_factor must be > 0");
    }
    if (cfg.check.resonance_bound < 1) {
        throw ConfigError(line_of("check.resonance_bound"), "check.resonance_bound must be >= 1");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(0, "cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace genfric
