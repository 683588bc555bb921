#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace choquard::cli {

using nlohmann::json;

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
}

// One JSON object; every read registers its key, finish() rejects the rest.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + "expected an object");
    }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key) {
        known_.push_back(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void read(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) throw ConfigError(key_path(key) + ": expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) throw ConfigError(key_path(key) + ": expected a finite number");
        }
    }

    void read(const std::string& key, int& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
            const auto x = v->get<long long>();
            if (x < -1000000000LL || x > 1000000000LL) throw ConfigError(key_path(key) + ": integer out of range");
            out = static_cast<int>(x);
        }
    }

    void read(const std::string& key, std::uint64_t& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_unsigned()) throw ConfigError(key_path(key) + ": expected a nonnegative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void read(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) throw ConfigError(key_path(key) + ": expected a string");
            out = v->get<std::string>();
        }
    }

    void read(const std::string& key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) throw ConfigError(key_path(key) + ": expected an array of numbers");
            out.clear();
            for (const json& x : *v) {
                if (!x.is_number()) throw ConfigError(key_path(key) + ": expected an array of numbers");
                out.push_back(x.get<double>());
            }
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (std::find(known_.begin(), known_.end(), it.key()) != known_.end()) continue;
            std::string msg = "unknown key '" + key_path(it.key()) + "'";
            const std::string s = suggest(it.key(), known_);
            msg += s.empty() ? "; allowed: " + join(known_) : "; did you mean '" + s + "'?";
            throw ConfigError(msg);
        }
    }

private:
    std::string where() const { return path_.empty() ? "config: " : path_ + ": "; }

    const json& j_;
    std::string path_;
    std::vector<std::string> known_;
};

[[noreturn]] void range_error(const std::string& path, const std::string& constraint, double got) {
    throw ConfigError(fmt::format("{}: expected {}, got {}", path, constraint, got));
}

void require(bool ok, const std::string& path, const std::string& constraint, double got) {
    if (!ok) range_error(path, constraint, got);
}

void parse_potential(const json& j, PotentialConfig& out) {
    Section s(j, "model.potential");
    s.read("name", out.name);
    const std::vector<std::string> presets{"single_well", "double_well", "triple_well"};
    if (std::find(presets.begin(), presets.end(), out.name) == presets.end()) {
        const std::string hint = suggest(out.name, presets);
        throw ConfigError("model.potential.name: unknown preset '" + out.name + "'" +
                          (hint.empty() ? "; available: " + join(presets) : "; did you mean '" + hint + "'?"));
    }
    out.params = potential_defaults(out.name);
    for (auto& [key, value] : out.params) s.read(key, value);
    s.finish();
}

void parse_nonlinearity(const json& j, NonlinearityConfig& out) {
    Section s(j, "model.nonlinearity");
    s.read("name", out.name);
    if (out.name == "power") {
        s.read("p", out.p);
    } else if (out.name != "bl_demo") {
        const std::string hint = suggest(out.name, {"power", "bl_demo"});
        throw ConfigError("model.nonlinearity.name: unknown preset '" + out.name + "'" +
                          (hint.empty() ? "; available: power, bl_demo" : "; did you mean '" + hint + "'?"));
    }
    s.finish();
}

void validate(const RunConfig& c) {
    require(c.grid.n >= 16 && is_power_of_two(c.grid.n), "grid.n", "a power of two >= 16", c.grid.n);
    require(c.grid.n <= 512, "grid.n", "n <= 512", c.grid.n);
    require(c.grid.L > 0.0, "grid.L", "L > 0", c.grid.L);

    const ModelConfig& m = c.model;
    require(m.alpha > 0.0 && m.alpha < 3.0, "model.alpha", "0 < alpha < 3", m.alpha);
    if (m.nonlinearity.name == "power")
        require(m.nonlinearity.p > 2.0 && m.nonlinearity.p < 3.0 + m.alpha, "model.nonlinearity.p",
                fmt::format("2 < p < 3 + alpha = {}", 3.0 + m.alpha), m.nonlinearity.p);
    try {
        parse_zero_mode_rule(m.zero_mode);
    } catch (const std::invalid_argument&) {
        throw ConfigError("model.zero_mode: unknown rule '" + m.zero_mode +
                          "'; available: image_calibrated, truncate_to_box_mean, screen");
    }
    require(m.kappa > 0.0, "model.kappa", "kappa > 0", m.kappa);

    const auto& p = m.potential.params;
    require(p.at("radius") > 0.0, "model.potential.radius", "radius > 0", p.at("radius"));
    if (p.count("separation"))
        require(p.at("separation") > 2.0 * p.at("radius"), "model.potential.separation",
                "separation > 2 radius (disjoint wells)", p.at("separation"));
    if (p.count("spacing"))
        require(p.at("spacing") > 2.0 * p.at("radius"), "model.potential.spacing",
                "spacing > 2 radius (disjoint wells)", p.at("spacing"));
    for (const auto& [key, value] : p)
        if (key == "depth" || key[0] == 'm') require(value >= 1.0, "model.potential." + key, "well minimum >= 1", value);
    const PotentialReport rep = check_potential(make_potential(c), 41);
    if (!rep.ok())
        throw ConfigError("model.potential: preset violates V >= 1 with inf V = 1 or the strict well condition "
                          "(one well minimum must equal 1)");

    require(c.mu > 0.0, "penalization.mu", "μ > 0", c.mu);

    const SolverConfig& s = c.solver;
    try {
        parse_solver_method(s.method);
    } catch (const std::invalid_argument&) {
        throw ConfigError("solver.method: unknown method '" + s.method + "'; available: source_iteration, sobolev_flow");
    }
    require(s.grad_tol > 0.0, "solver.grad_tol", "grad_tol > 0", s.grad_tol);
    require(s.pohozaev_tol > 0.0, "solver.pohozaev_tol", "pohozaev_tol > 0", s.pohozaev_tol);
    require(s.max_iter >= 1, "solver.max_iter", "max_iter >= 1", s.max_iter);
    require(s.tau > 0.0, "solver.tau", "tau > 0", s.tau);
    require(s.newton_tol > 0.0, "solver.newton_tol", "newton_tol > 0", s.newton_tol);
    require(s.max_newton >= 1, "solver.max_newton", "max_newton >= 1", s.max_newton);
    require(s.krylov_dim >= 1, "solver.krylov_dim", "krylov_dim >= 1", s.krylov_dim);
    require(s.krylov_restarts >= 1, "solver.krylov_restarts", "krylov_restarts >= 1", s.krylov_restarts);

    const AnsatzConfig& a = c.ansatz;
    require(a.delta_fraction > 0.0 && a.delta_fraction < 1.0, "ansatz.delta_fraction", "0 < delta_fraction < 1",
            a.delta_fraction);
    require(a.beta_fraction > 0.0 && a.beta_fraction < 1.0, "ansatz.beta_fraction", "0 < beta_fraction < 1",
            a.beta_fraction);
    require(a.d_fraction > 0.0, "ansatz.d_fraction", "d_fraction > 0", a.d_fraction);

    const RunSection& r = c.run;
    require(r.a > 0.0, "run.a", "a > 0", r.a);
    if (r.a_list.empty()) throw ConfigError("run.a_list: expected a nonempty list");
    for (std::size_t i = 0; i < r.a_list.size(); ++i) {
        require(r.a_list[i] > 0.0, fmt::format("run.a_list[{}]", i), "a > 0", r.a_list[i]);
        if (i > 0) require(r.a_list[i] > r.a_list[i - 1], fmt::format("run.a_list[{}]", i), "strictly ascending values",
                           r.a_list[i]);
    }
    require(r.epsilon > 0.0, "run.epsilon", "epsilon > 0", r.epsilon);
    if (r.eps_list.empty()) throw ConfigError("run.eps_list: expected a nonempty list");
    for (std::size_t i = 0; i < r.eps_list.size(); ++i) {
        require(r.eps_list[i] > 0.0, fmt::format("run.eps_list[{}]", i), "epsilon > 0", r.eps_list[i]);
        if (i > 0) require(r.eps_list[i] < r.eps_list[i - 1], fmt::format("run.eps_list[{}]", i),
                           "strictly descending values", r.eps_list[i]);
    }
    const TGridConfig& t = r.t_grid;
    require(t.start > 0.0, "run.t_grid.start", "start > 0", t.start);
    require(t.stop > t.start, "run.t_grid.stop", "stop > start", t.stop);
    require(t.step > 0.0, "run.t_grid.step", "step > 0", t.step);
    require((t.stop - t.start) / t.step <= 10000.0, "run.t_grid.step", "at most 10000 samples", t.step);
    const int wells = static_cast<int>(make_potential(c).size());
    require(r.well >= -1 && r.well < wells, "run.well", fmt::format("-1 <= well < {}", wells), r.well);
}

}  // namespace

std::string suggest(const std::string& key, const std::vector<std::string>& candidates) {
    std::string best;
    std::size_t best_d = 3;
    for (const auto& c : candidates) {
        const std::size_t d = edit_distance(key, c);
        if (d < best_d) best_d = d, best = c;
    }
    return best;
}

const std::map<std::string, double>& potential_defaults(const std::string& name) {
    static const std::map<std::string, std::map<std::string, double>> table{
        {"single_well", {{"radius", 2.0}, {"depth", 1.0}}},
        {"double_well", {{"separation", 3.5}, {"radius", 1.5}, {"m1", 1.0}, {"m2", 1.2}}},
        {"triple_well", {{"spacing", 4.0}, {"radius", 1.5}, {"m1", 1.0}, {"m2", 1.2}, {"m3", 1.4}}},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown potential preset '" + name + "'");
    return it->second;
}

RunConfig parse_config(const json& doc) {
    RunConfig c;
    c.model.potential.params = potential_defaults(c.model.potential.name);
    Section top(doc, "");
    if (const json* j = top.find("grid")) {
        Section s(*j, "grid");
        s.read("n", c.grid.n);
        s.read("L", c.grid.L);
        s.finish();
    }
    if (const json* j = top.find("model")) {
        Section s(*j, "model");
        s.read("alpha", c.model.alpha);
        s.read("zero_mode", c.model.zero_mode);
        s.read("kappa", c.model.kappa);
        if (const json* n = s.find("nonlinearity")) parse_nonlinearity(*n, c.model.nonlinearity);
        if (const json* p = s.find("potential")) parse_potential(*p, c.model.potential);
        s.finish();
    }
    if (const json* j = top.find("penalization")) {
        Section s(*j, "penalization");
        s.read("mu", c.mu);
        s.finish();
    }
    if (const json* j = top.find("solver")) {
        Section s(*j, "solver");
        SolverConfig& o = c.solver;
        s.read("method", o.method);
        s.read("grad_tol", o.grad_tol);
        s.read("pohozaev_tol", o.pohozaev_tol);
        s.read("max_iter", o.max_iter);
        s.read("tau", o.tau);
        s.read("newton_tol", o.newton_tol);
        s.read("max_newton", o.max_newton);
        s.read("krylov_dim", o.krylov_dim);
        s.read("krylov_restarts", o.krylov_restarts);
        s.read("seed", o.seed);
        s.finish();
    }
    if (const json* j = top.find("ansatz")) {
        Section s(*j, "ansatz");
        s.read("delta_fraction", c.ansatz.delta_fraction);
        s.read("beta_fraction", c.ansatz.beta_fraction);
        s.read("d_fraction", c.ansatz.d_fraction);
        s.finish();
    }
    if (const json* j = top.find("run")) {
        Section s(*j, "run");
        RunSection& r = c.run;
        s.read("a", r.a);
        s.read("a_list", r.a_list);
        s.read("epsilon", r.epsilon);
        s.read("eps_list", r.eps_list);
        s.read("well", r.well);
        if (const json* t = s.find("t_grid")) {
            Section ts(*t, "run.t_grid");
            ts.read("start", r.t_grid.start);
            ts.read("stop", r.t_grid.stop);
            ts.read("step", r.t_grid.step);
            ts.finish();
        }
        s.finish();
    }
    top.find("manifest");
    top.finish();
    validate(c);
    return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json to_json(const RunConfig& c) {
    json pot{{"name", c.model.potential.name}};
    for (const auto& [k, v] : c.model.potential.params) pot[k] = v;
    json nl{{"name", c.model.nonlinearity.name}};
    if (c.model.nonlinearity.name == "power") nl["p"] = c.model.nonlinearity.p;
    const SolverConfig& s = c.solver;
    return json{
        {"grid", {{"n", c.grid.n}, {"L", c.grid.L}}},
        {"model",
         {{"alpha", c.model.alpha},
          {"nonlinearity", nl},
          {"potential", pot},
          {"zero_mode", c.model.zero_mode},
          {"kappa", c.model.kappa}}},
        {"penalization", {{"mu", c.mu}}},
        {"solver",
         {{"method", s.method},
          {"grad_tol", s.grad_tol},
          {"pohozaev_tol", s.pohozaev_tol},
          {"max_iter", s.max_iter},
          {"tau", s.tau},
          {"newton_tol", s.newton_tol},
          {"max_newton", s.max_newton},
          {"krylov_dim", s.krylov_dim},
          {"krylov_restarts", s.krylov_restarts},
          {"seed", s.seed}}},
        {"ansatz",
         {{"delta_fraction", c.ansatz.delta_fraction},
          {"beta_fraction", c.ansatz.beta_fraction},
          {"d_fraction", c.ansatz.d_fraction}}},
        {"run",
         {{"a", c.run.a},
          {"a_list", c.run.a_list},
          {"epsilon", c.run.epsilon},
          {"eps_list", c.run.eps_list},
          {"t_grid", {{"start", c.run.t_grid.start}, {"stop", c.run.t_grid.stop}, {"step", c.run.t_grid.step}}},
          {"well", c.run.well}}},
    };
}

Nonlinearity make_nonlinearity(const RunConfig& c) {
    return c.model.nonlinearity.name == "power" ? Nonlinearity::power(c.model.nonlinearity.p) : Nonlinearity::bl_demo();
}

PotentialSpec make_potential(const RunConfig& c) {
    const auto& name = c.model.potential.name;
    const auto& p = c.model.potential.params;
    if (name == "single_well") return PotentialSpec::single_well(p.at("radius"), p.at("depth"));
    if (name == "double_well")
        return PotentialSpec::double_well(p.at("separation"), p.at("radius"), p.at("m1"), p.at("m2"));
    return PotentialSpec::triple_well(p.at("spacing"), p.at("radius"), p.at("m1"), p.at("m2"), p.at("m3"));
}

RieszOperator make_riesz(const RunConfig& c) {
    return RieszOperator(make_grid(c.grid.n, c.grid.L), c.model.alpha, parse_zero_mode_rule(c.model.zero_mode),
                         c.model.kappa);
}

LimitSolverOptions limit_options(const RunConfig& c) {
    LimitSolverOptions o;
    o.method = parse_solver_method(c.solver.method);
    o.grad_tol = c.solver.grad_tol;
    o.pohozaev_tol = c.solver.pohozaev_tol;
    o.max_iter = c.solver.max_iter;
    o.tau = c.solver.tau;
    return o;
}

AnsatzOptions ansatz_options(const RunConfig& c) {
    AnsatzOptions o;
    o.delta_fraction = c.ansatz.delta_fraction;
    o.beta_fraction = c.ansatz.beta_fraction;
    o.limit = limit_options(c);
    return o;
}

PenalizedSolverOptions penalized_options(const RunConfig& c) {
    PenalizedSolverOptions o;
    o.grad_tol = c.solver.newton_tol;
    o.max_newton = c.solver.max_newton;
    o.krylov_dim = c.solver.krylov_dim;
    o.krylov_restarts = c.solver.krylov_restarts;
    o.d_fraction = c.ansatz.d_fraction;
    return o;
}

std::vector<double> t_values(const TGridConfig& t) {
    const int count = static_cast<int>(std::floor((t.stop - t.start) / t.step + 1e-9)) + 1;
    std::vector<double> out;
    // 12 significant digits keep 0.1 + 13 * 0.1 printing as 1.4
    for (int k = 0; k < count; ++k) out.push_back(std::stod(fmt::format("{:.12g}", t.start + k * t.step)));
    return out;
}

}  // namespace choquard::cli
