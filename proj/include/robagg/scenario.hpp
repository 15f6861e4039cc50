#pragma once

// Scenario files ("robagg-scenario/1" JSON documents) and the command
// runners behind the CLI. Every command is a pure function of the parsed
// document and the run options, and returns a table.

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "robagg/robagg.hpp"

namespace robagg::scenario {

using nlohmann::json;

inline constexpr const char* schema_version = "robagg-scenario/1";

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"evaluate", "aggregate",  "project", "chernoff",
                                                "treatment", "ellsberg",  "estimate", "asdf",
                                                "sdf",       "jamesstein", "demo-invariance", "demo-dictator"};
    return names;
}

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<std::string, double>;

struct Table {
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;  // free-form lines for the human report
};

inline std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return format_number(std::get<double>(c));
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t k = 0; k < t.header.size(); ++k) os << (k ? "," : "") << csv_quote(t.header[k]);
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_quote(format_cell(row[k]));
        os << "\r\n";
    }
}

inline void write_human(std::ostream& os, const Table& t) {
    std::vector<std::size_t> width(t.header.size(), 0);
    for (std::size_t k = 0; k < t.header.size(); ++k) width[k] = t.header[k].size();
    for (const auto& row : t.rows)
        for (std::size_t k = 0; k < row.size() && k < width.size(); ++k)
            width[k] = std::max(width[k], format_cell(row[k]).size());
    if (!t.title.empty()) os << t.title << "\n";
    auto line = [&](auto get) {
        for (std::size_t k = 0; k < width.size(); ++k) {
            const std::string cell = get(k);
            os << (k ? "  " : "") << cell << std::string(width[k] - cell.size(), ' ');
        }
        os << "\n";
    };
    line([&](std::size_t k) { return t.header[k]; });
    line([&](std::size_t k) { return std::string(width[k], '-'); });
    for (const auto& row : t.rows) line([&](std::size_t k) { return k < row.size() ? format_cell(row[k]) : ""; });
    for (const auto& n : t.notes) os << n << "\n";
}

// ---------------------------------------------------------------------------
// Parsing helpers

inline const json& field(const json& j, const char* key) {
    require(j.is_object() && j.contains(key), ErrorCode::SchemaError, std::string("missing field '") + key + "'");
    return j.at(key);
}

inline double number(const json& j, const char* what) {
    require(j.is_number(), ErrorCode::SchemaError, std::string("'") + what + "' must be a number");
    return j.get<double>();
}

inline double number_field(const json& j, const char* key) { return number(field(j, key), key); }

inline double number_field(const json& j, const char* key, double fallback) {
    return j.is_object() && j.contains(key) ? number(j.at(key), key) : fallback;
}

inline std::vector<double> numbers(const json& j, const char* what) {
    require(j.is_array(), ErrorCode::SchemaError, std::string("'") + what + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number(v, what));
    return out;
}

inline std::vector<double> numbers_field(const json& j, const char* key) { return numbers(field(j, key), key); }

inline std::vector<std::string> strings(const json& j, const char* what) {
    require(j.is_array(), ErrorCode::SchemaError, std::string("'") + what + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : j) {
        require(v.is_string(), ErrorCode::SchemaError, std::string("'") + what + "' must contain strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

/// A number or the string "inf".
inline Lambda lambda_value(const json& j) {
    if (j.is_string()) {
        require(j.get<std::string>() == "inf", ErrorCode::SchemaError, "lambda must be a positive number or \"inf\"");
        return Lambda::infinity();
    }
    const double v = number(j, "lambda");
    require(v > 0.0, ErrorCode::SchemaError, "lambda must be positive");
    return Lambda(v);
}

inline std::vector<Lambda> lambda_list(const json& params, const char* one, const char* many, const Lambda& fallback) {
    if (params.is_object() && params.contains(many)) {
        const auto& arr = params.at(many);
        require(arr.is_array() && !arr.empty(), ErrorCode::SchemaError, std::string("'") + many + "' must be a nonempty array");
        std::vector<Lambda> out;
        for (const auto& v : arr) out.push_back(lambda_value(v));
        return out;
    }
    if (params.is_object() && params.contains(one)) return {lambda_value(params.at(one))};
    return {fallback};
}

inline std::string lambda_text(const Lambda& l) { return l.is_infinite() ? "inf" : format_number(l.value()); }

inline Dist dist_field(const json& j, const char* key) { return Dist(numbers_field(j, key)); }

inline StateVector vector_field(const json& j, const char* key) { return StateVector(numbers_field(j, key)); }

// ---------------------------------------------------------------------------
// Scenario model

struct StructuredSpec {
    std::string kind = "finite";  // singleton | finite | hull | balls
    std::optional<std::vector<Dist>> beliefs;
};

struct Scenario {
    std::string command;  // may be empty
    StateSpace states;
    std::vector<std::string> outcomes;
    Profile profile;
    bool has_profile = false;
    Lambda lambda = Lambda(1.0);
    std::string penalty = "kl";
    StructuredSpec structured;
    json params = json::object();
};

inline Scenario parse(const json& doc) {
    require(doc.is_object(), ErrorCode::SchemaError, "scenario must be a JSON object");
    require(doc.contains("version") && doc.at("version") == schema_version, ErrorCode::SchemaError,
            std::string("scenario version must be \"") + schema_version + "\"");
    Scenario sc;
    if (doc.contains("command")) {
        require(doc.at("command").is_string(), ErrorCode::SchemaError, "'command' must be a string");
        sc.command = doc.at("command").get<std::string>();
        const auto& names = command_names();
        require(std::find(names.begin(), names.end(), sc.command) != names.end(), ErrorCode::SchemaError,
                "unknown command '" + sc.command + "'");
    }
    if (doc.contains("command_params")) {
        sc.params = doc.at("command_params");
        require(sc.params.is_object(), ErrorCode::SchemaError, "'command_params' must be an object");
    }
    if (doc.contains("planner")) {
        const auto& pl = doc.at("planner");
        require(pl.is_object(), ErrorCode::SchemaError, "'planner' must be an object");
        if (pl.contains("lambda")) sc.lambda = lambda_value(pl.at("lambda"));
        if (pl.contains("penalty")) {
            require(pl.at("penalty").is_string(), ErrorCode::SchemaError, "'penalty' must be a string");
            sc.penalty = pl.at("penalty").get<std::string>();
            require(sc.penalty == "kl" || sc.penalty == "chi2", ErrorCode::SchemaError,
                    "penalty must be \"kl\" or \"chi2\"");
        }
        if (pl.contains("structured")) {
            const auto& st = pl.at("structured");
            require(st.is_object(), ErrorCode::SchemaError, "'structured' must be an object");
            if (st.contains("kind")) {
                require(st.at("kind").is_string(), ErrorCode::SchemaError, "'structured.kind' must be a string");
                sc.structured.kind = st.at("kind").get<std::string>();
            }
            const auto& k = sc.structured.kind;
            require(k == "singleton" || k == "finite" || k == "hull" || k == "balls", ErrorCode::SchemaError,
                    "structured.kind must be singleton, finite, hull or balls");
            if (st.contains("beliefs")) {
                require(st.at("beliefs").is_array(), ErrorCode::SchemaError, "'structured.beliefs' must be an array");
                std::vector<Dist> b;
                for (const auto& row : st.at("beliefs")) b.emplace_back(numbers(row, "structured.beliefs"));
                sc.structured.beliefs = std::move(b);
            }
        }
    }
    if (doc.contains("states")) {
        sc.states = StateSpace(strings(doc.at("states"), "states"));
        sc.outcomes = strings(field(doc, "outcomes"), "outcomes");
        const auto& agents = field(doc, "agents");
        require(agents.is_array() && !agents.empty(), ErrorCode::SchemaError, "'agents' must be a nonempty array");
        for (const auto& a : agents) {
            Agent ag;
            require(field(a, "name").is_string(), ErrorCode::SchemaError, "agent 'name' must be a string");
            ag.name = a.at("name").get<std::string>();
            const auto& util = field(a, "utility");
            require(util.is_object(), ErrorCode::SchemaError, "agent 'utility' must be an object");
            for (const auto& [o, v] : util.items()) {
                require(std::find(sc.outcomes.begin(), sc.outcomes.end(), o) != sc.outcomes.end(),
                        ErrorCode::UnknownOutcome, "agent '" + ag.name + "' rates undeclared outcome '" + o + "'");
                ag.utility[o] = number(v, "utility");
            }
            for (const auto& o : sc.outcomes)
                require(ag.utility.count(o) == 1, ErrorCode::SchemaError,
                        "agent '" + ag.name + "' has no utility for outcome '" + o + "'");
            ag.reference = dist_field(a, "reference");
            require(ag.reference.size() == sc.states.size(), ErrorCode::SchemaError,
                    "agent '" + ag.name + "' reference has the wrong length");
            ag.radius = number_field(a, "radius", 0.0);
            sc.profile.agents.push_back(std::move(ag));
        }
        if (doc.contains("acts")) {
            const auto& acts = doc.at("acts");
            require(acts.is_object(), ErrorCode::SchemaError, "'acts' must be an object");
            for (const auto& [id, v] : acts.items()) {
                auto outs = strings(v, "acts");
                require(outs.size() == sc.states.size(), ErrorCode::SchemaError,
                        "act '" + id + "' must list one outcome per state");
                for (const auto& o : outs)
                    require(std::find(sc.outcomes.begin(), sc.outcomes.end(), o) != sc.outcomes.end(),
                            ErrorCode::UnknownOutcome, "act '" + id + "' references undeclared outcome '" + o + "'");
                sc.profile.acts[id] = std::move(outs);
            }
        }
        const json pl = doc.value("planner", json::object());
        sc.profile.beta = pl.contains("beta") ? numbers(pl.at("beta"), "beta")
                                              : std::vector<double>(sc.profile.agents.size(), 1.0);
        sc.profile.gamma = number_field(pl, "gamma", 0.0);
        validate(sc.profile);
        sc.has_profile = true;
    }
    if (sc.structured.beliefs)
        for (const auto& b : *sc.structured.beliefs)
            require(!sc.has_profile || b.size() == sc.states.size(), ErrorCode::SchemaError,
                    "structured belief has the wrong length");
    return sc;
}

inline json load(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Commands

struct RunOptions {
    std::uint64_t seed = 1;
    std::size_t samples = 1000;
    double tol = 1e-8;
};

namespace detail {

inline void need_profile(const Scenario& sc, const std::string& cmd) {
    require(sc.has_profile, ErrorCode::SchemaError, "command '" + cmd + "' needs states, outcomes and agents");
}

inline void need_acts(const Scenario& sc, const std::string& cmd) {
    need_profile(sc, cmd);
    require(!sc.profile.acts.empty(), ErrorCode::SchemaError, "command '" + cmd + "' needs at least one act");
}

inline std::vector<Dist> references(const Scenario& sc) {
    std::vector<Dist> out;
    for (const auto& a : sc.profile.agents) out.push_back(a.reference);
    return out;
}

inline std::vector<Dist> beliefs_or_references(const Scenario& sc) {
    return sc.structured.beliefs ? *sc.structured.beliefs : references(sc);
}

inline StructuredSet structured_set(const Scenario& sc) {
    const auto& k = sc.structured.kind;
    if (k == "balls") {
        std::vector<Ball> balls;
        for (std::size_t i = 0; i < sc.profile.agents.size(); ++i)
            if (sc.profile.beta[i] > 0.0) balls.emplace_back(sc.profile.agents[i].reference, sc.profile.agents[i].radius);
        return BallIntersection{balls};
    }
    auto b = beliefs_or_references(sc);
    if (k == "singleton") {
        require(b.size() == 1, ErrorCode::SchemaError, "a singleton structured set takes exactly one belief");
        return Singleton{b.front()};
    }
    if (k == "hull") return HullOfFinite{b};
    return FiniteSet{b};
}

inline std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + format_number(v[k]);
    return s;
}

inline std::string join(const Dist& d) { return join(d.vec()); }

inline Table evaluate(const Scenario& sc) {
    need_acts(sc, "evaluate");
    const auto q = structured_set(sc);
    Table t{"evaluate: welfare per act", {"act", "lambda", "penalty", "value", "meu_value", "worst_case_belief"}, {}, {}};
    for (const auto& [id, outs] : sc.profile.acts) {
        const StateVector u0 = social_utility(sc.profile, id);
        double value = 0.0;
        std::string belief;
        if (sc.penalty == "kl") {
            const auto sol = entropic_solve(u0, q, sc.lambda);
            value = sol.value;
            belief = join(sol.worst_case);
        } else {
            value = variational_phi_value(u0, Planner{sc.lambda, chi2_phi(), q});
        }
        t.rows.push_back({id, lambda_text(sc.lambda), sc.penalty, value, meu_value(u0, q), belief});
    }
    return t;
}

inline Table aggregate(const Scenario& sc) {
    need_acts(sc, "aggregate");
    require(!sc.lambda.is_infinite(), ErrorCode::SchemaError, "aggregate needs a finite lambda");
    Table t{"aggregate: act-dependent social belief", {"act", "level", "outcome", "belief", "weights",
                                                       "reconstruction_residual", "kkt_residual", "degenerate"}, {}, {}};
    for (const auto& [id, outs] : sc.profile.acts) {
        const auto r = social_belief_for_act(sc.profile, id, sc.lambda.value());
        const auto levels = act_levels(sc.profile, id);
        for (const auto& [level, mu] : r.weights_by_level) {
            std::size_t s0 = 0;
            while (levels[s0] != level) ++s0;
            t.rows.push_back({id, static_cast<double>(level), outs[s0], join(r.belief), join(mu),
                              r.reconstruction_residual, r.kkt_residual, std::string(r.degenerate ? "yes" : "no")});
        }
    }
    return t;
}

inline Table project(const Scenario& sc) {
    need_profile(sc, "project");
    const Dist p_star = dist_field(sc.params, "p_star");
    const auto balls = profile_balls(sc.profile);
    const auto r = kl_project_to_intersection(p_star, balls, sc.profile.beta);
    Table t{"project: truth model onto the structured set", {"method", "sigma", "projected", "weights", "divergence"}, {}, {}};
    t.rows.push_back({std::string("kl"), r.sigma, join(r.projected), join(r.mixture_weights), r.divergence});
    if (sc.params.contains("rho")) {
        const double rho = number_field(sc.params, "rho");
        std::vector<Dist> pts;
        std::vector<double> radii;
        for (std::size_t i = 0; i < sc.profile.agents.size(); ++i)
            if (sc.profile.beta[i] > 0.0) {
                pts.push_back(sc.profile.agents[i].reference);
                radii.push_back(sc.profile.agents[i].radius);
            }
        const auto ra = rho_aggregate(p_star, pts, radii, rho);
        t.rows.push_back({"rho=" + format_number(rho), ra.sigmas.back(), join(ra.aggregate), join(ra.sigmas),
                          rho_divergence(rho, p_star, ra.aggregate)});
    }
    return t;
}

inline Table chernoff(const Scenario& sc) {
    need_profile(sc, "chernoff");
    const auto r = chernoff_point(beliefs_or_references(sc), DivergenceFamily{KLFamily{}});
    Table t{"chernoff: minimal common radius", {"radius", "point", "weights", "residual"}, {}, {}};
    t.rows.push_back({r.radius, join(r.point), join(r.weights), r.residual});
    return t;
}

inline Table treatment(const Scenario& sc) {
    WelfareTable table;
    if (sc.params.contains("table")) {
        const auto& tb = sc.params.at("table");
        const auto a = numbers_field(tb, "a");
        const auto b = numbers_field(tb, "b");
        require(a.size() == 2 && b.size() == 2, ErrorCode::SchemaError, "welfare table rows must have two entries");
        table.a = {a[0], a[1]};
        table.b = {b[0], b[1]};
    }
    std::vector<double> mus = sc.params.contains("mus") ? numbers_field(sc.params, "mus")
                                                        : std::vector<double>{number_field(sc.params, "mu")};
    const auto lambdas = lambda_list(sc.params, "lambda", "lambdas", sc.lambda);
    Table t{"treatment: optimal treated share", {"lambda", "mu", "beta_hat", "value"}, {}, {}};
    for (const auto& l : lambdas)
        for (double mu : mus) {
            const auto r = treatment_solve(table, l, mu);
            t.rows.push_back({lambda_text(l), mu, r.beta_hat, r.value});
        }
    return t;
}

inline Table ellsberg(const Scenario& sc) {
    const double p1 = number_field(sc.params, "p1");
    const double p2 = number_field(sc.params, "p2");
    const double mu = number_field(sc.params, "mu", 0.5);
    const auto lambdas = lambda_list(sc.params, "lambda", "lambdas", sc.lambda);
    Table t{"ellsberg: two-urn bets", {"lambda", "V_fR", "V_fB", "V_piR", "V_piB", "ranking"}, {}, {}};
    for (const auto& l : lambdas) {
        const auto r = ellsberg_run(l, p1, p2, mu);
        t.rows.push_back({lambda_text(l), r.v_bet_red, r.v_bet_black, r.v_lottery_red, r.v_lottery_black, r.ranking});
    }
    return t;
}

inline Table estimate(const Scenario& sc) {
    EstimationInput in;
    in.wealth = numbers_field(sc.params, "wealth");
    in.ce_lottery = numbers_field(sc.params, "ce_lottery");
    in.ce_social_lottery = number_field(sc.params, "ce_social_lottery");
    in.ce_ambiguous = number_field(sc.params, "ce_ambiguous");
    in.stake = number_field(sc.params, "stake", 100.0);
    const auto r = estimate_parameters(in);
    Table t{"estimate: revealed-preference parameters", {"parameter", "value"}, {}, {}};
    for (std::size_t i = 0; i < r.phi_hats.size(); ++i) t.rows.push_back({"phi_" + std::to_string(i + 1), r.phi_hats[i]});
    for (std::size_t i = 0; i < r.beta_hats.size(); ++i) t.rows.push_back({"beta_" + std::to_string(i + 1), r.beta_hats[i]});
    t.rows.push_back({std::string("lambda"), r.lambda_hat});
    t.rows.push_back({std::string("max_ce_residual"), r.max_ce_residual});
    if (r.lambda_effectively_infinite) t.notes.push_back("lambda reached the upper search bound: effectively infinite");
    return t;
}

inline Table asdf_cmd(const Scenario& sc) {
    const auto r = asdf(dist_field(sc.params, "q0"), vector_field(sc.params, "u0_c1"), number_field(sc.params, "lambda"),
                        number_field(sc.params, "psi"), vector_field(sc.params, "payoff"),
                        vector_field(sc.params, "u0prime_ratio"));
    Table t{"asdf: announcement-adjusted pricing", {"tilt", "pre_price", "post_prices", "premium"}, {}, {}};
    t.rows.push_back({join(r.tilt), r.pre_price, join(r.post_prices.vec()), r.premium});
    return t;
}

inline Table sdf_cmd(const Scenario& sc) {
    const auto r = sdf_project(dist_field(sc.params, "q0"), vector_field(sc.params, "payoff"),
                               number_field(sc.params, "target"));
    Table t{"sdf: entropic pricing projection", {"ell", "tilt"}, {}, {}};
    t.rows.push_back({r.ell.as_double(), join(r.tilt)});
    return t;
}

inline Table jamesstein(const Scenario& sc) {
    const auto signals = numbers_field(sc.params, "signals");
    std::optional<std::vector<double>> w;
    if (sc.params.contains("weights")) w = numbers_field(sc.params, "weights");
    const auto weights = w ? *w : james_stein_weights(signals);
    Table t{"jamesstein: weighted likelihood estimate", {"estimate", "weights"}, {}, {}};
    t.rows.push_back({james_stein_wle(signals, w), join(weights)});
    return t;
}

inline Table demo_invariance_cmd(const Scenario& sc, const RunOptions& opt) {
    need_acts(sc, "demo-invariance");
    const auto beliefs = beliefs_or_references(sc);
    const auto lambdas = lambda_list(sc.params, "lambda", "lambdas", sc.lambda);
    Table t{"demo-invariance: finite set versus its hull",
            {"act", "lambda", "value_finite", "value_hull", "min_sampled", "gap", "minimizer", "pass"}, {}, {}};
    for (const auto& [id, outs] : sc.profile.acts)
        for (const auto& l : lambdas) {
            const auto r = demo_invariance(social_utility(sc.profile, id), beliefs, l, opt.samples, opt.seed);
            const bool pass = r.gap <= opt.tol && r.minimizer_is_generator;
            t.rows.push_back({id, lambda_text(l), r.value_finite, r.value_hull, r.min_sampled, r.gap,
                              static_cast<double>(r.minimizer), std::string(pass ? "yes" : "no")});
        }
    t.notes.push_back("the minimizing belief is always one of the listed beliefs (column 'minimizer')");
    return t;
}

inline Table demo_dictator_cmd(const Scenario& sc) {
    need_acts(sc, "demo-dictator");
    const auto candidates = beliefs_or_references(sc);
    std::vector<StateVector> acts;
    std::vector<std::string> names;
    for (const auto& [id, outs] : sc.profile.acts) {
        acts.push_back(social_utility(sc.profile, id));
        names.push_back(id);
    }
    const auto r = demo_dictator(candidates, acts, sc.lambda);
    std::vector<std::string> header{"candidate", "agent", "selected"};
    for (const auto& n : names) header.push_back("V[" + n + "]");
    header.push_back("min_advantage_of_selected");
    Table t{"demo-dictator: welfare-dominant belief", header, {}, {}};
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        std::vector<Cell> row{static_cast<double>(c),
                              c < sc.profile.agents.size() && !sc.structured.beliefs ? sc.profile.agents[c].name
                                                                                     : std::string("-"),
                              std::string(c == r.selected ? "yes" : "no")};
        for (double v : r.values[c]) row.push_back(v);
        row.push_back(r.min_advantage[c]);
        t.rows.push_back(std::move(row));
    }
    const std::string who = !sc.structured.beliefs && r.selected < sc.profile.agents.size()
                                ? sc.profile.agents[r.selected].name
                                : "candidate " + std::to_string(r.selected);
    t.notes.push_back("probability dictator: " + who);
    t.notes.push_back(std::string("selected row weakly dominates: ") + (r.selected_dominates ? "yes" : "no"));
    return t;
}

} // namespace detail

/// Runs one command. When the document names a command it must match.
inline Table run(const std::string& command, const json& doc, const RunOptions& opt = {}) {
    const Scenario sc = parse(doc);
    require(sc.command.empty() || sc.command == command, ErrorCode::SchemaError,
            "scenario is for command '" + sc.command + "', not '" + command + "'");
    if (command == "evaluate") return detail::evaluate(sc);
    if (command == "aggregate") return detail::aggregate(sc);
    if (command == "project") return detail::project(sc);
    if (command == "chernoff") return detail::chernoff(sc);
    if (command == "treatment") return detail::treatment(sc);
    if (command == "ellsberg") return detail::ellsberg(sc);
    if (command == "estimate") return detail::estimate(sc);
    if (command == "asdf") return detail::asdf_cmd(sc);
    if (command == "sdf") return detail::sdf_cmd(sc);
    if (command == "jamesstein") return detail::jamesstein(sc);
    if (command == "demo-invariance") return detail::demo_invariance_cmd(sc, opt);
    if (command == "demo-dictator") return detail::demo_dictator_cmd(sc);
    fail(ErrorCode::SchemaError, "unknown command '" + command + "'");
}

/// Process exit status for an error: 2 input/schema, 3 solver, 4 infeasible.
inline int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyIntersection:
    case ErrorCode::AbsoluteContinuityFailure: return 4;
    case ErrorCode::SolverDiverged:
    case ErrorCode::NoConvergence:
    case ErrorCode::BracketFailure:
    case ErrorCode::NoRoot:
    case ErrorCode::NonConcaveDetected: return 3;
    default: return 2;
    }
}

} // namespace robagg::scenario
