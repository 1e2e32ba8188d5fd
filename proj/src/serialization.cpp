#include "conflearn/serialization.hpp"

#include "conflearn/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace conflearn {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

Json json_number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

double number_from_json(const Json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ConfigError(what + " must be a number");
}

Json to_json(const ModelParams& p) {
    return Json{{"p", p.p}, {"u", p.u}, {"v", p.v}, {"q", p.q}, {"eps0", p.eps0}};
}

Json to_json(const Support& s) { return Json::array({s.lo(), s.hi()}); }

Json to_json(const SignalSpec& s) {
    return Json{{"family", s.family}, {"coefficients", s.coefficients}, {"support", to_json(s.support)}};
}

Json to_json(const Interval& i) {
    if (i.empty()) return Json{{"empty", true}};
    return Json{{"lo", json_number(i.lo)}, {"hi", json_number(i.hi)}, {"open_lo", i.open_lo},
                {"open_hi", i.open_hi}};
}

Json to_json(const IntervalSet& set) {
    Json out = Json::array();
    for (const auto& i : set) out.push_back(to_json(i));
    return out;
}

Json to_json(const ShockSet& s) {
    Json j{{"pieces", to_json(s.pieces)}, {"length", s.length()}};
    if (!s.warning.empty()) j["warning"] = s.warning;
    return j;
}

Json to_json(const LambdaBounds& b) { return Json{{"lower", b.lo}, {"upper", b.hi}}; }

namespace {

Json check_json(const ConstraintCheck& c) {
    return Json{{"residual", json_number(c.residual)}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

Json occupancy(const RegionOccupancy& o) {
    return Json{{"confounding", o.confounding}, {"herding", o.herding},
                {"single_active", o.single_active}};
}

}  // namespace

Json to_json(const ValidationReport& r) {
    return Json{{"pass", r.pass},
                {"normalization", check_json(r.normalization)},
                {"moment", check_json(r.moment)},
                {"nonnegativity", check_json(r.nonnegativity)},
                {"boundedness", check_json(r.boundedness)},
                {"density_b_mass", r.density_b_mass},
                {"grid_points", r.grid_points},
                {"failures", r.failures()}};
}

Json to_json(const LimitSummary& s) {
    Json bins = Json::array();
    const double width = (s.histogram.hi - s.histogram.lo) / static_cast<double>(s.histogram.counts.size());
    for (std::size_t k = 0; k < s.histogram.counts.size(); ++k) {
        bins.push_back(Json{{"log10_lo", s.histogram.lo + width * static_cast<double>(k)},
                            {"log10_hi", s.histogram.lo + width * static_cast<double>(k + 1)},
                            {"count", s.histogram.counts[k]}});
    }
    return Json{{"true_state", to_string(s.true_state)},
                {"shock", s.shock},
                {"horizon", s.horizon},
                {"n_paths", s.n_paths},
                {"seed", s.seed},
                {"threshold", s.threshold},
                {"fraction_below_threshold", s.fraction_below},
                {"mean_final_lambda", s.mean},
                {"std_error", s.std_error},
                {"absorbed_paths", s.absorbed_paths},
                {"shock_frequency", s.shock_frequency},
                {"histogram", Json{{"bins", bins},
                                   {"underflow", s.histogram.underflow},
                                   {"overflow", s.histogram.overflow}}},
                {"region_occupancy", Json{{"no_shock", occupancy(s.no_shock_regions)},
                                          {"shock", occupancy(s.shock_regions)}}}};
}

Json to_json(const NoShockRoots& r) {
    Json roots = Json::array();
    for (const auto& x : r.roots) {
        roots.push_back(Json{{"lambda", x.lambda},
                             {"residual", x.residual},
                             {"bracket", Json::array({x.bracket_lo, x.bracket_hi})},
                             {"tangency", x.tangency}});
    }
    Json plateaus = Json::array();
    for (const auto& p : r.plateaus) {
        plateaus.push_back(Json{{"lo", p.lo}, {"hi", p.hi}, {"grid_points", p.grid.size()}});
    }
    return Json{{"e0", to_json(r.e0)},
                {"scan", Json::array({r.scan_lo, r.scan_hi})},
                {"truncated", r.truncated},
                {"grid_points", r.grid_points},
                {"plateau_eps", r.plateau_eps},
                {"roots", roots},
                {"plateaus", plateaus}};
}

Json to_json(const StationaryReport& r) {
    Json passing = Json::array();
    std::size_t region_empty = 0;
    for (const auto& g : r.grid) {
        if (g.region_empty) ++region_empty;
        if (g.solutions.empty()) continue;
        double lo = g.solutions.front().lambda, hi = lo, worst = 0.0;
        for (const auto& s : g.solutions) {
            lo = std::min(lo, s.lambda);
            hi = std::max(hi, s.lambda);
            worst = std::max({worst, std::abs(s.g0), std::abs(s.gc)});
        }
        passing.push_back(Json{{"c", g.c},
                               {"count", g.solutions.size()},
                               {"lambda_range", Json::array({lo, hi})},
                               {"max_abs_g", worst}});
    }
    Json crossings = Json::array();
    for (const auto& x : r.crossings) {
        crossings.push_back(Json{{"lambda", x.lambda}, {"c", x.c}, {"residual", x.residual}});
    }
    const auto min_g = r.min_abs_g();
    return Json{{"signal", to_json(r.signal)},
                {"params", to_json(r.params)},
                {"eps", r.eps},
                {"c_min", r.c_min},
                {"no_shock_roots", to_json(r.no_shock)},
                {"shock_set", to_json(r.shocks)},
                {"grid_size", r.grid_size},
                {"spacing", r.spacing},
                {"swept_length", r.swept_length},
                {"include_plateaus", r.include_plateaus},
                {"include_tangencies", r.include_tangencies},
                {"passing", r.passing},
                {"passing_fraction", r.passing_fraction},
                {"measure_estimate", r.measure},
                {"min_abs_g", min_g ? Json(*min_g) : Json(nullptr)},
                {"region_empty_shocks", region_empty},
                {"passing_shocks", passing},
                {"isolated_crossings", crossings}};
}

Json to_json(const BoundAnnotation& a) {
    Json flags = Json::array();
    for (const auto& f : a.flags) {
        flags.push_back(Json{{"c", f.c},
                             {"side", f.below ? "below" : "above"},
                             {"count", f.count},
                             {"lambda_range", Json::array({f.lambda_lo, f.lambda_hi})},
                             {"cutoff_range", Json::array({f.cutoff_lo, f.cutoff_hi})},
                             {"locally_zero_ok", f.locally_zero_ok}});
    }
    Json zero = nullptr;
    if (a.zero_interval) zero = Json::array({a.zero_interval->lo, a.zero_interval->hi});
    return Json{{"lambda_bounds", to_json(a.bounds)},
                {"zero_interval", zero},
                {"slack", Json::array({a.slack_lo, a.slack_hi})},
                {"flags", flags},
                {"warnings", a.warnings}};
}

Json to_json(const ApproxPipelineTrace& t) {
    Json g_bar = Json::array(), g_hat = Json::array();
    for (double c : t.g_bar) g_bar.push_back(c);
    for (double c : t.g_hat) g_hat.push_back(c);
    return Json{{"target", to_json(t.target)},
                {"degree", t.degree},
                {"g_bar", g_bar},
                {"epsilon", t.epsilon},
                {"r", Json{{"power", t.r.power}, {"gamma", t.r.gamma}}},
                {"g_hat", g_hat},
                {"g_hat_moment", t.g_hat_moment},
                {"lifting", Json{{"a", t.lifting.a}, {"b", t.lifting.b}, {"alpha", t.lifting.alpha}}},
                {"alpha_residual", t.alpha_residual},
                {"delta", t.projection.delta},
                {"delta_h", t.projection.delta_h},
                {"kappa", t.projection.kappa},
                {"normalizer", t.projection.normalizer},
                {"g_tilde_moment", t.projection.g_tilde_moment},
                {"g_tilde_min", t.projection.g_tilde_min},
                {"final_min", t.final_min},
                {"sup_error", t.sup_error},
                {"error_grid", t.error_grid},
                {"validation", to_json(t.validation)},
                {"result", to_json(t.result)}};
}

// ---- Strict readers -----------------------------------------------------------

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

}  // namespace

ModelParams params_from_json(const Json& j) {
    reject_unknown(j, {"p", "u", "v", "q", "eps0"}, "params");
    ModelParams p;
    auto read = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = number_from_json(j.at(key), std::string("params.") + key);
    };
    read("p", p.p);
    read("u", p.u);
    read("v", p.v);
    read("q", p.q);
    read("eps0", p.eps0);
    try {
        p.check();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

SignalSpec signal_from_json(const Json& j) {
    reject_unknown(j, {"family", "coefficients", "support"}, "signal");
    if (!j.contains("family") || !j.at("family").is_string()) {
        throw ConfigError("signal.family must be a string");
    }
    SignalSpec s;
    s.family = j.at("family").get<std::string>();
    if (j.contains("coefficients")) {
        const auto& c = j.at("coefficients");
        if (!c.is_array()) throw ConfigError("signal.coefficients must be an array");
        for (const auto& x : c) s.coefficients.push_back(number_from_json(x, "signal.coefficients[]"));
    }
    if (j.contains("support")) {
        const auto& sup = j.at("support");
        if (!sup.is_array() || sup.size() != 2) {
            throw ConfigError("signal.support must be [lo, hi]");
        }
        try {
            s.support = Support(number_from_json(sup[0], "signal.support[0]"),
                                number_from_json(sup[1], "signal.support[1]"));
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
    }
    return s;
}

// ---- Text formatting -----------------------------------------------------------

std::string format_interval(const Interval& i) {
    if (i.empty()) return "empty";
    return std::string(i.open_lo ? "(" : "[") + format_double(i.lo) + ";" + format_double(i.hi) +
           (i.open_hi ? ")" : "]");
}

std::string format_interval_set(const IntervalSet& set) {
    std::string out;
    for (const auto& i : set) {
        if (i.empty()) continue;
        if (!out.empty()) out += " U ";
        out += format_interval(i);
    }
    return out.empty() ? "empty" : out;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
    for (const auto& h : header) field(h);
    end_row();
}

void CsvWriter::field(const std::string& s) {
    if (in_row_ > 0) out_ << ',';
    if (s.find_first_of(",\"\n") != std::string::npos) {
        out_ << '"';
        for (char ch : s) {
            if (ch == '"') out_ << '"';
            out_ << ch;
        }
        out_ << '"';
    } else {
        out_ << s;
    }
    ++in_row_;
}

CsvWriter& CsvWriter::operator<<(double x) {
    field(format_double(x));
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
    field(s);
    return *this;
}

CsvWriter& CsvWriter::operator<<(std::size_t n) {
    field(std::to_string(n));
    return *this;
}

CsvWriter& CsvWriter::operator<<(bool b) {
    field(b ? "1" : "0");
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_) {
        throw std::logic_error("CsvWriter: row has " + std::to_string(in_row_) + " fields, header has " +
                               std::to_string(columns_));
    }
    out_ << '\n';
    in_row_ = 0;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    CsvWriter csv(out, {"t", "chi", "c_eff", "type", "signal", "action", "lambda_before", "lambda_after"});
    for (const auto& r : traj.records) {
        csv << r.t << r.shock << r.c_eff << to_string(r.type) << r.signal << to_string(r.action)
            << r.lambda_before << r.lambda_after;
        csv.end_row();
    }
}

}  // namespace conflearn
