// tansing — Lyapunov coefficients of monodromic tangential singularities
// of planar piecewise-polynomial vector fields, with a numerical
// half-return oracle and bifurcation hypothesis checks.
//
// Subcommands: classify, lyapunov, verify, hopf, hopfn, cycles, sweep,
// polar. All outputs echo the effective configuration; identical
// (input, config, seed) produce byte-identical output.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tansing/bifurcation.hpp"
#include "tansing/input.hpp"
#include "tansing/polar.hpp"
#include "tansing/report.hpp"

using namespace tansing;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class F>
std::map<std::string, F> bindings_with_sets(const FieldSpec& spec, const std::vector<std::string>& sets) {
    std::map<std::string, F> env = default_bindings<F>(spec);
    for (const std::string& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects name=value, got '" + s + "'");
        const std::string name = s.substr(0, eq);
        ExprPtr e = parse_expression(s.substr(eq + 1));
        env[name] = eval_expression<F>(e, env);
    }
    for (const std::string& n : spec.names_used())
        if (!env.count(n)) throw UsageError("parameter '" + n + "' is unbound; bind it in the file or via --set");
    return env;
}

void emit(const RunConfig& rc, const Json& result, const std::string& text_body) {
    if (rc.format == "json") {
        Json doc;
        doc["config"] = rc.to_json();
        doc["result"] = result;
        std::cout << doc.dump(2) << "\n";
    } else {
        Json cfg = rc.to_json();
        for (const auto& [k, v] : cfg.items())
            std::cout << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        std::cout << text_body;
    }
}

// run `fn` with the field bound in the input's natural coefficient field
template <class Fn>
int with_bound_field(const FieldSpec& spec, const std::vector<std::string>& sets, unsigned digits, Fn&& fn) {
    if (spec.has_real_parameter()) {
        PrecisionScope scope(digits);
        auto env = bindings_with_sets<Real>(spec, sets);
        fn(bind_field(spec, env), env);
    } else {
        auto env = bindings_with_sets<Rational>(spec, sets);
        fn(bind_field(spec, env), env);
    }
    return 0;
}

struct VerifyRow {
    double x0 = 0;
    bool ok_plus = false, ok_minus = false;
    double phi_plus = 0, phi_minus = 0;
    double ser_plus = 0, ser_minus = 0;
    double resid_plus = 0, resid_minus = 0;
    std::string note;
};

template <class F, class S>
std::vector<VerifyRow> verify_rows(const PiecewiseField<F>& field, const TangencyClassification& cls,
                                   const LyapunovResult<F>& lr, const std::vector<double>& x0s,
                                   const IntegratorConfig& cfg) {
    NumericField<S> nf = NumericField<S>::from(field);
    auto phi_plus_ser = half_return_series(lr, Side::upper, lr.order);
    auto phi_minus_ser = half_return_series(lr, Side::lower, lr.order);
    std::vector<VerifyRow> rows;
    for (double x0 : x0s) {
        VerifyRow r;
        r.x0 = x0;
        const S sx0(x0);
        auto run = [&](Side side, const UniSeries<F>& ser, bool& ok, double& num_out, double& ser_out,
                       double& resid) {
            const S sv = ser.template evaluate<S>(sx0);
            if constexpr (std::is_same_v<S, double>)
                ser_out = sv;
            else
                ser_out = sv.template convert_to<double>();
            try {
                const S num = half_return(nf, cls, side, sx0, cfg);
                using std::abs;
                const S res = abs(num - sv);
                if constexpr (std::is_same_v<S, double>) {
                    num_out = num;
                    resid = res;
                } else {
                    num_out = num.template convert_to<double>();
                    resid = res.template convert_to<double>();
                }
                ok = true;
            } catch (const DomainError& e) {
                ok = false;
                r.note = e.what();
            }
        };
        run(Side::upper, phi_plus_ser, r.ok_plus, r.phi_plus, r.ser_plus, r.resid_plus);
        run(Side::lower, phi_minus_ser, r.ok_minus, r.phi_minus, r.ser_minus, r.resid_minus);
        rows.push_back(r);
    }
    return rows;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lyapunov coefficients of monodromic tangential singularities"};
    app.require_subcommand(1);

    RunConfig rc;
    std::vector<std::string> sets;
    app.add_option("--digits", rc.digits, "working precision (decimal digits) for big-float runs");
    app.add_option("--format", rc.format, "output format: text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--order", rc.order, "truncation order N for the coefficient recursion");
    app.add_option("--tol", rc.abs_tol, "integrator absolute/relative tolerance");
    app.add_option("--event-tol", rc.event_tol, "section-crossing location tolerance");
    app.add_option("--polar-threshold", rc.polar_threshold, "|x0| below which the polar chart is used");
    app.add_option("--seed", rc.seed, "seed echoed into the output header");
    app.add_option("--set", sets, "bind or override a parameter, name=value")->take_all();

    std::string input_path;
    bool dump_canonical = false;
    std::string x0_list = "0.1,0.05,0.025,0.0125";
    double min_slope = -1;
    bool high_precision = false;
    std::string param_name;
    std::string interval = "0:1";
    int grid = 64;
    std::string range = "0.01:0.5";
    int samples = 120;
    std::vector<std::string> hopfn_params;
    int polar_p = 1, polar_q = 1;
    int polar_samples = 256;
    double polar_tol = 1e-12;
    std::string sweep_values;

    auto* c_classify = app.add_subcommand("classify", "tangency classification of the input field");
    c_classify->add_option("input", input_path, "JSON field description")->required();

    auto* c_lyap = app.add_subcommand("lyapunov", "Lyapunov coefficients V_2..V_N and verdict");
    c_lyap->add_option("input", input_path)->required();
    c_lyap->add_flag("--dump-canonical", dump_canonical, "include the canonical form in the output");

    auto* c_verify = app.add_subcommand("verify", "series vs integrated half-return comparison");
    c_verify->add_option("input", input_path)->required();
    c_verify->add_option("--x0", x0_list, "comma-separated section points");
    c_verify->add_option("--min-slope", min_slope, "required agreement order (default N + 0.7)");
    c_verify->add_flag("--hp", high_precision, "integrate in big-float precision (--digits)");

    auto* c_hopf = app.add_subcommand("hopf", "scan V_2 for codimension-one bifurcation points");
    c_hopf->add_option("input", input_path)->required();
    c_hopf->add_option("--param", param_name, "parameter to scan")->required();
    c_hopf->add_option("--interval", interval, "scan interval lo:hi");
    c_hopf->add_option("--grid", grid, "scan grid intervals");

    auto* c_hopfn = app.add_subcommand("hopfn", "n-parameter degenerate bifurcation hypothesis check");
    c_hopfn->add_option("input", input_path)->required();
    c_hopfn->add_option("--params", hopfn_params, "parameter names (their file values are the point)")
        ->required()
        ->take_all();

    auto* c_cycles = app.add_subcommand("cycles", "locate limit cycles from the displacement function");
    c_cycles->add_option("input", input_path)->required();
    c_cycles->add_option("--range", range, "search range lo:hi on the section");
    c_cycles->add_option("--samples", samples, "grid samples across the range");

    auto* c_map = app.add_subcommand("map", "CSV of (x0, phi+, phi-, displacement) over a grid");
    c_map->add_option("input", input_path)->required();
    c_map->add_option("--range", range, "section range lo:hi");
    c_map->add_option("--samples", samples, "grid samples across the range");

    auto* c_sweep = app.add_subcommand("sweep", "CSV of (parameter, V_2..V_N) over a value list");
    c_sweep->add_option("input", input_path)->required();
    c_sweep->add_option("--param", param_name, "parameter to sweep")->required();
    c_sweep->add_option("--values", sweep_values, "comma-separated parameter values")->required();

    auto* c_polar = app.add_subcommand("polar", "table of the generalized trigonometric pair");
    c_polar->add_option("--p", polar_p, "exponent p");
    c_polar->add_option("--q", polar_q, "exponent q");
    c_polar->add_option("--samples", polar_samples, "table rows across one period");
    c_polar->add_option("--gen-tol", polar_tol, "integration tolerance");

    // global flags may appear after the subcommand
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    rc.input_path = input_path;
    rc.rel_tol = rc.abs_tol;
    set_real_digits(rc.digits);

    try {
        if (*c_polar) {
            rc.command = "polar";
            GenTrig trig(polar_p, polar_q, polar_tol);
            std::string body = "theta,Cs,Sn\n";
            for (int i = 0; i <= polar_samples; ++i) {
                const double th = -trig.period() / 2 + trig.period() * i / polar_samples;
                auto [c, s] = trig.eval(th);
                body += fmt_double(th) + "," + fmt_double(c) + "," + fmt_double(s) + "\n";
            }
            Json j;
            j["p"] = polar_p;
            j["q"] = polar_q;
            j["period"] = trig.period();
            j["identity_residual"] = trig.identity_residual();
            j["csv"] = body;
            emit(rc, j, "# period: " + fmt_double(trig.period()) + "\n" + body);
            return 0;
        }

        const std::string text = read_file(input_path);
        FieldSpec spec = parse_field_spec(text);

        if (*c_classify) {
            rc.command = "classify";
            with_bound_field(spec, sets, rc.digits, [&](const auto& field, const auto&) {
                auto cls = classify(field);
                emit(rc, to_json(cls), classification_text(cls) + "\n");
                if (!cls.monodromic) throw NotMonodromic("classification rejects the input (see report)");
            });
            return 0;
        }

        if (*c_lyap) {
            rc.command = "lyapunov";
            with_bound_field(spec, sets, rc.digits, [&](const auto& field, const auto&) {
                auto cls = classify(field);
                if (!cls.monodromic) throw NotMonodromic(classification_text(cls));
                auto cf = canonical_form(field, cls, canonical_order_for(rc.order, cls.k_plus, cls.k_minus));
                auto res = lyapunov_coefficients(cf, rc.order);
                Json j;
                j["classification"] = to_json(cls);
                if (dump_canonical) j["canonical"] = to_json(cf);
                j["lyapunov"] = to_json(res);
                emit(rc, j, classification_text(cls) + "\n" + lyapunov_table(res));
            });
            return 0;
        }

        if (*c_verify) {
            rc.command = "verify";
            std::vector<double> x0s;
            std::stringstream ss(x0_list);
            std::string tok;
            while (std::getline(ss, tok, ',')) x0s.push_back(std::stod(tok));
            if (min_slope < 0) min_slope = rc.order + 0.7;

            with_bound_field(spec, sets, rc.digits, [&](const auto& field, const auto&) {
                auto cls = classify(field);
                if (!cls.monodromic) throw NotMonodromic(classification_text(cls));
                auto cf = canonical_form(field, cls, canonical_order_for(rc.order, cls.k_plus, cls.k_minus));
                auto res = lyapunov_coefficients(cf, rc.order);
                IntegratorConfig icfg = rc.integrator();
                std::vector<VerifyRow> rows;
                if (high_precision) {
                    PrecisionScope scope(std::max(rc.digits, 30u));
                    icfg = IntegratorConfig::high_precision(std::max(rc.digits, 30u));
                    rows = verify_rows<typename std::decay_t<decltype(field)>::value_type, Real>(
                        field, cls, res, x0s, icfg);
                } else {
                    rows = verify_rows<typename std::decay_t<decltype(field)>::value_type, double>(
                        field, cls, res, x0s, icfg);
                }

                std::vector<std::pair<double, double>> pts_p, pts_m;
                for (const auto& r : rows) {
                    if (r.ok_plus && r.resid_plus > 0) pts_p.push_back({std::abs(r.x0), r.resid_plus});
                    if (r.ok_minus && r.resid_minus > 0) pts_m.push_back({std::abs(r.x0), r.resid_minus});
                }
                Json j;
                Json jr = Json::array();
                std::string body = "x0,phi_plus,series_plus,resid_plus,phi_minus,series_minus,resid_minus,note\n";
                int ok_rows = 0;
                for (const auto& r : rows) {
                    Json e;
                    e["x0"] = r.x0;
                    e["ok_plus"] = r.ok_plus;
                    e["ok_minus"] = r.ok_minus;
                    e["phi_plus"] = r.phi_plus;
                    e["series_plus"] = r.ser_plus;
                    e["resid_plus"] = r.resid_plus;
                    e["phi_minus"] = r.phi_minus;
                    e["series_minus"] = r.ser_minus;
                    e["resid_minus"] = r.resid_minus;
                    if (!r.note.empty()) e["note"] = r.note;
                    jr.push_back(e);
                    if (r.ok_plus || r.ok_minus) ++ok_rows;
                    body += fmt_double(r.x0) + "," + fmt_double(r.phi_plus) + "," + fmt_double(r.ser_plus) +
                            "," + fmt_double(r.resid_plus) + "," + fmt_double(r.phi_minus) + "," +
                            fmt_double(r.ser_minus) + "," + fmt_double(r.resid_minus) + "," +
                            csv_quote(r.note) + "\n";
                }
                j["rows"] = jr;
                double slope_p = 0, slope_m = 0;
                bool have_slopes = pts_p.size() >= 2 && pts_m.size() >= 2;
                if (have_slopes) {
                    slope_p = fit_power_law_slope(pts_p);
                    slope_m = fit_power_law_slope(pts_m);
                    j["slope_plus"] = slope_p;
                    j["slope_minus"] = slope_m;
                    j["min_slope"] = min_slope;
                    j["slopes_ok"] = slope_p >= min_slope && slope_m >= min_slope;
                    body += "# slope_plus: " + fmt_double(slope_p) + "\n";
                    body += "# slope_minus: " + fmt_double(slope_m) + "\n";
                }
                emit(rc, j, body);
                if (ok_rows == 0) throw NoReturn("every verification row failed");
            });
            return 0;
        }

        if (*c_hopf) {
            rc.command = "hopf";
            auto colon = interval.find(':');
            if (colon == std::string::npos) throw UsageError("--interval expects lo:hi");
            const std::string lo_s = interval.substr(0, colon), hi_s = interval.substr(colon + 1);
            auto report_all = [&](const auto& reps) {
                Json arr = Json::array();
                std::string body;
                for (const auto& r : reps) {
                    arr.push_back(to_json(r));
                    body += to_json(r).dump(2) + "\n";
                }
                if (reps.empty()) body = "no V_2 sign change on the interval\n";
                emit(rc, arr, body);
            };
            // an interval without a root is an empty (successful) result
            if (spec.has_real_parameter()) {
                PrecisionScope scope(rc.digits);
                std::vector<HopfReport<Real>> reps;
                try {
                    reps = hopf_scan<Real>(spec, param_name, Real(lo_s), Real(hi_s), grid);
                } catch (const NoSignChange&) {
                }
                report_all(reps);
            } else {
                std::vector<HopfReport<Rational>> reps;
                try {
                    reps = hopf_scan<Rational>(spec, param_name, detail::decimal_to_rational(lo_s),
                                               detail::decimal_to_rational(hi_s), grid);
                } catch (const NoSignChange&) {
                }
                report_all(reps);
            }
            return 0;
        }

        if (*c_hopfn) {
            rc.command = "hopfn";
            const int n = static_cast<int>(hopfn_params.size());
            PrecisionScope scope(rc.digits);
            if (spec.has_real_parameter()) {
                auto env = bindings_with_sets<Real>(spec, sets);
                std::vector<Real> at;
                for (const auto& p : hopfn_params) {
                    if (!env.count(p)) throw UsageError("parameter '" + p + "' has no value");
                    at.push_back(env[p]);
                }
                auto rep = degenerate_hopf_check(spec, hopfn_params, at, n);
                emit(rc, to_json(rep), to_json(rep).dump(2) + "\n");
            } else {
                auto env = bindings_with_sets<Rational>(spec, sets);
                std::vector<Rational> at;
                for (const auto& p : hopfn_params) {
                    if (!env.count(p)) throw UsageError("parameter '" + p + "' has no value");
                    at.push_back(env[p]);
                }
                auto rep = degenerate_hopf_check(spec, hopfn_params, at, n);
                emit(rc, to_json(rep), to_json(rep).dump(2) + "\n");
            }
            return 0;
        }

        if (*c_cycles) {
            rc.command = "cycles";
            auto colon = range.find(':');
            if (colon == std::string::npos) throw UsageError("--range expects lo:hi");
            const double lo = std::stod(range.substr(0, colon));
            const double hi = std::stod(range.substr(colon + 1));
            with_bound_field(spec, sets, rc.digits, [&](const auto& field, const auto&) {
                auto cls = classify(field);
                if (!cls.monodromic) throw NotMonodromic(classification_text(cls));
                auto nf = NumericField<double>::from(field);
                auto cs = find_cycles(nf, cls, lo, hi, samples, rc.integrator());
                std::string body;
                for (const auto& c : cs.cycles)
                    body += "cycle at x* = " + fmt_double(c.x_star) + " (" +
                            (c.stable ? "stable" : "unstable") + ")\n";
                if (cs.cycles.empty())
                    body += cs.possible_center ? "no isolated roots - possible center\n" : "no cycles found\n";
                emit(rc, to_json(cs), body);
            });
            return 0;
        }

        if (*c_map) {
            rc.command = "map";
            auto colon = range.find(':');
            if (colon == std::string::npos) throw UsageError("--range expects lo:hi");
            const double lo = std::stod(range.substr(0, colon));
            const double hi = std::stod(range.substr(colon + 1));
            if (samples < 2) throw UsageError("--samples must be at least 2");
            with_bound_field(spec, sets, rc.digits, [&](const auto& field, const auto&) {
                auto cls = classify(field);
                if (!cls.monodromic) throw NotMonodromic(classification_text(cls));
                auto nf = NumericField<double>::from(field);
                auto cf = canonical_form(field, cls, canonical_order_for(4, cls.k_plus, cls.k_minus));
                PolarRouter router(nf, cls, cf, rc.integrator());
                std::string body = "x0,phi_plus,phi_minus,displacement,note\n";
                Json arr = Json::array();
                int ok_rows = 0;
                for (int i = 0; i < samples; ++i) {
                    const double x0 = lo + (hi - lo) * i / (samples - 1);
                    Json row;
                    row["x0"] = x0;
                    try {
                        const double pp = router.half_return(Side::upper, x0);
                        const double pm = router.half_return(Side::lower, x0);
                        const double d = cls.delta * (pp - pm);
                        row["phi_plus"] = pp;
                        row["phi_minus"] = pm;
                        row["displacement"] = d;
                        body += fmt_double(x0) + "," + fmt_double(pp) + "," + fmt_double(pm) + "," +
                                fmt_double(d) + ",\n";
                        ++ok_rows;
                    } catch (const DomainError& e) {
                        row["note"] = e.what();
                        body += fmt_double(x0) + ",,,," + csv_quote(e.what()) + "\n";
                    }
                    arr.push_back(row);
                }
                emit(rc, arr, body);
                if (ok_rows == 0) throw NoReturn("every section point failed");
            });
            return 0;
        }

        if (*c_sweep) {
            rc.command = "sweep";
            std::vector<std::string> vals;
            std::stringstream ss(sweep_values);
            std::string tok;
            while (std::getline(ss, tok, ',')) vals.push_back(tok);
            std::string body = param_name;
            for (int n = 2; n <= rc.order; ++n) body += ",V_" + std::to_string(n);
            body += "\n";
            Json arr = Json::array();
            auto run = [&](auto field_tag) {
                using F = decltype(field_tag);
                auto base = default_bindings<F>(spec);
                for (const auto& v : vals) {
                    std::map<std::string, F> env = base;
                    env[param_name] = eval_expression<F>(parse_expression(v), env);
                    auto V = eval_V_at(spec, env, rc.order);
                    Json row;
                    row[param_name] = v;
                    body += v;
                    Json vv = Json::array();
                    for (const auto& x : V) {
                        vv.push_back(fmt_number(x));
                        body += "," + csv_quote(fmt_number(x));
                    }
                    row["V"] = vv;
                    body += "\n";
                    arr.push_back(row);
                }
            };
            if (spec.has_real_parameter()) {
                PrecisionScope scope(rc.digits);
                run(Real());
            } else {
                run(Rational());
            }
            emit(rc, arr, body);
            return 0;
        }

        throw UsageError("no subcommand selected");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
