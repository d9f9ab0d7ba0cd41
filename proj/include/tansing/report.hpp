// Result serialization: JSON documents, aligned text tables, and CSV
// (RFC-style quoting). Every run echoes its effective configuration so
// outputs are reproducible byte for byte.
#pragma once

#include <json.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "tansing/bifurcation.hpp"
#include "tansing/canonical.hpp"
#include "tansing/classify.hpp"
#include "tansing/halfreturn.hpp"
#include "tansing/lyapunov.hpp"
#include "tansing/numbers.hpp"

namespace tansing {

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    std::string input_path;
    int order = 8;
    unsigned digits = 50;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double event_tol = 1e-10;
    double polar_threshold = 0.0;
    std::string format = "text"; // text | json | csv
    std::uint64_t seed = 0;

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["input"] = input_path;
        j["order"] = order;
        j["digits"] = digits;
        j["abs_tol"] = abs_tol;
        j["rel_tol"] = rel_tol;
        j["event_tol"] = event_tol;
        j["polar_threshold"] = polar_threshold;
        j["format"] = format;
        j["seed"] = seed;
        return j;
    }

    IntegratorConfig integrator() const {
        IntegratorConfig cfg;
        cfg.abs_tol = abs_tol;
        cfg.rel_tol = rel_tol;
        cfg.event_tol = event_tol;
        cfg.polar_threshold = polar_threshold;
        return cfg;
    }
};

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16g", v);
    return buf;
}

template <class F>
std::string fmt_number(const F& v) {
    if constexpr (FieldTraits<F>::is_exact)
        return v.str();
    else
        return v.str(static_cast<std::streamsize>(real_digits()), std::ios_base::scientific);
}

inline std::string csv_quote(const std::string& s) {
    bool need = s.find_first_of(",\"\n") != std::string::npos;
    if (!need) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline Json to_json(const TangencyClassification& cls) {
    Json j;
    j["k_plus"] = cls.k_plus;
    j["k_minus"] = cls.k_minus;
    j["delta"] = cls.delta;
    j["invisible_plus"] = cls.invisible_plus;
    j["invisible_minus"] = cls.invisible_minus;
    j["orientation_ok"] = cls.orientation_ok;
    j["monodromic"] = cls.monodromic;
    j["convention"] = cls.convention == SignConvention::standard ? "standard" : "reversed";
    j["lie_sign_plus"] = cls.lie_sign_plus;
    j["lie_sign_minus"] = cls.lie_sign_minus;
    return j;
}

inline std::string classification_text(const TangencyClassification& cls) {
    std::string out;
    if (cls.monodromic) {
        out = "monodromic (" + std::to_string(2 * cls.k_plus) + "," + std::to_string(2 * cls.k_minus) +
              "), delta=" + std::to_string(cls.delta);
        if (cls.convention == SignConvention::reversed) out += " [reversed sign convention]";
    } else {
        out = "not monodromic:";
        if (!cls.orientation_ok) out += " orientation condition fails (X+(0,0) X-(0,0) >= 0);";
        if (!cls.invisible_plus) out += " upper contact not invisible;";
        if (!cls.invisible_minus) out += " lower contact not invisible;";
    }
    return out;
}

template <class F>
Json to_json(const CanonicalForm<F>& cf) {
    Json j;
    j["delta"] = cf.delta;
    j["k_plus"] = cf.k_plus;
    j["k_minus"] = cf.k_minus;
    j["a_plus"] = fmt_number(cf.a_plus);
    j["a_minus"] = fmt_number(cf.a_minus);
    j["order"] = cf.order;
    auto f_arr = [](const UniSeries<F>& s) {
        Json a = Json::array();
        for (int i = 0; i <= s.order(); ++i) a.push_back(fmt_number(s.coeff(i)));
        return a;
    };
    auto g_arr = [](const BiSeries<F>& s) {
        Json a = Json::array();
        for (int d = 0; d <= s.order(); ++d)
            for (int i = 0; i <= d; ++i) {
                if (field_is_zero(s.coeff(i, d - i))) continue;
                Json e = Json::array();
                e.push_back(i);
                e.push_back(d - i);
                e.push_back(fmt_number(s.coeff(i, d - i)));
                a.push_back(e);
            }
        return a;
    };
    j["f_plus"] = f_arr(cf.f_plus);
    j["f_minus"] = f_arr(cf.f_minus);
    j["g_plus"] = g_arr(cf.g_plus);
    j["g_minus"] = g_arr(cf.g_minus);
    return j;
}

template <class F>
Json to_json(const LyapunovResult<F>& res) {
    Json j;
    j["order"] = res.order;
    Json rows = Json::array();
    for (int n = 2; n <= res.order; ++n) {
        Json r;
        r["n"] = n;
        r["alpha_plus"] = fmt_number(res.alpha_at(Side::upper, n));
        r["alpha_minus"] = fmt_number(res.alpha_at(Side::lower, n));
        r["V"] = fmt_number(res.V_at(n));
        rows.push_back(r);
    }
    j["coefficients"] = rows;
    if (res.first_nonzero) {
        j["first_nonzero_index"] = res.first_nonzero->first;
        j["first_nonzero_sign"] = res.first_nonzero->second;
    }
    j["verdict"] = res.verdict == Verdict::center_up_to_order
                       ? ("center up to order " + std::to_string(res.order))
                       : verdict_name(res.verdict);
    return j;
}

template <class F>
std::string lyapunov_table(const LyapunovResult<F>& res) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"n", "alpha_n^+", "alpha_n^-", "V_n"});
    for (int n = 2; n <= res.order; ++n)
        rows.push_back({std::to_string(n), fmt_number(res.alpha_at(Side::upper, n)),
                        fmt_number(res.alpha_at(Side::lower, n)), fmt_number(res.V_at(n))});
    std::vector<std::size_t> width(4, 0);
    for (const auto& r : rows)
        for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], r[c].size());
    std::string out;
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < 4; ++c) {
            out += r[c];
            out += std::string(width[c] - r[c].size() + 2, ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    out += "verdict: ";
    out += res.verdict == Verdict::center_up_to_order
               ? ("center up to order " + std::to_string(res.order))
               : verdict_name(res.verdict);
    out += '\n';
    return out;
}

template <class F>
Json to_json(const HopfReport<F>& rep) {
    Json j;
    j["lambda0"] = fmt_number(rep.lambda0);
    j["lambda0_approx"] = FieldTraits<F>::to_double(rep.lambda0);
    j["exact_root"] = rep.exact_root;
    j["V2_at_lambda0"] = fmt_number(rep.V2_at_lambda0);
    j["d"] = fmt_number(rep.d);
    j["ell"] = fmt_number(rep.ell);
    j["hypothesis_ok"] = rep.hypothesis_ok;
    if (rep.hypothesis_ok) {
        j["existence_side"] = rep.existence_sign > 0 ? "lambda > lambda0" : "lambda < lambda0";
        j["predicted_stability"] = rep.predicted_stable ? "stable" : "unstable";
        j["x_star_coefficient"] = rep.x_star_coefficient;
        j["x_star_model"] = "x*(lambda) ~ x_star_coefficient * sqrt(|lambda - lambda0|)";
    }
    return j;
}

template <class F>
Json to_json(const DegenerateHopfReport<F>& rep) {
    Json j;
    Json names = Json::array(), at = Json::array(), v = Json::array(), jac = Json::array();
    for (const auto& n : rep.names) names.push_back(n);
    for (const auto& x : rep.lambda0) at.push_back(fmt_number(x));
    for (const auto& x : rep.V_vector) v.push_back(fmt_number(x));
    for (const auto& row : rep.jacobian) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(fmt_number(x));
        jac.push_back(r);
    }
    j["parameters"] = names;
    j["lambda0"] = at;
    j["V_vector"] = v;
    j["V_next"] = fmt_number(rep.V_next);
    j["jacobian"] = jac;
    j["det"] = fmt_number(rep.det);
    j["det_approx"] = FieldTraits<F>::to_double(rep.det);
    j["hypothesis_ok"] = rep.hypothesis_ok;
    return j;
}

inline Json to_json(const CycleSearch& cs) {
    Json j;
    Json arr = Json::array();
    for (const auto& c : cs.cycles) {
        Json e;
        e["x_star"] = c.x_star;
        e["stability"] = c.stable ? "stable" : "unstable";
        arr.push_back(e);
    }
    j["cycles"] = arr;
    j["count"] = cs.cycles.size();
    j["possible_center"] = cs.possible_center;
    if (cs.possible_center) j["note"] = "no isolated roots above the noise floor - possible center";
    j["valid_samples"] = cs.valid_samples;
    j["failed_samples"] = cs.failed_samples;
    return j;
}

} // namespace tansing
