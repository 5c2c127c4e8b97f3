#pragma once

// Lossless JSON / CSV emission.  Symbolic values carry exact rational strings,
// never floats.

#include "moyal/classicality.hpp"
#include "moyal/dynamics.hpp"
#include "moyal/text.hpp"

#include <json.hpp>

#include <sstream>

namespace moyal {

inline nlohmann::ordered_json to_json(const PhasePolynomial& a) {
    nlohmann::ordered_json j;
    j["dof"] = a.dof();
    j["terms"] = nlohmann::ordered_json::array();
    for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it) {
        for (auto& [k, v] : it->second.terms()) {
            nlohmann::ordered_json t;
            t["q"] = it->first.qe;
            t["p"] = it->first.pe;
            t["hbar"] = k;
            t["re"] = rational_to_string(v.re);
            t["im"] = rational_to_string(v.im);
            j["terms"].push_back(std::move(t));
        }
    }
    return j;
}

inline PhasePolynomial phase_from_json(const nlohmann::json& j) {
    PhasePolynomial a(j.at("dof").get<int>());
    for (auto& t : j.at("terms")) {
        Monomial m(a.dof());
        m.qe = t.at("q").get<std::vector<uint32_t>>();
        m.pe = t.at("p").get<std::vector<uint32_t>>();
        if (m.dof() != a.dof() || static_cast<int>(m.pe.size()) != a.dof())
            throw structural_error("exponent vectors have wrong length");
        Rational re(t.at("re").get<std::string>());
        Rational im(t.at("im").get<std::string>());
        a.add_term(std::move(m), Coefficient(GaussianRational{re, im}, t.at("hbar").get<int>()));
    }
    return a;
}

inline nlohmann::ordered_json to_json(const OperatorPolynomial& x) {
    nlohmann::ordered_json j;
    j["dof"] = x.dof();
    j["terms"] = nlohmann::ordered_json::array();
    for (auto it = x.terms().rbegin(); it != x.terms().rend(); ++it) {
        for (auto& [k, v] : it->second.terms()) {
            nlohmann::ordered_json t;
            t["word"] = it->first;
            t["hbar"] = k;
            t["re"] = rational_to_string(v.re);
            t["im"] = rational_to_string(v.im);
            j["terms"].push_back(std::move(t));
        }
    }
    return j;
}

inline nlohmann::ordered_json to_json(const EvolutionSeries& s) {
    nlohmann::ordered_json j;
    j["order"] = s.truncation;
    j["coefficients"] = nlohmann::ordered_json::array();
    for (auto& c : s.coefficients) j["coefficients"].push_back(to_json(c));
    return j;
}

inline nlohmann::ordered_json to_json(const UnitarySeries& u) {
    nlohmann::ordered_json j;
    j["order"] = u.truncation;
    j["coefficients"] = nlohmann::ordered_json::array();
    for (auto& c : u.coefficients) j["coefficients"].push_back(to_json(c));
    j["inverse"] = nlohmann::ordered_json::array();
    for (auto& c : u.inverse) j["inverse"].push_back(to_json(c));
    return j;
}

inline nlohmann::ordered_json to_json(const ClassicalityReport& r) {
    nlohmann::ordered_json j;
    j["order"] = r.max_order;
    j["entries"] = nlohmann::ordered_json::array();
    for (auto& e : r.entries) {
        nlohmann::ordered_json t;
        t["m"] = e.order;
        t["indices"] = e.indices;
        t["norm"] = rational_to_string(e.norm);
        t["bound"] = rational_to_string(e.bound);
        t["pass"] = e.pass;
        j["entries"].push_back(std::move(t));
    }
    j["classical"] = r.classical;
    return j;
}

// header: n,term_index,q_exps,p_exps,hbar_pow,re,im
inline std::string series_csv(const EvolutionSeries& s) {
    std::ostringstream os;
    os << "n,term_index,q_exps,p_exps,hbar_pow,re,im\n";
    for (size_t n = 0; n < s.coefficients.size(); ++n) {
        const auto& c = s.coefficients[n];
        int idx = 0;
        for (auto it = c.terms().rbegin(); it != c.terms().rend(); ++it) {
            for (auto& [k, v] : it->second.terms()) {
                os << n << "," << idx << ",";
                for (size_t j = 0; j < it->first.qe.size(); ++j)
                    os << (j ? " " : "") << it->first.qe[j];
                os << ",";
                for (size_t j = 0; j < it->first.pe.size(); ++j)
                    os << (j ? " " : "") << it->first.pe[j];
                os << "," << k << "," << rational_to_string(v.re) << ","
                   << rational_to_string(v.im) << "\n";
                ++idx;
            }
        }
    }
    return os.str();
}

// header: t,moyal_value,poisson_value — exact rational evaluation on a t-grid
inline std::string trajectory_csv(const EvolutionSeries& moyal_side,
                                  const EvolutionSeries& poisson_side,
                                  const std::vector<Rational>& point, const Rational& hbar,
                                  const Rational& t_max, unsigned steps) {
    std::ostringstream os;
    os << "t,moyal_value,poisson_value\n";
    for (unsigned j = 0; j <= steps; ++j) {
        Rational t = steps == 0 ? Rational(0) : t_max * Rational(j) / Rational(steps);
        GaussianRational mv = moyal_side.evaluate(point, hbar, t);
        GaussianRational pv = poisson_side.evaluate(point, hbar, t);
        auto scalar = [](const GaussianRational& v) {
            if (v.im != 0)
                return rational_to_string(v.re) + "+" + rational_to_string(v.im) + "i";
            return rational_to_string(v.re);
        };
        os << rational_to_string(t) << "," << scalar(mv) << "," << scalar(pv) << "\n";
    }
    return os.str();
}

}  // namespace moyal
