// Command-line front end for the phase-space algebra engine.
//
// Verbs: star | bracket | poisson | dequantize | quantize | evolve | unitary
//        | classicality | eval
// Exit codes: 0 success, 2 parse error, 3 precondition/range error,
//             4 internal-consistency failure.

#include "moyal/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace moyal;

namespace {

struct CommonOpts {
    int dof = 1;
    std::string hbar = "symbolic";
    std::string format = "text";
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--dof", o.dof, "degrees of freedom")->check(CLI::PositiveNumber);
    cmd->add_option("--hbar", o.hbar, "'symbolic' or an exact rational value");
    cmd->add_option("--format", o.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--out", o.out, "output path (default stdout)");
}

void emit(const CommonOpts& o, const std::string& payload) {
    if (o.out.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw structural_error("cannot open output file: " + o.out);
        f << payload;
    }
}

Rational parse_rational_arg(const std::string& s, const std::string& what) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw structural_error("invalid rational for " + what + ": '" + s + "'");
    }
}

Rational require_numeric_hbar(const CommonOpts& o) {
    if (o.hbar == "symbolic")
        throw structural_error("this command requires --hbar <rational>");
    return parse_rational_arg(o.hbar, "--hbar");
}

std::vector<Rational> parse_rational_list(const std::string& s, size_t want,
                                          const std::string& what) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational_arg(item, what));
    if (out.size() != want)
        throw structural_error(what + " needs " + std::to_string(want) + " comma-separated values");
    return out;
}

std::string poly_payload(const PhasePolynomial& a, const CommonOpts& o) {
    if (o.format == "json") return to_json(a).dump(2) + "\n";
    if (o.format == "csv") throw structural_error("csv format applies to series output only");
    return render(a) + "\n";
}

std::string op_payload(const OperatorPolynomial& x, const CommonOpts& o) {
    if (o.format == "json") return to_json(x).dump(2) + "\n";
    if (o.format == "csv") throw structural_error("csv format applies to series output only");
    return render(x) + "\n";
}

std::string series_payload(const EvolutionSeries& s, const CommonOpts& o) {
    if (o.format == "json") return to_json(s).dump(2) + "\n";
    if (o.format == "csv") return series_csv(s);
    std::ostringstream os;
    for (size_t n = 0; n < s.coefficients.size(); ++n)
        os << "t^" << n << ": " << render(s.coefficients[n]) << "\n";
    return os.str();
}

int dispatch(CLI::App& app);

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact star-product algebra on polynomial phase-space observables"};
    app.require_subcommand(1);
    try {
        CommonOpts common;

        auto* star_cmd = app.add_subcommand("star", "star product of two classical polynomials");
        auto* bracket_cmd = app.add_subcommand("bracket", "Moyal bracket of two classical polynomials");
        auto* poisson_cmd = app.add_subcommand("poisson", "Poisson bracket of two classical polynomials");
        std::string lhs, rhs;
        for (auto* c : {star_cmd, bracket_cmd, poisson_cmd}) {
            c->add_option("lhs", lhs, "left operand")->required();
            c->add_option("rhs", rhs, "right operand")->required();
            add_common(c, common);
        }

        auto* deq_cmd = app.add_subcommand("dequantize", "map an operator expression to its Weyl symbol");
        auto* quant_cmd = app.add_subcommand("quantize", "map a classical polynomial to its Weyl-ordered operator");
        std::string single;
        for (auto* c : {deq_cmd, quant_cmd}) {
            c->add_option("expr", single, "expression")->required();
            add_common(c, common);
        }

        auto* evolve_cmd = app.add_subcommand("evolve", "Heisenberg-type time series for an observable");
        std::string ham, obs, at_point, tmax = "1";
        unsigned order = 4, tsteps = 10;
        evolve_cmd->add_option("hamiltonian", ham, "Hamiltonian symbol")->required();
        evolve_cmd->add_option("observable", obs, "initial observable")->required();
        evolve_cmd->add_option("--order", order, "series truncation K");
        evolve_cmd->add_option("--at", at_point,
                               "2N comma-separated rationals; with numeric --hbar emits a "
                               "t,moyal_value,poisson_value trajectory table");
        evolve_cmd->add_option("--tmax", tmax, "trajectory end time (rational)");
        evolve_cmd->add_option("--tsteps", tsteps, "trajectory steps");
        add_common(evolve_cmd, common);

        auto* unitary_cmd = app.add_subcommand("unitary", "star-unitary evolution series for a Hamiltonian");
        unitary_cmd->add_option("hamiltonian", ham, "Hamiltonian symbol")->required();
        unitary_cmd->add_option("--order", order, "series truncation K");
        add_common(unitary_cmd, common);

        auto* eval_cmd = app.add_subcommand("eval", "evaluate a classical polynomial at a point");
        eval_cmd->add_option("expr", single, "expression")->required();
        eval_cmd->add_option("--at", at_point, "2N comma-separated rationals")->required();
        add_common(eval_cmd, common);

        auto* cls_cmd = app.add_subcommand("classicality", "error-ket classicality report on a Gaussian state");
        std::string mean_q = "0", mean_p = "0", cov_qq, cov_pp, cov_qp = "0";
        std::string center, margin;
        unsigned max_order = 1;
        std::vector<std::string> observables;
        cls_cmd->add_option("observables", observables, "classical observables to test")->required();
        cls_cmd->add_option("--mean-q", mean_q, "per-mode q means (comma rationals)");
        cls_cmd->add_option("--mean-p", mean_p, "per-mode p means");
        cls_cmd->add_option("--cov-qq", cov_qq, "per-mode q variances")->required();
        cls_cmd->add_option("--cov-pp", cov_pp, "per-mode p variances")->required();
        cls_cmd->add_option("--cov-qp", cov_qp, "per-mode qp covariances");
        cls_cmd->add_option("--center", center, "2N classical central values")->required();
        cls_cmd->add_option("--margin", margin, "2N positive error margins")->required();
        cls_cmd->add_option("--max-order", max_order, "criterion order M");
        add_common(cls_cmd, common);

        app.parse(argc, argv);

        const int dof = common.dof;
        if (star_cmd->parsed() || bracket_cmd->parsed() || poisson_cmd->parsed()) {
            PhasePolynomial a = parse_classical(lhs, dof);
            PhasePolynomial b = parse_classical(rhs, dof);
            PhasePolynomial r = star_cmd->parsed()      ? star(a, b)
                                : bracket_cmd->parsed() ? moyal_bracket(a, b)
                                                        : poisson_bracket(a, b);
            emit(common, poly_payload(r, common));
        } else if (deq_cmd->parsed()) {
            emit(common, poly_payload(dequantize(parse_operator(single, dof)), common));
        } else if (quant_cmd->parsed()) {
            emit(common, op_payload(quantize(parse_classical(single, dof)), common));
        } else if (evolve_cmd->parsed()) {
            PhasePolynomial h = parse_classical(ham, dof);
            PhasePolynomial a = parse_classical(obs, dof);
            EvolutionSeries s = heisenberg_series(h, a, order);
            if (!at_point.empty()) {
                Rational hb = require_numeric_hbar(common);
                auto point = parse_rational_list(at_point, 2 * dof, "--at");
                EvolutionSeries ps = poisson_series(h, a, order);
                emit(common, trajectory_csv(s, ps, point, hb,
                                            parse_rational_arg(tmax, "--tmax"), tsteps));
            } else {
                emit(common, series_payload(s, common));
            }
        } else if (unitary_cmd->parsed()) {
            UnitarySeries u = unitary_series(parse_classical(ham, dof), order);
            if (common.format == "json") {
                emit(common, to_json(u).dump(2) + "\n");
            } else if (common.format == "csv") {
                EvolutionSeries s;
                s.truncation = u.truncation;
                s.coefficients = u.coefficients;
                emit(common, series_csv(s));
            } else {
                std::ostringstream os;
                for (size_t n = 0; n < u.coefficients.size(); ++n)
                    os << "U t^" << n << ": " << render(u.coefficients[n]) << "\n";
                for (size_t n = 0; n < u.inverse.size(); ++n)
                    os << "Uinv t^" << n << ": " << render(u.inverse[n]) << "\n";
                emit(common, os.str());
            }
        } else if (eval_cmd->parsed()) {
            PhasePolynomial a = parse_classical(single, dof);
            Rational hb = require_numeric_hbar(common);
            auto point = parse_rational_list(at_point, 2 * dof, "--at");
            GaussianRational v = a.evaluate(point, hb);
            std::string s = rational_to_string(v.re);
            if (v.im != 0) s += (v.im > 0 ? "+" : "") + rational_to_string(v.im) + "i";
            emit(common, s + "\n");
        } else if (cls_cmd->parsed()) {
            Rational hb = require_numeric_hbar(common);
            GaussianState state(dof, parse_rational_list(mean_q, dof, "--mean-q"),
                                parse_rational_list(mean_p, dof, "--mean-p"),
                                parse_rational_list(cov_qq, dof, "--cov-qq"),
                                parse_rational_list(cov_pp, dof, "--cov-pp"),
                                parse_rational_list(cov_qp, dof, "--cov-qp"), hb);
            ClassicalDatum datum(parse_rational_list(center, 2 * dof, "--center"),
                                 parse_rational_list(margin, 2 * dof, "--margin"));
            std::vector<PhasePolynomial> obs_list;
            for (auto& text : observables) obs_list.push_back(parse_classical(text, dof));
            ClassicalityReport report = classicality_check(state, datum, obs_list, max_order);
            if (common.format == "json") {
                emit(common, to_json(report).dump(2) + "\n");
            } else {
                std::ostringstream os;
                for (auto& e : report.entries) {
                    os << "m=" << e.order << " indices=[";
                    for (size_t j = 0; j < e.indices.size(); ++j)
                        os << (j ? " " : "") << e.indices[j];
                    os << "] norm=" << rational_to_string(e.norm)
                       << " bound=" << rational_to_string(e.bound)
                       << (e.pass ? " pass" : " FAIL") << "\n";
                }
                os << "verdict: " << (report.classical ? "" : "not ") << report.max_order
                   << "-order classical\n";
                emit(common, os.str());
            }
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const parse_error& e) {
        std::cerr << "parse error at " << e.line << ":" << e.col << ": " << e.what() << "\n";
        return 2;
    } catch (const consistency_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 4;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
