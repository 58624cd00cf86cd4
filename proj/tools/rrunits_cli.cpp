// rrunits: exact q-series expansions and verifications for the modular-unit
// families built from Siegel functions and Hall-Littlewood sums.
//
// Subcommands: expand, verify, rank, unit-check, cusp-limit, stabilizer, eval.
// Output is JSON by default ("--format text" for a human summary); exit code
// is 0 on success, 1 on verification failure, 2 on usage errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "rrunits/json_io.hpp"
#include "rrunits/suites.hpp"

using namespace rrunits;

namespace {

struct GlobalOpts {
    std::string format = "json";
    std::string out_file;
};

void emit(const json& j, const GlobalOpts& g, const std::string& text_summary) {
    std::string payload = g.format == "text" ? text_summary : j.dump(2) + "\n";
    if (g.out_file.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(g.out_file);
        if (!out) throw std::runtime_error("cannot open output file " + g.out_file);
        out << payload;
    }
}

std::string suite_text(const SuiteReport& rep) {
    std::string s = "suite " + rep.suite + ": " + std::to_string(rep.count("pass")) + " pass, " +
                    std::to_string(rep.count("fail")) + " fail, " +
                    std::to_string(rep.count("inconclusive")) + " inconclusive (" +
                    std::to_string(rep.wall_ms) + " ms)\n";
    for (const auto& c : rep.cases)
        if (c.status != "pass")
            s += "  [" + c.status + "] " + c.id + " (" + c.params + ") " + c.detail + "\n";
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact arithmetic for generalized Rogers-Ramanujan modular units"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOpts g;
    app.add_option("--format", g.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", g.out_file, "write output to a file instead of stdout");

    // expand
    auto* expand = app.add_subcommand("expand", "emit a truncated exact q-expansion");
    std::string obj = "s";
    unsigned ell = 5;
    long m = 1, s_num = 0;
    unsigned n = 1;
    std::string order_str = "10";
    expand->add_option("--object", obj, "g | G | r | s | psi1")
        ->check(CLI::IsMember({"g", "G", "r", "s", "psi1"}));
    expand->add_option("--ell", ell, "level (odd >= 5 for r/s)");
    expand->add_option("--m", m, "index m (numerator of a1 for g)");
    expand->add_option("--s", s_num, "numerator of a2 (object g only)");
    expand->add_option("--n", n, "second parameter (psi1 only)");
    expand->add_option("--order", order_str, "truncation order, rational p/q");

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    SuiteParams sp;
    unsigned v_ell = 0, v_m = 0, v_n = 0, v_maxp = 101, v_prec = 20, v_seed = 12345;
    std::string v_order;
    verify->add_option("--suite", suite, "one of: grr kl reduction s-from-r selberg rr-classical rank-sweep cusp-limits stabilizers numeric-cm rationality")
        ->required();
    verify->add_option("--ell", v_ell, "restrict to a single level");
    verify->add_option("--m", v_m, "first parameter");
    verify->add_option("--n", v_n, "second parameter");
    verify->add_option("--order", v_order, "series truncation order");
    verify->add_option("--max-prime", v_maxp, "largest prime in sweeps (default 101)");
    verify->add_option("--prec", v_prec, "decimal digits for numeric checks");
    verify->add_option("--seed", v_seed, "seed for randomized case selection only");

    // rank
    auto* rank = app.add_subcommand("rank", "divisor-lattice rank reports");
    unsigned r_ell = 5, r_sweep = 0;
    long r_c = 2;
    rank->add_option("--ell", r_ell, "prime level");
    rank->add_option("--c", r_c, "multiplier (default 2)");
    rank->add_option("--sweep-primes", r_sweep, "report every prime 5..MAX instead");

    // unit-check
    auto* uc = app.add_subcommand("unit-check", "Kubert-Lang modularity of s_{ell,m}");
    unsigned u_ell = 5, u_m = 1;
    uc->add_option("--ell", u_ell, "odd level >= 5")->required();
    uc->add_option("--m", u_m, "index m")->required();

    // cusp-limit
    auto* cl = app.add_subcommand("cusp-limit", "exact limit of s_{ell,m} at the cusp 0");
    unsigned c_ell = 5, c_m = 1, c_prec = 0;
    cl->add_option("--ell", c_ell, "prime level >= 5")->required();
    cl->add_option("--m", c_m, "index m")->required();
    cl->add_option("--numeric", c_prec, "also embed numerically with this many digits");

    // stabilizer
    auto* st = app.add_subcommand("stabilizer", "Galois classes fixing s_{ell,m}");
    unsigned st_ell = 5, st_m = 1;
    st->add_option("--ell", st_ell, "small prime level")->required();
    st->add_option("--m", st_m, "index m")->required();

    // eval
    auto* ev = app.add_subcommand("eval", "high-precision value at a CM point");
    std::string e_obj = "s", e_point = "i";
    unsigned e_ell = 5, e_prec = 30;
    long e_m = 1;
    double e_re = 0.0, e_im = 1.0;
    ev->add_option("--object", e_obj, "s | r | rr")->check(CLI::IsMember({"s", "r", "rr"}));
    ev->add_option("--ell", e_ell, "level");
    ev->add_option("--m", e_m, "index m");
    ev->add_option("--point", e_point, "i | rho | custom")
        ->check(CLI::IsMember({"i", "rho", "custom"}));
    ev->add_option("--point-re", e_re, "Re tau (with --point custom)");
    ev->add_option("--point-im", e_im, "Im tau (with --point custom)");
    ev->add_option("--prec", e_prec, "decimal digits");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*expand) {
            Rat O = rat_parse(order_str);
            QSeries series(Rat(0));
            json params{{"object", obj}, {"ell", ell}, {"m", m}, {"order", rat_str(O)}};
            if (obj == "g") {
                series = siegel_g(SiegelIndex(ell, m, s_num), O);
                params["s"] = s_num;
            } else if (obj == "G") {
                series = g_capital(m, ell, O);
            } else if (obj == "r") {
                series = r_unit(ell, m, O);
            } else if (obj == "s") {
                series = s_unit(ell, static_cast<unsigned>(m), O);
            } else {
                series = psi_1(static_cast<unsigned>(m), n, O);
                params["n"] = n;
                params["ell"] = 2 * m + 2 * n + 1;
            }
            json j{{"schema", 1}, {"params", params}, {"series", to_json(series)}};
            emit(j, g, series.str(16) + "\n");
            return 0;
        }
        if (*verify) {
            if (v_ell) sp.ell = v_ell;
            if (v_m) sp.m = v_m;
            if (v_n) sp.n = v_n;
            if (!v_order.empty()) sp.order = rat_parse(v_order);
            sp.max_prime = v_maxp;
            sp.prec = v_prec;
            sp.seed = v_seed;
            SuiteReport rep = run_suite(suite, sp);
            emit(rep.to_json(), g, suite_text(rep));
            return rep.ok() ? 0 : 1;
        }
        if (*rank) {
            json arr = json::array();
            bool all_agree = true;
            if (r_sweep >= 5) {
                for (unsigned p : suite_detail::primes_up_to(r_sweep)) {
                    RankReport rep = rank_report(p, r_c);
                    all_agree = all_agree && rep.agree;
                    arr.push_back(to_json(rep));
                }
            } else {
                RankReport rep = rank_report(r_ell, r_c);
                all_agree = rep.agree;
                arr.push_back(to_json(rep));
            }
            json j{{"schema", 1}, {"reports", arr}};
            std::string text;
            for (const auto& rj : arr)
                text += "ell=" + rj["ell"].dump() + " d=" + rj["d"].dump() + " rank=" +
                        rj["matrix_rank"].dump() + " agree=" + rj["agree"].dump() + "\n";
            emit(j, g, text);
            return all_agree ? 0 : 1;
        }
        if (*uc) {
            KLSums s = kl_unit_sums(unit_expr_s(u_ell, u_m));
            json j{{"schema", 1}, {"ell", u_ell}, {"m", u_m}, {"modular_unit", s.passes()},
                   {"sums", to_json(s)}};
            emit(j, g,
                 std::string("modular unit: ") + (s.passes() ? "yes" : "no") + "\n");
            return s.passes() ? 0 : 1;
        }
        if (*cl) {
            CycNum lim = cusp_limit(c_ell, c_m);
            json j{{"schema", 1}, {"ell", c_ell}, {"m", c_m}, {"exact", to_json(lim)}};
            std::string text = "cusp limit of s_{" + std::to_string(c_ell) + "," +
                               std::to_string(c_m) + "}\n";
            if (c_ell == 5 && c_m == 1) {
                bool minimal = lim * lim == lim + CycNum::one();
                j["minimal_check"] = minimal;
                text += std::string("satisfies x^2 = x + 1: ") + (minimal ? "yes" : "no") + "\n";
            }
            if (c_prec > 0) {
                Complex acc = cyc_embed(lim, c_prec);
                j["numeric"] = acc.re.str(c_prec);
                text += "numeric: " + acc.re.str(c_prec) + "\n";
            }
            emit(j, g, text);
            return 0;
        }
        if (*st) {
            auto classes = stabilizer(st_ell, st_m);
            json cls = json::array();
            for (const auto& gc : classes) cls.push_back(to_json(gc));
            bool gd = is_gamma_d_set(classes, st_ell);
            json j{{"schema", 1},       {"ell", st_ell},  {"m", st_m},
                   {"count", classes.size()}, {"classes", cls}, {"is_gamma_d_set", gd}};
            emit(j, g,
                 "stabilizer count " + std::to_string(classes.size()) + ", gamma_d set: " +
                     (gd ? "yes" : "no") + "\n");
            return gd ? 0 : 1;
        }
        if (*ev) {
            mpfr_prec_t bits = numeric_detail::bits_for(e_prec + 8);
            Complex tau = e_point == "i"     ? tau_i(bits)
                          : e_point == "rho" ? tau_rho(bits)
                                             : Complex(Real::of(e_re, bits), Real::of(e_im, bits));
            UnitDescriptor d = e_obj == "s"   ? UnitDescriptor::s(e_ell, e_m)
                               : e_obj == "r" ? UnitDescriptor::r(e_ell, e_m)
                                              : UnitDescriptor::rr();
            EvalResult res = eval_unit(d, tau, e_prec);
            json j{{"schema", 1},
                   {"object", e_obj},
                   {"ell", e_ell},
                   {"m", e_m},
                   {"re", res.value.re.str(e_prec)},
                   {"im", res.value.im.str(e_prec)},
                   {"err", res.tail_bound},
                   {"terms_used", res.terms_used}};
            char tailbuf[32];
            std::snprintf(tailbuf, sizeof tailbuf, "%.2e", res.tail_bound);
            emit(j, g, res.value.re.str(e_prec) + " + " + res.value.im.str(e_prec) +
                           " i  (tail < " + tailbuf + ")\n");
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
