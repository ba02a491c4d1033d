// Command-line front end: batch verification runs, point evaluation of the
// R-matrix families and special functions, and grid scans emitting CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qkzr/verify.hpp"

namespace {

using namespace qkzr;

// Accepts "0.6", "-1.7", "0.13+0.02i", "0.5-0.3i", "1.2i".
cplx parse_complex_impl(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ConfigInvalid("empty complex literal");
    const bool has_i = (s.back() == 'i' || s.back() == 'j');
    if (!has_i) {
        size_t pos = 0;
        const double re = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigInvalid("bad complex literal: " + text);
        return {re, 0.0};
    }
    s.pop_back();
    // Split at the last +/- that is not an exponent sign and not leading.
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        if (s.empty() || s == "+" || s == "-") return {0.0, s == "-" ? -1.0 : 1.0};
        return {0.0, std::stod(s)};
    }
    const double re = std::stod(s.substr(0, split));
    std::string im_part = s.substr(split);
    if (im_part == "+" || im_part == "-") im_part += "1";
    return {re, std::stod(im_part)};
}

cplx parse_complex(const std::string& text) {
    try {
        return parse_complex_impl(text);
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigInvalid("bad complex literal: '" + text + "'");
    }
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

Weight lambda_from_option(const std::string& text, const RunConfig& cfg) {
    if (text == "random") {
        Rng rng(cfg.seed, 7001);
        return draw_generic_lambda(rng, cfg.model());
    }
    std::vector<cplx> coords;
    for (const auto& part : split_csv(text)) coords.push_back(parse_complex(part));
    Weight w(coords);
    if (w.dim() != cfg.n + 1)
        throw ConfigInvalid("lambda needs n+1 coordinates, got " + std::to_string(w.dim()));
    return w;
}

json matrix_to_json(const OperatorVV& op) {
    json rows = json::array();
    for (int r = 0; r < op.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < op.dim(); ++c) row.push_back(to_json(op.matrix().at(r, c)));
        rows.push_back(row);
    }
    return rows;
}

struct CommonOpts {
    int n = 1;
    std::string q = "0.6";
    std::string kappa = "-1.0";
    std::string lambda = "random";
    std::uint64_t seed = 42;
    int samples = 20;
    double tol = 1e-8;
    int max_terms = 400;
    double tail_tol = 1e-16;
    std::string suites = "all";
    std::string out;
    std::string config_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--n", o.n, "rank parameter; V has dimension n+1");
    cmd->add_option("--q", o.q, "quantum parameter (complex, |q|<1)");
    cmd->add_option("--kappa", o.kappa, "shifted level kappa (complex)");
    cmd->add_option("--lambda", o.lambda, "n+1 comma-separated complex coordinates or 'random'");
    cmd->add_option("--seed", o.seed, "global random seed");
    cmd->add_option("--samples", o.samples, "random draws per check");
    cmd->add_option("--tol", o.tol, "tolerance for the residual-family checks");
    cmd->add_option("--max-terms", o.max_terms, "truncation budget per series/product");
    cmd->add_option("--tail-tol", o.tail_tol, "tail magnitude at which truncation stops");
    cmd->add_option("--config", o.config_path, "JSON config file (flags override it)");
}

RunConfig build_config(const CLI::App* cmd, const CommonOpts& o) {
    RunConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream f(o.config_path);
        if (!f) throw ConfigInvalid("cannot open config file: " + o.config_path);
        json j;
        f >> j;
        cfg = config_from_json(j);
    }
    auto given = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (given("--n") || o.config_path.empty()) cfg.n = o.n;
    if (given("--q") || o.config_path.empty()) cfg.q = parse_complex(o.q);
    if (given("--kappa") || o.config_path.empty()) cfg.kappa = parse_complex(o.kappa);
    if (given("--seed") || o.config_path.empty()) cfg.seed = o.seed;
    if (given("--samples") || o.config_path.empty()) cfg.samples = o.samples;
    if (given("--tol") || o.config_path.empty()) cfg.tol = o.tol;
    if (given("--max-terms") || given("--tail-tol") || o.config_path.empty())
        cfg.policy = TruncationPolicy(o.max_terms, o.tail_tol);
    if (given("--lambda") && o.lambda != "random") {
        std::vector<cplx> coords;
        for (const auto& part : split_csv(o.lambda)) coords.push_back(parse_complex(part));
        cfg.lambda = coords;
    }
    return cfg;
}

int cmd_verify(const CLI::App* cmd, const CommonOpts& o) {
    RunConfig cfg = build_config(cmd, o);
    if (cmd->count("--suites") || o.config_path.empty()) cfg.suites = split_csv(o.suites);
    if (cmd->count("--out")) cfg.out_path = o.out;

    const VerificationReport rep = run_suites(cfg);
    for (const auto& c : rep.checks) {
        std::printf("%-12s %-28s [%-10s] residual %.3e  tol %.1e  %s%s\n", c.suite.c_str(),
                    c.name.c_str(), c.anchor.c_str(), c.residual, c.tolerance,
                    c.pass ? "pass" : "FAIL", c.report_only ? " (report-only)" : "");
        if (!c.error.empty()) std::printf("    error: %s\n", c.error.c_str());
    }
    std::printf("summary: %d passed, %d failed, %.2fs\n", rep.passed, rep.failed,
                rep.wall_seconds);
    if (!cfg.out_path.empty()) {
        std::ofstream f(cfg.out_path);
        f << report_to_json(rep).dump(2) << "\n";
    }
    return rep.all_pass() ? 0 : 1;
}

struct EvalOpts {
    std::string target = "felder";
    std::string u = "0.13+0.02i";
    std::string z;
    std::string r = "0.3", s = "-0.2", t = "0.45";
    int m = 0, l = 1;
};

int cmd_eval(const CLI::App* cmd, const CommonOpts& o, const EvalOpts& e) {
    const RunConfig cfg = build_config(cmd, o);
    const ModelParams mp = cfg.model();
    const TruncationPolicy pol = cfg.policy;
    const cplx u = parse_complex(e.u);
    const cplx z = e.z.empty() ? std::exp(-two_pi_i * u) : parse_complex(e.z);

    json out;
    out["target"] = e.target;
    out["config"] = config_to_json(cfg);
    out["basis_order"] = "v_i tensor v_j -> index i*(n+1)+j, row-major";

    if (e.target == "felder" || e.target == "exchange" || e.target == "trig" ||
        e.target == "fusion-j") {
        const Weight lam = lambda_from_option(o.lambda, cfg);
        json lj = json::array();
        for (int i = 0; i < lam.dim(); ++i) lj.push_back(to_json(lam[i]));
        out["lambda"] = lj;
        out["u"] = to_json(u);
        if (e.target == "felder")
            out["matrix"] =
                matrix_to_json(felder_rmatrix(u, lam, mp.gamma(), mp.tau(), mp.n, pol));
        else if (e.target == "exchange")
            out["matrix"] = matrix_to_json(exchange_rmatrix(u, lam, mp, pol));
        else if (e.target == "trig")
            out["matrix"] = matrix_to_json(rmat_trig(z, mp.n, mp.q));
        else
            out["matrix"] = matrix_to_json(fusion_matrix(lam, mp.n, mp.q));
    } else if (e.target == "chi") {
        const ChiValue c = chi(u, mp, pol);
        out["u"] = to_json(u);
        out["product_route"] = to_json(c.product_route);
        out["egamma_route"] = to_json(c.egamma_route);
        out["difference"] = c.difference;
    } else if (e.target == "theta1") {
        const SpecialValue v = theta1(u, mp.tau(), pol);
        out["u"] = to_json(u);
        out["tau"] = to_json(mp.tau());
        out["value"] = to_json(v.value);
        out["est_error"] = v.est_error;
        out["terms_used"] = v.terms_used;
    } else if (e.target == "2phi1") {
        const cplx rr = parse_complex(e.r), ss = parse_complex(e.s), tt = parse_complex(e.t);
        const SpecialValue v = continue_2phi1(rr, ss, tt, mp.p(), z, pol);
        out["r"] = to_json(rr);
        out["s"] = to_json(ss);
        out["t"] = to_json(tt);
        out["p"] = to_json(mp.p());
        out["z"] = to_json(z);
        out["value"] = to_json(v.value);
        out["est_error"] = v.est_error;
        out["terms_used"] = v.terms_used;
    } else if (e.target == "sigma") {
        const Weight lam = lambda_from_option(o.lambda, cfg);
        out["m"] = e.m;
        out["l"] = e.l;
        out["value"] = to_json(sigma_coeff(lam, e.m, e.l, mp, pol));
    } else if (e.target == "bcheck") {
        const Weight lam = lambda_from_option(o.lambda, cfg);
        const Bcheck2x2 b = bcheck_matrix(z, lam, e.m, e.l, mp, pol);
        out["z"] = to_json(z);
        out["matrix"] = json::array({json::array({to_json(b.a11), to_json(b.a12)}),
                                     json::array({to_json(b.a21), to_json(b.a22)})});
    } else {
        throw ConfigInvalid("unknown eval target: " + e.target);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct ScanOpts {
    std::string target = "exchange";
    std::string entry = "m=0,l=1,kind=beta";
    std::string u_grid = "-0.5:0.5:200";
    double u_imag = 0.02;
    bool residual = false;
};

int cmd_scan(const CLI::App* cmd, const CommonOpts& o, const ScanOpts& sc) {
    const RunConfig cfg = build_config(cmd, o);
    const ModelParams mp = cfg.model();
    const TruncationPolicy pol = cfg.policy;
    const Weight lam = lambda_from_option(o.lambda, cfg);

    int m = 0, l = 1;
    std::string kind = "beta";
    for (const auto& part : split_csv(sc.entry)) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw ConfigInvalid("bad --entry element: " + part);
        const std::string key = part.substr(0, eq), val = part.substr(eq + 1);
        if (key == "m") m = std::stoi(val);
        else if (key == "l") l = std::stoi(val);
        else if (key == "kind") kind = val;
        else throw ConfigInvalid("bad --entry key: " + key);
    }
    if (m < 0 || l < 0 || m > mp.n || l > mp.n || m == l)
        throw ConfigInvalid("--entry indices out of range");

    double lo, hi;
    int count;
    {
        std::stringstream ss(sc.u_grid);
        std::string a, b, c;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, c, ':');
        if (c.empty()) throw ConfigInvalid("--u-grid needs lo:hi:count");
        lo = std::stod(a);
        hi = std::stod(b);
        count = std::stoi(c);
    }

    std::ostream* os = &std::cout;
    std::ofstream f;
    if (cmd->count("--out")) {
        f.open(o.out);
        if (!f) throw ConfigInvalid("cannot open output file: " + o.out);
        os = &f;
    }
    *os << "idx,re_u,im_u,re_value,im_value";
    if (sc.residual) *os << ",residual";
    *os << ",pole\n";

    for (int k = 0; k < count; ++k) {
        const double t = count > 1 ? lo + (hi - lo) * k / (count - 1) : lo;
        const cplx u{t, sc.u_imag};
        *os << k << "," << u.real() << "," << u.imag();
        try {
            cplx val;
            double res = 0.0;
            if (sc.target == "exchange" || sc.target == "felder") {
                const int a = std::min(m, l), b = std::max(m, l);
                if (sc.target == "exchange") {
                    const auto e =
                        exchange_entries(u, lam, a, b, mp, EntryForm::theta1_ratio, pol);
                    if (kind == "beta") val = (m < l) ? e.beta_ml : e.beta_lm;
                    else if (kind == "alpha") val = (m < l) ? e.alpha_ml : e.alpha_lm;
                    else val = chi_egamma(u, mp, pol).value;
                    if (sc.residual) {
                        const auto eg =
                            exchange_entries(u, lam, a, b, mp, EntryForm::gamma_theta, pol);
                        const cplx other = (kind == "beta")
                                               ? ((m < l) ? eg.beta_ml : eg.beta_lm)
                                               : ((m < l) ? eg.alpha_ml : eg.alpha_lm);
                        res = std::abs(val - other);
                    }
                } else {
                    const cplx lml = lam[m] - lam[l];
                    val = (kind == "beta") ? felder_beta(u, lml, mp.gamma(), mp.tau(), pol)
                          : (kind == "alpha")
                              ? felder_alpha(u, lml, mp.gamma(), mp.tau(), pol)
                              : cplx{1.0, 0.0};
                }
            } else if (sc.target == "chi") {
                val = chi_egamma(u, mp, pol).value;
            } else if (sc.target == "theta1") {
                val = theta1(u, mp.tau(), pol).value;
            } else if (sc.target == "trig") {
                const cplx z = std::exp(-two_pi_i * u);
                val = (kind == "beta") ? eta_coeff(z, mp.q) : xi_coeff(z, mp.q);
            } else {
                throw ConfigInvalid("unknown scan target: " + sc.target);
            }
            *os << "," << val.real() << "," << val.imag();
            if (sc.residual) *os << "," << res;
            *os << ",0\n";
        } catch (const PoleHit&) {
            *os << ",,";
            if (sc.residual) *os << ",";
            *os << ",1\n";
        }
    }
    return 0;
}

const char* error_kind(const Error& e) {
    if (dynamic_cast<const RegionViolation*>(&e)) return "RegionViolation";
    if (dynamic_cast<const PoleHit*>(&e)) return "PoleHit";
    if (dynamic_cast<const NonConvergent*>(&e)) return "NonConvergent";
    if (dynamic_cast<const PolicyExhausted*>(&e)) return "PolicyExhausted";
    if (dynamic_cast<const ZeroArgument*>(&e)) return "ZeroArgument";
    if (dynamic_cast<const ChainBlocked*>(&e)) return "ChainBlocked";
    if (dynamic_cast<const IllConditioned*>(&e)) return "IllConditioned";
    if (dynamic_cast<const NonGeneric*>(&e)) return "NonGeneric";
    if (dynamic_cast<const ConfigInvalid*>(&e)) return "ConfigInvalid";
    if (dynamic_cast<const IndexOutOfRange*>(&e)) return "IndexOutOfRange";
    if (dynamic_cast<const LengthMismatch*>(&e)) return "LengthMismatch";
    if (dynamic_cast<const ZeroKappa*>(&e)) return "ZeroKappa";
    if (dynamic_cast<const DegenerateCoefficients*>(&e)) return "DegenerateCoefficients";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    return "Error";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical exchange / dynamical R-matrix workbench"};
    app.require_subcommand(1);

    CommonOpts vo, eo, so;
    EvalOpts ev;
    ScanOpts sc;

    CLI::App* verify = app.add_subcommand("verify", "run verification suites");
    add_common(verify, vo);
    verify->add_option("--suites", vo.suites,
                       "comma list of specfun,trig,qkz,exchange,dqybe,equivalence,fusion or all");
    verify->add_option("--out", vo.out, "write the JSON report here");

    CLI::App* eval = app.add_subcommand("eval", "evaluate one object at a point");
    add_common(eval, eo);
    eval->add_option("--target", ev.target,
                     "felder|exchange|trig|fusion-j|chi|theta1|2phi1|sigma|bcheck");
    eval->add_option("--u", ev.u, "spectral variable u (complex)");
    eval->add_option("--z", ev.z, "multiplicative variable z (overrides e^{-2 pi i u})");
    eval->add_option("--r", ev.r, "first exponent for 2phi1");
    eval->add_option("--s", ev.s, "second exponent for 2phi1");
    eval->add_option("--t", ev.t, "third exponent for 2phi1");
    eval->add_option("--m", ev.m, "first weight index");
    eval->add_option("--l", ev.l, "second weight index");

    CLI::App* scan = app.add_subcommand("scan", "sweep a grid and emit CSV");
    add_common(scan, so);
    scan->add_option("--target", sc.target, "exchange|felder|trig|chi|theta1");
    scan->add_option("--entry", sc.entry, "entry selector, e.g. m=0,l=1,kind=beta");
    scan->add_option("--u-grid", sc.u_grid, "real grid lo:hi:count for Re(u)");
    scan->add_option("--u-imag", sc.u_imag, "fixed Im(u) offset of the grid line");
    scan->add_flag("--residual", sc.residual, "emit a cross-form residual column");
    scan->add_option("--out", so.out, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(verify, vo);
        if (eval->parsed()) return cmd_eval(eval, eo, ev);
        if (scan->parsed()) return cmd_scan(scan, so, sc);
    } catch (const qkzr::Error& e) {
        qkzr::json err;
        err["error"] = error_kind(e);
        err["message"] = std::string(e.what());
        std::cout << err.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
