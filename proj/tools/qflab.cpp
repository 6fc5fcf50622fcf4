// qflab: command line front end for the quadratic forms library. Every
// subcommand emits one JSON object per line with a fixed field order and
// fixed float formatting, so output is byte-stable for a given invocation.
// Exit codes: 0 success, 2 domain or parse error, 3 failed invariant.

#include "qf/congruence.hpp"
#include "qf/factorization.hpp"
#include "qf/forms.hpp"
#include "qf/integers.hpp"
#include "qf/operator_lab.hpp"
#include "qf/pell.hpp"
#include "qf/representations.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* version_line = "{\"version\":\"1.0.0\",\"format\":1}";

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

// ordered JSON object writer; field order is exactly the call order
class json_line {
public:
    json_line& num(const char* key, const qf::integer& v) { return raw(key, v.str()); }
    json_line& num(const char* key, long long v) { return raw(key, std::to_string(v)); }
    json_line& num(const char* key, std::size_t v) { return raw(key, std::to_string(v)); }
    json_line& real(const char* key, double v) { return raw(key, fmt_double(v)); }
    json_line& str(const char* key, const std::string& v) {
        return raw(key, "\"" + escape(v) + "\"");
    }
    json_line& boolean(const char* key, bool v) { return raw(key, v ? "true" : "false"); }
    json_line& matrix(const char* key, const qf::unimodular& m) {
        return raw(key, "[" + m.alpha.str() + "," + m.beta.str() + "," + m.gamma.str() + "," +
                            m.delta.str() + "]");
    }
    json_line& raw(const char* key, const std::string& value) {
        buf_ += first_ ? "\"" : ",\"";
        first_ = false;
        buf_ += key;
        buf_ += "\":";
        buf_ += value;
        return *this;
    }
    std::string done() { return buf_ + "}"; }

private:
    std::string buf_ = "{";
    bool first_ = true;
};

void emit(json_line& line) { std::cout << line.done() << "\n"; }

double parse_real(const std::string& s) {
    if (s.empty()) throw qf::domain_error("empty numeric value");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw qf::domain_error("not a finite real: '" + s + "'");
    return v;
}

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    return parse_real(s);
}

std::pair<qf::integer, qf::integer> parse_range(const std::string& s) {
    std::size_t pos = s.find(':');
    if (pos == std::string::npos) throw qf::domain_error("range must be 'A:B': '" + s + "'");
    qf::integer lo = qf::parse_integer(s.substr(0, pos));
    qf::integer hi = qf::parse_integer(s.substr(pos + 1));
    if (lo > hi) throw qf::domain_error("range bounds out of order: '" + s + "'");
    return {lo, hi};
}

qf::sparse_function load_sparse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qf::domain_error("cannot open f input: '" + path + "'");
    qf::sparse_function f;
    f.generator = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw qf::domain_error("f line " + std::to_string(lineno) + " is not 'k,value'");
        qf::integer k = qf::parse_integer(line.substr(0, comma));
        double v = parse_real(line.substr(comma + 1));
        f.entries[k] = v;
    }
    return f;
}

std::string matrix_json(const qf::unimodular& m, bool quote_entries) {
    auto one = [&](const qf::integer& v) {
        return quote_entries ? "\"" + v.str() + "\"" : v.str();
    };
    return "[" + one(m.alpha) + "," + one(m.beta) + "," + one(m.gamma) + "," + one(m.delta) + "]";
}

qf::integer json_big(const nlohmann::json& v) { return qf::parse_integer(v.get<std::string>()); }

qf::unimodular json_matrix(const nlohmann::json& v) {
    return {json_big(v.at(0)), json_big(v.at(1)), json_big(v.at(2)), json_big(v.at(3))};
}

// cache file: one record per line, big integers as decimal strings
void load_cache_file(const std::string& path, qf::rep_cache& cache) {
    std::ifstream in(path);
    if (!in) return;  // absent cache is an empty cache
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line);
        qf::quad_form q = qf::parse_form(rec.at("form").get<std::string>());
        qf::integer k = json_big(rec.at("k"));
        std::vector<qf::rep_class> classes;
        for (const auto& c : rec.at("classes")) {
            qf::rep_class rc{json_big(c.at("g")),
                             {json_big(c.at("kp")), json_big(c.at("u")), json_big(c.at("v"))},
                             std::nullopt,
                             std::nullopt};
            if (!c.at("witness").is_null()) rc.witness = json_matrix(c.at("witness"));
            if (!c.at("anchor").is_null()) rc.orbit_anchor = json_matrix(c.at("anchor"));
            classes.push_back(std::move(rc));
        }
        cache.put(q, k, std::move(classes));
    }
}

void save_cache_file(const std::string& path, const qf::rep_cache& cache) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw qf::domain_error("cannot write cache: '" + path + "'");
    cache.for_each([&](const qf::quad_form& q, const qf::integer& k,
                       const std::vector<qf::rep_class>& classes) {
        std::string line = "{\"form\":\"" + qf::form_to_string(q) + "\",\"k\":\"" + k.str() +
                           "\",\"classes\":[";
        bool first = true;
        for (const qf::rep_class& c : classes) {
            if (!first) line += ",";
            first = false;
            line += "{\"g\":\"" + c.g.str() + "\",\"kp\":\"" + c.base.k.str() + "\",\"u\":\"" +
                    c.base.u.str() + "\",\"v\":\"" + c.base.v.str() + "\",\"witness\":";
            line += c.witness ? matrix_json(*c.witness, true) : "null";
            line += ",\"anchor\":";
            line += c.orbit_anchor ? matrix_json(*c.orbit_anchor, true) : "null";
            line += "}";
        }
        line += "]}";
        out << line << "\n";
    });
}

void emit_sum_report(const qf::sum_report& r) {
    json_line line;
    line.str("form", qf::form_to_string(r.form))
        .num("k", r.k)
        .real("lambda", r.lambda)
        .str("method", qf::to_string(r.method))
        .real("value", r.value)
        .num("truncation", r.truncation)
        .real("tail_bound", r.tail_bound)
        .num("terms", r.terms);
    emit(line);
}

void emit_certificate(const qf::divergence_certificate& cert, bool ledger) {
    if (ledger) {
        for (const qf::certificate_term& t : cert.terms) {
            json_line line;
            line.num("index", t.index)
                .num("k", t.k)
                .num("m", t.m)
                .num("n", t.n)
                .num("count", t.count)
                .real("weight", t.weight)
                .real("term", t.term)
                .boolean("verified", t.verified);
            emit(line);
        }
    }
    json_line line;
    line.str("family", cert.family)
        .num("steps", cert.steps)
        .real("partial_sum_lower_bound", cert.partial_sum_lower_bound)
        .str("predicted_growth", cert.predicted_growth)
        .real("comparison", cert.comparison)
        .str("notes", cert.notes);
    emit(line);
}

struct cache_session {
    std::string path;
    qf::rep_cache cache;

    explicit cache_session(const std::string& p) : path(p) {
        if (!path.empty()) load_cache_file(path, cache);
    }
    qf::rep_cache* ptr() { return path.empty() ? nullptr : &cache; }
    void flush() {
        if (!path.empty()) save_cache_file(path, cache);
    }
};

int run_reps(const std::string& form_s, const std::string& k_s, const std::string& maxm_s,
             bool oracle) {
    qf::quad_form q = qf::parse_form(form_s);
    qf::integer k = qf::parse_integer(k_s);
    qf::integer maxm = qf::parse_integer(maxm_s);
    if (maxm < 1) throw qf::domain_error("--max-m must be >= 1");
    std::vector<qf::representation> reps = qf::enumerate_reps_bounded(q, k, maxm);
    for (const qf::representation& r : reps) {
        json_line line;
        line.num("m", r.m).num("n", r.n).num("k", r.k).num("g", r.g);
        emit(line);
    }
    if (!oracle) {
        json_line line;
        line.num("count", reps.size());
        emit(line);
        return 0;
    }
    // independent rectangle scan; the n bound covers every |m| <= maxm slice
    qf::integer n_bound;
    if (q.c != 0) {
        qf::integer top = qf::discriminant(q) * maxm * maxm + 4 * q.c * k;
        if (top < 4 * q.c * k) top = 4 * q.c * k;
        if (top < 0) top = 0;
        n_bound = (qf::isqrt(top) + abs(q.b) * maxm) / (2 * abs(q.c)) + 1;
    } else if (q.b != 0) {
        n_bound = (abs(k) + abs(q.a) * maxm * maxm) / abs(q.b) + 1;
    } else {
        throw qf::domain_error("oracle scan needs b or c nonzero");
    }
    if (n_bound > 100000000) throw qf::domain_error("oracle scan bound too large");
    std::vector<qf::representation> brute = qf::brute_force_reps(q, k, maxm, n_bound);
    std::erase_if(brute, [](const qf::representation& r) { return r.m == 0; });
    bool match = brute == reps;
    json_line line;
    line.num("count", reps.size()).boolean("oracle_match", match);
    emit(line);
    return match ? 0 : 3;
}

int run_main(int argc, char** argv) {
    CLI::App app{"integral binary quadratic forms laboratory"};
    app.set_version_flag("--version", version_line);
    app.require_subcommand(1);

    std::string form_s, k_s, t_s, s_s, delta_s, lambda_s = "1", tol_s = "1e-12";
    std::string maxm_s, maxk_s, steps_s, p_s = "2", r_s = "1", range_s, window_s;
    std::string f_path, cache_path;
    unsigned jobs = 1;
    bool oracle = false, ledger = false, exact = false;

    CLI::App* cmd_pell = app.add_subcommand("pell", "fundamental solution of t^2 - D u^2 = 4");
    cmd_pell->add_option("--delta", delta_s, "discriminant, nonsquare, >= 5")->required();

    CLI::App* cmd_auto = app.add_subcommand("automorphs", "proper automorphism group of a form");
    cmd_auto->add_option("--form", form_s, "form a,b,c")->required();

    CLI::App* cmd_gamma = app.add_subcommand("gamma", "count u in [0,2s) with u^2 = t mod 4s");
    cmd_gamma->add_option("--t", t_s)->required();
    cmd_gamma->add_option("--s", s_s)->required();

    CLI::App* cmd_cong = app.add_subcommand("congruence", "solutions u^2 = delta mod 4|k|");
    cmd_cong->add_option("--delta", delta_s)->required();
    cmd_cong->add_option("--k", k_s)->required();

    CLI::App* cmd_reps = app.add_subcommand("reps", "representations with 1 <= |m| <= M");
    cmd_reps->add_option("--form", form_s)->required();
    cmd_reps->add_option("--k", k_s)->required();
    cmd_reps->add_option("--max-m", maxm_s)->required();
    cmd_reps->add_flag("--oracle", oracle, "cross-check against a brute force scan");

    CLI::App* cmd_repsum = app.add_subcommand("repsum", "weighted sum over representations of k");
    cmd_repsum->add_option("--form", form_s)->required();
    cmd_repsum->add_option("--k", k_s)->required();
    cmd_repsum->add_option("--lambda", lambda_s)->required();
    cmd_repsum->add_option("--tol", tol_s);
    cmd_repsum->add_option("--cache", cache_path, "class cache file (JSON lines)");

    CLI::App* cmd_lemma = app.add_subcommand("lemma-check", "window solution-count check");
    cmd_lemma->add_option("--form", form_s)->required();
    cmd_lemma->add_option("--k-range", range_s, "inclusive k range A:B")->required();

    CLI::App* cmd_apply = app.add_subcommand("apply", "apply the weighted operator to f");
    cmd_apply->add_option("--form", form_s)->required();
    cmd_apply->add_option("--f", f_path, "CSV lines k,value")->required();
    cmd_apply->add_option("--lambda", lambda_s)->required();
    cmd_apply->add_option("--n-window", window_s, "inclusive n window A:B")->required();
    cmd_apply->add_option("--max-m", maxm_s)->required();

    CLI::App* cmd_norm = app.add_subcommand("norm", "l^p norm of the operator output");
    cmd_norm->add_option("--form", form_s)->required();
    cmd_norm->add_option("--f", f_path)->required();
    cmd_norm->add_option("--lambda", lambda_s)->required();
    cmd_norm->add_option("--p", p_s, "p >= 1 or 'inf'")->required();
    cmd_norm->add_option("--n-window", window_s)->required();
    cmd_norm->add_option("--max-m", maxm_s)->required();
    cmd_norm->add_flag("--exact", exact, "for p=1 and f >= 0, also emit the exact identity value");

    CLI::App* cmd_probe = app.add_subcommand("probe", "supremum of the weighted sum over |k| <= K");
    cmd_probe->add_option("--form", form_s)->required();
    cmd_probe->add_option("--lambda", lambda_s)->required();
    cmd_probe->add_option("--max-k", maxk_s)->required();
    cmd_probe->add_option("--jobs", jobs, "parallel workers over k");
    cmd_probe->add_option("--cache", cache_path);

    CLI::App* cmd_cex = app.add_subcommand("counterexample", "certified divergence families");
    std::string family;
    cmd_cex->add_option("family", family, "square-disc|jacobi|pell-log|indefinite-log|lp-sharp")
        ->required();
    cmd_cex->add_option("--steps", steps_s, "family index J (or cutoff M)")->required();
    cmd_cex->add_option("--r", r_s, "prime count parameter (jacobi, indefinite-log)");
    cmd_cex->add_option("--p", p_s, "exponent (lp-sharp)");
    cmd_cex->add_option("--form", form_s, "square-discriminant form (square-disc)");
    cmd_cex->add_option("--lambda", lambda_s, "weight exponent (square-disc)");
    cmd_cex->add_flag("--ledger", ledger, "emit the per-term ledger lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "{\"error\":\"" << escape(e.what()) << "\"}\n";
        return 2;
    }

    if (cmd_pell->parsed()) {
        qf::pell_solution s = qf::pell4_fundamental(qf::parse_integer(delta_s));
        json_line line;
        line.num("delta", s.delta).num("T", s.t).num("U", s.u);
        emit(line);
        return 0;
    }

    if (cmd_auto->parsed()) {
        qf::quad_form q = qf::parse_form(form_s);
        qf::automorph_group g = qf::automorphs(q);
        json_line line;
        line.str("form", qf::form_to_string(q)).boolean("finite", g.finite);
        if (g.finite) {
            std::string arr = "[";
            for (std::size_t i = 0; i < g.elements.size(); ++i) {
                if (i) arr += ",";
                arr += matrix_json(g.elements[i], false);
            }
            line.num("order", g.elements.size()).raw("elements", arr + "]");
        } else {
            line.matrix("generator", *g.generator);
        }
        emit(line);
        return 0;
    }

    if (cmd_gamma->parsed()) {
        qf::integer t = qf::parse_integer(t_s), s = qf::parse_integer(s_s);
        json_line line;
        line.num("t", t).num("s", s).num("gamma", qf::gamma(t, s));
        emit(line);
        return 0;
    }

    if (cmd_cong->parsed()) {
        qf::integer delta = qf::parse_integer(delta_s), k = qf::parse_integer(k_s);
        auto sols = qf::solve_congruence(delta, k);
        for (const qf::congruence_solution& cs : sols) {
            json_line line;
            line.num("k", cs.k).num("u", cs.u).num("v", cs.v);
            emit(line);
        }
        json_line line;
        line.num("delta", delta).num("k", k).num("count", sols.size());
        emit(line);
        return 0;
    }

    if (cmd_reps->parsed()) return run_reps(form_s, k_s, maxm_s, oracle);

    if (cmd_repsum->parsed()) {
        cache_session cs(cache_path);
        qf::sum_report r =
            qf::rep_weight_sum(qf::parse_form(form_s), qf::parse_integer(k_s),
                               parse_real(lambda_s), parse_real(tol_s), cs.ptr());
        emit_sum_report(r);
        cs.flush();
        return 0;
    }

    if (cmd_lemma->parsed()) {
        qf::quad_form q = qf::parse_form(form_s);
        auto [lo, hi] = parse_range(range_s);
        qf::integer checked = 0, failures = 0;
        for (qf::integer k = lo; k <= hi; ++k) {
            qf::lemma_check_report r = qf::lemma_window_check(q, k);
            json_line line;
            line.num("k", r.k).num("window", r.window).num("count", r.count).boolean("pass", r.pass);
            emit(line);
            ++checked;
            if (!r.pass) ++failures;
        }
        json_line line;
        line.num("checked", checked).num("failures", failures);
        emit(line);
        return failures == 0 ? 0 : 3;
    }

    if (cmd_apply->parsed()) {
        qf::quad_form q = qf::parse_form(form_s);
        qf::sparse_function f = load_sparse_csv(f_path);
        auto [lo, hi] = parse_range(window_s);
        auto vals = qf::apply_operator(q, f, parse_real(lambda_s), lo, hi,
                                       qf::parse_integer(maxm_s));
        for (const auto& [n, v] : vals) {
            json_line line;
            line.num("n", n).real("value", v);
            emit(line);
        }
        return 0;
    }

    if (cmd_norm->parsed()) {
        qf::quad_form q = qf::parse_form(form_s);
        qf::sparse_function f = load_sparse_csv(f_path);
        auto [lo, hi] = parse_range(window_s);
        double lambda = parse_real(lambda_s);
        double p = parse_p(p_s);
        double value =
            qf::weighted_norm_estimate(q, f, lambda, p, lo, hi, qf::parse_integer(maxm_s));
        json_line line;
        line.str("form", qf::form_to_string(q)).real("lambda", lambda);
        if (std::isinf(p))
            line.str("p", "inf");
        else
            line.real("p", p);
        line.real("value", value);
        if (exact) {
            if (p != 1.0) throw qf::domain_error("--exact requires p=1");
            line.real("identity_value", qf::norm1_exact(q, f, lambda));
        }
        emit(line);
        return 0;
    }

    if (cmd_probe->parsed()) {
        cache_session cs(cache_path);
        qf::probe_result r = qf::bound_constant_probe(
            qf::parse_form(form_s), parse_real(lambda_s), qf::parse_integer(maxk_s), jobs,
            cs.ptr());
        json_line line;
        line.str("form", qf::form_to_string(r.form))
            .real("lambda", r.lambda)
            .num("max_k", r.max_k)
            .real("sup", r.sup)
            .num("argmax_k", r.argmax);
        emit(line);
        cs.flush();
        return 0;
    }

    if (cmd_cex->parsed()) {
        qf::integer steps = qf::parse_integer(steps_s);
        qf::divergence_certificate cert;
        if (family == "jacobi") {
            cert = qf::jacobi_family(static_cast<unsigned>(qf::parse_integer(r_s).convert_to<unsigned long>()), steps);
        } else if (family == "pell-log") {
            cert = qf::pell_log_counterexample(steps);
        } else if (family == "indefinite-log") {
            cert = qf::indefinite_log_family(static_cast<unsigned>(qf::parse_integer(r_s).convert_to<unsigned long>()), steps);
        } else if (family == "lp-sharp") {
            cert = qf::lp_sharpness_family(parse_real(p_s), steps);
        } else if (family == "square-disc") {
            if (form_s.empty()) throw qf::domain_error("square-disc requires --form");
            cert = qf::square_disc_zero_line(qf::parse_form(form_s), parse_real(lambda_s), steps);
        } else {
            throw qf::domain_error("unknown family: '" + family + "'");
        }
        emit_certificate(cert, ledger);
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const qf::invariant_violation& e) {
        std::cerr << "{\"error\":\"" << escape(e.what()) << "\"}\n";
        return 3;
    } catch (const qf::domain_error& e) {
        std::cerr << "{\"error\":\"" << escape(e.what()) << "\"}\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"" << escape(e.what()) << "\"}\n";
        return 2;
    }
}
