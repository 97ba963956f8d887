// hamsec: command-line surface over the section-classification library.
// Every command prints one JSON document ("schema":"hamsec/1") on stdout;
// identical seed + input gives byte-identical output.  Exit codes: 0 ok,
// 1 input error, 2 undetermined at this order, 3 genericity failure
// (outside the open set U), 4 internal consistency abort.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "hamsec/moduli.hpp"
#include "hamsec/parse.hpp"
#include "hamsec/rand_symp.hpp"

using namespace hamsec;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "hamsec/1";

std::string mono_str(const Mono& m, const Chart& c) {
    std::string s;
    for (int i = 0; i < c.dim(); ++i) {
        if (m[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += c.var_name(i);
        if (m[i] > 1) s += "^" + std::to_string(int(m[i]));
    }
    return s;
}

// Deterministic polynomial rendering (graded-lex term order); parses back
// with parse_polynomial.
std::string jet_str(const Jet& j) {
    if (j.is_zero()) return "0";
    std::string s;
    for (auto& [m, c] : j.coeffs()) {
        Rat a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        std::string ms = mono_str(m, j.chart());
        if (ms.empty())
            s += rat_str(a);
        else if (a == 1)
            s += ms;
        else
            s += rat_str(a) + "*" + ms;
    }
    return s;
}

json jets_json(const std::vector<Jet>& v) {
    json a = json::array();
    for (auto& j : v) a.push_back(jet_str(j));
    return a;
}

json diffeo_json(const DiffeoJet& d) {
    json o;
    for (int i = 0; i < d.chart().dim(); ++i)
        o[d.chart().var_name(i)] = jet_str(d.component(i));
    return o;
}

json witnesses_json(const std::vector<std::pair<std::string, Rat>>& w) {
    json o = json::object();
    for (auto& [name, val] : w) o[name] = rat_str(val);
    return o;
}

json class_json(const SingularityClass& c) {
    json o;
    o["class"] = c.describe();
    o["tag"] = tag_name(c.tag);
    if (c.tag == SingTag::Sk || c.tag == SingTag::Skl || c.tag == SingTag::A1) o["k"] = c.k;
    if (c.tag == SingTag::Skl) o["l"] = c.l;
    if (c.tag == SingTag::Undetermined) o["undetermined_order"] = c.undetermined_order;
    o["typical"] = c.typical;
    o["witnesses"] = witnesses_json(c.witnesses);
    return o;
}

struct Opts {
    int n = 1;
    int order = 0;  // 0 = default 2n+5
    unsigned long long seed = 0;
    bool json_out = true;
    std::string expr;
    std::string input_file;
};

void add_common(CLI::App* cmd, Opts& o, bool takes_expr) {
    cmd->add_option("--n", o.n, "number of (p,q) pairs")->check(CLI::Range(1, Chart::kMaxN));
    cmd->add_option("--order", o.order, "jet truncation order N");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_flag("--json", o.json_out, "emit JSON (the default; kept for scripts)");
    if (takes_expr) {
        cmd->add_option("expr", o.expr, "polynomial expression");
        cmd->add_option("--input", o.input_file, "read the expression from a UTF-8 file")
            ->check(CLI::ExistingFile);
    }
}

int resolve_order(const Opts& o) {
    int N = o.order > 0 ? o.order : 2 * o.n + 5;
    if (N < 2 * o.n + 4)
        std::cerr << "warning: order " << N << " < 2n+4 = " << 2 * o.n + 4
                  << "; the theorems need jets up to max{k, l+1, 2n-k+1}\n";
    return N;
}

std::string resolve_text(const Opts& o) {
    if (!o.input_file.empty()) {
        if (!o.expr.empty()) throw error("give an expression or --input, not both");
        std::ifstream f(o.input_file);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
    if (o.expr.empty()) throw error("no input: pass an expression or --input <file>");
    return o.expr;
}

void emit(const json& out) { std::cout << out.dump(2) << "\n"; }

// ---- classify ----

int run_classify(const Opts& o) {
    int N = resolve_order(o);
    Jet h = parse_polynomial(resolve_text(o), Chart(o.n, Ambient::Full), N);
    SingularityClass c = classify_section(h, N);
    json out;
    out["schema"] = kSchema;
    out["command"] = "classify";
    out["n"] = o.n;
    out["order"] = N;
    out.update(class_json(c));
    emit(out);
    return c.tag == SingTag::Undetermined ? 2 : 0;
}

// ---- prepare ----

int run_prepare(const Opts& o, int k_flag) {
    int N = resolve_order(o);
    Jet h = parse_polynomial(resolve_text(o), Chart(o.n, Ambient::Full), N);
    int k = k_flag;
    if (k < 0) {
        SingularityClass c = classify_section(h, N);
        if (c.tag == SingTag::Undetermined)
            throw order_exhausted("tangency order undetermined at order " + std::to_string(N));
        k = (c.tag == SingTag::Nonsingular) ? 0 : c.k;
    }
    WeierstrassResult w = weierstrass_prepare(h, k, N);
    json out;
    out["schema"] = kSchema;
    out["command"] = "prepare";
    out["n"] = o.n;
    out["order"] = N;
    out["k"] = w.k;
    out["unit"] = jet_str(w.unit);
    out["R"] = jets_json(w.R);
    emit(out);
    return 0;
}

// ---- reduce ----

int run_reduce(const Opts& o) {
    int N = resolve_order(o);
    Jet h = parse_polynomial(resolve_text(o), Chart(o.n, Ambient::Full), N);
    PreliminaryNormalForm pre = reduce_to_preliminary(h, N);
    json out;
    out["schema"] = kSchema;
    out["command"] = "reduce";
    out["n"] = o.n;
    out["order"] = N;
    out["k"] = pre.k;
    out["R"] = jets_json(pre.R);
    out["transform"] = diffeo_json(pre.transform);
    out["unit"] = jet_str(pre.unit);
    out["valid_order"] = pre.valid_order;
    emit(out);
    return 0;
}

// ---- whitney ----

int run_whitney(const Opts& o) {
    int N = resolve_order(o);
    Chart red(o.n, Ambient::Reduced);
    std::string text = resolve_text(o);
    // components separated by ';' (or one per line in a file)
    std::vector<Jet> comps;
    std::string piece;
    for (std::stringstream ss(text); std::getline(ss, piece, ';');) {
        std::string trimmed;
        for (char ch : piece)
            if (ch != '\n' && ch != '\r') trimmed += ch;
        if (trimmed.find_first_not_of(" \t") == std::string::npos) continue;
        comps.push_back(parse_polynomial(trimmed, red, N));
    }
    if (int(comps.size()) != 2 * o.n)
        throw error("whitney: expected " + std::to_string(2 * o.n) +
                    " ';'-separated components, got " + std::to_string(comps.size()));
    MapJet r(red, comps);
    WhitneyClass c = whitney_classify(r, N);
    json out;
    out["schema"] = kSchema;
    out["command"] = "whitney";
    out["n"] = o.n;
    out["order"] = N;
    if (c.s)
        out["s"] = *c.s;
    else
        out["s"] = nullptr;
    out["flags"] = {{"a", c.flag_a}, {"b", c.flag_b}, {"c", c.flag_c}, {"d", c.flag_d}};
    out["typical"] = c.typical();
    out["exhausted_at"] = c.exhausted_at;
    out["witnesses"] = witnesses_json(c.witnesses);
    if (!c.s) {
        emit(out);
        return 2;
    }
    if (!c.typical()) {
        emit(out);
        std::cerr << "error: map lies outside the open conditions (a)-(c)\n";
        return 3;
    }
    OmegaReduction red_out = reduce_R_omega(r, *c.s, N);
    json m;
    m["psi"] = jet_str(red_out.moduli.psi);
    m["r1j"] = jets_json(red_out.moduli.r1j);
    m["odd"] = jets_json(red_out.moduli.odd);
    m["even_tilde"] = jets_json(red_out.moduli.even_tilde);
    m["moduli_independent"] = red_out.moduli.moduli_independent;
    out["moduli"] = m;
    out["normal"] = jets_json(red_out.normal.comps);
    out["phi"] = diffeo_json(red_out.phi);
    out["valid_order"] = red_out.valid_order;
    emit(out);
    return 0;
}

// ---- moduli ----

json moduli_json(const SectionModuli& m) {
    json out;
    out["class"] = m.cls.describe();
    out["template"] = template_name(m.provenance);
    out["g"] = jet_str(m.g);
    out["phi"] = jets_json(m.phi);
    if (m.provenance == Template::A1) {
        out["psi"] = m.extra ? jet_str(*m.extra) : "0";
        out["psi_signature"] = {{"pos", m.psi_signature.pos},
                                {"neg", m.psi_signature.neg},
                                {"zero", m.psi_signature.zero}};
        out["r1j"] = json::array();
        out["odd"] = json::array();
        out["even_tilde"] = json::array();
    } else {
        out["psi"] = jet_str(m.whitney.psi);
        out["r1j"] = jets_json(m.whitney.r1j);
        out["odd"] = jets_json(m.whitney.odd);
        out["even_tilde"] = jets_json(m.whitney.even_tilde);
        if (m.extra) out["extra"] = jet_str(*m.extra);
        out["moduli_independent"] = m.whitney.moduli_independent;
    }
    out["R"] = jets_json(m.R);
    out["transform"] = diffeo_json(m.transform);
    out["unit"] = jet_str(m.unit);
    out["valid_order"] = m.valid_order;
    return out;
}

int run_moduli(const Opts& o) {
    int N = resolve_order(o);
    Jet h = parse_polynomial(resolve_text(o), Chart(o.n, Ambient::Full), N + 2);
    SectionModuli m = assemble_moduli(h, N);
    TemplateReport rep = validate_template(m);
    if (!rep.ok()) throw internal_error("template re-check failed: " + rep.failures.front());
    json out;
    out["schema"] = kSchema;
    out["command"] = "moduli";
    out["n"] = o.n;
    out["order"] = N;
    out.update(moduli_json(m));
    if (!rep.notes.empty()) out["notes"] = rep.notes;
    emit(out);
    return 0;
}

// ---- oracle ----

int run_oracle(const Opts& o) {
    int N = resolve_order(o);
    Chart full(o.n, Ambient::Full);
    Jet h = parse_polynomial(resolve_text(o), full, N);
    Jet f = Jet::variable(full, N, full.y_index());
    json out;
    out["schema"] = kSchema;
    out["command"] = "oracle";
    out["n"] = o.n;
    out["order"] = N;
    bool undetermined = false;
    auto row = [&](const BracketScan& scan, std::optional<int> flow) {
        json r;
        if (scan.index) {
            r["bracket"] = *scan.index;
            r["witness"] = rat_str(scan.witness);
        } else {
            r["bracket"] = nullptr;
            undetermined = true;
        }
        if (flow)
            r["flow"] = *flow;
        else
            r["flow"] = nullptr;
        r["agree"] = scan.index && flow && *scan.index == *flow;
        r["exhausted_at"] = scan.exhausted_at;
        return r;
    };
    out["k_route"] = row(first_nonvanishing_fh(f, h, N), flow_tangency_oracle(f, h, N));
    out["l_route"] = row(first_nonvanishing_hf(h, f, N), flow_tangency_oracle(h, f, N));
    emit(out);
    return undetermined ? 2 : 0;
}

// ---- verify ----

Rat small_rat(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 3);
    Rat r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

// Base section per class plus a random x-free perturbation of degree 3..4;
// x-free terms of valuation >= 3 change neither the bracket chains at 0 nor
// the g-conditions, so the class survives (and is re-checked per trial).
// The y-tail of R_0 is filled with q1, p2, q2, p3, ... so the associated map
// meets the Whitney independence conditions at any n.
Jet draw_section(std::mt19937& rng, Chart full, int order, const std::string& cls) {
    int k, l;
    if (cls == "S(1,1)") { k = 1; l = 1; }
    else if (cls == "S(2,1)") { k = 2; l = 1; }
    else if (cls == "S(1,2)") { k = 1; l = 2; }
    else if (cls == "S(2,2)") { k = 2; l = 2; }
    else throw error("verify: unknown class " + cls);

    int n = full.n;
    auto V = [&](int i) { return Jet::variable(full, order, i); };
    Jet x = V(full.x_index()), y = V(full.y_index());
    // canonical Whitney components: r_0 = p1, r_1 = lead, r_{2m} = p_{m+1},
    // r_{2m+1} = q_{m+1}
    std::vector<Jet> comp = {V(full.p_index(1)), Jet(full, order)};
    for (int m = 1; 2 * m < 2 * n; ++m) {
        comp.push_back(V(full.p_index(m + 1)));
        comp.push_back(V(full.q_index(m + 1)));
    }
    Jet q1 = V(full.q_index(1));
    comp[1] = (k == 2 && l == 2) ? q1 * q1 : q1;
    // condition (a) needs dr_1(0) != 0 at n >= 2; a linear p2 part keeps
    // {r_0,r_1}(0) = 0 and lands in the r1j modulus
    if (k == 2 && l == 2 && n >= 2) comp[1] += V(full.p_index(2));

    Jet h(full, order);
    Jet xk = x;
    for (int t = 1; t <= k; ++t) xk = xk * x;  // x^{k+1}
    h += xk;
    if (k == 1) {
        // x^2 + g(y) + p1 + sum_j comp[j] y^j, g = y or y^2 by l
        h += (l == 1) ? y : y * y;
        h += comp[0];
        Jet yp = Jet::constant(full, order, 1);
        for (int j = 1; j <= 2 * n - 1; ++j) {
            yp = yp * y;
            h += comp[size_t(j)] * yp;
        }
    } else {
        // x^3 + lead*x + y + p1 + tail of R_0
        h += comp[1] * x + y + comp[0];
        Jet yp = Jet::constant(full, order, 1);
        for (int j = 1; j <= 2 * n - 2; ++j) {
            yp = yp * y;
            h += comp[size_t(1 + j)] * yp;
        }
    }
    std::vector<int> vars = {full.y_index()};
    for (int i = 1; i <= full.n; ++i) {
        vars.push_back(full.p_index(i));
        vars.push_back(full.q_index(i));
    }
    std::uniform_int_distribution<int> var(0, int(vars.size()) - 1);
    std::uniform_int_distribution<int> deg(3, 4);
    std::uniform_int_distribution<int> terms(0, 2);
    int t = terms(rng);
    for (int s = 0; s < t; ++s) {
        Mono m;
        int d = deg(rng);
        for (int i = 0; i < d; ++i) m[vars[size_t(var(rng))]] += 1;
        h.add_coeff(m, small_rat(rng));
    }
    return h;
}

struct TrialResult {
    bool pass = true;
    std::string detail;
};

TrialResult run_trial(unsigned long long seed, Chart full, int N, const std::string& cls) {
    std::mt19937 rng{std::mt19937::result_type(seed)};
    TrialResult res;
    // exact polynomial inputs: deg(u*(h o Psi)) <= 2*4 + 1 <= N+2 by the N>=7
    // guard below, so the moduli are exact at order N-2
    Jet h = draw_section(rng, full, N + 3, cls);
    DiffeoJet psi = random_polynomial_isotropy(rng, full, N + 3);
    Jet u = Jet::constant(full, N + 3, 1);
    u += Jet::variable(full, N + 3, full.y_index(), small_rat(rng));
    u += Jet::variable(full, N + 3, full.q_index(1), small_rat(rng));
    Jet h2 = u * compose(h, psi.components());
    SectionModuli m0 = assemble_moduli(h, N);
    SectionModuli m1 = assemble_moduli(h2, N);
    int t = N - 2;
    auto miss = [&](const std::string& what) {
        res.pass = false;
        if (!res.detail.empty()) res.detail += "; ";
        res.detail += what;
    };
    if (m0.cls.describe() != cls) miss("class drifted to " + m0.cls.describe());
    if (m1.cls.describe() != m0.cls.describe()) miss("class not invariant");
    auto cmp = [&](const Jet& a, const Jet& b, const std::string& name) {
        if (a.truncated(t) != b.truncated(t)) miss(name + " differs at order <= " + std::to_string(t));
    };
    cmp(m0.g, m1.g, "g");
    cmp(m0.whitney.psi, m1.whitney.psi, "psi");
    if (m0.whitney.r1j.size() != m1.whitney.r1j.size())
        miss("r1j count differs");
    else
        for (size_t j = 0; j < m0.whitney.r1j.size(); ++j)
            cmp(m0.whitney.r1j[j], m1.whitney.r1j[j], "r1j[" + std::to_string(j) + "]");
    if (m0.phi.size() != m1.phi.size())
        miss("phi count differs");
    else
        for (size_t j = 0; j < m0.phi.size(); ++j)
            cmp(m0.phi[j], m1.phi[j], "phi[" + std::to_string(j) + "]");
    for (size_t j = 0; j < std::min(m0.whitney.odd.size(), m1.whitney.odd.size()); ++j)
        cmp(m0.whitney.odd[j], m1.whitney.odd[j], "odd[" + std::to_string(j) + "]");
    for (size_t j = 0; j < std::min(m0.whitney.even_tilde.size(), m1.whitney.even_tilde.size()); ++j)
        cmp(m0.whitney.even_tilde[j], m1.whitney.even_tilde[j], "even_tilde[" + std::to_string(j) + "]");
    return res;
}

int run_verify(const Opts& o, int trials) {
    int N = resolve_order(o);
    // deg(u*(h o Psi)) <= 2*deg(h) + 1 must fit inside the window N+2 for the
    // moduli to be exact at order N-2 (exact-polynomial contract)
    int min_order = 2 * std::max(4, 2 * o.n) - 1;
    if (N < min_order)
        throw error("verify: order must be >= " + std::to_string(min_order) +
                    " at n=" + std::to_string(o.n) + " (exact-polynomial degree budget)");
    Chart full(o.n, Ambient::Full);
    const std::vector<std::string> classes = {"S(1,1)", "S(2,1)", "S(1,2)", "S(2,2)"};
    json failures = json::array();
    int passes = 0;
    // each trial owns its seed and state; results keyed by trial index
    for (int trial = 0; trial < trials; ++trial) {
        const std::string& cls = classes[size_t(trial) % classes.size()];
        unsigned long long seed = o.seed + (unsigned long long)trial;
        TrialResult res;
        try {
            res = run_trial(seed, full, N, cls);
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        if (res.pass) {
            ++passes;
        } else {
            json f;
            f["trial"] = trial;
            f["seed"] = seed;
            f["class"] = cls;
            f["detail"] = res.detail;
            failures.push_back(f);
        }
    }
    json out;
    out["schema"] = kSchema;
    out["command"] = "verify";
    out["n"] = o.n;
    out["order"] = N;
    out["seed"] = o.seed;
    out["trials"] = trials;
    out["passes"] = passes;
    out["failures"] = failures;
    emit(out);
    return passes == trials ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact classification of hypersurface sections of a Hamiltonian system"};
    app.require_subcommand(1);

    Opts o_classify, o_prepare, o_reduce, o_whitney, o_moduli, o_oracle, o_verify;
    int k_flag = -1, trials = 100;

    add_common(app.add_subcommand("classify", "singularity class of a section h"), o_classify, true);
    auto* prep = app.add_subcommand("prepare", "Weierstrass preparation of h");
    add_common(prep, o_prepare, true);
    prep->add_option("--k", k_flag, "tangency order (default: from the classifier)");
    add_common(app.add_subcommand("reduce", "preliminary normal form x^{k+1} + sum R_i x^i"),
               o_reduce, true);
    add_common(app.add_subcommand("whitney", "classify/reduce a 2n-component reduced map (';'-separated)"),
               o_whitney, true);
    add_common(app.add_subcommand("moduli", "functional moduli of a section"), o_moduli, true);
    add_common(app.add_subcommand("oracle", "flow tangency oracle vs bracket chains"), o_oracle, true);
    auto* ver = app.add_subcommand("verify", "moduli-invariance property suite");
    add_common(ver, o_verify, false);
    ver->add_option("--trials", trials, "number of random trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("classify")) return run_classify(o_classify);
        if (app.got_subcommand("prepare")) return run_prepare(o_prepare, k_flag);
        if (app.got_subcommand("reduce")) return run_reduce(o_reduce);
        if (app.got_subcommand("whitney")) return run_whitney(o_whitney);
        if (app.got_subcommand("moduli")) return run_moduli(o_moduli);
        if (app.got_subcommand("oracle")) return run_oracle(o_oracle);
        if (app.got_subcommand("verify")) return run_verify(o_verify, trials);
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const genericity_error& e) {
        std::cerr << "genericity failure: " << e.what() << "\n";
        return 3;
    } catch (const order_exhausted& e) {
        std::cerr << "undetermined at this order: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
