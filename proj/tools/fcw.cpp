#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fcw/fcw.hpp"

namespace {

using fcw::Json;

struct Options {
    std::string scene;
    std::optional<int> deg, order, cutoff;
    std::string json_path;
    std::string p;
    std::string suite = "core";
};

int order_or(const Options& o, const fcw::Scene& s, int fallback) {
    if (o.order) return *o.order;
    return s.order.value_or(fallback);
}

int deg_or(const Options& o, const fcw::Scene& s, int fallback) {
    if (o.deg) return *o.deg;
    return s.degree.value_or(fallback);
}

void positive(const std::optional<int>& v, const char* flag, bool allow_zero = false) {
    if (v && (*v < 0 || (*v == 0 && !allow_zero)))
        throw fcw::InputError(std::string(flag) + " must be " + (allow_zero ? "nonnegative" : "positive"));
}

std::optional<fcw::Poly> gamma_poly(const Options& o, const fcw::Scene& s) {
    if (o.p.empty()) return s.p;
    fcw::RationalFunction f;
    try {
        f = fcw::parse_ratfunc(o.p, "z");
    } catch (const fcw::Error& e) {
        throw fcw::InputError(std::string("--p: ") + e.what());
    }
    if (!f.is_polynomial()) throw fcw::InputError("--p: expected a polynomial in z");
    return f.num();
}

std::string join(const std::vector<int>& v) {
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out + "}";
}

void emit(const Options& o, const Json& j) {
    if (o.json_path.empty()) return;
    std::ofstream out(o.json_path);
    if (!out) throw fcw::InputError("cannot write " + o.json_path);
    out << j.dump(2) << "\n";
}

int cmd_baker(const Options& o) {
    fcw::Scene s = fcw::load_scene(o.scene);
    positive(o.cutoff, "--cutoff");
    fcw::BakerData b = fcw::compute_baker(s.point);
    std::cout << fcw::baker_string(b) << "\n";
    const int cutoff = o.cutoff.value_or(fcw::kDefaultDepth);
    Json j = {{"point", fcw::to_json(s.point)}, {"baker", fcw::to_json(b)}};
    j["wave_operator"] = fcw::wave_operator(b, -cutoff).str();
    j["cutoff"] = cutoff;
    emit(o, j);
    return 0;
}

int cmd_aw(const Options& o) {
    fcw::Scene s = fcw::load_scene(o.scene);
    positive(o.deg, "--deg", true);
    fcw::SpectralAlgebra a = fcw::spectral_algebra(s.point, deg_or(o, s, 8));
    std::cout << "staircase " << join(a.staircase) << "\n";
    emit(o, {{"point", fcw::to_json(s.point)}, {"spectral_algebra", fcw::to_json(a)}});
    return 0;
}

int cmd_dw(const Options& o) {
    fcw::Scene s = fcw::load_scene(o.scene);
    positive(o.order, "--order", true);
    positive(o.deg, "--deg", true);
    fcw::OperatorSpaceBasis b = fcw::operator_space_basis(s.point, s.point, order_or(o, s, 4), deg_or(o, s, 4));
    std::cout << "D(W) box order " << b.m << " degree " << b.d << ": dimension " << b.basis.size()
              << (b.stable ? "" : " (window unstable)") << "\n";
    for (const auto& d : b.basis) std::cout << "  " << fcw::z_str(d) << "\n";
    emit(o, {{"point", fcw::to_json(s.point)}, {"operators", fcw::to_json(b)}});
    return b.stable ? 0 : 1;
}

int cmd_dual(const Options& o) {
    fcw::Scene s = fcw::load_scene(o.scene);
    positive(o.order, "--order", true);
    positive(o.deg, "--deg", true);
    fcw::GrPoint bw = fcw::bispectral_dual(s.point);
    const bool involutive = fcw::bispectral_dual(bw) == s.point;
    fcw::DualSubalgebraBasis b =
        fcw::dual_subalgebra(fcw::operator_space_basis(s.point, s.point, order_or(o, s, 4), deg_or(o, s, 4)));
    std::cout << "bispectral dual " << bw << (involutive ? "" : " (not involutive)") << "\n";
    std::cout << "dual subalgebra orders " << join(b.orders) << (b.commutative ? ", commutative" : ", noncommutative")
              << (b.rank_one ? ", rank one" : "");
    if (b.conductor) std::cout << ", conductor " << *b.conductor;
    if (b.scalars_only) std::cout << ", scalars only";
    std::cout << "\n";
    for (const auto& d : b.basis) std::cout << "  " << d << "\n";
    emit(o, {{"point", fcw::to_json(s.point)},
             {"bispectral_dual", fcw::to_json(bw)},
             {"involutive", involutive},
             {"dual_subalgebra", fcw::to_json(b)}});
    return involutive && b.commutative ? 0 : 1;
}

int cmd_codim(const Options& o) {
    fcw::Scene s = fcw::load_scene(o.scene);
    positive(o.order, "--order", true);
    positive(o.deg, "--deg", true);
    fcw::CodimReport c = fcw::symbol_codimensions(s.point, order_or(o, s, 4), deg_or(o, s, 4));
    std::cout << "codim gr_D " << c.codim_d << ", codim gr_x " << c.codim_x << " (order " << c.m << ", degree "
              << c.d << "; widened to " << c.wide_m << "," << c.wide_d << (c.stable ? " stable" : " unstable")
              << ")\n";
    auto list = [](const std::vector<fcw::Monomial>& ms) {
        std::string out;
        for (const auto& [k, j] : ms) out += " x^" + std::to_string(k) + "*xi^" + std::to_string(j);
        return out.empty() ? std::string(" none") : out;
    };
    std::cout << "missing gr_D:" << list(c.missing_d) << "\nmissing gr_x:" << list(c.missing_x) << "\n";
    emit(o, {{"point", fcw::to_json(s.point)}, {"codimensions", fcw::to_json(c)}});
    return c.stable && c.equal ? 0 : 1;
}

int cmd_gamma(const Options& o) {
    fcw::Scene s = fcw::load_scene(o.scene);
    positive(o.order, "--order", true);
    positive(o.deg, "--deg", true);
    std::optional<fcw::Poly> p = gamma_poly(o, s);
    if (!p) throw fcw::InputError("no polynomial p: pass --p or set \"p\" in the scene");
    const fcw::GrPoint gw = fcw::gamma_act_on_point(s.point, *p);
    const fcw::GrPoint inv = fcw::gamma_act_on_point(s.point, -*p);
    const int m = order_or(o, s, 2), d = deg_or(o, s, 2);
    // D in D(gamma_p^-1 W) iff e^p D e^-p in D(W)
    std::size_t checked = 0, bad = 0;
    std::vector<fcw::DiffOp> cands = fcw::operator_space_basis(inv, inv, m, d).basis;
    for (const auto& op : fcw::operator_space_basis(s.point, s.point, m, d).basis)
        cands.push_back(fcw::gamma_conjugate(op, -*p));
    for (const auto& op : cands) {
        ++checked;
        if (fcw::maps_into(op, inv, inv) != fcw::maps_into(fcw::gamma_conjugate(op, *p), s.point, s.point)) ++bad;
    }
    std::cout << "gamma_p W = " << gw << "\n";
    std::cout << "equivariance on box (" << m << "," << d << "): " << checked - bad << "/" << checked << "\n";
    Json j = {{"p", p->str("z")},
              {"point", fcw::to_json(s.point)},
              {"image", fcw::to_json(gw)},
              {"equivariance", {{"order", m}, {"degree", d}, {"checked", checked}, {"failures", bad}}}};
    bool ok = bad == 0;
    if (s.cm) {
        fcw::CMTriple g = fcw::gamma_act_cm(*s.cm, *p);
        const bool r1 = fcw::rank_one_check(g);
        ok = ok && r1;
        std::cout << "gamma_p (X, Y): rank one " << (r1 ? "yes" : "no") << "\n";
        j["cm"] = fcw::to_json(g);
    }
    emit(o, j);
    return ok ? 0 : 1;
}

int cmd_cm_check(const Options& o) {
    fcw::Scene s = fcw::load_scene(o.scene);
    if (!s.cm) throw fcw::SceneError("/cm", "missing Calogero-Moser pair");
    const bool r1 = fcw::rank_one_check(*s.cm);
    std::cout << "n = " << s.cm->n << ", rank([X,Y] + I) = 1: " << (r1 ? "yes" : "no") << "\n";
    Json j = {{"cm", fcw::to_json(*s.cm)}, {"rank_one", r1}};
    bool ok = r1;
    std::optional<fcw::Poly> p = gamma_poly(o, s);
    if (r1 && p) {
        fcw::CMTriple g = fcw::gamma_act_cm(*s.cm, *p);
        const bool g1 = fcw::rank_one_check(g);
        ok = g1;
        std::cout << "after p = " << p->str("z") << ": rank one " << (g1 ? "yes" : "no") << "\n";
        j["p"] = p->str("z");
        j["image"] = fcw::to_json(g);
        j["image_rank_one"] = g1;
    }
    emit(o, j);
    return ok ? 0 : 1;
}

int cmd_verify(const Options& o) {
    const fcw::Suite suite = o.suite == "extended" ? fcw::Suite::extended : fcw::Suite::core;
    auto results = fcw::run_suite(suite);
    bool all = true;
    Json j = {{"suite", o.suite}, {"criteria", Json::array()}};
    for (const auto& r : results) {
        all = all && r.pass;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%7.2fs", r.seconds);
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << buf << "  "
                  << r.name << ": " << r.detail << "\n";
        j["criteria"].push_back(fcw::to_json(r));
    }
    j["pass"] = all;
    emit(o, j);
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with rings of differential operators on adelic Grassmannian points"};
    app.require_subcommand(1);
    Options o;

    auto add = [&](const char* name, const char* help, bool scene, auto... flags) {
        CLI::App* sub = app.add_subcommand(name, help);
        if (scene) sub->add_option("scene", o.scene, "scene JSON file")->required();
        sub->add_option("--json", o.json_path, "write a JSON report to this path");
        for (const char* f : std::initializer_list<const char*>{flags...}) {
            const std::string s = f;
            if (s == "deg") sub->add_option("--deg", o.deg, "degree bound");
            if (s == "order") sub->add_option("--order", o.order, "operator order bound");
            if (s == "cutoff") sub->add_option("--cutoff", o.cutoff, "pseudo-differential truncation depth");
            if (s == "p") sub->add_option("--p", o.p, "polynomial p(z) for the Gamma action");
        }
        return sub;
    };
    auto baker = add("baker", "Baker function", true, "cutoff");
    auto aw = add("aw", "spectral algebra staircase", true, "deg");
    auto dw = add("dw", "basis of the D(W) box", true, "order", "deg");
    auto dual = add("dual", "bispectral dual and dual subalgebra", true, "order", "deg");
    auto codim = add("codim", "symbol codimensions", true, "order", "deg");
    auto gamma = add("gamma", "Gamma action and equivariance", true, "order", "deg", "p");
    auto cm = add("cm-check", "rank-one check of a Calogero-Moser pair", true, "p");
    auto verify = add("verify", "run the acceptance suites", false);
    verify->add_option("--suite", o.suite, "core or extended")->check(CLI::IsMember({"core", "extended"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (baker->parsed()) return cmd_baker(o);
        if (aw->parsed()) return cmd_aw(o);
        if (dw->parsed()) return cmd_dw(o);
        if (dual->parsed()) return cmd_dual(o);
        if (codim->parsed()) return cmd_codim(o);
        if (gamma->parsed()) return cmd_gamma(o);
        if (cm->parsed()) return cmd_cm_check(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const fcw::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const fcw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
