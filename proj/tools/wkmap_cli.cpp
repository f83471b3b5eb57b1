// wkmap command-line front end.
#include "wkmap/correspondences.hpp"
#include "wkmap/hierarchy.hpp"
#include "wkmap/hodge.hpp"
#include "wkmap/loopeq.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

using json = nlohmann::json;
using namespace wkm;

namespace {

constexpr const char* kSchema = "wkmap/1";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- phi presets

struct PhiChoice {
    std::string kind = "symbolic";  // symbolic | identity | special | generic | coeffs
    Poly q = Poly::var("q");
    int params = 0;
    std::vector<Poly> coeffs;

    Series1 element(int order) const {
        if (kind == "identity" || kind == "symbolic") return identity_element(order);
        if (kind == "special") return special_element(order, q);
        if (kind == "generic") return generic_element(params, order);
        return element_from_coeffs(coeffs, order);
    }

    // l_i = (d/dV)^i log phi' where it is a constant; symbolic otherwise.
    // Without --phi the jet-ring commands keep a generic phi.
    Poly specialize(const Poly& p) const {
        Poly e = ph_to_ell(p);
        if (kind != "identity" && kind != "special") return e;
        bool id = kind == "identity";
        Poly l1 = id ? Poly() : q * Rat(2);
        return substitute(e, [&](SymId s, int) -> std::optional<Poly> {
            const auto& i = sym_info(s);
            if (i.family == "l") return i.index == 1 ? l1 : Poly();
            // the special element comes with sigma_{2j-1} = (4^j - 1)(2j-2)! q^{2j-1}
            if (!id && i.family == "sig") return special_sigma(q, (i.index + 1) / 2)[i.index];
            if (id && i.name == "sq") return Poly(1);
            if (id && i.name == "ph0") return Poly::var(sym("V", 0));
            return std::nullopt;
        });
    }
};

PhiChoice parse_phi(const std::string& text) {
    PhiChoice c;
    if (text.empty()) return c;
    if (text == "identity") {
        c.kind = "identity";
        return c;
    }
    if (text.rfind("special:", 0) == 0) {
        c.kind = "special";
        try {
            c.q = parse_poly(text.substr(8));
        } catch (const std::exception& e) {
            throw UsageError("--phi special:<q>: " + std::string(e.what()));
        }
        return c;
    }
    if (text.rfind("generic:", 0) == 0) {
        c.kind = "generic";
        try {
            c.params = std::stoi(text.substr(8));
        } catch (const std::exception&) {
            throw UsageError("--phi generic:<k> needs an integer k");
        }
        if (c.params < 0) throw UsageError("--phi generic:<k> needs k >= 0");
        return c;
    }
    c.kind = "coeffs";
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            c.coeffs.push_back(parse_poly(item));
        } catch (const std::exception& e) {
            throw UsageError("--phi coefficient '" + item + "': " + e.what());
        }
    }
    if (c.coeffs.empty() || c.coeffs[0] != Poly(1))
        throw UsageError("--phi coefficient list must start with 1 (phi = V + a2 V^2 + ...)");
    return c;
}

// ---------------------------------------------------------------- JSON helpers

json poly_json(const Poly& p) {
    json terms = json::object();
    for (auto& [m, c] : p.terms()) terms[m.str()] = to_string(c);
    return {{"text", p.str()}, {"terms", terms}};
}

json tuple_json(const Tuple& t, int order) {
    json a = json::array();
    for (int i = 0; i <= order; ++i) a.push_back(entry(t, i).str());
    return a;
}

json series_json(const YSeries& s) {
    json a = json::array();
    for (auto& c : s) a.push_back(to_string(c));
    return a;
}

json operator_json(const LocalOperator& x) {
    json a = json::object();
    for (auto& [j, c] : x.a) a[std::to_string(j)] = poly_json(c);
    return a;
}

Tuple parse_tuple(const std::string& text) {
    Tuple t;
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw UsageError("--tuple is not valid JSON: " + std::string(e.what()));
    }
    auto value = [](const json& v) {
        if (v.is_string()) return parse_poly(v.get<std::string>());
        if (v.is_number_integer()) return Poly(v.get<long>());
        throw UsageError("--tuple entries must be strings (\"p/q\" or polynomials) or integers");
    };
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) t[static_cast<int>(i)] = value(j[i]);
    } else if (j.is_object()) {
        for (auto& [k, v] : j.items()) t[std::stoi(k)] = value(v);
    } else {
        throw UsageError("--tuple must be a JSON array or object");
    }
    return normalized(t);
}

// ---------------------------------------------------------------- cache

struct Cache {
    std::optional<std::filesystem::path> file;

    void open(const std::string& dir_flag) {
        std::string dir = dir_flag;
        if (dir.empty())
            if (const char* env = std::getenv("WKMAP_CACHE_DIR")) dir = env;
        if (dir.empty()) return;
        std::filesystem::create_directories(dir);
        file = std::filesystem::path(dir) / "correlators.txt";
        default_table().load(file->string());
    }
    void close() const {
        if (file) default_table().save(file->string());
    }
};

void check_range(const char* what, int v, int lo, int hi) {
    if (v < lo || v > hi)
        throw UsageError(std::string(what) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void emit(const json& j, bool text, const std::string& text_form) {
    if (text)
        std::cout << text_form;
    else
        std::cout << j.dump(2) << '\n';
}

std::string report_line(const std::string& name, bool ok) { return name + ": " + (ok ? "PASS" : "FAIL") + '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with WK mapping partition functions"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    std::string format, cache_dir;
    app.add_option("--format", format, "Output format (default: text for intersect, json otherwise)")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--cache-dir", cache_dir, "Correlator cache directory (default: $WKMAP_CACHE_DIR)");

    // act
    auto* act_cmd = app.add_subcommand("act", "Apply phi to a coefficient tuple");
    std::string phi_text, tuple_text;
    int order = 4;
    bool inverse = false, linear = false;
    act_cmd->add_option("--phi", phi_text, "identity | special:q | generic:k | 1,a2,a3,...");
    act_cmd->add_option("--tuple", tuple_text, "JSON array or {index: value} object")->required();
    act_cmd->add_option("--order", order, "Truncation order in V");
    act_cmd->add_flag("--inverse", inverse, "Act by phi^{-1}");
    act_cmd->add_flag("--linear", linear, "Modified linear action");

    // intersect / free-energy
    auto* int_cmd = app.add_subcommand("intersect", "psi-class intersection number");
    int genus = 0;
    std::vector<int> indices;
    int_cmd->add_option("--genus", genus)->required();
    int_cmd->add_option("--indices", indices)->delimiter(',')->required();

    auto* fe_cmd = app.add_subcommand("free-energy", "F_g^WK (or F_g^phi) through a t-degree");
    int degree = 4;
    fe_cmd->add_option("--genus", genus)->required();
    fe_cmd->add_option("--degree", degree)->required();
    fe_cmd->add_option("--phi", phi_text, "identity | special:q | generic:k | 1,a2,...");

    // loop-solve
    auto* loop_cmd = app.add_subcommand("loop-solve", "Genus-g mapping free energy from the loop equation");
    std::string emit_form = "r";
    loop_cmd->add_option("--genus", genus)->required();
    loop_cmd->add_option("--phi", phi_text, "identity | special:q | generic:k");
    loop_cmd->add_option("--emit", emit_form, "r: P(w; l) form, jet: V-jet form")->check(CLI::IsMember({"r", "jet"}));

    // flow / standard-form / poisson
    auto* flow_cmd = app.add_subcommand("flow", "Mapping hierarchy flow D_S(U)");
    std::string s_text = "U", family = "wk";
    flow_cmd->add_option("--phi", phi_text, "identity | special:q | generic:k");
    flow_cmd->add_option("--S", s_text, "S as a polynomial in U");
    flow_cmd->add_option("--order", order, "eps order (even)");
    flow_cmd->add_option("--family", family)->check(CLI::IsMember({"wk", "hodge"}));

    auto* sf_cmd = app.add_subcommand("standard-form", "Normal form of the first flow");
    std::string sf_family = "hodge";
    sf_cmd->add_option("--order", order, "eps order (2 or 4)");
    sf_cmd->add_option("--phi", phi_text, "identity | special:q | generic:k");
    sf_cmd->add_option("--family", sf_family)->check(CLI::IsMember({"wk", "hodge"}));

    auto* pb_cmd = app.add_subcommand("poisson", "Poisson operators of the hierarchy");
    int which = 1;
    pb_cmd->add_option("--which", which)->required()->check(CLI::IsMember({1, 2}));
    pb_cmd->add_option("--order", order, "eps order (0 or 2)");
    pb_cmd->add_option("--phi", phi_text, "identity | special:q | generic:k");

    // hodge
    auto* hodge_cmd = app.add_subcommand("hodge", "Hodge free energies");
    std::string sigma_text = "symbolic";
    int weight = 3;
    hodge_cmd->add_option("--sigma", sigma_text, "symbolic | zero | special:q");
    hodge_cmd->add_option("--degree", degree)->required();
    hodge_cmd->add_option("--genus", genus)->required();
    hodge_cmd->add_option("--weight", weight, "sigma-weight (q-degree) cap");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Correspondence checks");
    verify_cmd->require_subcommand(1);
    auto* v_hw = verify_cmd->add_subcommand("hodge-wk", "Hodge-WK correspondence");
    int q_order = 5;
    v_hw->add_option("--degree", degree)->required();
    v_hw->add_option("--genus", genus)->required();
    v_hw->add_option("--q-order", q_order);
    auto* v_gue = verify_cmd->add_subcommand("wk-gue", "WK-GUE correspondence");
    auto* v_bgw = verify_cmd->add_subcommand("wk-bgw", "WK-BGW correspondence");
    for (auto* c : {v_gue, v_bgw}) {
        c->add_option("--order", order, "order in (x - x0)")->required();
        c->add_option("--genus", genus)->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    bool text = format == "text" || (format.empty() && *int_cmd);
    Cache cache;
    int status = 0;
    try {
        cache.open(cache_dir);
        PhiChoice phi = parse_phi(phi_text);

        if (*act_cmd) {
            check_range("--order", order, 0, 40);
            Tuple t = parse_tuple(tuple_text);
            Series1 el = phi.element(order + 2);
            if (inverse) el = reversion(el);
            LinearAction lin = act_linear(t, el, order);
            Tuple T = linear ? lin.that : act(t, el, order);
            json j{{"schema", kSchema}, {"command", "act"}, {"order", order}, {"linear", linear},
                   {"T", tuple_json(T, order)}, {"C", tuple_json(lin.C, order)}, {"c", tuple_json(lin.c, order)}};
            std::string s;
            for (int i = 0; i <= order; ++i) s += "T" + std::to_string(i) + " = " + entry(T, i).str() + '\n';
            emit(j, text, s);
        } else if (*int_cmd) {
            check_range("--genus", genus, 0, 12);
            Rat v = correlator(genus, indices);
            json j{{"schema", kSchema}, {"command", "intersect"}, {"genus", genus}, {"indices", indices},
                   {"value", to_string(v)}};
            emit(j, text, to_string(v) + '\n');
        } else if (*fe_cmd) {
            check_range("--genus", genus, 0, 8);
            check_range("--degree", degree, 0, 16);
            Poly f = phi.kind == "identity" || phi.kind == "symbolic" ? free_energy_wk(genus, degree)
                                            : free_energy_phi(phi.element(degree + 3 * genus + 2), genus, degree);
            json j{{"schema", kSchema}, {"command", "free-energy"}, {"genus", genus}, {"degree", degree},
                   {"F", poly_json(f)}};
            emit(j, text, f.str() + '\n');
        } else if (*loop_cmd) {
            check_range("--genus", genus, 1, 6);
            auto sols = solve_loop(genus);
            const GenusSolution& s = sols.back();
            json grads = json::array();
            std::string out;
            if (emit_form == "jet") {
                Poly pot = phi.specialize(jet_potential(s));
                for (int k = 0; k < static_cast<int>(s.gradients.size()); ++k)
                    grads.push_back(poly_json(phi.specialize(jet_gradient(s, k))));
                out = "F = " + pot.str() + '\n';
                json j{{"schema", kSchema}, {"command", "loop-solve"}, {"genus", genus}, {"form", "jet"},
                       {"F", poly_json(pot)}, {"dF", grads}};
                emit(j, text, out);
            } else {
                Poly pot = phi.specialize(s.potential);
                for (std::size_t k = 0; k < s.gradients.size(); ++k) {
                    Poly gk = phi.specialize(s.gradients[k]);
                    grads.push_back(poly_json(gk));
                    out += "P_{" + std::to_string(genus) + "," + std::to_string(k) + "} = " + gk.str() + '\n';
                }
                if (genus >= 2) out = "P_" + std::to_string(genus) + " = " + pot.str() + '\n' + out;
                json j{{"schema", kSchema}, {"command", "loop-solve"}, {"genus", genus}, {"form", "r"},
                       {"P", poly_json(pot)}, {"P_k", grads}};
                emit(j, text, out);
            }
        } else if (*flow_cmd) {
            if (order % 2) throw UsageError("--order must be even");
            check_range("--order", order, 0, 8);
            Poly s = substitute(parse_poly(s_text), {{sym("U"), Poly::var(sym("V", 0))}});
            auto qm = quasi_miura(order / 2, family == "wk" ? MappingFamily::wk : MappingFamily::hodge);
            auto f = specialize_flow(flow(qm), s);
            json parts = json::array();
            std::string out;
            for (std::size_t g = 0; g < f.size(); ++g) {
                Poly p = phi.specialize(f[g]);
                parts.push_back({{"eps", 2 * static_cast<int>(g)}, {"value", poly_json(p)}});
                out += "eps^" + std::to_string(2 * g) + ": " + p.str() + '\n';
            }
            json j{{"schema", kSchema}, {"command", "flow"}, {"S", s_text}, {"order", order}, {"family", family},
                   {"jets", "V_k = d^k U/dx^k"}, {"terms", parts}};
            emit(j, text, out);
        } else if (*sf_cmd) {
            if (order != 2 && order != 4) throw UsageError("--order must be 2 or 4");
            auto qm = quasi_miura(order / 2, sf_family == "wk" ? MappingFamily::wk : MappingFamily::hodge);
            StandardForm sf = to_standard_form(qm, order / 2);
            json C = json::object(), alpha = json::object();
            std::string out = "a0 = " + phi.specialize(sf.a0).str() + '\n';
            for (auto& [k, v] : sf.C) {
                C[k] = poly_json(phi.specialize(v));
                out += "C_" + k + " = " + phi.specialize(v).str() + '\n';
            }
            for (auto& [k, v] : sf.alpha) {
                alpha[k] = poly_json(phi.specialize(v));
                out += "alpha_" + k + " = " + phi.specialize(v).str() + '\n';
            }
            json j{{"schema", kSchema}, {"command", "standard-form"}, {"order", order}, {"family", sf_family},
                   {"a0", poly_json(phi.specialize(sf.a0))}, {"C", C}, {"alpha", alpha}, {"free", sf.free}};
            emit(j, text, out);
        } else if (*pb_cmd) {
            if (order != 0 && order != 2) throw UsageError("--order must be 0 or 2");
            auto ops = poisson_operators(quasi_miura(order / 2));
            const auto& side = which == 1 ? ops.p1 : ops.p2;
            json parts = json::array();
            std::string out;
            for (int g = 0; g <= order / 2; ++g) {
                LocalOperator x;
                for (auto& [k, c] : side[g].a) {
                    Poly v = phi.specialize(c);
                    if (!v.is_zero()) x.a[k] = v;
                }
                parts.push_back({{"eps", 2 * g}, {"operator", operator_json(x)}});
                for (auto& [k, c] : x.a)
                    out += "eps^" + std::to_string(2 * g) + " d^" + std::to_string(k) + ": " + c.str() + '\n';
            }
            json j{{"schema", kSchema}, {"command", "poisson"}, {"which", which}, {"order", order}, {"terms", parts}};
            emit(j, text, out);
        } else if (*hodge_cmd) {
            check_range("--genus", genus, 0, 4);
            check_range("--degree", degree, 0, 10);
            check_range("--weight", weight, 0, 12);
            int j_max = (weight + 1) / 2;
            HodgeParams s;
            if (sigma_text == "symbolic")
                s = symbolic_sigma(j_max);
            else if (sigma_text == "zero")
                s = HodgeParams{};
            else if (sigma_text.rfind("special:", 0) == 0)
                s = special_sigma(parse_poly(sigma_text.substr(8)), j_max);
            else
                throw UsageError("--sigma must be symbolic, zero or special:<q>");
            auto F = fp_transform(degree, genus, s, weight);
            json parts = json::array();
            std::string out;
            for (int g = 0; g <= genus; ++g) {
                parts.push_back({{"genus", g}, {"F", poly_json(F[g])}});
                out += "F_" + std::to_string(g) + " = " + F[g].str() + '\n';
            }
            json j{{"schema", kSchema}, {"command", "hodge"}, {"sigma", sigma_text}, {"degree", degree},
                   {"weight", weight}, {"genera", parts}};
            emit(j, text, out);
        } else if (*v_hw) {
            check_range("--genus", genus, 0, 3);
            check_range("--degree", degree, 0, 8);
            check_range("--q-order", q_order, 0, 9);
            auto rep = verify_hodge_wk(degree, genus, q_order);
            json res = json::array();
            for (int g = 0; g <= genus; ++g) res.push_back({{"genus", g}, {"residual", poly_json(rep.residual[g])}});
            json j{{"schema", kSchema}, {"command", "verify hodge-wk"}, {"degree", degree}, {"genus", genus},
                   {"q_order", q_order}, {"pass", rep.pass()}, {"residuals", res}};
            std::string out;
            for (int g = 0; g <= genus; ++g)
                out += report_line("genus " + std::to_string(g), rep.residual[g].is_zero());
            out += rep.pass() ? "PASS\n" : "FAIL\n";
            emit(j, text, out);
            status = rep.pass() ? 0 : 1;
        } else if (*v_gue || *v_bgw) {
            check_range("--order", order, 0, 10);
            check_range("--genus", genus, 0, 3);
            Correspondence c = *v_gue ? Correspondence::gue : Correspondence::bgw;
            auto rep = verify_correspondence(c, order, genus);
            json sectors = json::array();
            std::string out;
            for (auto& s : rep.sectors) {
                YSeries res = s.closed_form;
                for (std::size_t i = 0; i < res.size(); ++i) res[i] -= s.target[i];
                sectors.push_back({{"name", s.name}, {"eps_power", s.eps_power}, {"pass", s.pass()},
                                   {"closed_form", series_json(s.closed_form)}, {"direct", series_json(s.direct)},
                                   {"target", series_json(s.target)}, {"residual", series_json(res)}});
                out += report_line(s.name, s.pass());
            }
            out += rep.pass() ? "PASS\n" : "FAIL\n";
            json j{{"schema", kSchema}, {"command", *v_gue ? "verify wk-gue" : "verify wk-bgw"},
                   {"order", order}, {"genus", genus}, {"base_point", base_point(c)}, {"pass", rep.pass()},
                   {"sectors", sectors}};
            emit(j, text, out);
            status = rep.pass() ? 0 : 1;
        }
        cache.close();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return status;
}
