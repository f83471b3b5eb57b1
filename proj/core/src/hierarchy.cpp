#include "wkmap/hierarchy.hpp"

#include "wkmap/hodge.hpp"
#include "wkmap/loopeq.hpp"

#include <functional>
#include <mutex>
#include <set>
#include <stdexcept>

namespace wkm {

namespace {

Poly V(int k, int e = 1) { return Poly::var(sym("V", k), e); }
Poly eps(int e) { return Poly::var("eps", e); }

const std::vector<GenusSolution>& loop_solutions(int g) {
    static std::mutex mu;
    static std::vector<GenusSolution> memo;
    std::lock_guard lock(mu);
    if (static_cast<int>(memo.size()) < g) memo = solve_loop(g);
    return memo;
}

// Replaces f_k (k >= 0) of a tower by next^k(x), next given per step.
Poly replace_tower(const Poly& p, const std::string& family, const Poly& x, const std::function<Poly(const Poly&)>& next,
                   const Trunc& tr = {}) {
    int top = -1;
    for (SymId s : p.symbols())
        if (sym_info(s).family == family && sym_info(s).index >= 0) top = std::max(top, sym_info(s).index);
    if (top < 0) return p;
    std::unordered_map<SymId, Poly> img;
    Poly cur = x;
    for (int k = 0; k <= top; ++k) {
        img[sym(family, k)] = cur;
        if (k < top) cur = next(cur);
    }
    return substitute(p, img, tr);
}

}  // namespace

const JetRing& hierarchy_ring() {
    static const JetRing r = [] {
        JetRing x("V");
        x.add_function(sym("Mf"), Poly::var("sq"));
        x.add_function(sym("Sint"), Poly::var(sym("S", 0)));
        return x;
    }();
    return r;
}

const Grading& eps_grading() {
    static const Grading g = [] {
        Grading x;
        x.set("eps", 1);
        x.family("dl", [](int) { return 2; });  // placeholders for d^k of an O(eps^2) shift
        return x;
    }();
    return g;
}

Trunc eps_trunc(int g_max) { return Trunc{&eps_grading(), 2 * g_max}; }

std::vector<Poly> eps_coefficients(const Poly& p, int g_max) {
    std::vector<Poly> out;
    SymId e = sym("eps");
    for (int g = 0; g <= g_max; ++g) out.push_back(p.coeff_of(e, 2 * g));
    return out;
}

Poly taylor_shift(const Poly& p, const Poly& delta, int g_max, const JetRing& ring) {
    if (delta.is_zero() || p.is_zero()) return p;
    Trunc tr = eps_trunc(g_max);
    int kmax = ring.max_jet(p);
    // exp(sum_k dl_k d/dV_k) p with dl_k constants, then dl_k -> d^k delta
    Poly result = p, term = p;
    for (int n = 1; n <= g_max; ++n) {
        Poly next;
        for (int k = 0; k <= kmax; ++k) {
            Poly d = ring.partial(term, k);
            if (!d.is_zero()) next += d.mul(Poly::var(sym("dl", k)), tr);
        }
        term = next * rat(1, n);
        if (term.is_zero()) break;
        result += term;
    }
    std::unordered_map<SymId, Poly> img;
    Poly dk = delta;
    for (int k = 0; k <= kmax; ++k) {
        img[sym("dl", k)] = dk;
        if (k < kmax) dk = ring.d_total(dk, tr);
    }
    return substitute(result, img, tr);
}

Poly mapping_dF(int g, MappingFamily fam) {
    const JetRing& R = hierarchy_ring();
    if (g < 1) throw std::invalid_argument("mapping_dF needs g >= 1");
    if (g == 1) {
        // (1/24) log V_1 + (1/16) log phi' [+ (sig1/24) phi]
        Poly r = V(2) * V(1, -1) * rat(1, 24) + Poly::var("l1") * V(1) * rat(1, 16);
        if (fam == MappingFamily::hodge) r += Poly::var("sig1") * Poly::var("sq", 2) * V(1) * rat(1, 24);
        return r;
    }
    if (fam == MappingFamily::wk) return R.d_total(jet_potential(loop_solutions(g)[g - 1]));
    // F_g = V_1^{2g-2} P^H(N_{i+1}; sig_k sq^{2k}) by homogeneity of the jet map
    Poly PH = hodge_jet_polynomial(g);
    std::vector<Poly> N = jet_map(3 * g - 2);
    std::unordered_map<SymId, Poly> img;
    for (int i = 1; i <= 3 * g - 3; ++i) img[sym("w", i)] = N[i + 1];
    for (int k = 1; k <= 3 * g - 3; k += 2) img[sym("sig", k)] = Poly::var(sym("sig", k)) * Poly::var("sq", 2 * k);
    return R.d_total(from_scaled(substitute(PH, img), 2 * g - 2));
}

QuasiMiura quasi_miura(int g_max, MappingFamily fam) {
    const JetRing& R = hierarchy_ring();
    Trunc tr = eps_trunc(g_max);
    QuasiMiura qm;
    qm.g_max = g_max;
    qm.family = fam;
    for (int g = 1; g <= g_max; ++g) qm.forward += R.d_total(mapping_dF(g, fam)) * eps(2 * g);
    // V = U + Delta(U), Delta = -B(U + Delta), each pass fixes one more order
    Poly delta;
    for (int i = 0; i < g_max; ++i) delta = -taylor_shift(qm.forward, delta, g_max);
    qm.inverse = delta.truncate(tr);
    return qm;
}

std::vector<Poly> flow(const QuasiMiura& qm) {
    const JetRing& R = hierarchy_ring();
    Trunc tr = eps_trunc(qm.g_max);
    Poly base = Poly::var(sym("S", 0)) * V(1);
    Poly out = base;
    Poly dk = base;
    int kmax = R.max_jet(qm.forward);
    for (int k = 0; k <= kmax; ++k) {
        if (k > 0) dk = R.d_total(dk);
        Poly c = R.partial(qm.forward, k);
        if (!c.is_zero()) out += c.mul(dk, tr);
    }
    return eps_coefficients(taylor_shift(out, qm.inverse, qm.g_max), qm.g_max);
}

Poly specialize_flow(const Poly& p, const Poly& s) {
    const JetRing& R = hierarchy_ring();
    return replace_tower(p, "S", s, [&](const Poly& x) { return R.partial(x, 0); });
}

std::vector<Poly> specialize_flow(const std::vector<Poly>& f, const Poly& s) {
    std::vector<Poly> out;
    for (auto& p : f) out.push_back(specialize_flow(p, s));
    return out;
}

bool has_negative_v1_power(const Poly& p) { return p.min_degree(sym("V", 1)) < 0; }

std::vector<Poly> divergence_density(const std::vector<Poly>& f) {
    const JetRing& R = hierarchy_ring();
    std::vector<Poly> out;
    for (const Poly& fg : f) {
        if (!R.variational_derivative(fg).is_zero()) throw std::domain_error("flow term is not a total derivative");
        Poly rest = fg, h;
        while (!rest.is_zero()) {
            int n = R.max_jet(rest);
            if (n < 1) throw std::domain_error("remainder without jets is not a total derivative");
            SymId top = sym("V", n);
            if (rest.degree(top) != 1 || rest.min_degree(top) < 0)
                throw std::domain_error("remainder not linear in its top jet");
            Poly A = rest.coeff_of(top, 1);
            Poly piece;
            if (n >= 2) {
                SymId below = sym("V", n - 1);
                Accum acc;
                for (auto& [m, c] : A.terms()) {
                    int e = m.exponent(below);
                    if (e == -1) throw std::domain_error("logarithmic antiderivative");
                    acc.add(m * Monomial::var(below), c / (e + 1));
                }
                piece = acc.take();
            } else {
                // A(V_0): antiderivatives of V_0 powers and of the S tower
                Accum acc;
                for (auto& [m, c] : A.terms()) {
                    const auto& fs = m.factors();
                    if (fs.size() == 1 && sym_info(fs[0].first).family == "S" && fs[0].second == 1) {
                        int k = sym_info(fs[0].first).index;
                        acc.add(Monomial::var(k == 0 ? sym("Sint") : sym("S", k - 1)), c);
                    } else if (m.is_one() || (fs.size() == 1 && fs[0].first == sym("V", 0) && fs[0].second >= 0)) {
                        int e = m.exponent(sym("V", 0));
                        acc.add(m * Monomial::var(sym("V", 0)), c / (e + 1));
                    } else {
                        throw std::domain_error("no antiderivative for " + m.str());
                    }
                }
                piece = acc.take();
            }
            h += piece;
            Poly next = rest - R.d_total(piece);
            if (R.max_jet(next) >= n && next.contains(top) && next.coeff_of(top, 1) == A)
                throw std::logic_error("integration made no progress");
            rest = next;
        }
        if (R.d_total(h) != fg) throw std::logic_error("divergence density check failed");
        out.push_back(h);
    }
    return out;
}

std::vector<Poly> flow_commutator(const QuasiMiura& qm, const Poly& s1, const Poly& s2) {
    const JetRing& R = hierarchy_ring();
    Trunc tr = eps_trunc(qm.g_max);
    auto f = flow(qm);
    auto total = [&](const Poly& s) {
        Poly x;
        auto sp = specialize_flow(f, s);
        for (int g = 0; g <= qm.g_max; ++g) x += sp[g] * eps(2 * g);
        return x;
    };
    Poly f1 = total(s1), f2 = total(s2);
    auto apply_flow = [&](const Poly& p, const Poly& fs) {
        Poly r, dk = fs;
        int kmax = R.max_jet(p);
        for (int k = 0; k <= kmax; ++k) {
            if (k > 0) dk = R.d_total(dk, tr);
            Poly c = R.partial(p, k);
            if (!c.is_zero()) r += c.mul(dk, tr);
        }
        return r;
    };
    return eps_coefficients(apply_flow(f2, f1) - apply_flow(f1, f2), qm.g_max);
}

PoissonOperators poisson_operators(const QuasiMiura& qm) {
    const JetRing& R = hierarchy_ring();
    Trunc tr = eps_trunc(qm.g_max);
    Poly U = V(0) + qm.forward;
    LocalOperator L;
    for (int k = 0; k <= R.max_jet(U); ++k) {
        Poly c = R.partial(U, k);
        if (!c.is_zero()) L.a[k] = c;
    }
    LocalOperator Lt = adjoint(L, R, tr);
    LocalOperator d = LocalOperator::derivative();
    auto conj = [&](const Poly& A) {
        LocalOperator m = LocalOperator::multiplication(A);
        LocalOperator P0 = compose(m, d, R) + compose(d, m, R);
        LocalOperator P = compose(compose(L, P0, R, tr), Lt, R, tr);
        std::vector<LocalOperator> out(qm.g_max + 1);
        for (auto& [j, c] : P.a) {
            auto parts = eps_coefficients(taylor_shift(c, qm.inverse, qm.g_max), qm.g_max);
            for (int g = 0; g <= qm.g_max; ++g)
                if (!parts[g].is_zero()) out[g].a[j] = parts[g];
        }
        return out;
    };
    Poly half_inv = Poly::var("sq", -2) * rat(1, 2);
    PoissonOperators r;
    r.p1 = conj(half_inv);
    r.p2 = conj(half_inv * Poly::var(sym("ph", 0)));
    return r;
}

namespace {

struct UnknownFamily {
    std::string family;
    bool of_w;  // a function of w evaluated at M(U): d/dU f_k = sq f_{k+1}
};

const std::vector<std::pair<std::string, std::string>> kPartitions = {
    {"2", "CA"}, {"1^2", "CB"}, {"4", "CC"}, {"3 1", "CD"}, {"2^2", "CE"}, {"2 1^2", "CF"}, {"1^4", "CG"}};

Poly partition_jets(const std::string& name) {
    static const std::map<std::string, Poly> m = {
        {"2", V(2)},           {"1^2", V(1, 2)},          {"4", V(4)},        {"3 1", V(3) * V(1)},
        {"2^2", V(2, 2)},      {"2 1^2", V(2) * V(1, 2)}, {"1^4", V(1, 4)},
    };
    return m.at(name);
}

int partition_order(const std::string& name) { return name == "2" || name == "1^2" ? 1 : 2; }

bool is_unknown(SymId s, const std::vector<UnknownFamily>& fams) {
    const auto& info = sym_info(s);
    for (auto& f : fams)
        if (info.family == f.family && info.index >= 0) return true;
    return false;
}

}  // namespace

StandardForm to_standard_form(const QuasiMiura& qm, int order, bool keep_w1_4) {
    if (order < 1 || order > 2 || qm.g_max < order) throw std::invalid_argument("standard form supports eps^2 and eps^4");
    constexpr int kLevels = 16;
    Trunc tr = eps_trunc(order);
    JetRing R = hierarchy_ring();
    std::vector<UnknownFamily> fams;
    for (auto& [name, fam] : kPartitions) {
        if (partition_order(name) > order) continue;
        R.add_tower(fam);
        fams.push_back({fam, false});
    }
    for (std::string f : {"aU", "bU", "cU"}) {
        if (order < 2 && f != "aU") continue;
        if (f == "cU" && !keep_w1_4) continue;
        for (int k = 0; k < kLevels; ++k)
            R.add_function(sym(f, k), Poly::var(sym(f, k + 1)) * Poly::var("sq"));
        fams.push_back({f, true});
    }
    auto unk_sym = [](const std::string& fam) { return Poly::var(sym(fam, 0)); };

    // w in U-jets
    Poly Mf = Poly::var("Mf");
    Poly W = Mf;
    for (auto& [name, fam] : kPartitions) {
        int k = partition_order(name);
        if (k > order) continue;
        W += unk_sym(fam) * partition_jets(name) * eps(2 * k);
    }

    // D_{M(U)}(U), then D(w) = sum_k dw/dU_k d^k D(U)
    auto f = flow(qm);
    Poly DU;
    for (int g = 0; g <= order; ++g) DU += specialize_flow(f[g], Mf) * eps(2 * g);
    Poly lhs, dk = DU;
    for (int k = 0; k <= R.max_jet(W); ++k) {
        if (k > 0) dk = R.d_total(dk, tr);
        Poly c = R.partial(W, k);
        if (!c.is_zero()) lhs += c.mul(dk, tr);
    }

    // d(delta h/delta w) in a ring of w-jets, then w_k -> d^k W
    JetRing Rw("W");
    for (std::string t : {"aw", "bw", "cw"}) Rw.add_tower(t);
    auto Wj = [](int k, int e = 1) { return Poly::var(sym("W", k), e); };
    Poly h = Wj(0, 3) * rat(1, 6) - Poly::var(sym("aw", 0)) * Wj(1, 2) * eps(2) * rat(1, 24);
    if (order >= 2) h += Poly::var(sym("bw", 0)) * Wj(2, 2) * eps(4);
    if (order >= 2 && keep_w1_4) h += Poly::var(sym("cw", 0)) * Wj(1, 4) * eps(4);
    Poly E = Rw.d_total(Rw.variational_derivative(h));
    std::unordered_map<SymId, Poly> img;
    Poly Wk = W;
    for (int k = 0; k <= Rw.max_jet(E); ++k) {
        img[sym("W", k)] = Wk;
        Wk = R.d_total(Wk, tr);
    }
    Poly shift = W - Mf;  // O(eps^2)
    for (auto [wf, uf] : {std::pair{"aw", "aU"}, {"bw", "bU"}, {"cw", "cU"}}) {
        for (int k = 0; k <= kLevels / 2; ++k) {
            Poly s, pw(1);
            for (int n = 0; n <= order; ++n) {
                if (n > 0) pw = pw.mul(shift, tr) * rat(1, n);
                s += pw * Poly::var(sym(uf, k + n));
            }
            img[sym(wf, k)] = s;
        }
    }
    Poly rhs = substitute(E, img, tr);
    auto parts = eps_coefficients(lhs - rhs, order);
    if (!parts[0].is_zero()) throw std::logic_error("standard form fails at eps^0");

    std::map<std::string, Poly> solved;
    auto next_for = [&](const UnknownFamily& fam) -> std::function<Poly(const Poly&)> {
        if (fam.of_w) return [&R](const Poly& x) { return R.partial(x, 0) * Poly::var("sq", -1); };
        return [&R](const Poly& x) { return R.partial(x, 0); };
    };
    auto substitute_solved = [&](Poly p) {
        for (auto& fam : fams)
            if (auto it = solved.find(fam.family); it != solved.end()) p = replace_tower(p, fam.family, it->second, next_for(fam));
        return p;
    };

    for (int g = 1; g <= order; ++g) {
        // equations: coefficients of jet monomials
        Poly eqs_poly = substitute_solved(parts[g]);
        std::vector<Poly> eqs;
        for (auto& [m, c] : eqs_poly.collect([&](SymId s) { return R.is_jet(s); })) eqs.push_back(c);
        bool progress = true;
        while (progress) {
            progress = false;
            for (auto& eq : eqs) {
                if (eq.is_zero()) continue;
                for (auto& fam : fams) {
                    if (solved.count(fam.family)) continue;
                    SymId u = sym(fam.family, 0);
                    if (eq.degree(u) != 1 || eq.min_degree(u) < 0) continue;
                    bool higher = false;
                    for (SymId s : eq.symbols())
                        if (sym_info(s).family == fam.family && sym_info(s).index > 0) higher = true;
                    if (higher) continue;
                    Poly c = eq.coeff_of(u, 1);
                    if (c.size() != 1) continue;
                    bool clean = true;
                    for (SymId s : c.symbols())
                        if (is_unknown(s, fams)) clean = false;
                    if (!clean) continue;
                    Poly rest = eq - c * Poly::var(u);
                    solved[fam.family] = (-rest).div_term(c);
                    progress = true;
                    break;
                }
                if (progress) break;
            }
            if (progress)
                for (auto& e : eqs) e = substitute_solved(e);
        }
        for (auto& e : eqs)
            if (!e.is_zero()) {
                bool has_unknown = false;
                for (SymId s : e.symbols())
                    if (is_unknown(s, fams)) has_unknown = true;
                if (!has_unknown) throw std::logic_error("standard form: inconsistent equation " + e.str());
            }
    }

    StandardForm sf;
    sf.order = order;
    for (auto& fam : fams)
        if (!solved.count(fam.family)) sf.free.push_back(fam.family);
    for (auto& [name, fam] : kPartitions)
        if (auto it = solved.find(fam); it != solved.end()) sf.C[name] = substitute_solved(it->second);
    auto value = [&](const std::string& fam) {
        auto it = solved.find(fam);
        return it == solved.end() ? Poly::var(sym(fam, 0)) : substitute_solved(it->second);
    };
    sf.a0 = value("aU");
    if (order >= 2) {
        sf.alpha["2^2"] = value("bU");
        if (keep_w1_4) sf.alpha["1^4"] = value("cU");
    }
    return sf;
}

}  // namespace wkm
