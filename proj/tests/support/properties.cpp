#include "properties.hpp"

#include "fixtures.hpp"
#include "subdivkit/analysis.hpp"
#include "subdivkit/construct.hpp"
#include "subdivkit/interp.hpp"
#include "subdivkit/quasistat.hpp"
#include "subdivkit/rational_linalg.hpp"
#include "subdivkit/transition.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <sstream>

using namespace subdivkit;

namespace props {
namespace {

void fail(Suite& s, const std::string& msg) {
    ++s.failures;
    if (s.note.empty()) s.note = msg;
}

long rnd_int(std::mt19937& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

Scalar rnd_rat(std::mt19937& rng, long num_max = 5, long den_max = 4) {
    return Scalar::ratio(rnd_int(rng, -num_max, num_max), rnd_int(rng, 1, den_max));
}

Scalar rnd_rat_nonzero(std::mt19937& rng, long num_max = 5, long den_max = 4) {
    for (;;) {
        Scalar s = rnd_rat(rng, num_max, den_max);
        if (!s.is_zero()) return s;
    }
}

FiniteSequence rnd_seq(std::mt19937& rng, long len_max = 4, long lo_spread = 3) {
    for (;;) {
        long lo = rnd_int(rng, -lo_spread, lo_spread);
        long len = rnd_int(rng, 1, len_max);
        std::vector<Scalar> c;
        for (long i = 0; i < len; ++i) c.push_back(rnd_rat(rng));
        FiniteSequence u(lo, std::move(c));
        if (!u.is_zero()) return u;
    }
}

FiniteSequence ones(long M) { return FiniteSequence(0, std::vector<Scalar>(size_t(M), Scalar(1))); }

FiniteSequence ones_pow(long M, unsigned J) {
    FiniteSequence p = FiniteSequence::dirac();
    for (unsigned i = 0; i < J; ++i) p = seqalg::convolve(p, ones(M));
    return p;
}

// z^s for integer s (z != 0)
Scalar zpow(const Scalar& z, long s) {
    if (s >= 0) return z.pow(unsigned(s));
    return Scalar(1) / z.pow(unsigned(-s));
}

// --- exact characteristic polynomials -------------------------------------

using Poly = std::vector<mpq_class>;  // ascending coefficients

Poly poly_mul(const Poly& p, const Poly& q) {
    if (p.empty() || q.empty()) return {};
    Poly r(p.size() + q.size() - 1, mpq_class(0));
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

// strip the lambda^v factor (v = valuation at 0)
Poly poly_reduce(Poly p) {
    size_t v = 0;
    while (v < p.size() && sgn(p[v]) == 0) ++v;
    return Poly(p.begin() + long(v), p.end());
}

// det(lambda I - A) by Faddeev-LeVerrier, exact
Poly charpoly(const ratlin::Mat& A) {
    size_t n = A.size();
    Poly c(n + 1, mpq_class(0));
    c[n] = 1;
    ratlin::Mat M = ratlin::identity(n);
    for (size_t k = 1; k <= n; ++k) {
        ratlin::Mat AM = ratlin::mat_mul(A, M);
        mpq_class tr = 0;
        for (size_t i = 0; i < n; ++i) tr += AM[i][i];
        c[n - k] = -tr / mpq_class(static_cast<unsigned long>(k));
        for (size_t i = 0; i < n; ++i) AM[i][i] += c[n - k];
        M = std::move(AM);
    }
    return c;
}

ratlin::Mat rational_entries(const transition::TransitionMatrix& T) {
    ratlin::Mat A(size_t(T.dim()), ratlin::Vec(size_t(T.dim()), mpq_class(0)));
    for (long i = 0; i < T.dim(); ++i)
        for (long j = 0; j < T.dim(); ++j)
            A[size_t(i)][size_t(j)] = T.entries[size_t(i)][size_t(j)].rat();
    return A;
}

// [T_{a,M,gamma} v](n) = M (a*v)(gamma + M n), any integer gamma
FiniteSequence apply_transition(const Mask& a, long gamma, const FiniteSequence& v) {
    FiniteSequence w = seqalg::shift(seqalg::convolve(a.seq, v), -gamma);
    return seqalg::scale(Scalar(a.dilation), seqalg::coset(w, 0, a.dilation));
}

FiniteSequence strided_difference(const FiniteSequence& u, long m, unsigned J) {
    FiniteSequence g = u;
    for (unsigned i = 0; i < J; ++i) g = seqalg::sub(g, seqalg::shift(g, m));
    return g;
}

std::string seq_str(const FiniteSequence& u) {
    std::ostringstream os;
    os << "[" << u.lower() << "..] ";
    for (const auto& s : u.coeffs()) os << s.str() << " ";
    return os.str();
}

}  // namespace

Suite convolution_symbol_homomorphism(unsigned cases, unsigned seed) {
    Suite s{"symbol calculus: convolution/upsample/shift laws"};
    std::mt19937 rng(seed);
    for (unsigned i = 0; i < cases; ++i) {
        FiniteSequence u = rnd_seq(rng), v = rnd_seq(rng);
        Scalar z = rnd_rat_nonzero(rng);
        long L = rnd_int(rng, 2, 4), sh = rnd_int(rng, -3, 3);
        ++s.cases;
        bool conv_ok = seqalg::symbol_eval(seqalg::convolve(u, v), z) ==
                       seqalg::symbol_eval(u, z) * seqalg::symbol_eval(v, z);
        bool up_ok = seqalg::symbol_eval(seqalg::upsample(u, L), z) ==
                     seqalg::symbol_eval(u, z.pow(unsigned(L)));
        bool shift_ok = seqalg::symbol_eval(seqalg::shift(u, sh), z) ==
                        zpow(z, sh) * seqalg::symbol_eval(u, z);
        if (!(conv_ok && up_ok && shift_ok)) {
            std::ostringstream os;
            os << "case " << i << " z=" << z.str() << " L=" << L << " s=" << sh
               << (conv_ok ? "" : " conv") << (up_ok ? "" : " upsample")
               << (shift_ok ? "" : " shift");
            fail(s, os.str());
        }
    }
    return s;
}

Suite sum_rule_roundtrip(unsigned cases, unsigned seed) {
    Suite s{"sum rules: factorization order and exact reconstruction"};
    std::mt19937 rng(seed);
    for (unsigned i = 0; i < cases; ++i) {
        long M = rnd_int(rng, 2, 4);
        unsigned J = unsigned(rnd_int(rng, 0, 3));
        FiniteSequence b = rnd_seq(rng);
        FiniteSequence a = seqalg::convolve(ones_pow(M, J), b);
        auto f = analysis::sum_rule_factorization(Mask(a, M));
        ++s.cases;
        bool order_ok = f.order >= J;
        bool recon_ok = seqalg::convolve(ones_pow(M, f.order), f.quotient) == a;
        if (!(order_ok && recon_ok)) {
            std::ostringstream os;
            os << "case " << i << " M=" << M << " J=" << J << " got order " << f.order
               << (recon_ok ? "" : ", reconstruction mismatch");
            fail(s, os.str());
        }
    }
    return s;
}

Suite spatial_symbol_equivalence(unsigned cases, unsigned seed) {
    Suite s{"sum rules: spatial and symbol characterizations agree"};
    std::mt19937 rng(seed);
    for (unsigned i = 0; i < cases; ++i) {
        long M = rnd_int(rng, 2, 4);
        unsigned J = unsigned(rnd_int(rng, 0, 3));
        FiniteSequence a = seqalg::convolve(ones_pow(M, J), rnd_seq(rng));
        Mask mask(a, M);
        unsigned order = analysis::sum_rule_factorization(mask).order;
        ++s.cases;
        if (!analysis::spatial_sum_rule_check(mask, order))
            fail(s, "spatial check rejects the factorization order (case " + std::to_string(i) + ")");
        else if (analysis::spatial_sum_rule_check(mask, order + 1))
            fail(s, "spatial check exceeds the maximal order (case " + std::to_string(i) + ")");
    }
    return s;
}

Suite spectrum_decomposition(unsigned cases, unsigned seed) {
    Suite s{"transition spectrum splits along the sum-rule factorization"};
    std::mt19937 rng(seed);
    for (unsigned i = 0; i < cases; ++i) {
        long M = rnd_int(rng, 2, 4);
        unsigned J = unsigned(rnd_int(rng, 1, 3));
        FiniteSequence b = rnd_seq(rng);
        FiniteSequence a = seqalg::convolve(ones_pow(M, J), b);
        long gamma = rnd_int(rng, -2, 2);
        ++s.cases;

        Poly ca = charpoly(rational_entries(transition::transition_matrix(Mask(a, M), gamma)));
        Poly cb = charpoly(rational_entries(transition::transition_matrix(Mask(b, M), gamma)));
        mpq_class at1 = seqalg::symbol_eval(a, Scalar(1)).rat();
        Poly rhs = poly_reduce(cb);
        mpq_class lam = at1;
        for (unsigned j = 0; j < J; ++j) {
            rhs = poly_mul(rhs, Poly{-lam, mpq_class(1)});
            lam /= M;
        }
        if (poly_reduce(ca) != poly_reduce(rhs)) {
            std::ostringstream os;
            os << "case " << i << " M=" << M << " J=" << J << " gamma=" << gamma
               << ": characteristic polynomials disagree";
            fail(s, os.str());
        }
    }
    return s;
}

Suite norm_equivalence(unsigned cases, unsigned seed) {
    Suite s{"difference/quotient norm equivalence with explicit constants"};
    std::mt19937 rng(seed);
    for (unsigned i = 0; i < cases; ++i) {
        long M = rnd_int(rng, 2, 4);
        unsigned J = unsigned(rnd_int(rng, 1, 3));
        unsigned n_max = M == 2 ? 5 : (M == 3 ? 3 : 2);
        unsigned n = unsigned(rnd_int(rng, 1, long(n_max)));
        FiniteSequence b = rnd_seq(rng);
        FiniteSequence u = rnd_seq(rng, 5, 4);
        FiniteSequence a = seqalg::convolve(ones_pow(M, J), b);
        ++s.cases;

        long N = 0;
        for (const auto* q : {&a, &b, &u}) {
            N = std::max(N, std::abs(q->lower()));
            N = std::max(N, std::abs(q->upper()));
        }
        N += 1;  // all three supported inside (-N, N)

        long Mn = 1;
        for (unsigned k = 0; k < n; ++k) Mn *= M;
        FiniteSequence An_u = seqalg::convolve(seqalg::iterated_mask(Mask(a, M), n), u);
        FiniteSequence Bn_u = seqalg::convolve(seqalg::iterated_mask(Mask(b, M), n), u);
        FiniteSequence lhs = seqalg::backward_difference(An_u, J);

        bool ident = lhs == strided_difference(Bn_u, Mn, J);
        Scalar nl = seqalg::norm_inf(lhs), nb = seqalg::norm_inf(Bn_u);
        bool upper = nl <= Scalar(2).pow(J) * nb;
        bool lower = nb <= Scalar(2 * N).pow(J) * nl;
        if (!(ident && upper && lower)) {
            std::ostringstream os;
            os << "case " << i << " M=" << M << " J=" << J << " n=" << n << " N=" << N
               << (ident ? "" : " identity") << (upper ? "" : " upper") << (lower ? "" : " lower");
            fail(s, os.str());
        }
    }
    return s;
}

Suite transition_power_identity(unsigned cases, unsigned seed) {
    Suite s{"transition powers against the iterated-mask closed form"};
    std::mt19937 rng(seed);
    for (unsigned i = 0; i < cases; ++i) {
        long M = rnd_int(rng, 2, 4);
        Mask a(rnd_seq(rng, 5), M);
        long gamma = rnd_int(rng, -3, 3);
        unsigned n = unsigned(rnd_int(rng, 1, 3));
        FiniteSequence v = rnd_seq(rng);
        ++s.cases;

        FiniteSequence it = v;
        for (unsigned k = 0; k < n; ++k) it = apply_transition(a, gamma, it);

        long Mn = 1;
        for (unsigned k = 0; k < n; ++k) Mn *= M;
        long gamma_n = gamma * ((Mn - 1) / (M - 1));
        FiniteSequence c = seqalg::convolve(seqalg::iterated_mask(a, n), v);
        FiniteSequence closed =
            seqalg::scale(Scalar(Mn), seqalg::coset(seqalg::shift(c, -gamma_n), 0, Mn));
        if (!(it == closed)) {
            std::ostringstream os;
            os << "case " << i << " M=" << M << " gamma=" << gamma << " n=" << n
               << ": iterate " << seq_str(it) << "vs closed " << seq_str(closed);
            fail(s, os.str());
        }
    }
    return s;
}

Suite simple_eigenvalues(unsigned cases, unsigned seed) {
    Suite s{"smooth schemes: M^-j eigenvalues simple, rest strictly below"};
    std::mt19937 rng(seed);

    struct Pool {
        Mask mask;
        std::vector<unsigned> levels;
    };
    std::vector<Pool> pool;
    for (const auto& f : fx::verified_fixtures()) pool.push_back({f.mask, {1, 2, 3}});
    for (auto spec : {fx::ring1_pair(), fx::ring2_pair(0), fx::ring2_pair(1), fx::ring2_triple()})
        pool.push_back({quasistat::compose_masks(spec), {1, 2}});

    size_t next = 0;
    unsigned attempts = 0;
    while (s.cases < cases && attempts < 60 * cases) {
        ++attempts;
        Mask a;
        std::vector<unsigned> levels{1, 2};
        if (next < pool.size()) {
            a = pool[next].mask;
            levels = pool[next].levels;
            ++next;
        } else {
            long M = rnd_int(rng, 2, 3);
            unsigned J = unsigned(rnd_int(rng, 2, 4));
            FiniteSequence b = rnd_seq(rng, 3, 2);
            Scalar bt1 = seqalg::symbol_eval(b, Scalar(1));
            if (bt1.is_zero()) continue;
            b = seqalg::scale(Scalar(1) / (Scalar(M).pow(J) * bt1), b);
            a = Mask(seqalg::convolve(ones_pow(M, J), b), M);
        }

        double c = analysis::smoothness_summary(a, levels).certified_sminf;
        long mstar = long(std::floor(c - 0.05));
        if (mstar < 0) continue;  // no claim to test

        long M = a.dilation;
        for (long gamma = 0; gamma <= std::max<long>(0, M - 2); ++gamma) {
            ++s.cases;
            auto eigs = transition::spectrum(transition::transition_matrix(a, gamma));
            std::vector<bool> used(eigs.size(), false);
            bool ok = true;
            std::string why;
            for (long j = 0; ok && j <= mstar; ++j) {
                double target = std::pow(double(M), double(-j));
                int hits = 0;
                for (size_t e = 0; e < eigs.size(); ++e)
                    if (std::abs(eigs[e] - std::complex<double>(target, 0)) < 1e-8) {
                        used[e] = true;
                        ++hits;
                    }
                if (hits != 1) {
                    ok = false;
                    why = "eigenvalue M^-" + std::to_string(j) + " hit count " + std::to_string(hits);
                }
            }
            double cap = std::pow(double(M), double(-mstar)) - 1e-9;
            for (size_t e = 0; ok && e < eigs.size(); ++e)
                if (!used[e] && std::abs(eigs[e]) >= cap) {
                    ok = false;
                    why = "residual eigenvalue |" + std::to_string(std::abs(eigs[e])) +
                          "| >= M^-" + std::to_string(mstar);
                }
            if (!ok) {
                std::ostringstream os;
                os << "M=" << M << " gamma=" << gamma << " m*=" << mstar << ": " << why;
                fail(s, os.str());
            }
        }
    }
    if (s.cases < cases) fail(s, "generator exhausted before reaching the case target");
    return s;
}

Suite polynomial_reproduction(unsigned cases, unsigned seed) {
    Suite s{"linear-phase masks reproduce polynomials below the sum-rule order"};
    std::mt19937 rng(seed);
    unsigned attempts = 0;
    while (s.cases < cases && attempts < 20 * cases) {
        ++attempts;
        construct::ConstructionSpec spec;
        spec.dilation = rnd_int(rng, 2, 3);
        spec.sum_rules = unsigned(rnd_int(rng, 1, 3));
        spec.lo = rnd_int(rng, -3, 0);
        long extra = rnd_int(rng, 0, 2);
        spec.hi = spec.lo + (spec.dilation - 1) * long(spec.sum_rules) + long(spec.sum_rules) - 1 +
                  extra;
        spec.s_a = rnd_rat(rng, 2, 4);
        construct::LinearModel model;
        try {
            model = construct::parameterize(spec);
            construct::solve_moment_constraints(model, spec.s_a);
        } catch (const std::exception&) {
            continue;
        }
        ratlin::Vec bv = model.base;
        for (const auto& dir : model.dirs) {
            mpq_class t = rnd_rat(rng, 3, 3).rat();
            for (size_t k = 0; k < bv.size(); ++k) bv[k] += t * dir[k];
        }
        std::vector<Scalar> bc;
        bc.reserve(bv.size());
        for (const auto& q : bv) bc.emplace_back(q);
        FiniteSequence b(model.b_lo, std::move(bc));
        Mask a(seqalg::convolve(ones_pow(spec.dilation, spec.sum_rules), b), spec.dilation);

        unsigned d = unsigned(rnd_int(rng, 0, long(spec.sum_rules) - 1));
        unsigned n = unsigned(rnd_int(rng, 1, 2));
        ++s.cases;
        auto res = interp::polynomial_reproduction_check(a, d, n);
        if (!res.ok) {
            std::ostringstream os;
            os << "M=" << spec.dilation << " J=" << spec.sum_rules << " s_a=" << spec.s_a.str()
               << " degree=" << d << " n=" << n << " residual " << res.max_residual;
            fail(s, os.str());
        }
    }
    if (s.cases < cases) fail(s, "generator exhausted before reaching the case target");
    return s;
}

Suite drift_formula(unsigned cases, unsigned seed) {
    Suite s{"identity data drifts by the parametric shift under subdivision"};
    std::mt19937 rng(seed);
    unsigned attempts = 0;
    while (s.cases < cases && attempts < 20 * cases) {
        ++attempts;
        long M = rnd_int(rng, 2, 4);
        FiniteSequence b = rnd_seq(rng, 3, 2);
        Scalar bt1 = seqalg::symbol_eval(b, Scalar(1));
        if (bt1.is_zero()) continue;
        b = seqalg::scale(Scalar(1) / (Scalar(M).pow(2) * bt1), b);
        Mask a(seqalg::convolve(ones_pow(M, 2), b), M);
        Scalar m_a = analysis::moments(a, 1).m_a;
        unsigned n = unsigned(rnd_int(rng, 1, 3));

        const long W = 12;
        std::vector<Scalar> id;
        for (long k = -W; k <= W; ++k) id.emplace_back(k);
        FiniteSequence v(-W, std::move(id));
        long A = -W, B = W;
        long l = a.seq.lower(), h = a.seq.upper();
        for (unsigned k = 0; k < n; ++k) {
            v = seqalg::subdivide_once(a, v);
            A = M * (A - 1) + h + 1;
            B = M * (B + 1) + l - 1;
        }
        ++s.cases;
        if (A > B) {
            fail(s, "trimmed window vanished");
            continue;
        }
        Scalar Mn = Scalar(M).pow(n);
        Scalar drift = (Scalar(1) - Scalar(1) / Mn) * m_a / Scalar(M - 1);
        bool ok = true;
        for (long k = A; k <= B && ok; ++k)
            ok = v.at(k) == Scalar(k) / Mn - drift;
        if (!ok) {
            std::ostringstream os;
            os << "M=" << M << " n=" << n << " m_a=" << m_a.str() << ": drift mismatch";
            fail(s, os.str());
        }
    }
    if (s.cases < cases) fail(s, "generator exhausted before reaching the case target");
    return s;
}

Suite unity_partition(unsigned cases, unsigned seed) {
    Suite s{"refinable samples: partition of unity and first-moment identity"};
    std::mt19937 rng(seed);
    const auto& fixtures = fx::verified_fixtures();
    std::map<std::pair<size_t, unsigned>, FiniteSequence> grid_cache;

    for (unsigned i = 0; i < cases; ++i) {
        size_t fi = size_t(rnd_int(rng, 0, long(fixtures.size()) - 1));
        unsigned level = unsigned(rnd_int(rng, 1, 3));
        unsigned j = unsigned(rnd_int(rng, 0, 1));
        const auto& f = fixtures[fi];
        long M = f.mask.dilation;
        long Mn = 1;
        for (unsigned k = 0; k < level; ++k) Mn *= M;
        long x_idx = rnd_int(rng, 0, Mn - 1);

        auto key = std::make_pair(fi, level);
        auto it = grid_cache.find(key);
        if (it == grid_cache.end())
            it = grid_cache.emplace(key, transition::sample_phi_grid(f.mask, level).values).first;
        const FiniteSequence& phi = it->second;

        ++s.cases;
        Scalar lhs(0);
        long k_lo = (phi.lower() - x_idx) / Mn - 1;
        long k_hi = (phi.upper() - x_idx) / Mn + 1;
        for (long k = k_lo; k <= k_hi; ++k) {
            Scalar w = phi.at(x_idx + Mn * k);
            if (w.is_zero()) continue;
            lhs += (j == 0 ? w : Scalar(k) * w);
        }
        Scalar rhs = (f.s_a - Scalar::ratio(x_idx, Mn)).pow(j);
        if (!(lhs == rhs)) {
            std::ostringstream os;
            os << f.name << " level=" << level << " j=" << j << " i=" << x_idx << ": lhs "
               << lhs.str() << " rhs " << rhs.str();
            fail(s, os.str());
        }
    }
    return s;
}

std::vector<Suite> run_all(unsigned cases, unsigned seed) {
    return {
        convolution_symbol_homomorphism(cases, seed + 101),
        sum_rule_roundtrip(cases, seed + 202),
        spatial_symbol_equivalence(cases, seed + 303),
        spectrum_decomposition(cases, seed + 404),
        norm_equivalence(cases, seed + 505),
        transition_power_identity(cases, seed + 606),
        simple_eigenvalues(cases, seed + 707),
        polynomial_reproduction(cases, seed + 808),
        drift_formula(cases, seed + 909),
        unity_partition(cases, seed + 1010),
    };
}

}  // namespace props
