#include "subdivkit/construct.hpp"

#include "subdivkit/analysis.hpp"
#include "subdivkit/errors.hpp"
#include "subdivkit/intmath.hpp"
#include "subdivkit/rationalize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>

namespace subdivkit::construct {

using seqalg::convolve;
using seqalg::iterated_mask;

namespace {

FiniteSequence ones_power(long M, unsigned J) {
    std::vector<Scalar> ones(static_cast<size_t>(M), Scalar(1));
    FiniteSequence g = FiniteSequence::dirac();
    FiniteSequence step(0, ones);
    for (unsigned j = 0; j < J; ++j) g = convolve(g, step);
    return g;
}

mpq_class qpow(mpq_class q, unsigned e) {
    mpq_class r = 1;
    while (e) {
        if (e & 1u) r *= q;
        q *= q;
        e >>= 1u;
    }
    return r;
}

mpz_class zpow(long base, unsigned e) {
    mpz_class b(base), r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

long checked_long(const mpz_class& v, const char* where) {
    if (!v.fits_slong_p()) throw ResourceLimit(std::string(where) + ": index range overflow");
    return v.get_si();
}

// (M^n - 1)/(M - 1), the support growth factor of the n-fold iterated mask
long geo_factor(long M, unsigned n, const char* where) {
    mpz_class g = (zpow(M, n) - 1) / (M - 1);
    return checked_long(g, where);
}

long ipow_checked(long M, unsigned n, const char* where) {
    return checked_long(zpow(M, n), where);
}

FiniteSequence seq_of(long lo, const ratlin::Vec& v) {
    std::vector<Scalar> c;
    c.reserve(v.size());
    for (const auto& q : v) c.emplace_back(q);
    return FiniteSequence(lo, std::move(c));
}

// b(i) as exact affine functions of the current parameters
ratlin::Vec b_vector(const LinearModel& mdl, const ratlin::Vec& t) {
    ratlin::Vec b = mdl.base;
    for (size_t j = 0; j < mdl.dirs.size(); ++j)
        for (size_t i = 0; i < b.size(); ++i) b[i] += t[j] * mdl.dirs[j][i];
    return b;
}

// Impose exact linear constraints rows . b = rhs on the family; false when
// inconsistent. Surviving freedom re-expressed through fresh parameters.
bool refine(LinearModel& mdl, const ratlin::Mat& rows, const ratlin::Vec& rhs) {
    if (rows.empty()) return true;
    size_t m = rows.size(), d = mdl.dirs.size();
    ratlin::Mat A(m, ratlin::Vec(d, 0));
    ratlin::Vec c(m, 0);
    for (size_t i = 0; i < m; ++i) {
        mpq_class acc = rhs[i];
        for (size_t k = 0; k < mdl.nb; ++k) acc -= rows[i][k] * mdl.base[k];
        c[i] = acc;
        for (size_t j = 0; j < d; ++j) {
            mpq_class s = 0;
            for (size_t k = 0; k < mdl.nb; ++k) s += rows[i][k] * mdl.dirs[j][k];
            A[i][j] = s;
        }
    }
    auto sol = ratlin::solve_affine(A, c);
    if (!sol.consistent) return false;
    for (size_t j = 0; j < d; ++j)
        if (sgn(sol.particular[j]) != 0)
            for (size_t k = 0; k < mdl.nb; ++k) mdl.base[k] += sol.particular[j] * mdl.dirs[j][k];
    std::vector<ratlin::Vec> fresh;
    fresh.reserve(sol.nullspace.size());
    for (const auto& nv : sol.nullspace) {
        ratlin::Vec col(mdl.nb, 0);
        for (size_t j = 0; j < d; ++j) {
            if (sgn(nv[j]) == 0) continue;
            for (size_t k = 0; k < mdl.nb; ++k) col[k] += nv[j] * mdl.dirs[j][k];
        }
        fresh.push_back(std::move(col));
    }
    mdl.dirs = std::move(fresh);
    return true;
}

// Coordinates of a concrete quotient inside the family (consistent by
// construction whenever b satisfies every imposed constraint).
std::optional<ratlin::Vec> coords_of(const LinearModel& mdl, const ratlin::Vec& b) {
    size_t d = mdl.dirs.size();
    ratlin::Mat D(mdl.nb, ratlin::Vec(d, 0));
    ratlin::Vec r(mdl.nb, 0);
    for (size_t i = 0; i < mdl.nb; ++i) {
        for (size_t j = 0; j < d; ++j) D[i][j] = mdl.dirs[j][i];
        r[i] = b[i] - mdl.base[i];
    }
    auto sol = ratlin::solve_affine(D, r);
    if (!sol.consistent) return std::nullopt;
    return sol.particular;
}

// The interpolation conditions as one fixed residual map over the family
// parameters (and the sample-sequence parameters when m_s > 0). Index
// ranges are nominal, derived from the requested support, so a parameter
// point is a solution iff every residual vanishes.
struct CondSystem {
    long M = 2;
    unsigned J = 0;
    interp::Admissibility ad;
    LinearModel mdl;
    FiniteSequence g;  // (1 + z + ... + z^{M-1})^J
    long Mn = 1, Mm = 1;

    bool has_w = false;
    long w_lo = 0;
    size_t nw = 0;
    ratlin::Vec w_base;
    std::vector<ratlin::Vec> w_dirs;

    long k0_lo = 0, k0_hi = -1;  // A_{n_s} conditions (m_s = 0)
    long k1_lo = 0, k1_hi = -1;  // [A_{m_s} * w](M^{m_s} k) conditions
    long k2_lo = 0, k2_hi = -1;  // [A_{n_s} * w](gamma + M^{n_s} k) conditions

    size_t dim() const { return mdl.dirs.size() + w_dirs.size(); }

    std::vector<Scalar> w_coeffs(const std::vector<Scalar>& tau) const {
        std::vector<Scalar> wc(nw, Scalar(0));
        for (size_t i = 0; i < nw; ++i) {
            Scalar v(w_base[i]);
            for (size_t j = 0; j < w_dirs.size(); ++j) v = v + tau[j] * Scalar(w_dirs[j][i]);
            wc[i] = v;
        }
        return wc;
    }

    std::vector<Scalar> residuals(const std::vector<Scalar>& x) const {
        size_t dt = mdl.dirs.size();
        std::vector<Scalar> bc(mdl.nb, Scalar(0));
        for (size_t i = 0; i < mdl.nb; ++i) {
            Scalar v(mdl.base[i]);
            for (size_t j = 0; j < dt; ++j) v = v + x[j] * Scalar(mdl.dirs[j][i]);
            bc[i] = v;
        }
        Mask a(convolve(g, FiniteSequence(mdl.b_lo, bc)), M);
        std::vector<Scalar> out;
        if (!has_w) {
            FiniteSequence A = iterated_mask(a, ad.n_s);
            Scalar rhs0(mpq_class(1, Mn));
            for (long k = k0_lo; k <= k0_hi; ++k) {
                Scalar r = A.at(ad.gamma + Mn * k);
                if (k == 0) r = r - rhs0;
                out.push_back(r);
            }
            return out;
        }
        std::vector<Scalar> tau(x.begin() + static_cast<long>(dt), x.end());
        FiniteSequence w(w_lo, w_coeffs(tau));
        FiniteSequence c1 = convolve(iterated_mask(a, ad.m_s), w);
        Scalar rhs1(mpq_class(1, Mm));
        for (long k = k1_lo; k <= k1_hi; ++k) {
            Scalar r = c1.at(Mm * k);
            if (k == 0) r = r - rhs1;
            out.push_back(r);
        }
        FiniteSequence c2 = convolve(iterated_mask(a, ad.n_s), w);
        Scalar inv_n(mpq_class(1, Mn));
        for (long k = k2_lo; k <= k2_hi; ++k)
            out.push_back(c2.at(ad.gamma + Mn * k) - inv_n * w.at(k));
        return out;
    }

    std::vector<double> residuals_f(const std::vector<double>& x) const {
        std::vector<Scalar> xs;
        xs.reserve(x.size());
        for (double v : x) xs.emplace_back(v);
        std::vector<Scalar> r = residuals(xs);
        std::vector<double> out(r.size());
        for (size_t i = 0; i < r.size(); ++i) out[i] = r[i].dbl();
        return out;
    }
};

CondSystem make_system(const ConstructionSpec& spec, const LinearModel& mdl,
                       const interp::Admissibility& ad) {
    CondSystem sys;
    sys.M = spec.dilation;
    sys.J = spec.sum_rules;
    sys.ad = ad;
    sys.mdl = mdl;
    sys.g = ones_power(spec.dilation, spec.sum_rules);
    sys.Mn = ipow_checked(spec.dilation, ad.n_s, "construct");
    sys.Mm = ipow_checked(spec.dilation, ad.m_s, "construct");
    long M = spec.dilation;
    long geo_n = geo_factor(M, ad.n_s, "construct");

    if (ad.m_s == 0) {
        long L = spec.lo * geo_n, H = spec.hi * geo_n;
        sys.k0_lo = std::min(ceil_div(L - ad.gamma, sys.Mn), 0L);
        sys.k0_hi = std::max(floor_div(H - ad.gamma, sys.Mn), 0L);
        return sys;
    }

    sys.has_w = true;
    mpq_class sa = spec.s_a.rat();
    mpq_class lw_b = mpq_class(spec.lo, M - 1) - mpq_class(zpow(M, ad.m_s)) * sa;
    mpq_class hw_b = mpq_class(spec.hi, M - 1) - mpq_class(zpow(M, ad.m_s)) * sa;
    lw_b.canonicalize();
    hw_b.canonicalize();
    long l_w = floor_rat(lw_b) + 1;  // open window: phi vanishes at the ends
    long h_w = ceil_rat(hw_b) - 1;
    if (l_w > h_w) throw Infeasible("no room for the interpolation samples inside the support");
    sys.w_lo = l_w;
    sys.nw = static_cast<size_t>(h_w - l_w + 1);
    sys.w_base.assign(sys.nw, 0);
    sys.w_dirs.clear();
    for (size_t i = 0; i < sys.nw; ++i) {
        ratlin::Vec e(sys.nw, 0);
        e[i] = 1;
        sys.w_dirs.push_back(std::move(e));
    }
    // moment prerequisites: sum_k k^j w(k) = (s_a - M^{m_s} s_a)^j
    {
        ratlin::Mat rows;
        ratlin::Vec rhs;
        mpq_class shift = sa - mpq_class(zpow(M, ad.m_s)) * sa;
        shift.canonicalize();
        for (unsigned j = 0; j < spec.sum_rules; ++j) {
            ratlin::Vec row(sys.nw, 0);
            for (size_t i = 0; i < sys.nw; ++i) {
                mpz_class p;
                mpz_class base(l_w + static_cast<long>(i));
                mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), j);
                row[i] = mpq_class(p);
            }
            rows.push_back(std::move(row));
            rhs.push_back(qpow(shift, j));
        }
        LinearModel wm;
        wm.nb = sys.nw;
        wm.base = sys.w_base;
        wm.dirs = sys.w_dirs;
        if (!refine(wm, rows, rhs))
            throw Infeasible("sample moment conditions are inconsistent");
        sys.w_base = wm.base;
        sys.w_dirs = wm.dirs;
    }
    long geo_m = geo_factor(M, ad.m_s, "construct");
    long c1_lo = spec.lo * geo_m + l_w, c1_hi = spec.hi * geo_m + h_w;
    sys.k1_lo = std::min(ceil_div(c1_lo, sys.Mm), 0L);
    sys.k1_hi = std::max(floor_div(c1_hi, sys.Mm), 0L);
    long c2_lo = spec.lo * geo_n + l_w, c2_hi = spec.hi * geo_n + h_w;
    sys.k2_lo = std::min({ceil_div(c2_lo - ad.gamma, sys.Mn), l_w, 0L});
    sys.k2_hi = std::max({floor_div(c2_hi - ad.gamma, sys.Mn), h_w, 0L});
    return sys;
}

double linf(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

constexpr double kResidualTarget = 1e-12;

std::optional<std::vector<double>> gauss_newton(const CondSystem& sys, std::vector<double> x,
                                                unsigned iterations) {
    std::vector<double> r = sys.residuals_f(x);
    double rn = linf(r);
    const double h = 1e-7;
    for (unsigned it = 0; it < iterations && rn >= kResidualTarget; ++it) {
        Eigen::MatrixXd Jm(static_cast<long>(r.size()), static_cast<long>(x.size()));
        for (size_t j = 0; j < x.size(); ++j) {
            double keep = x[j];
            x[j] = keep + h;
            std::vector<double> rj = sys.residuals_f(x);
            x[j] = keep;
            for (size_t i = 0; i < r.size(); ++i)
                Jm(static_cast<long>(i), static_cast<long>(j)) = (rj[i] - r[i]) / h;
        }
        Eigen::VectorXd rv(static_cast<long>(r.size()));
        for (size_t i = 0; i < r.size(); ++i) rv(static_cast<long>(i)) = r[i];
        auto svd = Jm.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-10);
        Eigen::VectorXd step = svd.solve(-rv);
        bool accepted = false;
        for (double alpha = 1.0; alpha > 1e-8; alpha *= 0.5) {
            std::vector<double> x2 = x;
            for (size_t j = 0; j < x.size(); ++j)
                x2[j] += alpha * step(static_cast<long>(j));
            std::vector<double> r2 = sys.residuals_f(x2);
            double rn2 = linf(r2);
            if (rn2 < rn) {
                x = std::move(x2);
                r = std::move(r2);
                rn = rn2;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    if (rn < kResidualTarget) return x;
    return std::nullopt;
}

std::vector<std::vector<double>> collect_roots(const CondSystem& sys, unsigned starts,
                                               unsigned iterations) {
    std::vector<std::vector<double>> roots;
    size_t d = sys.dim();
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (unsigned s = 0; s < starts; ++s) {
        std::vector<double> x0(d, 0.0);
        if (s > 0)
            for (size_t j = 0; j < d; ++j) x0[j] = U(rng);
        auto root = gauss_newton(sys, x0, iterations);
        if (!root) continue;
        bool fresh = true;
        for (const auto& r : roots) {
            double dist = 0;
            for (size_t j = 0; j < d; ++j) dist = std::max(dist, std::abs(r[j] - (*root)[j]));
            if (dist < 1e-7) {
                fresh = false;
                break;
            }
        }
        if (fresh) roots.push_back(*root);
    }
    return roots;
}

// Singular directions of the finite-difference Jacobian; the basis of the
// tangent space of the solution variety at x.
Eigen::MatrixXd float_jacobian(const CondSystem& sys, std::vector<double> x) {
    std::vector<double> r = sys.residuals_f(x);
    const double h = 1e-7;
    Eigen::MatrixXd Jm(static_cast<long>(r.size()), static_cast<long>(x.size()));
    for (size_t j = 0; j < x.size(); ++j) {
        double keep = x[j];
        x[j] = keep + h;
        std::vector<double> rj = sys.residuals_f(x);
        x[j] = keep;
        for (size_t i = 0; i < r.size(); ++i)
            Jm(static_cast<long>(i), static_cast<long>(j)) = (rj[i] - r[i]) / h;
    }
    return Jm;
}

size_t numeric_nullity(const Eigen::MatrixXd& J) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const auto& sv = svd.singularValues();
    double top = sv.size() ? sv(0) : 0.0;
    double thresh = 1e-4 * std::max(1.0, top);
    size_t n = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) < thresh) ++n;
    n += static_cast<size_t>(J.cols() - sv.size());
    return n;
}

std::vector<Eigen::VectorXd> tangent_basis(const CondSystem& sys, const std::vector<double>& x) {
    Eigen::MatrixXd J = float_jacobian(sys, x);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double top = sv.size() ? sv(0) : 0.0;
    double thresh = 1e-4 * std::max(1.0, top);
    std::vector<Eigen::VectorXd> basis;
    for (long i = 0; i < J.cols(); ++i) {
        double s = i < sv.size() ? sv(i) : 0.0;
        if (s < thresh) basis.push_back(svd.matrixV().col(i));
    }
    return basis;
}

std::optional<ratlin::Vec> rationalize_vector(const std::vector<double>& x, double tol) {
    ratlin::Vec out;
    out.reserve(x.size());
    for (double v : x) {
        auto q = rationalize(v, 1000000, tol);
        if (!q) return std::nullopt;
        out.push_back(*q);
    }
    return out;
}

bool all_zero(const std::vector<Scalar>& r) {
    for (const auto& s : r)
        if (!s.is_zero()) return false;
    return true;
}

}  // namespace

FiniteSequence MaskFamily::quotient(const std::vector<Scalar>& t) const {
    if (t.size() != directions.size())
        throw std::invalid_argument("MaskFamily: parameter count mismatch");
    std::vector<Scalar> c;
    c.reserve(base.size());
    for (size_t i = 0; i < base.size(); ++i) {
        Scalar v{base[i]};
        for (size_t j = 0; j < directions.size(); ++j)
            v = v + t[j] * Scalar(directions[j][i]);
        c.push_back(v);
    }
    return FiniteSequence(b_lo, std::move(c));
}

Mask MaskFamily::member(const std::vector<Scalar>& t) const {
    return Mask(convolve(ones_power(dilation, sum_rules), quotient(t)), dilation);
}

LinearModel parameterize(const ConstructionSpec& spec) {
    if (spec.dilation < 2) throw std::invalid_argument("construct: dilation must be >= 2");
    if (spec.sum_rules == 0) throw std::invalid_argument("construct: at least one sum rule required");
    if (!spec.s_a.exact()) throw std::invalid_argument("construct: s_a must be an exact rational");
    long hb = spec.hi - (spec.dilation - 1) * static_cast<long>(spec.sum_rules);
    if (hb < spec.lo)
        throw Infeasible("support [" + std::to_string(spec.lo) + "," + std::to_string(spec.hi) +
                         "] cannot carry " + std::to_string(spec.sum_rules) + " sum rules");
    if (spec.symmetric) {
        mpq_class want(spec.lo + spec.hi, 2 * (spec.dilation - 1));
        want.canonicalize();
        if (spec.s_a.rat() != want)
            throw std::invalid_argument("construct: symmetry requires s_a = (l+h)/(2(M-1))");
    }
    LinearModel mdl;
    mdl.dilation = spec.dilation;
    mdl.sum_rules = spec.sum_rules;
    mdl.lo = spec.lo;
    mdl.hi = spec.hi;
    mdl.b_lo = spec.lo;
    mdl.nb = static_cast<size_t>(hb - spec.lo + 1);
    mdl.base.assign(mdl.nb, 0);
    if (!spec.symmetric) {
        for (size_t i = 0; i < mdl.nb; ++i) {
            ratlin::Vec e(mdl.nb, 0);
            e[i] = 1;
            mdl.dirs.push_back(std::move(e));
        }
    } else {
        for (size_t i = 0; 2 * i < mdl.nb; ++i) {
            ratlin::Vec e(mdl.nb, 0);
            e[i] = 1;
            e[mdl.nb - 1 - i] = 1;  // b(l+k) = b(h~-k)
            mdl.dirs.push_back(std::move(e));
        }
    }
    return mdl;
}

void solve_moment_constraints(LinearModel& mdl, const Scalar& s_a) {
    FiniteSequence g = ones_power(mdl.dilation, mdl.sum_rules);
    mpq_class ma = mpq_class(mdl.dilation - 1) * s_a.rat();
    ma.canonicalize();
    ratlin::Mat rows;
    ratlin::Vec rhs;
    for (unsigned j = 0; j < mdl.sum_rules; ++j) {
        ratlin::Vec row(mdl.nb, 0);
        for (size_t i = 0; i < mdl.nb; ++i) {
            long pos = mdl.b_lo + static_cast<long>(i);
            mpq_class s = 0;
            for (long u = g.lower(); u <= g.upper(); ++u) {
                mpz_class p, base(u + pos);
                mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), j);
                s += mpq_class(p) * g.at(u).rat();
            }
            row[i] = s;
        }
        rows.push_back(std::move(row));
        rhs.push_back(qpow(ma, j));
    }
    if (!refine(mdl, rows, rhs))
        throw Infeasible("moment conditions are inconsistent on this support");
}

namespace {

Candidate build_candidate(const ConstructionSpec& spec, const CondSystem& sys,
                          const std::vector<Scalar>& params, const FiniteSequence& b,
                          const FiniteSequence& w, bool exact, double residual) {
    Candidate cand;
    cand.quotient = b;
    cand.mask = Mask(convolve(sys.g, b), spec.dilation);
    cand.params = params;
    cand.w = w;
    cand.exact = exact;
    cand.residual = residual;
    cand.lambda_c = analysis::autocorrelation_eigenvalue(b, spec.dilation);
    cand.sm2 = -0.5 - 0.5 * std::log(std::abs(cand.lambda_c)) / std::log(double(spec.dilation));
    double gate = std::pow(double(spec.dilation), -2.0 * spec.m - 2.0);
    cand.accepted = std::abs(cand.lambda_c) < gate && (exact || residual < 1e-9);
    try {
        cand.verdict = interp::verify_interpolatory(cand.mask, spec.s_a, spec.m).verdict;
    } catch (const std::exception&) {
        cand.verdict = interp::Verdict::failed;
    }
    return cand;
}

Candidate candidate_at(const ConstructionSpec& spec, const CondSystem& sys, const ratlin::Vec& t,
                       const ratlin::Vec& tau) {
    std::vector<Scalar> x;
    x.reserve(t.size() + tau.size());
    for (const auto& q : t) x.emplace_back(q);
    for (const auto& q : tau) x.emplace_back(q);
    FiniteSequence b = seq_of(sys.mdl.b_lo, b_vector(sys.mdl, t));
    FiniteSequence w;
    if (sys.has_w) {
        std::vector<Scalar> tau_s(x.begin() + static_cast<long>(t.size()), x.end());
        w = FiniteSequence(sys.w_lo, sys.w_coeffs(tau_s));
    }
    std::vector<Scalar> params(x.begin(), x.begin() + static_cast<long>(t.size()));
    return build_candidate(spec, sys, params, b, w, true, 0.0);
}

Candidate candidate_float(const ConstructionSpec& spec, const CondSystem& sys,
                          const std::vector<double>& x, double residual) {
    size_t dt = sys.mdl.dirs.size();
    std::vector<Scalar> xs;
    xs.reserve(x.size());
    for (double v : x) xs.emplace_back(v);
    std::vector<Scalar> bc(sys.mdl.nb, Scalar(0));
    for (size_t i = 0; i < sys.mdl.nb; ++i) {
        Scalar v{sys.mdl.base[i]};
        for (size_t j = 0; j < dt; ++j) v = v + xs[j] * Scalar(sys.mdl.dirs[j][i]);
        bc[i] = Scalar(v.dbl());
    }
    FiniteSequence b(sys.mdl.b_lo, bc);
    FiniteSequence w;
    if (sys.has_w) {
        std::vector<Scalar> tau(xs.begin() + static_cast<long>(dt), xs.end());
        std::vector<Scalar> wc = sys.w_coeffs(tau);
        for (auto& v : wc) v = Scalar(v.dbl());
        w = FiniteSequence(sys.w_lo, wc);
    }
    std::vector<Scalar> params(xs.begin(), xs.begin() + static_cast<long>(dt));
    return build_candidate(spec, sys, params, b, w, false, residual);
}

bool same_mask(const Mask& A, const Mask& B) {
    if (A.exact() && B.exact()) return A.seq == B.seq;
    long lo = std::min(A.seq.lower(), B.seq.lower());
    long hi = std::max(A.seq.upper(), B.seq.upper());
    if (A.seq.is_zero() || B.seq.is_zero()) return A.seq.is_zero() == B.seq.is_zero();
    for (long k = lo; k <= hi; ++k)
        if (std::abs(A.seq.at(k).dbl() - B.seq.at(k).dbl()) > 1e-10) return false;
    return true;
}

void push_unique(std::vector<Candidate>& out, Candidate cand) {
    for (const auto& c : out)
        if (same_mask(c.mask, cand.mask)) return;
    out.push_back(std::move(cand));
}

void rank(std::vector<Candidate>& cands) {
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.accepted != b.accepted) return a.accepted;
        if (a.exact != b.exact) return a.exact;
        if (a.sm2 != b.sm2) return a.sm2 > b.sm2;
        return a.mask.seq.size() < b.mask.seq.size();
    });
}

// Distinguished members of an exact family: zero as many end coefficients of
// the mask as the freedom allows, largest total first.
std::vector<Candidate> shrink_within(const ConstructionSpec& spec, const CondSystem& sys,
                                     const LinearModel& family) {
    std::vector<Candidate> out;
    size_t d = family.dirs.size();
    if (d == 0) return out;
    long width = spec.hi - spec.lo;
    long cap = std::min<long>(static_cast<long>(d) + 2, width);
    auto end_row = [&](long pos) {
        // a(pos) as a linear form over b
        ratlin::Vec row(family.nb, 0);
        for (size_t i = 0; i < family.nb; ++i)
            row[i] = sys.g.at(pos - family.b_lo - static_cast<long>(i)).rat();
        return row;
    };
    for (long total = cap; total >= 1 && out.empty(); --total) {
        for (long dl = 0; dl <= total; ++dl) {
            long dh = total - dl;
            if (spec.symmetric && dl != dh) continue;
            LinearModel trial = family;
            ratlin::Mat rows;
            ratlin::Vec rhs;
            for (long i = 0; i < dl; ++i) rows.push_back(end_row(spec.lo + i)), rhs.push_back(0);
            for (long i = 0; i < dh; ++i) rows.push_back(end_row(spec.hi - i)), rhs.push_back(0);
            if (!refine(trial, rows, rhs) || !trial.dirs.empty()) continue;
            auto t = coords_of(family, trial.base);
            if (!t) continue;
            push_unique(out, candidate_at(spec, sys, *t, {}));
        }
    }
    return out;
}

Candidate pinned_w_candidate(const ConstructionSpec& spec, const CondSystem& sys);

// Sub-support scan: supports shrunk until the moment solve pins the mask,
// keeping members whose interpolation conditions verify exactly.
std::vector<Candidate> shrink_subconstructions(const ConstructionSpec& spec,
                                               const CondSystem& parent) {
    std::vector<Candidate> out;
    long total = static_cast<long>(parent.mdl.nb) - static_cast<long>(spec.sum_rules);
    if (total < 1) return out;
    for (long dl = 0; dl <= total; ++dl) {
        long dh = total - dl;
        if (spec.symmetric && dl != dh) continue;
        ConstructionSpec sub = spec;
        sub.lo = spec.lo + dl;
        sub.hi = spec.hi - dh;
        sub.optimize = false;
        try {
            LinearModel mdl = parameterize(sub);
            solve_moment_constraints(mdl, sub.s_a);
            if (!mdl.dirs.empty()) continue;
            CondSystem sys = make_system(sub, mdl, parent.ad);
            Candidate cand;
            if (!sys.has_w) {
                if (!all_zero(sys.residuals({}))) continue;
                cand = candidate_at(sub, sys, {}, {});
            } else {
                cand = pinned_w_candidate(sub, sys);
            }
            // report in the parent coordinate system
            ratlin::Vec b_parent(parent.mdl.nb, 0);
            for (size_t i = 0; i < mdl.nb; ++i)
                b_parent[static_cast<size_t>(mdl.b_lo - parent.mdl.b_lo) + i] = mdl.base[i];
            if (auto t = coords_of(parent.mdl, b_parent)) {
                cand.params.clear();
                for (const auto& q : *t) cand.params.emplace_back(q);
            }
            push_unique(out, std::move(cand));
        } catch (const Infeasible&) {
        } catch (const std::invalid_argument&) {
        }
    }
    return out;
}

// Mask pinned by the moments: the interpolation conditions are linear in w.
Candidate pinned_w_candidate(const ConstructionSpec& spec, const CondSystem& sys) {
    FiniteSequence b = seq_of(sys.mdl.b_lo, sys.mdl.base);
    Mask a(convolve(sys.g, b), spec.dilation);
    FiniteSequence Am = iterated_mask(a, sys.ad.m_s);
    FiniteSequence An = iterated_mask(a, sys.ad.n_s);
    LinearModel wm;
    wm.nb = sys.nw;
    wm.base = sys.w_base;
    wm.dirs = sys.w_dirs;
    ratlin::Mat rows;
    ratlin::Vec rhs;
    auto conv_row = [&](const FiniteSequence& A, long target) {
        ratlin::Vec row(sys.nw, 0);
        for (size_t i = 0; i < sys.nw; ++i)
            row[i] = A.at(target - sys.w_lo - static_cast<long>(i)).rat();
        return row;
    };
    for (long k = sys.k1_lo; k <= sys.k1_hi; ++k) {
        rows.push_back(conv_row(Am, sys.Mm * k));
        rhs.push_back(k == 0 ? mpq_class(1, sys.Mm) : mpq_class(0));
    }
    for (long k = sys.k2_lo; k <= sys.k2_hi; ++k) {
        ratlin::Vec row = conv_row(An, sys.ad.gamma + sys.Mn * k);
        if (k >= sys.w_lo && k < sys.w_lo + static_cast<long>(sys.nw))
            row[static_cast<size_t>(k - sys.w_lo)] -= mpq_class(1, sys.Mn);
        rows.push_back(std::move(row));
        rhs.push_back(0);
    }
    if (!refine(wm, rows, rhs))
        throw Infeasible("the moment-determined mask admits no interpolation samples");
    FiniteSequence w(sys.w_lo, [&] {
        std::vector<Scalar> c;
        for (const auto& q : wm.base) c.emplace_back(q);
        return c;
    }());
    return build_candidate(spec, sys, {}, b, w, true, 0.0);
}

// Exact affine-family test at an exact root of a quadratic system, by
// polarization: J e_i = (R(x+e_i) - R(x-e_i))/2 and Q(d) = (R(x+d)+R(x-d))/2.
std::optional<MaskFamily> affine_family_at(const ConstructionSpec& spec, const CondSystem& sys,
                                           const ratlin::Vec& t, const ratlin::Vec& tau) {
    size_t d = sys.dim();
    auto eval = [&](const ratlin::Vec& x) {
        std::vector<Scalar> xs;
        xs.reserve(d);
        for (const auto& q : x) xs.emplace_back(q);
        return sys.residuals(xs);
    };
    ratlin::Vec x0;
    x0.reserve(d);
    for (const auto& q : t) x0.push_back(q);
    for (const auto& q : tau) x0.push_back(q);
    size_t m = eval(x0).size();
    ratlin::Mat J(m, ratlin::Vec(d, 0));
    for (size_t j = 0; j < d; ++j) {
        ratlin::Vec xp = x0, xm = x0;
        xp[j] += 1;
        xm[j] -= 1;
        auto rp = eval(xp), rm = eval(xm);
        for (size_t i = 0; i < m; ++i) J[i][j] = (rp[i].rat() - rm[i].rat()) / 2;
    }
    auto dirs = ratlin::nullspace(J);
    if (dirs.empty()) return std::nullopt;
    auto quad_zero = [&](const ratlin::Vec& dir) {
        ratlin::Vec xp = x0, xm = x0;
        for (size_t j = 0; j < d; ++j) {
            xp[j] += dir[j];
            xm[j] -= dir[j];
        }
        auto rp = eval(xp), rm = eval(xm);
        for (size_t i = 0; i < m; ++i)
            if (sgn(rp[i].rat() + rm[i].rat()) != 0) return false;
        return true;
    };
    size_t dt = sys.mdl.dirs.size();
    for (size_t s = 0; s < dirs.size(); ++s) {
        if (!quad_zero(dirs[s])) return std::nullopt;
        for (size_t r = s + 1; r < dirs.size(); ++r) {
            ratlin::Vec sum = dirs[s];
            for (size_t j = 0; j < d; ++j) sum[j] += dirs[r][j];
            if (!quad_zero(sum)) return std::nullopt;
        }
        bool mask_part = false;
        for (size_t j = 0; j < dt; ++j) mask_part |= sgn(dirs[s][j]) != 0;
        if (!mask_part) return std::nullopt;  // freedom only in the samples
    }
    MaskFamily fam;
    fam.dilation = spec.dilation;
    fam.sum_rules = spec.sum_rules;
    fam.b_lo = sys.mdl.b_lo;
    ratlin::Vec t_only(x0.begin(), x0.begin() + static_cast<long>(dt));
    fam.base = b_vector(sys.mdl, t_only);
    for (const auto& dir : dirs) {
        ratlin::Vec col(sys.mdl.nb, 0);
        for (size_t j = 0; j < dt; ++j) {
            if (sgn(dir[j]) == 0) continue;
            for (size_t i = 0; i < sys.mdl.nb; ++i) col[i] += dir[j] * sys.mdl.dirs[j][i];
        }
        fam.directions.push_back(std::move(col));
    }
    return fam;
}

MaskFamily family_from_model(const ConstructionSpec& spec, const LinearModel& refined) {
    MaskFamily fam;
    fam.dilation = spec.dilation;
    fam.sum_rules = spec.sum_rules;
    fam.b_lo = refined.b_lo;
    fam.base = refined.base;
    fam.directions = refined.dirs;
    return fam;
}

bool quadratic_system(const CondSystem& sys) {
    if (!sys.has_w) return sys.ad.n_s == 2;
    return sys.ad.m_s <= 1 && sys.ad.n_s == 1;
}

double objective_sm2(const CondSystem& sys, const std::vector<double>& x) {
    size_t dt = sys.mdl.dirs.size();
    std::vector<Scalar> bc(sys.mdl.nb, Scalar(0));
    for (size_t i = 0; i < sys.mdl.nb; ++i) {
        double v = sys.mdl.base[i].get_d();
        for (size_t j = 0; j < dt; ++j) v += x[j] * sys.mdl.dirs[j][i].get_d();
        bc[i] = Scalar(v);
    }
    FiniteSequence b(sys.mdl.b_lo, bc);
    if (b.is_zero()) return -std::numeric_limits<double>::infinity();
    auto lc = analysis::autocorrelation_eigenvalue(b, sys.M);
    return -0.5 - 0.5 * std::log(std::abs(lc)) / std::log(double(sys.M));
}

}  // namespace

ConstructionResult solve_interpolation_constraints(const ConstructionSpec& spec,
                                                   const LinearModel& model) {
    ConstructionResult out;
    out.params = interp::admissible_params(spec.s_a, spec.dilation);
    const auto& ad = out.params;
    CondSystem sys = make_system(spec, model, ad);
    FiniteSequence g = sys.g;

    auto linear_fastpath = [&](const ratlin::Mat& rows, const ratlin::Vec& rhs) {
        LinearModel refined = model;
        if (!refine(refined, rows, rhs))
            throw Infeasible("interpolation conditions contradict the moment conditions");
        if (refined.dirs.empty()) {
            auto t = coords_of(model, refined.base);
            out.candidates.push_back(candidate_at(spec, sys, t ? *t : ratlin::Vec{}, {}));
            return;
        }
        out.family.present = true;
        out.family.exact = true;
        out.family.dimension = refined.dirs.size();
        out.family.family = family_from_model(spec, refined);
        CondSystem fam_sys = sys;
        fam_sys.mdl = refined;
        for (auto& c : shrink_within(spec, fam_sys, refined)) {
            // report coordinates in the post-moment parameter space
            ratlin::Vec b(model.nb, 0);
            for (size_t i = 0; i < model.nb; ++i)
                b[i] = c.quotient.at(model.b_lo + static_cast<long>(i)).rat();
            if (auto t = coords_of(model, b)) {
                c.params.clear();
                for (const auto& q : *t) c.params.emplace_back(q);
            }
            out.candidates.push_back(std::move(c));
        }
        if (out.candidates.empty()) {
            auto t = coords_of(model, refined.base);
            out.candidates.push_back(candidate_at(spec, sys, t ? *t : ratlin::Vec{}, {}));
        }
    };

    if (ad.m_s == 0 && ad.n_s == 1) {
        ratlin::Mat rows;
        ratlin::Vec rhs;
        for (long k = sys.k0_lo; k <= sys.k0_hi; ++k) {
            ratlin::Vec row(model.nb, 0);
            for (size_t i = 0; i < model.nb; ++i)
                row[i] = g.at(ad.gamma + spec.dilation * k - model.b_lo - static_cast<long>(i)).rat();
            rows.push_back(std::move(row));
            rhs.push_back(k == 0 ? mpq_class(1, spec.dilation) : mpq_class(0));
        }
        linear_fastpath(rows, rhs);
    } else if (ad.m_s == 0 && model.dirs.empty()) {
        if (!all_zero(sys.residuals({})))
            throw Infeasible("the moment-determined mask fails the interpolation conditions");
        out.candidates.push_back(candidate_at(spec, sys, {}, {}));
    } else if (ad.m_s > 0 && model.dirs.empty()) {
        out.candidates.push_back(pinned_w_candidate(spec, sys));
    } else if (ad.m_s == 0 && ad.n_s == 2 && [&] {
                   long gmod = ((ad.gamma % spec.dilation) + spec.dilation) % spec.dilation;
                   for (const auto& dir : model.dirs) {
                       FiniteSequence da = convolve(g, seq_of(model.b_lo, dir));
                       if (!seqalg::coset(da, gmod, spec.dilation).is_zero()) return false;
                   }
                   return true;
               }()) {
        // the gamma coset of a is the same for every member, so the two-step
        // conditions sum_j a(j) a(gamma + M^2 k - M j) = M^{-2} d(k) are linear
        FiniteSequence a0 = convolve(g, seq_of(model.b_lo, model.base));
        long M = spec.dilation;
        ratlin::Mat rows;
        ratlin::Vec rhs;
        for (long k = sys.k0_lo; k <= sys.k0_hi; ++k) {
            ratlin::Vec row(model.nb, 0);
            for (size_t i = 0; i < model.nb; ++i) {
                long pos = model.b_lo + static_cast<long>(i);
                mpq_class s = 0;
                for (long u = g.lower(); u <= g.upper(); ++u)
                    s += g.at(u).rat() * a0.at(ad.gamma + M * M * k - M * (pos + u)).rat();
                row[i] = s;
            }
            rows.push_back(std::move(row));
            rhs.push_back(k == 0 ? mpq_class(1, M * M) : mpq_class(0));
        }
        linear_fastpath(rows, rhs);
    } else {
        auto roots = collect_roots(sys, spec.starts, spec.iterations);
        if (roots.empty())
            throw Infeasible("no admissible mask found within the solver budget");
        std::vector<size_t> nullities;
        std::optional<std::pair<ratlin::Vec, ratlin::Vec>> first_exact;
        size_t dt = model.dirs.size();
        for (const auto& x : roots) {
            nullities.push_back(numeric_nullity(float_jacobian(sys, x)));
            double res = linf(sys.residuals_f(x));
            bool made_exact = false;
            if (auto q = rationalize_vector(x, 1e-9)) {
                std::vector<Scalar> xs;
                for (const auto& v : *q) xs.emplace_back(v);
                if (all_zero(sys.residuals(xs))) {
                    ratlin::Vec t(q->begin(), q->begin() + static_cast<long>(dt));
                    ratlin::Vec tau(q->begin() + static_cast<long>(dt), q->end());
                    push_unique(out.candidates, candidate_at(spec, sys, t, tau));
                    if (!first_exact) first_exact = std::make_pair(t, tau);
                    made_exact = true;
                }
            }
            if (!made_exact) push_unique(out.candidates, candidate_float(spec, sys, x, res));
        }
        std::map<size_t, size_t> votes;
        for (size_t n : nullities) ++votes[n];
        size_t dim = 0, best_votes = 0;
        for (auto [n, v] : votes)
            if (v > best_votes || (v == best_votes && n > dim)) dim = n, best_votes = v;
        if (dim > 0) {
            out.family.present = true;
            out.family.dimension = dim;
            if (quadratic_system(sys) && first_exact) {
                if (auto fam = affine_family_at(spec, sys, first_exact->first, first_exact->second)) {
                    out.family.exact = true;
                    out.family.dimension = fam->dim();
                    out.family.family = std::move(*fam);
                }
            }
            for (auto& c : shrink_subconstructions(spec, sys))
                push_unique(out.candidates, std::move(c));
        }
    }
    rank(out.candidates);
    if (out.candidates.empty())
        throw Infeasible("no admissible mask found");
    return out;
}

Candidate optimize_free_parameters(const ConstructionSpec& spec, const LinearModel& model,
                                   const Candidate& seed) {
    interp::Admissibility ad = interp::admissible_params(spec.s_a, spec.dilation);
    CondSystem sys = make_system(spec, model, ad);
    size_t dt = model.dirs.size();
    std::vector<double> x(sys.dim(), 0.0);
    for (size_t j = 0; j < dt && j < seed.params.size(); ++j) x[j] = seed.params[j].dbl();
    if (sys.has_w && !seed.w.is_zero()) {
        // least-squares coordinates of the seed samples
        Eigen::MatrixXd W(static_cast<long>(sys.nw), static_cast<long>(sys.w_dirs.size()));
        Eigen::VectorXd r(static_cast<long>(sys.nw));
        for (size_t i = 0; i < sys.nw; ++i) {
            r(static_cast<long>(i)) =
                seed.w.at(sys.w_lo + static_cast<long>(i)).dbl() - sys.w_base[i].get_d();
            for (size_t j = 0; j < sys.w_dirs.size(); ++j)
                W(static_cast<long>(i), static_cast<long>(j)) = sys.w_dirs[j][i].get_d();
        }
        Eigen::VectorXd tau = W.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(r);
        for (size_t j = 0; j < sys.w_dirs.size(); ++j) x[dt + j] = tau(static_cast<long>(j));
    }
    if (auto proj = gauss_newton(sys, x, 60)) x = *proj;
    double f = objective_sm2(sys, x);
    double h = 0.25;
    unsigned budget = 400;
    while (budget > 0 && h > 1e-9) {
        auto tangents = tangent_basis(sys, x);
        if (tangents.empty() || tangents.size() > 3) break;
        bool improved = false;
        std::vector<double> best_x;
        double best_f = f;
        for (const auto& v : tangents) {
            for (double sign : {1.0, -1.0}) {
                if (budget == 0) break;
                std::vector<double> y = x;
                for (size_t j = 0; j < y.size(); ++j)
                    y[j] += sign * h * v(static_cast<long>(j));
                --budget;
                auto proj = gauss_newton(sys, y, 60);
                if (!proj) continue;
                double fy = objective_sm2(sys, *proj);
                if (fy > best_f + 1e-14) {
                    best_f = fy;
                    best_x = *proj;
                    improved = true;
                }
            }
        }
        if (improved) {
            x = best_x;
            f = best_f;
            h *= 1.6;
        } else {
            h *= 0.5;
        }
    }
    double res = linf(sys.residuals_f(x));
    if (auto q = rationalize_vector(x, 1e-7)) {
        std::vector<Scalar> xs;
        for (const auto& v : *q) xs.emplace_back(v);
        if (all_zero(sys.residuals(xs))) {
            ratlin::Vec t(q->begin(), q->begin() + static_cast<long>(dt));
            ratlin::Vec tau(q->begin() + static_cast<long>(dt), q->end());
            return candidate_at(spec, sys, t, tau);
        }
    }
    return candidate_float(spec, sys, x, res);
}

ConstructionResult run(const ConstructionSpec& spec) {
    if (spec.sum_rules <= spec.m)
        throw std::invalid_argument("construct: sum rules must exceed the smoothness target");
    LinearModel mdl = parameterize(spec);
    solve_moment_constraints(mdl, spec.s_a);
    ConstructionResult out = solve_interpolation_constraints(spec, mdl);
    if (spec.optimize && out.family.present && out.family.dimension >= 1 &&
        out.family.dimension <= 3 && !out.candidates.empty()) {
        Candidate best_opt;
        double best = -std::numeric_limits<double>::infinity();
        size_t tried = 0;
        for (const auto& seed : out.candidates) {
            if (tried++ == 3) break;
            Candidate c = optimize_free_parameters(spec, mdl, seed);
            if (c.sm2 > best) {
                best = c.sm2;
                best_opt = std::move(c);
            }
        }
        if (best > -std::numeric_limits<double>::infinity()) out.optimized = std::move(best_opt);
    }
    return out;
}

}  // namespace subdivkit::construct
