#include "subdivkit/transition.hpp"

#include "subdivkit/errors.hpp"
#include "subdivkit/interp.hpp"
#include "subdivkit/intmath.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace subdivkit::transition {

using seqalg::convolve;
using seqalg::iterated_mask;

bool TransitionMatrix::exact() const {
    for (const auto& row : entries)
        for (const auto& s : row)
            if (!s.exact()) return false;
    return true;
}

TransitionMatrix transition_matrix(const Mask& a, long gamma) {
    TransitionMatrix T;
    T.gamma = gamma;
    T.dilation = a.dilation;
    if (a.seq.is_zero()) return T;
    const long M = a.dilation;
    T.lo = ceil_div(a.seq.lower() - gamma, M - 1);
    T.hi = floor_div(a.seq.upper() - gamma, M - 1);
    if (T.lo > T.hi) return T;
    T.entries.assign(static_cast<size_t>(T.dim()),
                     std::vector<Scalar>(static_cast<size_t>(T.dim())));
    for (long n = T.lo; n <= T.hi; ++n)
        for (long m = T.lo; m <= T.hi; ++m)
            T.entries[static_cast<size_t>(n - T.lo)][static_cast<size_t>(m - T.lo)] =
                Scalar(M) * a.seq.at(gamma + M * n - m);
    return T;
}

std::vector<std::complex<double>> spectrum(const TransitionMatrix& T) {
    std::vector<std::complex<double>> out;
    if (T.dim() <= 0) return out;
    Eigen::MatrixXd E(T.dim(), T.dim());
    for (long i = 0; i < T.dim(); ++i)
        for (long j = 0; j < T.dim(); ++j)
            E(i, j) = T.entries[static_cast<size_t>(i)][static_cast<size_t>(j)].rounded_dbl();
    Eigen::EigenSolver<Eigen::MatrixXd> es(E, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    std::sort(out.begin(), out.end(), [](auto x, auto y) {
        if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return out;
}

namespace {

FiniteSequence unit_eigenvector_exact(const TransitionMatrix& T) {
    const size_t n = static_cast<size_t>(T.dim());
    ratlin::Mat A(n, ratlin::Vec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            A[i][j] = T.entries[i][j].rat();
    for (size_t i = 0; i < n; ++i) A[i][i] -= 1;
    size_t r1 = ratlin::rank(A);
    if (r1 == n) throw std::runtime_error("unit_eigenvector: no eigenvalue 1");
    if (r1 < n - 1) throw std::runtime_error("unit_eigenvector: eigenvalue 1 not simple");
    if (ratlin::rank(ratlin::mat_mul(A, A)) != r1)
        throw std::runtime_error("unit_eigenvector: eigenvalue 1 not simple (Jordan block)");
    auto basis = ratlin::nullspace(A);
    if (basis.size() != 1) throw std::runtime_error("unit_eigenvector: unexpected nullity");
    mpq_class s = 0;
    for (const auto& x : basis[0]) s += x;
    if (sgn(s) == 0) throw std::runtime_error("unit_eigenvector: eigenvector sums to zero");
    std::vector<Scalar> v;
    v.reserve(n);
    for (const auto& x : basis[0]) v.emplace_back(mpq_class(x / s));
    return FiniteSequence(T.lo, std::move(v));
}

FiniteSequence unit_eigenvector_float(const TransitionMatrix& T) {
    const long n = T.dim();
    Eigen::MatrixXd E(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            E(i, j) = T.entries[static_cast<size_t>(i)][static_cast<size_t>(j)].dbl();
    Eigen::EigenSolver<Eigen::MatrixXd> es(E, true);
    long idx = -1;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (std::abs(es.eigenvalues()(i) - 1.0) < 1e-8) {
            if (idx >= 0) throw std::runtime_error("unit_eigenvector: eigenvalue 1 not simple");
            idx = i;
        }
    }
    if (idx < 0) throw std::runtime_error("unit_eigenvector: no eigenvalue 1");
    Eigen::VectorXcd col = es.eigenvectors().col(idx);
    std::complex<double> s = col.sum();
    if (std::abs(s) < 1e-12) throw std::runtime_error("unit_eigenvector: eigenvector sums to zero");
    std::vector<Scalar> v;
    v.reserve(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < col.size(); ++i) v.emplace_back(Scalar((col(i) / s).real()));
    return FiniteSequence(T.lo, std::move(v));
}

}  // namespace

FiniteSequence unit_eigenvector(const TransitionMatrix& T) {
    if (T.dim() <= 0) throw std::runtime_error("unit_eigenvector: empty index range");
    return T.exact() ? unit_eigenvector_exact(T) : unit_eigenvector_float(T);
}

FiniteSequence integer_samples(const Mask& a) {
    if (analysis::sum_rule_factorization(a).order < 1)
        throw std::invalid_argument("integer_samples: mask needs sum rules of order >= 1");
    return unit_eigenvector(transition_matrix(a, 0));
}

PhiValue eval_phi(const Mask& a, const Scalar& s) {
    interp::Admissibility ad = interp::admissible_params(s, a.dilation);
    PhiValue out;
    out.m_s = ad.m_s;
    out.n_s = ad.n_s;
    out.gamma = ad.gamma;
    FiniteSequence An = iterated_mask(a, ad.n_s);
    mpz_class Mn = pow_z(a.dilation, ad.n_s);
    if (!Mn.fits_slong_p()) throw ResourceLimit("eval_phi: M^{n_s} out of range");
    FiniteSequence v = unit_eigenvector(transition_matrix(Mask(An, Mn.get_si()), ad.gamma));
    FiniteSequence Am = iterated_mask(a, ad.m_s);
    Scalar acc(0);
    for (long j = Am.lower(); j <= Am.upper(); ++j) acc += Am.at(j) * v.at(-j);
    out.value = Scalar(pow_z(a.dilation, ad.m_s)) * acc;
    return out;
}

PhiSamples sample_phi_grid(const Mask& a, unsigned level, unsigned deriv) {
    PhiSamples out;
    out.level = level;
    out.deriv = deriv;
    FiniteSequence w = integer_samples(a);
    FiniteSequence An = iterated_mask(a, level);
    Scalar Mn(pow_z(a.dilation, level));
    out.values = seqalg::scale(Mn, convolve(An, w));
    if (deriv >= 1) {
        Scalar f = Mn.pow(deriv);
        out.values = seqalg::scale(f, seqalg::backward_difference(out.values, deriv));
    }
    return out;
}

}  // namespace subdivkit::transition
