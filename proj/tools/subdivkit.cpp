#include "subdivkit/analysis.hpp"
#include "subdivkit/construct.hpp"
#include "subdivkit/errors.hpp"
#include "subdivkit/intmath.hpp"
#include "subdivkit/io.hpp"
#include "subdivkit/quasistat.hpp"
#include "subdivkit/rationalize.hpp"
#include "subdivkit/transition.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <complex>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace subdivkit;
using json = nlohmann::ordered_json;

json scalar_json(const Scalar& s) {
    if (s.exact()) return json(s.rat().get_str());
    return json(s.dbl());
}

json seq_json(const FiniteSequence& u) {
    json obj = json::object();
    long lo = u.is_zero() ? 0 : u.lower();
    long hi = u.is_zero() ? 0 : u.upper();
    obj["support"] = json::array({lo, hi});
    json cs = json::array();
    for (long k = lo; k <= hi; ++k) cs.push_back(json(io::scalar_string(u.at(k))));
    obj["coeffs"] = std::move(cs);
    return obj;
}

json mask_json(const Mask& a) {
    json obj = seq_json(a.seq);
    json out = json::object();
    out["dilation"] = a.dilation;
    out["support"] = obj["support"];
    out["coeffs"] = obj["coeffs"];
    return out;
}

Scalar exact_flag(const std::string& text, const char* flag) {
    Scalar s = io::parse_scalar(text);
    if (!s.exact())
        throw std::invalid_argument(std::string(flag) + " must be a rational like p/q");
    return s;
}

Scalar derived_sa(const Mask& a) {
    Scalar s = analysis::moments(a, 1).s_a;
    if (s.exact()) return s;
    auto q = rationalize(s.dbl());
    if (!q) throw std::invalid_argument("s_a is not recognizably rational; pass --sa");
    return Scalar(*q);
}

int verdict_exit(interp::Verdict v) {
    switch (v) {
        case interp::Verdict::verified: return 0;
        case interp::Verdict::unconfirmed: return 2;
        default: return 1;
    }
}

int cmd_analyze(const std::string& path, unsigned m, unsigned n_max, const std::string& sa_text) {
    Mask a = io::parse_mask_json(io::read_file(path));
    Scalar sa = sa_text.empty() ? derived_sa(a) : exact_flag(sa_text, "--sa");
    std::vector<unsigned> levels;
    for (unsigned n = 1; n <= n_max; ++n) levels.push_back(n);

    auto cert = interp::verify_interpolatory(a, sa, m, levels);
    auto mom = analysis::moments(a, 1);

    json rep = json::object();
    rep["dilation"] = a.dilation;
    rep["support"] = mask_json(a)["support"];
    rep["sum_rules"] = cert.smoothness.sum_rules;
    rep["sm2"] = cert.smoothness.sm2.value;
    rep["lambda_c_modulus"] = std::abs(cert.smoothness.sm2.lambda_c);
    json bounds = json::object();
    for (const auto& [n, v] : cert.smoothness.sminf_coset) bounds[std::to_string(n)] = v;
    rep["sminf_lower_bounds"] = std::move(bounds);
    rep["certified_sminf"] = cert.smoothness.certified_sminf;
    rep["m_a"] = scalar_json(mom.m_a);
    rep["s_a"] = scalar_json(mom.s_a);
    auto c = seqalg::symmetry_center(a);
    rep["symmetry_center"] = c ? json(*c) : json(nullptr);

    json cj = json::object();
    cj["s_a"] = scalar_json(cert.s_a);
    cj["m"] = cert.m;
    cj["m_s"] = cert.params.m_s;
    cj["n_s"] = cert.params.n_s;
    cj["gamma"] = cert.params.gamma;
    cj["exact"] = cert.exact;
    cj["max_residual"] = cert.max_residual;
    cj["verdict"] = interp::verdict_name(cert.verdict);
    if (!cert.reason.empty()) cj["reason"] = cert.reason;
    if (!cert.w.is_zero()) cj["w"] = seq_json(cert.w);
    rep["interpolation"] = std::move(cj);

    std::cout << rep.dump(2) << "\n";
    return verdict_exit(cert.verdict);
}

int cmd_construct(long M, const std::string& sa_text, const std::string& support, unsigned J,
                  bool symmetric, unsigned m, bool optimize) {
    construct::ConstructionSpec spec;
    spec.dilation = M;
    spec.sum_rules = J;
    spec.s_a = exact_flag(sa_text, "--sa");
    spec.symmetric = symmetric;
    spec.m = m;
    spec.optimize = optimize;
    size_t colon = support.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("--support must look like l:h");
    try {
        spec.lo = std::stol(support.substr(0, colon));
        spec.hi = std::stol(support.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("--support must look like l:h with integers");
    }
    if (spec.lo > spec.hi) throw std::invalid_argument("--support bounds out of order");

    construct::ConstructionResult res = construct::run(spec);

    auto candidate_json = [&](const construct::Candidate& c) {
        json obj = mask_json(c.mask);
        obj["exact"] = c.exact;
        obj["residual"] = c.residual;
        obj["sm2"] = c.sm2;
        obj["lambda_c_modulus"] = std::abs(c.lambda_c);
        obj["accepted"] = c.accepted;
        obj["verdict"] = interp::verdict_name(c.verdict);
        return obj;
    };

    json rep = json::object();
    json sj = json::object();
    sj["dilation"] = M;
    sj["s_a"] = sa_text;
    sj["support"] = json::array({spec.lo, spec.hi});
    sj["sum_rules"] = J;
    sj["symmetric"] = symmetric;
    sj["m"] = m;
    rep["spec"] = std::move(sj);
    json pj = json::object();
    pj["m_s"] = res.params.m_s;
    pj["n_s"] = res.params.n_s;
    pj["gamma"] = res.params.gamma;
    rep["params"] = std::move(pj);
    rep["best"] = candidate_json(res.best());
    json cands = json::array();
    for (size_t i = 0; i < res.candidates.size() && i < 12; ++i)
        cands.push_back(candidate_json(res.candidates[i]));
    rep["candidates"] = std::move(cands);

    if (res.family.present) {
        json fj = json::object();
        fj["dimension"] = res.family.dimension;
        fj["exact"] = res.family.exact;
        if (res.family.family) {
            const auto& fam = *res.family.family;
            fj["sum_rules"] = fam.sum_rules;
            fj["quotient_support_start"] = fam.b_lo;
            json base = json::array();
            for (const auto& v : fam.base) base.push_back(json(mpq_class(v).get_str()));
            fj["quotient_base"] = std::move(base);
            json dirs = json::array();
            for (const auto& dir : fam.directions) {
                json row = json::array();
                for (const auto& v : dir) row.push_back(json(mpq_class(v).get_str()));
                dirs.push_back(std::move(row));
            }
            fj["quotient_directions"] = std::move(dirs);
        }
        rep["family"] = std::move(fj);
    }
    if (res.optimized) rep["optimized"] = candidate_json(*res.optimized);

    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_subdivide(const std::string& scheme_path, const std::string& polygon_path,
                  unsigned levels, const std::string& format) {
    auto spec = io::parse_scheme_json(io::read_file(scheme_path));
    io::Polygon poly = io::parse_polygon_csv(io::read_file(polygon_path));
    const long M = spec.dilation;
    const size_t r = spec.period();
    const long L = static_cast<long>(poly.points.size());

    // window of output indices whose stencils never touch zero padding
    long A = 0, B = L - 1;
    Scalar m_c(0);  // first moment of the composed mask, m <- M m + m_i
    for (unsigned i = 0; i < levels; ++i) {
        const Mask& a = spec.masks[i % r];
        long la = a.seq.lower(), ha = a.seq.upper();
        A = M * A + ha - M + 1;
        B = M * B + la + M - 1;
        if (A > B)
            throw std::invalid_argument("subdivide: polygon too short for the mask stencils");
        check_coeff_budget(B - A + 1, "subdivide");
        m_c = Scalar(mpq_class(M)) * m_c + analysis::moments(a, 1).m_a;
    }

    std::vector<FiniteSequence> coords;
    for (size_t c = 0; c < poly.dim; ++c) {
        std::vector<Scalar> v;
        v.reserve(static_cast<size_t>(L));
        for (const auto& pt : poly.points) v.emplace_back(pt[c]);
        coords.push_back(quasistat::quasi_subdivide(spec, FiniteSequence(0, std::move(v)), levels));
    }

    io::Polygon out;
    out.dim = poly.dim;
    for (long k = A; k <= B; ++k) {
        std::array<double, 3> pt{0.0, 0.0, 0.0};
        for (size_t c = 0; c < poly.dim; ++c) pt[c] = coords[c].at(k).dbl();
        out.points.push_back(pt);
    }

    if (format == "csv") {
        std::cout << io::emit_polygon_csv(out);
    } else if (format == "svg") {
        std::cout << io::emit_svg(out);
    } else if (format == "json") {
        mpz_class N = pow_z(M, levels);
        json rep = json::object();
        rep["dilation"] = M;
        rep["period"] = r;
        rep["levels"] = levels;
        rep["first_index"] = A;
        json pts = json::array();
        for (const auto& pt : out.points) {
            json row = json::array({pt[0], pt[1]});
            if (out.dim == 3) row.push_back(pt[2]);
            pts.push_back(std::move(row));
        }
        rep["points"] = std::move(pts);
        // index k sits at curve parameter k*scale + shift; shift -> -s_a
        json par = json::object();
        par["scale"] = json("1/" + N.get_str());
        Scalar inv_n = Scalar::ratio(mpz_class(1), N);
        par["shift"] = scalar_json(-(m_c * inv_n));
        par["s_a"] = scalar_json(m_c * Scalar::ratio(mpz_class(1), N - 1));
        rep["parameter"] = std::move(par);
        std::cout << rep.dump(2) << "\n";
    } else {
        throw std::invalid_argument("--format must be csv, svg, or json");
    }
    return 0;
}

int cmd_sample_phi(const std::string& path, unsigned level, unsigned deriv) {
    Mask a = io::parse_mask_json(io::read_file(path));
    auto samples = transition::sample_phi_grid(a, level, deriv);
    mpz_class N = pow_z(a.dilation, level);
    // closed support of phi is (M-1)^{-1} fs(a); include the boundary zeros
    mpq_class lo_q(mpz_class(a.seq.lower()) * N, mpz_class(a.dilation - 1));
    mpq_class hi_q(mpz_class(a.seq.upper()) * N, mpz_class(a.dilation - 1));
    lo_q.canonicalize();
    hi_q.canonicalize();
    long klo = ceil_rat(lo_q), khi = floor_rat(hi_q);
    if (!samples.values.is_zero()) {
        klo = std::min(klo, samples.values.lower());
        khi = std::max(khi, samples.values.upper());
    }
    std::string out = "x,value\n";
    for (long k = klo; k <= khi; ++k) {
        out += io::format_float(Scalar::ratio(mpz_class(k), N).dbl());
        out += ',';
        out += io::format_float(samples.values.at(k).dbl());
        out += '\n';
    }
    std::cout << out;
    return 0;
}

int cmd_spectrum(const std::string& path, long gamma, unsigned power) {
    Mask a = io::parse_mask_json(io::read_file(path));
    Mask target = a;
    if (power > 1) {
        mpz_class N = pow_z(a.dilation, power);
        if (!N.fits_slong_p()) throw ResourceLimit("spectrum: M^n out of range");
        target = Mask(seqalg::iterated_mask(a, power), N.get_si());
    }
    auto T = transition::transition_matrix(target, gamma);
    auto evs = transition::spectrum(T);
    std::sort(evs.begin(), evs.end(), [](const auto& x, const auto& y) {
        double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax > ay;
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    json rep = json::object();
    rep["dilation"] = target.dilation;
    rep["gamma"] = gamma;
    rep["dimension"] = T.dim() > 0 ? T.dim() : 0;
    json list = json::array();
    for (const auto& z : evs) {
        if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z.real()))) {
            list.push_back(json(z.real()));
        } else {
            json c = json::object();
            c["re"] = z.real();
            c["im"] = z.imag();
            list.push_back(std::move(c));
        }
    }
    rep["eigenvalues"] = std::move(list);
    std::cout << rep.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact subdivision masks: analysis, construction, curves"};
    app.require_subcommand(1);

    std::string mask_path, scheme_path, polygon_path, sa_text, support, format = "csv";
    unsigned m = 0, n_max = 3, levels = 1, deriv = 0, power = 1, sum_rules = 1;
    long dilation = 2, gamma = 0;
    bool symmetric = false, optimize = false;

    auto* analyze = app.add_subcommand("analyze", "smoothness and interpolation report");
    analyze->add_option("mask", mask_path, "mask json file")->required();
    analyze->add_option("--m", m, "smoothness target");
    analyze->add_option("--n-max", n_max, "deepest coset bound level")->check(CLI::Range(1u, 16u));
    analyze->add_option("--sa", sa_text, "interpolation point p/q (default: from moments)");

    auto* construct_cmd = app.add_subcommand("construct", "build interpolatory masks");
    construct_cmd->add_option("--dilation", dilation, "dilation factor")->required();
    construct_cmd->add_option("--sa", sa_text, "interpolation point p/q")->required();
    construct_cmd->add_option("--support", support, "mask support l:h")->required();
    construct_cmd->add_option("--sum-rules", sum_rules, "structural sum-rule order")->required();
    construct_cmd->add_flag("--symmetric", symmetric, "impose symmetry about the moment center");
    construct_cmd->add_option("--m", m, "smoothness acceptance target");
    construct_cmd->add_flag("--optimize", optimize, "walk families toward max sm2");

    auto* subdivide = app.add_subcommand("subdivide", "refine a control polygon");
    subdivide->add_option("scheme", scheme_path, "scheme json file")->required();
    subdivide->add_option("polygon", polygon_path, "polygon csv file")->required();
    subdivide->add_option("--levels", levels, "subdivision steps")->check(CLI::Range(1u, 64u));
    subdivide->add_option("--format", format, "csv | svg | json");

    auto* sample = app.add_subcommand("sample-phi", "grid samples of the refinable function");
    sample->add_option("mask", mask_path, "mask json file")->required();
    sample->add_option("--level", levels, "grid depth (x = k / M^level)");
    sample->add_option("--deriv", deriv, "difference order");

    auto* spectrum = app.add_subcommand("spectrum", "transition operator eigenvalues");
    spectrum->add_option("mask", mask_path, "mask json file")->required();
    spectrum->add_option("--gamma", gamma, "coset shift");
    spectrum->add_option("--power", power, "use the iterated mask at this depth")
        ->check(CLI::Range(1u, 16u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(mask_path, m, n_max, sa_text);
        if (app.got_subcommand(construct_cmd))
            return cmd_construct(dilation, sa_text, support, sum_rules, symmetric, m, optimize);
        if (app.got_subcommand(subdivide))
            return cmd_subdivide(scheme_path, polygon_path, levels, format);
        if (app.got_subcommand(sample)) return cmd_sample_phi(mask_path, levels, deriv);
        if (app.got_subcommand(spectrum)) return cmd_spectrum(mask_path, gamma, power);
    } catch (const subdivkit::Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const subdivkit::ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 64;
}
