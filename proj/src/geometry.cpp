#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "laxpair.hpp"

namespace solsurf::geometry {

namespace {

using algebra::Coeffs;
using immersion::Term;

constexpr double kDegenerateTol = 1e-10;        // independence-measure floor
constexpr double kNullNormalTol = 1e-12;        // |<N,N>| / |N|^2 lightlike floor
constexpr double kOrientTol = 1e-12;            // orientation tie-break band
constexpr double kDegenerateMetricTol = 1e-10;  // |EG - Fc^2| flag, relative
const double kSqrt2 = std::sqrt(2.0);

struct Triple {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

// Real coefficient triple of a (numerically) traceless real matrix. The
// explicit projection onto zero trace removes conjugation round-off before
// the decomposition's own trace check can trip on it.
Triple real_coeffs(const Mat2& m) {
    const Coeffs c = algebra::decompose(algebra::traceless_part(m));
    return {algebra::real_checked(c.c1), algebra::real_checked(c.c2),
            algebra::real_checked(c.c3)};
}

Triple cross(const Triple& a, const Triple& b) {
    return {a.c2 * b.c3 - a.c3 * b.c2, a.c3 * b.c1 - a.c1 * b.c3, a.c1 * b.c2 - a.c2 * b.c1};
}

double dot(const Triple& a, const Triple& b) {
    return a.c1 * b.c1 + a.c2 * b.c2 + a.c3 * b.c3;
}

double killing_dot(const Triple& a, const Triple& b) {
    return a.c1 * b.c1 + a.c2 * b.c2 - a.c3 * b.c3;
}

Mat2 to_matrix(const Triple& t) { return algebra::compose(Coeffs{t.c1, t.c2, t.c3}); }

// e1-component >= 0; tie-break e2 >= 0, then e3 >= 0.
Triple orient(const Triple& n) {
    double lead = n.c1;
    if (std::abs(lead) <= kOrientTol) lead = n.c2;
    if (std::abs(lead) <= kOrientTol) lead = n.c3;
    if (lead < 0.0) return {-n.c1, -n.c2, -n.c3};
    return n;
}

struct NormalResult {
    Triple n;
    double sign = 1.0;  // sign of <N,N>; 0 marks a lightlike normal
};

NormalResult killing_normal(const Triple& a, const Triple& b) {
    // <N,X> = N^T J X with J = diag(1,1,-1), so J N must be Euclidean-
    // orthogonal to both tangents: N = J (a x b) up to scale.
    const Triple axb = cross(a, b);
    const Triple n{axb.c1, axb.c2, -axb.c3};
    const double nn = killing_dot(n, n);
    const double ee = dot(n, n);
    if (std::abs(nn) < kNullNormalTol * ee) {
        // Lightlike normal <=> degenerate induced metric (EG - Fc^2 equals
        // -<N0,N0> for the unnormalized solution). Keep a Euclidean-unit
        // direction and let curvatures_at flag the point.
        const double s = 1.0 / std::sqrt(ee);
        return {orient({n.c1 * s, n.c2 * s, n.c3 * s}), 0.0};
    }
    const double s = 1.0 / std::sqrt(std::abs(nn));
    return {orient({n.c1 * s, n.c2 * s, n.c3 * s}), nn > 0.0 ? 1.0 : -1.0};
}

NormalResult euclidean_normal(const Triple& a, const Triple& b) {
    const Triple n = cross(a, b);
    const double s = 1.0 / std::sqrt(dot(n, n));
    return {orient({n.c1 * s, n.c2 * s, n.c3 * s}), 1.0};
}

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

const char* metric_name(Metric m) {
    switch (m) {
        case Metric::euclidean: return "euclidean";
        case Metric::killing: return "killing";
    }
    return "?";
}

std::optional<Metric> metric_from_name(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "killing") return Metric::killing;
    return std::nullopt;
}

SecondDerivatives second_derivatives(const immersion::ImmersionField& field, double x, double y,
                                     Metric metric, double fd_step) {
    if (!(fd_step > 0.0) || !std::isfinite(fd_step))
        raise(errc::invalid_argument, "fd_step must be positive and finite");
    const double h = fd_step;
    if (metric == Metric::killing) {
        const auto pair = field.tangents(x, y);
        const auto p = model::jet(field.context().model, x);
        const Mat2 l = laxpair::build_L(field.context(), p);
        const Mat2 m = laxpair::build_M(field.context(), p);
        const Mat2 dxa = (0.5 / h) * (field.tangents(x + h, y).a - field.tangents(x - h, y).a);
        return {dxa + algebra::commutator(pair.a, l), algebra::commutator(pair.a, m),
                algebra::commutator(pair.b, m)};
    }
    const auto xp = field.conjugated_tangents(x + h, y);
    const auto xm = field.conjugated_tangents(x - h, y);
    const auto yp = field.conjugated_tangents(x, y + h);
    const auto ym = field.conjugated_tangents(x, y - h);
    const Mat2 fxx = (0.5 / h) * (xp.first - xm.first);
    const Mat2 fyy = (0.5 / h) * (yp.second - ym.second);
    // The stencils d_y Fx and d_x Fy agree up to the admissibility residual;
    // averaging keeps II symmetric by construction.
    const Mat2 fxy = (0.25 / h) * ((yp.first - ym.first) + (xp.second - xm.second));
    return {fxx, fxy, fyy};
}

FundamentalForms forms_at(const immersion::ImmersionField& field, double x, double y,
                          Metric metric, double fd_step) {
    if (!std::isfinite(x) || !std::isfinite(y))
        raise(errc::invalid_argument, "sample point must be finite");

    FundamentalForms out;
    out.x = x;
    out.y = y;
    out.metric = metric;

    Triple ta, tb;
    if (metric == Metric::killing) {
        const auto pair = field.tangents(x, y);
        if (pair.lin_indep_measure < kDegenerateTol)
            raise(errc::degenerate_tangents,
                  "tangent pair does not span a plane at x = " + number(x));
        ta = real_coeffs(pair.a);
        tb = real_coeffs(pair.b);
    } else {
        const auto conj = field.conjugated_tangents(x, y);
        if (immersion::pair_independence(conj.first, conj.second) < kDegenerateTol)
            raise(errc::degenerate_tangents,
                  "conjugated tangent pair does not span a plane at x = " + number(x));
        ta = real_coeffs(conj.first);
        tb = real_coeffs(conj.second);
    }

    const auto sd = second_derivatives(field, x, y, metric, fd_step);
    const Triple xx = real_coeffs(sd.fxx);
    const Triple xy = real_coeffs(sd.fxy);
    const Triple yy = real_coeffs(sd.fyy);

    if (metric == Metric::killing) {
        const NormalResult nr = killing_normal(ta, tb);
        out.E = killing_dot(ta, ta);
        out.Fc = killing_dot(ta, tb);
        out.G = killing_dot(tb, tb);
        out.e = killing_dot(xx, nr.n);
        out.f = killing_dot(xy, nr.n);
        out.g2 = killing_dot(yy, nr.n);
        out.normal = to_matrix(nr.n);
        out.normal_sign = nr.sign;
    } else {
        const NormalResult nr = euclidean_normal(ta, tb);
        out.E = dot(ta, ta);
        out.Fc = dot(ta, tb);
        out.G = dot(tb, tb);
        out.e = dot(xx, nr.n);
        out.f = dot(xy, nr.n);
        out.g2 = dot(yy, nr.n);
        out.normal = to_matrix(nr.n);
        out.normal_sign = nr.sign;
    }
    return out;
}

CurvaturePoint curvatures_at(const FundamentalForms& forms) {
    CurvaturePoint out;
    const double scale = std::max({std::abs(forms.E), std::abs(forms.Fc), std::abs(forms.G)});
    const double det1 = forms.E * forms.G - forms.Fc * forms.Fc;
    if (forms.normal_sign == 0.0 || scale == 0.0 ||
        std::abs(det1) < kDegenerateMetricTol * scale * scale) {
        out.degenerate = true;
        out.K = out.H = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.K = forms.normal_sign * (forms.e * forms.g2 - forms.f * forms.f) / det1;
    out.H = forms.normal_sign *
            (forms.E * forms.g2 - 2.0 * forms.Fc * forms.f + forms.G * forms.e) / (2.0 * det1);
    return out;
}

CurvaturePoint curvatures(const immersion::ImmersionField& field, double x, double y,
                          Metric metric, double fd_step) {
    return curvatures_at(forms_at(field, x, y, metric, fd_step));
}

// --------------------------------------------------------------- references

FormRecord reference_first_form(Term surface, const model::JetPoint& p, double lambda, double k) {
    const double u = p.u, ux = p.ux, x = p.x, l = lambda;
    const double k2 = k * k, k4 = k2 * k2, l2 = l * l;
    const double u2 = u * u, u3 = u2 * u, u5 = u2 * u3, u6 = u3 * u3;
    switch (surface) {
        case Term::spectral:
            return {0.0, -k2 * (u - l), 2.0 * k2 * u2 - 4.0 * l * k2 * u + 6.0 * k2 * l2 - 2.0 * k2 - 2.0};
        case Term::symmetry:
            return {0.0, k2 * (u2 - 1.0) * (k2 * u2 - 1.0) * (3.0 * u - l),
                    2.0 * (k4 * u6 + 4.0 * k4 * u5 * l - 2.0 * k4 * u2 * u2 * l2 -
                           4.0 * k2 * l * (1.0 + k2) * u3 + 2.0 * k2 * (-3.0 + l2 + k2 * l2) * u2 +
                           4.0 * l * k2 * u + 2.0 - 2.0 * k2 * l2 + 2.0 * k2)};
        case Term::dilation_x:
            return {1.5 * k2 * u2 - k2 * (l - 3.0 * x * ux) * u + 0.5 * k2 * l2 - ux * x * k2 * l -
                        0.5 * k2 - 0.5,
                    k2 * x * x * (u2 - 1.0) * (k2 * u2 - 1.0) * (3.0 * u - l),
                    2.0 * x * x *
                        (k4 * u6 + 2.0 * k4 * u5 * l - k4 * u2 * u2 * l2 -
                         2.0 * k2 * l * (1.0 + k2) * u3 + k2 * (-3.0 + l2 + k2 * l2) * u2 +
                         2.0 * l * k2 * u + 1.0 - k2 * l2 + k2)};
        default:
            raise(errc::invalid_argument, "no closed first form for this surface");
    }
}

FormRecord reference_second_form(Term surface, const model::JetPoint& p, double lambda, double k) {
    const double u = p.u, ux = p.ux, l = lambda;
    const double k2 = k * k, k4 = k2 * k2, l2 = l * l;
    const double u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u5 = u4 * u, u6 = u3 * u3;
    switch (surface) {
        case Term::spectral:
            return {k2 * (u - l) / kSqrt2, -kSqrt2 * k2 * (u2 - l2),
                    2.0 * kSqrt2 * (k2 * u3 - l * k2 * u2 + (k2 * l2 - k2 - 1.0) * u + k2 * l * l2)};
        case Term::symmetry:
            return {ux * k2 * (l - 3.0 * u) / kSqrt2, kSqrt2 * ux * k2 * (l - 3.0 * u) * (u + l),
                    (2.0 * kSqrt2 * (u + l) / ux) *
                        (-1.0 + k2 * l2 + 3.0 * k2 * u2 - k2 - 2.0 * l * k2 * u - u2 * k2 * l2 -
                         2.0 * k4 * u5 * l + 2.0 * u3 * l * k2 - k4 * u2 * l2 + 2.0 * k4 * l * u3 +
                         k4 * u4 * l2 - k4 * u6)};
        default:
            raise(errc::invalid_argument, "no closed second form for this surface");
    }
}

Mat2 reference_normal(Term surface, const model::JetPoint& p, double lambda, double k) {
    const double u = p.u, ux = p.ux;
    const double k2 = k * k;
    (void)lambda;
    switch (surface) {
        case Term::spectral:
            return (1.0 / kSqrt2) * algebra::kE1;
        case Term::symmetry:
            return Mat2{-0.5 * kSqrt2, (2.0 * k2 * u * u - k2 - 1.0) * u * kSqrt2 / ux, 0.0,
                        0.5 * kSqrt2};
        default:
            raise(errc::invalid_argument, "no closed normal for this surface");
    }
}

double reference_gauss(Term surface, const model::JetPoint& p, double lambda, double k) {
    const double u = p.u, l = lambda;
    const double k2 = k * k, k4 = k2 * k2;
    const double u2 = u * u, u4 = u2 * u2, u6 = u4 * u2;
    switch (surface) {
        case Term::spectral:
            return 2.0 * (2.0 * k2 * u2 - k2 - 1.0) * (l - u) * k2 * u;
        case Term::symmetry:
            return 2.0 * k2 * (u + l) * (l - 3.0 * u) *
                   (-1.0 - k2 - 3.0 * k2 * u4 + 6.0 * k2 * u2 + 2.0 * k4 * u6 - 3.0 * k4 * u4);
        default:
            raise(errc::invalid_argument, "no closed Gaussian curvature for this surface");
    }
}

double reference_mean(Term surface, const model::JetPoint& p, double lambda, double k) {
    const double u = p.u, ux = p.ux, l = lambda;
    const double k2 = k * k, k4 = k2 * k2, l2 = l * l;
    const double u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u5 = u4 * u, u6 = u3 * u3;
    switch (surface) {
        case Term::spectral:
            return k2 * l2 - 2.0 * l * k2 * u + 3.0 * k2 * u2 - k2 - 1.0;
        case Term::symmetry:
            return kSqrt2 * (l - 3.0 * u) * ux * k2 *
                   (-5.0 * k4 * u6 - 2.0 * k4 * u5 * l + k2 * (6.0 + k2 * l2 + 6.0 * k2) * u4 +
                    2.0 * k2 * l * (1.0 + k2) * u3 - k2 * (9.0 + k2 * l2 + l2) * u2 -
                    2.0 * l * k2 * u + k2 * l2 + 1.0 + k2);
        default:
            raise(errc::invalid_argument, "no closed mean curvature for this surface");
    }
}

double reference_dilation_cross_literal(const model::JetPoint& p, double lambda, double k) {
    const double u = p.u, x = p.x, l = lambda, k2 = k * k;
    return k2 * x * x * (u - 2.0) * (k2 * u * u - 1.0) * (3.0 * u - l);
}

FormRecord general_first_form(const model::ModelSpec& spec, Term surface,
                              const model::JetPoint& p, double lambda) {
    const double u = p.u, w = u + lambda;
    if (std::abs(w) < 1e-12)
        raise(errc::singular_denominator, "u + lambda vanishes in the general first form");
    const double f = model::f_of(spec, u);
    const double fp = model::fp_of(spec, u);
    const double fpp = model::fpp_of(spec, u);
    const double g = model::discriminant(spec, lambda);
    const double gp = -model::fp_of(spec, -lambda);  // g(l) = f(-l)
    const double w2 = w * w, w3 = w2 * w;
    switch (surface) {
        case Term::spectral:
            // One denominator symbol in the dy^2 term is ambiguous in its
            // display; it is evaluated as u here (so the denominator is w).
            return {0.0, 2.0 * (f - g) / w3 - (fp - gp) / w2, 2.0 * (gp / w + (f - g) / w2)};
        case Term::symmetry:
            return {0.0, f * fpp / w - 2.0 * f * fp / w2 + 2.0 * f * (f - g) / w3,
                    fp * fp / 2.0 - 2.0 * f * fp / w + 2.0 * f * (f - g) / w2};
        default:
            raise(errc::invalid_argument, "general first form covers spectral and symmetry only");
    }
}

// ------------------------------------------------------------------- report

ComparisonReport comparison_report(const model::ModelSpec& spec, double lambda,
                                   const std::vector<double>& xs) {
    if (spec.kind != model::Kind::sn || spec.custom)
        raise(errc::invalid_argument, "comparison report: sn-family models only");
    if (xs.empty()) raise(errc::invalid_argument, "comparison report: no sample points");

    ComparisonReport rep;
    rep.k = spec.k;
    rep.lambda = lambda;
    rep.xs = xs;
    rep.notes = {
        "numeric values are mapped to the display convention of the closed forms: "
        "inner product tr(XY), cross coefficients as displayed (not doubled), "
        "closed-form normals used for the second forms",
        "library-internal convention is B(X,Y) = tr(XY)/2 with I = E dx^2 + 2 Fc dxdy "
        "+ G dy^2 and |B(N,N)| = 1 with e1-oriented normals",
        "the model-independent spectral dy^2 closed form contains an ambiguous "
        "denominator symbol, evaluated here as u",
        "the x-dilation cross coefficient contains the ambiguous factor 'u^1 - 2': "
        "evaluated as u^2 - 1 (primary) and as u - 2 (literal)",
        "closed-form K, H and the determinant ratio of the closed-form I, II disagree "
        "internally at u = 0; all deviations are reported, never asserted - the "
        "numeric pipeline is authoritative",
    };

    immersion::ImmersionSpec st_spec;
    st_spec.alpha = {0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
    immersion::ImmersionSpec q_spec;
    q_spec.alpha = {0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
    immersion::ImmersionSpec dil_spec;
    dil_spec.alpha = {0.0, 0.0, 0.0, 1.0, 0.0, 0.0};

    const immersion::ImmersionField st(spec, lambda, st_spec);
    const immersion::ImmersionField q(spec, lambda, q_spec);
    const immersion::ImmersionField dil(spec, lambda, dil_spec);

    auto add = [&rep](const char* surface, const char* quantity, double x, double ref, double num,
                      std::string note = "") {
        ComparisonEntry entry;
        entry.surface = surface;
        entry.quantity = quantity;
        entry.x = x;
        entry.reference = ref;
        entry.numeric = num;
        entry.abs_dev = std::abs(ref - num);
        entry.rel_dev = entry.abs_dev / std::max(1.0, std::abs(ref));
        entry.note = std::move(note);
        rep.entries.push_back(std::move(entry));
    };

    const double k = spec.k;
    struct Row {
        const char* name;
        const immersion::ImmersionField* field;
        Term term;
    };
    const std::array<Row, 2> rows{{{"st", &st, Term::spectral}, {"q", &q, Term::symmetry}}};

    for (double x : xs) {
        const auto p = model::jet(spec, x);
        for (const auto& row : rows) {
            try {
                const auto forms = forms_at(*row.field, x, 0.0, Metric::killing);
                const auto sd = second_derivatives(*row.field, x, 0.0, Metric::killing);

                const auto ref1 = reference_first_form(row.term, p, lambda, k);
                add(row.name, "I.dx2", x, ref1.dx2, 2.0 * forms.E);
                add(row.name, "I.dxdy", x, ref1.dxdy, 2.0 * forms.Fc);
                add(row.name, "I.dy2", x, ref1.dy2, 2.0 * forms.G);

                const auto gen = general_first_form(spec, row.term, p, lambda);
                add(row.name, "I.general.dxdy", x, gen.dxdy, 2.0 * forms.Fc,
                    "model-independent closed form");
                add(row.name, "I.general.dy2", x, gen.dy2, 2.0 * forms.G,
                    "model-independent closed form");

                const auto ref2 = reference_second_form(row.term, p, lambda, k);
                const Mat2 nref = reference_normal(row.term, p, lambda, k);
                add(row.name, "II.dx2", x, ref2.dx2,
                    algebra::real_checked((sd.fxx * nref).trace()));
                add(row.name, "II.dxdy", x, ref2.dxdy,
                    algebra::real_checked((sd.fxy * nref).trace()));
                add(row.name, "II.dy2", x, ref2.dy2,
                    algebra::real_checked((sd.fyy * nref).trace()));

                // 0 when the unit normal is parallel (up to sign) to the
                // closed-form normal, whose B-norm is 1/sqrt(2).
                const double bnn = std::abs(
                    algebra::real_checked(algebra::killing_form(forms.normal, nref)));
                add(row.name, "N.alignment", x, 0.0, std::abs(kSqrt2 * bnn - 1.0));

                const auto curv = curvatures_at(forms);
                add(row.name, "K", x, reference_gauss(row.term, p, lambda, k), curv.K);
                add(row.name, "H", x, reference_mean(row.term, p, lambda, k), curv.H);

                if (std::abs(p.u) < 1e-12) {
                    // Internal consistency of the closed forms themselves:
                    // determinant ratio with symmetric-matrix cross terms.
                    const double det2 = ref2.dx2 * ref2.dy2 - 0.25 * ref2.dxdy * ref2.dxdy;
                    const double det1 = ref1.dx2 * ref1.dy2 - 0.25 * ref1.dxdy * ref1.dxdy;
                    add(row.name, "K.reference.detratio", x,
                        reference_gauss(row.term, p, lambda, k), det2 / det1,
                        "det(II)/det(I) of the closed forms; differs from the closed-form K "
                        "at u = 0 - reported, not asserted");
                }
            } catch (const Error& err) {
                rep.notes.push_back(std::string(row.name) + " at x = " + number(x) +
                                    " skipped: " + err.what());
            }
        }
        try {
            const auto forms = forms_at(dil, x, 0.0, Metric::killing);
            const auto ref1 = reference_first_form(Term::dilation_x, p, lambda, k);
            add("dilation-x", "I.dx2", x, ref1.dx2, 2.0 * forms.E);
            add("dilation-x", "I.dxdy", x, ref1.dxdy, 2.0 * forms.Fc);
            add("dilation-x", "I.dxdy.literal", x,
                reference_dilation_cross_literal(p, lambda, k), 2.0 * forms.Fc,
                "cross coefficient read literally as (u - 2)");
            add("dilation-x", "I.dy2", x, ref1.dy2, 2.0 * forms.G);
        } catch (const Error& err) {
            rep.notes.push_back(std::string("dilation-x at x = ") + number(x) +
                                " skipped: " + err.what());
        }
    }
    return rep;
}

std::string ComparisonReport::human_text() const {
    std::ostringstream os;
    os << "closed-form reference comparison (k = " << k << ", lambda = " << lambda << ")\n";
    for (const auto& n : notes) os << "note: " << n << "\n";
    os << "\nsurface      quantity               x         reference       numeric       |dev|"
          "     rel\n";
    char buf[200];
    for (const auto& entry : entries) {
        std::snprintf(buf, sizeof buf, "%-12s %-22s %8.4f %14.6g %14.6g %10.2e %8.1e",
                      entry.surface.c_str(), entry.quantity.c_str(), entry.x, entry.reference,
                      entry.numeric, entry.abs_dev, entry.rel_dev);
        os << buf;
        if (!entry.note.empty()) os << "   # " << entry.note;
        os << "\n";
    }
    return os.str();
}

} // namespace solsurf::geometry
