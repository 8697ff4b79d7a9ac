#include "dj/lebrun.hpp"

#include "dj/error.hpp"
#include "dj/expr.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dj {

namespace {

std::string qname(int i) { return "q" + std::to_string(i); }
std::string pname(int i) { return "p" + std::to_string(i); }

std::vector<Coord> contact_coords(int n) {
    std::vector<Coord> cs;
    cs.push_back({"u"});
    for (int i = 1; i <= n; ++i) cs.push_back({qname(i)});
    for (int i = 1; i <= n; ++i) cs.push_back({pname(i)});
    return cs;
}

Scalar gen(const ChartPtr& c, const std::string& name) { return Scalar::generator(c, name); }

// Determinant over the fraction field by Gaussian elimination with exact
// nonzero pivot selection.
Scalar fraction_det(Mat m) {
    const size_t n = m.rows();
    Scalar det = Scalar::one(m.chart());
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m.at(piv, col).is_zero()) ++piv;
        if (piv == n) return Scalar::zero(m.chart());
        if (piv != col) {
            for (size_t j = col; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
            det = -det;
        }
        det = det * m.at(col, col);
        for (size_t r = col + 1; r < n; ++r) {
            if (m.at(r, col).is_zero()) continue;
            Scalar factor = m.at(r, col) / m.at(col, col);
            for (size_t j = col; j < n; ++j)
                m.at(r, j) = m.at(r, j) - factor * m.at(col, j);
        }
    }
    return det;
}

} // namespace

LebrunFamily make_lebrun(int n) {
    if (n < 1) fail(Errc::ValidationError, "the family needs at least one (q, p) pair");
    ChartPtr contact = Chart::make("contact", contact_coords(n));
    auto with_radial = [&](const std::string& name, const std::string& radial, bool positive) {
        std::vector<Coord> cs = contact_coords(n);
        cs.push_back({radial, false, positive});
        return Chart::make(name, cs);
    };
    return LebrunFamily{n,
                        contact,
                        contact_form(contact, n),
                        with_radial("zero_end", "s", false),
                        with_radial("infinity_end", "r", false),
                        with_radial("zero_end_open", "s", true),
                        with_radial("infinity_end_open", "r", true)};
}

KForm contact_form(const ChartPtr& c, int n) {
    KForm sigma = KForm::d_coord(c, "u");
    for (int i = 1; i <= n; ++i)
        sigma = sigma + KForm::d_coord(c, qname(i)).scaled(gen(c, pname(i)));
    return sigma;
}

KVector homogeneous_bivector(const ChartPtr& c, int n, const std::string& radial) {
    Scalar r = gen(c, radial);
    KVector scaling = KVector::basis(c, radial).scaled(r);
    for (int i = 1; i <= n; ++i)
        scaling = scaling + KVector::basis(c, pname(i)).scaled(gen(c, pname(i)));
    KVector lam = wedge(KVector::basis(c, "u"), scaling);
    for (int i = 1; i <= n; ++i)
        lam = lam + wedge(KVector::basis(c, pname(i)), KVector::basis(c, qname(i)));
    return lam.scaled(r);
}

DiracStructure symplectization(const LebrunFamily& F) {
    std::vector<Coord> cs = contact_coords(F.n);
    cs.push_back({"t"});
    ChartPtr c = Chart::make("cone", cs, {ExpUnit{"et", "t", 1}});
    KForm scaled = contact_form(c, F.n).scaled(Scalar::generator(c, "et"));
    return graph_two_form(d(scaled));
}

DiracStructure closure_zero(const LebrunFamily& F) {
    KForm scaled = contact_form(F.s_chart, F.n).scaled(gen(F.s_chart, "s"));
    return graph_two_form(d(scaled), {{{"s", Rat(0)}}});
}

DiracStructure lebrun_poisson(const LebrunFamily& F) {
    return graph_bivector(homogeneous_bivector(F.r_chart, F.n, "r"), {{{"r", Rat(0)}}});
}

GluedDirac glued_dirac(const LebrunFamily& F) {
    GluedDirac g{closure_zero(F), lebrun_poisson(F),
                 graph_two_form(d(contact_form(F.s_pos, F.n).scaled(gen(F.s_pos, "s")))),
                 graph_bivector(homogeneous_bivector(F.r_pos, F.n, "r")), false};

    Bindings s_in_r;
    Bindings r_in_s;
    for (int i = 0; i < 2 * F.n + 1; ++i) {
        const std::string& name = F.s_pos->coord(static_cast<size_t>(i)).name;
        s_in_r[name] = gen(F.r_pos, name);
        r_in_s[name] = gen(F.s_pos, name);
    }
    s_in_r["s"] = Scalar::one(F.r_pos) / gen(F.r_pos, "r");
    r_in_s["r"] = Scalar::one(F.s_pos) / gen(F.s_pos, "s");
    ChartMap m = make_chart_map(F.s_pos, F.r_pos, std::move(s_in_r), std::move(r_in_s));

    std::vector<Section> moved;
    for (size_t k = 0; k < g.overlap_from_zero.frame.size(); ++k) {
        const Section& e = g.overlap_from_zero.frame.at(k);
        moved.push_back(cou_section(transport(e.X, m), transport(e.xi, m)));
    }
    g.overlap_from_zero = make_dirac(StructureFrame::validate(moved));
    g.overlap_equal = span_equal(g.overlap_from_zero.frame, g.overlap_poisson.frame).equal;
    return g;
}

JacobiPair circle_bundle_pair(const ChartPtr& c, int n, const std::string& radial,
                              const std::string& angular) {
    KVector lam = homogeneous_bivector(c, n, radial) -
                  wedge(KVector::basis(c, angular), KVector::basis(c, radial))
                      .scaled(gen(c, radial));
    return JacobiPair{std::move(lam), KVector::basis(c, angular)};
}

DiracJacobiStructure lebrun_jacobi(const LebrunFamily& F) {
    std::string th;
    ChartPtr Q = circle_extension(F.r_chart, &th);
    JacobiPair J = circle_bundle_pair(Q, F.n, "r", th);
    return dj_graph_jacobi(J.lam, J.E, {{{"r", Rat(0)}}});
}

PreqData preq_zero_end(const LebrunFamily& F) {
    DiracStructure base = closure_zero(F);
    AnchorRep pair{KVector::zero(F.s_chart, 1),
                   contact_form(F.s_chart, F.n).scaled(-gen(F.s_chart, "s"))};
    return make_preq_data(base, KForm::zero(F.s_chart, 2), pair, KForm::zero(F.s_chart, 1));
}

PreqData preq_infinity_end(const LebrunFamily& F) {
    DiracStructure base = lebrun_poisson(F);
    AnchorRep pair{KVector::basis(F.r_chart, "r").scaled(-gen(F.r_chart, "r")),
                   KForm::zero(F.r_chart, 1)};
    return make_preq_data(base, KForm::zero(F.r_chart, 2), pair, KForm::zero(F.r_chart, 1));
}

bool boundary_basic(const DiracStructure& S, const RatPoint& locus, const Scalar& f) {
    const ChartPtr& c = S.frame.chart();
    require_same_chart(c, f.chart(), "boundary_basic");
    ChartPtr slice = c->sliced(locus);
    const size_t dim = c->dim();
    const size_t k = S.frame.size();

    Mat cov(slice, dim, k);
    for (size_t j = 0; j < k; ++j) {
        const KForm& xi = S.frame.at(j).xi;
        for (uint32_t i = 0; i < dim; ++i)
            cov.at(i, j) = restrict_at(xi.coeff({i}), locus, slice);
    }
    auto kernel = nullspace(cov);

    std::vector<Scalar> df(dim, Scalar::zero(slice));
    for (uint32_t i = 0; i < dim; ++i)
        df[i] = restrict_at(f.diff(c->coord(i).name), locus, slice);

    for (const auto& combo : kernel) {
        Scalar val = Scalar::zero(slice);
        for (size_t j = 0; j < k; ++j) {
            if (combo[j].is_zero()) continue;
            const KVector& X = S.frame.at(j).X;
            Scalar along = Scalar::zero(slice);
            for (uint32_t i = 0; i < dim; ++i)
                along = along + restrict_at(X.coeff({i}), locus, slice) * df[i];
            val = val + combo[j] * along;
        }
        if (!val.is_zero()) return false;
    }
    return true;
}

BoundaryReport char_boundary_check(const LebrunFamily& F) {
    DiracStructure S = closure_zero(F);
    BoundaryReport rep;

    RatPoint origin;
    for (uint32_t i = 0; i < F.s_chart->dim(); ++i) origin[F.s_chart->coord(i).name] = Rat(0);
    rep.kernel = char_dist_at_point(S, origin);

    // At the origin the contact kernel is spanned by the q- and
    // p-directions; compare spans by stacked rank.
    if (!rep.kernel.empty()) {
        const ChartPtr& rc = rep.kernel[0][0].chart();
        const size_t dim = F.s_chart->dim();
        std::vector<std::vector<Scalar>> expected;
        for (int i = 1; i <= 2 * F.n; ++i) {
            std::vector<Scalar> row(dim, Scalar::zero(rc));
            row[static_cast<size_t>(i)] = Scalar::one(rc); // q_i then p_i slots
            expected.push_back(std::move(row));
        }
        auto rank_of = [&](const std::vector<std::vector<Scalar>>& rows) {
            Mat m(rc, rows.size(), dim);
            for (size_t r = 0; r < rows.size(); ++r)
                for (size_t cidx = 0; cidx < dim; ++cidx) m.at(r, cidx) = rows[r][cidx];
            return rank_generic(m);
        };
        std::vector<std::vector<Scalar>> stacked = rep.kernel;
        stacked.insert(stacked.end(), expected.begin(), expected.end());
        size_t rk = rank_of(rep.kernel);
        rep.kernel_is_contact =
            rk == expected.size() && rank_of(expected) == rk && rank_of(stacked) == rk;
    }

    RatPoint boundary{{"s", Rat(0)}};
    for (const char* expr :
         {"1", "s", "s*u", "s*(q1+p1^2)", "u", "q1", "p1", "u+s*q1", "s^2*u*p1"}) {
        Scalar f = parse_scalar(expr, F.s_chart);
        rep.basics.emplace_back(expr, boundary_basic(S, boundary, f));
    }
    return rep;
}

KVector linearize_at_point(const KVector& T, const RatPoint& p) {
    const ChartPtr& c = T.chart();
    Bindings at;
    for (uint32_t i = 0; i < c->dim(); ++i) {
        const std::string& name = c->coord(i).name;
        auto it = p.find(name);
        if (it == p.end())
            fail(Errc::ValidationError, "linearization point does not bind " + name);
        at[name] = Scalar::rational(c, it->second);
    }

    KVector out = KVector::zero(c, T.degree());
    for (const auto& [idx, coeff] : T.terms()) {
        if (subst(Scalar::from_poly(coeff.den()), c, at).is_zero())
            fail(Errc::NonPolynomialAtPoint,
                 "coefficient denominator vanishes at the point: " + coeff.str());
        Scalar lin = subst(coeff, c, at);
        for (uint32_t i = 0; i < c->dim(); ++i) {
            const std::string& name = c->coord(i).name;
            Scalar slope = subst(coeff.diff(name), c, at);
            if (slope.is_zero()) continue;
            lin = lin + slope * (gen(c, name) - Scalar::rational(c, p.at(name)));
        }
        if (!lin.is_zero()) out.add_term(idx, lin);
    }
    return out;
}

ChartPtr pinched_chart(const ChartPtr& polar, const std::string& radial,
                       const std::string& angular) {
    if (polar->coord_index(radial) < 0)
        fail(Errc::UnknownCoordinate, "no radial coordinate " + radial);
    if (polar->coord_index(angular) < 0)
        fail(Errc::UnknownCoordinate, "no angular coordinate " + angular);
    if (polar->has_coord("x") || polar->has_coord("y"))
        fail(Errc::ValidationError, "rectangular names x, y are already taken");
    if (!polar->units().empty())
        fail(Errc::ValidationError, "exponential units do not survive the radial square map");
    std::vector<Coord> cs;
    for (uint32_t i = 0; i < polar->dim(); ++i) {
        const Coord& co = polar->coord(i);
        if (co.name == radial || co.name == angular) continue;
        cs.push_back(co);
    }
    cs.push_back({"x"});
    cs.push_back({"y"});
    return Chart::make(polar->name() + "_rect", cs);
}

KVector pinch_multivector(const KVector& T, const std::string& radial,
                          const std::string& angular, const ChartPtr& rect) {
    const ChartPtr& polar = T.chart();
    int ri = polar->coord_index(radial);
    int ti = polar->coord_index(angular);
    if (ri < 0) fail(Errc::UnknownCoordinate, "no radial coordinate " + radial);
    if (ti < 0) fail(Errc::UnknownCoordinate, "no angular coordinate " + angular);

    Scalar x = gen(rect, "x");
    Scalar y = gen(rect, "y");
    Scalar rr = x * x + y * y;
    Scalar two = Scalar::rational(rect, Rat(2));

    // Image of each coordinate direction under the radial square map.
    std::vector<KVector> img;
    for (uint32_t i = 0; i < polar->dim(); ++i) {
        if (static_cast<int>(i) == ri) {
            KVector v = KVector::basis(rect, "x").scaled(x / (two * rr)) +
                        KVector::basis(rect, "y").scaled(y / (two * rr));
            img.push_back(std::move(v));
        } else if (static_cast<int>(i) == ti) {
            img.push_back(KVector::basis(rect, "y").scaled(x) -
                          KVector::basis(rect, "x").scaled(y));
        } else {
            img.push_back(KVector::basis(rect, polar->coord(i).name));
        }
    }

    Bindings move;
    move[radial] = rr;
    move[angular] = Scalar::zero(rect);

    KVector out = KVector::zero(rect, T.degree());
    for (const auto& [idx, coeff] : T.terms()) {
        if (!coeff.diff(angular).is_zero())
            fail(Errc::FractionalPowerResidue,
                 "coefficient depends on the angular coordinate: " + coeff.str());
        Scalar moved = subst(coeff, rect, move);
        if (idx.empty()) {
            out.add_term({}, moved);
        } else if (idx.size() == 1) {
            out = out + img[idx[0]].scaled(moved);
        } else {
            out = out + wedge(img[idx[0]], img[idx[1]]).scaled(moved);
        }
    }

    for (const auto& [idx, coeff] : out.terms()) {
        (void)idx;
        if (!(Scalar::from_poly(coeff.den()) == Scalar::one(rect)))
            fail(Errc::FractionalPowerResidue,
                 "denominator survives the radial square substitution: " + coeff.str());
    }
    return out;
}

PinchedPair pinch_pair(const KVector& biv, const KVector& vec, const std::string& radial,
                       const std::string& angular, const ChartPtr& rect) {
    require_same_chart(biv.chart(), vec.chart(), "pinch_pair");
    PinchedPair out{pinch_multivector(biv, radial, angular, rect),
                    pinch_multivector(vec, radial, angular, rect),
                    pinch_multivector(KVector::basis(biv.chart(), angular), radial, angular, rect),
                    RatPoint{{"x", Rat(0)}, {"y", Rat(0)}}, false};
    ChartPtr slice = rect->sliced(out.center);
    bool all_zero = true;
    for (const auto& [idx, coeff] : out.degeneracy.terms()) {
        (void)idx;
        if (!restrict_at(coeff, out.center, slice).is_zero()) all_zero = false;
    }
    out.center_verified = all_zero;
    return out;
}

JacobiPair conformal_transform(const JacobiPair& J, const Scalar& f) {
    require_same_chart(J.lam.chart(), f.chart(), "conformal_transform");
    Scalar inv = Scalar::one(f.chart()) / f;
    return JacobiPair{J.lam.scaled(inv), J.E.scaled(inv) - lambda_tilde(J.lam, d(inv))};
}

ContactReport contact_check(const JacobiPair& J, const RatPoint& p) {
    const ChartPtr& c = J.lam.chart();
    for (uint32_t i = 0; i < c->dim(); ++i)
        if (!p.count(c->coord(i).name))
            fail(Errc::ValidationError, "sample point does not bind " + c->coord(i).name);
    if (!c->point_in_domain(p)) fail(Errc::PointOutsideDomain, "sample point " + point_str(p));
    ChartPtr residue = c->sliced(p);
    const size_t n = c->dim();

    auto lam = [&](uint32_t i, uint32_t j) -> Scalar {
        if (i == j) return Scalar::zero(c);
        if (i < j) return J.lam.coeff({i, j});
        return -J.lam.coeff({j, i});
    };

    Mat m(residue, n + 1, n + 1);
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = 0; j < n; ++j) m.at(i, j) = restrict_at(lam(i, j), p, residue);
        m.at(i, n) = restrict_at(-J.E.coeff({i}), p, residue);
        m.at(n, i) = restrict_at(J.E.coeff({i}), p, residue);
    }

    ContactReport rep(residue);
    rep.det = fraction_det(m);
    rep.nondegenerate = !rep.det.is_zero();
    return rep;
}

} // namespace dj
