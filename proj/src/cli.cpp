#include "qtorus/cli.hpp"
#include "qtorus/dedekind.hpp"
#include "qtorus/error.hpp"
#include "qtorus/foliation.hpp"
#include "qtorus/fukaya.hpp"
#include "qtorus/legendre.hpp"
#include "qtorus/modular.hpp"
#include "qtorus/moyal.hpp"
#include "qtorus/suites.hpp"
#include "qtorus/theta.hpp"
#include "qtorus/weyl.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace qtorus::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Outcome {
    Json body;
    bool verified = true;
};

using Handler = std::function<Outcome(const RunConfig &)>;
using Installer = std::function<Handler(CLI::App &)>;

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

template <class T, class F>
std::vector<T> parse_list(const std::string &flag, const std::string &text, F &&parse) {
    std::vector<T> out;
    try {
        for (const auto &item : split(text, ',')) out.push_back(parse(item));
    } catch (const std::exception &e) {
        throw UsageError(flag + ": cannot parse '" + text + "' (" + e.what() + ")");
    }
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
}

LatticeVector ints(const std::string &flag, const std::string &text) {
    return parse_list<std::int64_t>(flag, text, [](const std::string &s) {
        std::size_t used = 0;
        const auto v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("not an integer");
        return v;
    });
}

std::vector<Rational> rationals(const std::string &flag, const std::string &text) {
    return parse_list<Rational>(flag, text, [](const std::string &s) { return parse_rational(s); });
}

Rational rational(const std::string &flag, const std::string &text) {
    const auto v = rationals(flag, text);
    if (v.size() != 1) throw UsageError(flag + ": expected one value");
    return v.front();
}

/// Inline JSON, or a path to a JSON file.
Json load_json(const std::string &flag, const std::string &text) {
    const auto start = text.find_first_not_of(" \t\n");
    try {
        if (start != std::string::npos && std::string("[{\"").find(text[start]) != std::string::npos) return Json::parse(text);
        std::ifstream in(text);
        if (!in) throw UsageError(flag + ": no such file '" + text + "'");
        return Json::parse(in);
    } catch (const Json::exception &e) {
        throw UsageError(flag + ": invalid JSON (" + e.what() + ")");
    }
}

/// JSON rows, or "a,b;c,d" row-major.
template <class T, class F>
Matrix<T> matrix(const std::string &flag, const std::string &text, F &&parse) {
    std::vector<std::vector<T>> rows;
    try {
        if (!text.empty() && text.front() == '[') {
            for (const auto &row : Json::parse(text)) {
                rows.emplace_back();
                for (const auto &x : row) rows.back().push_back(parse(x.is_string() ? x.get<std::string>() : x.dump()));
            }
        } else {
            for (const auto &row : split(text, ';')) rows.push_back(parse_list<T>(flag, row, parse));
        }
    } catch (const Json::exception &e) {
        throw UsageError(flag + ": invalid matrix (" + e.what() + ")");
    }
    if (rows.empty()) throw UsageError(flag + ": empty matrix");
    Matrix<T> m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw UsageError(flag + ": rows have different lengths");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

SkewForm skew(const std::string &flag, const std::string &text) {
    try {
        return SkewForm(matrix<Rational>(flag, text, [](const std::string &s) { return parse_rational(s); }));
    } catch (const Error &e) {
        throw UsageError(flag + ": " + e.what());
    }
}

NumericElement element(const std::string &flag, const std::string &text) {
    try {
        return element_from_json(load_json(flag, text));
    } catch (const Error &e) {
        throw UsageError(flag + ": " + e.what());
    } catch (const Json::exception &e) {
        throw UsageError(flag + ": " + e.what());
    }
}

// ---------------------------------------------------------------- output helpers

std::string dec(Real x, const RunConfig &c) { return to_decimal(x, c.precision); }

Json complex_json(Complex z, const RunConfig &c) { return Json{{"re", dec(z.real(), c)}, {"im", dec(z.imag(), c)}}; }

template <class T, class F>
Json matrix_json(const Matrix<T> &m, F &&render) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(render(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Json rational_matrix(const Matrix<Rational> &m) {
    return matrix_json(m, [](const Rational &x) { return to_string(x); });
}

Json integer_matrix(const Matrix<Integer> &m) {
    return matrix_json(m, [](const Integer &x) { return x.get_str(); });
}

Json series_json(const QSeries &s) {
    Json j = Json::array();
    for (const auto &c : s.coefficients()) j.push_back(to_string(c));
    return j;
}

Json fourier_json(const TorusFourierSeries &f, const RunConfig &c) {
    Json terms = Json::array();
    for (const auto &[m, z] : f.terms()) terms.push_back(Json{{"m", m}, {"re", dec(z.real(), c)}, {"im", dec(z.imag(), c)}});
    return terms;
}

TorusFourierSeries fourier(const std::string &flag, const std::string &text) {
    TorusFourierSeries f;
    try {
        for (const auto &t : load_json(flag, text)) f.add_term(t.at("m").get<LatticeVector>(), Complex(real_from_json(t.at("re")), real_from_json(t.at("im"))));
    } catch (const Json::exception &e) {
        throw UsageError(flag + ": expected [{m, re, im}] (" + e.what() + ")");
    }
    return f;
}

// Monodromy: {"phi": "0.6", "rank": r, "monodromy": [{"k": int, "re": [[..]], "im": [[..]]}]}
std::map<int, CMatrix> trig_terms(const Json &terms, std::size_t rank) {
    std::map<int, CMatrix> out;
    const auto r = static_cast<Eigen::Index>(rank);
    for (const auto &t : terms) {
        CMatrix m(r, r);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < r; ++j)
                m(i, j) = {static_cast<double>(real_from_json(t.at("re").at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)))),
                           static_cast<double>(real_from_json(t.at("im").at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j))))};
        out.emplace(t.at("k").get<int>(), m);
    }
    return out;
}

Json trig_json(const TrigMatrix &m, const RunConfig &c) {
    Json terms = Json::array();
    for (const auto &[k, a] : m.coefficients()) {
        Json re = Json::array(), im = Json::array();
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            Json rr = Json::array(), ii = Json::array();
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                rr.push_back(to_decimal(a(i, j).real(), c.precision));
                ii.push_back(to_decimal(a(i, j).imag(), c.precision));
            }
            re.push_back(rr);
            im.push_back(ii);
        }
        terms.push_back(Json{{"k", k}, {"re", re}, {"im", im}});
    }
    return terms;
}

SmallModule small_module(const std::string &flag, const std::string &text) {
    const Json j = load_json(flag, text);
    try {
        const auto rank = j.at("rank").get<std::size_t>();
        return SmallModule(TrigMatrix(rank, trig_terms(j.at("monodromy"), rank)), static_cast<double>(real_from_json(j.at("phi"))));
    } catch (const Json::exception &e) {
        throw UsageError(flag + ": expected {phi, rank, monodromy} (" + e.what() + ")");
    }
}

Json module_json(const SmallModule &m, const RunConfig &c) {
    return Json{{"phi", to_decimal(m.phi(), c.precision)}, {"rank", m.rank()}, {"monodromy", trig_json(m.monodromy(), c)}};
}

Json certificate_json(const InvertibilityCertificate &cert, const RunConfig &c) {
    return Json{{"min_abs_det", to_decimal(cert.min_abs_det, c.precision)},
                {"margin", to_decimal(cert.margin, c.precision)},
                {"certified", cert.certified()}};
}

Section constant_section(std::size_t rank) { return Section{rank, {{0, CVector::Ones(static_cast<Eigen::Index>(rank))}}}; }

Grid grid_from(const Json &j) {
    return Grid(j.at("lo").get<std::vector<double>>(), j.at("hi").get<std::vector<double>>(),
                j.at("points").get<std::vector<std::size_t>>());
}

Json grid_json(const Grid &g, const RunConfig &c) {
    Json lo = Json::array(), hi = Json::array(), points = Json::array();
    for (std::size_t i = 0; i < g.dim(); ++i) {
        lo.push_back(to_decimal(g.point(0)(static_cast<Eigen::Index>(i)), c.precision));
        hi.push_back(to_decimal(g.point(g.size() - 1)(static_cast<Eigen::Index>(i)), c.precision));
        points.push_back(g.points(i));
    }
    return Json{{"lo", lo}, {"hi", hi}, {"points", points}};
}

// {"grid": {lo, hi, points}, "values": [..]} or "function": {"a": [[..]], "b": [..], "c": x} for
// the quadratic 1/2 x^T a x + b.x + c sampled on the grid.
ConvexGridFunction grid_function(const std::string &flag, const Json &j) {
    try {
        const Grid grid = grid_from(j.at("grid"));
        if (j.contains("values")) {
            std::vector<double> values;
            for (const auto &v : j.at("values")) values.push_back(static_cast<double>(real_from_json(v)));
            if (values.size() != grid.size()) throw UsageError(flag + ": values do not match the grid size");
            return {grid, values};
        }
        const auto &f = j.at("function");
        const auto n = static_cast<Eigen::Index>(grid.dim());
        Eigen::MatrixXd a(n, n);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index s = 0; s < n; ++s)
                a(r, s) = static_cast<double>(real_from_json(f.at("a").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(s))));
        if (f.contains("b"))
            for (Eigen::Index r = 0; r < n; ++r) b(r) = static_cast<double>(real_from_json(f.at("b").at(static_cast<std::size_t>(r))));
        const double c = f.contains("c") ? static_cast<double>(real_from_json(f.at("c"))) : 0.0;
        return ConvexGridFunction::sample(grid, [&](const Eigen::VectorXd &x) { return 0.5 * x.dot(a * x) + b.dot(x) + c; });
    } catch (const Json::exception &e) {
        throw UsageError(flag + ": expected {grid, values | function} (" + e.what() + ")");
    }
}

Json values_json(const ConvexGridFunction &h, const RunConfig &c) {
    Json v = Json::array();
    for (double x : h.values) v.push_back(to_decimal(x, c.precision));
    return v;
}

ThetaParams theta_params(std::size_t d, const std::string &omega, const std::string &l, const std::string &phi) {
    const auto entries = parse_list<GaussianRational>("--omega", omega, [](const std::string &s) { return parse_gaussian(s); });
    if (entries.size() != d * d) throw UsageError("--omega: expected " + std::to_string(d * d) + " entries");
    Matrix<GaussianRational> m(d, d);
    for (std::size_t i = 0; i < d * d; ++i) m(i / d, i % d) = entries[i];
    const auto lin = l.empty() ? std::vector<Rational>(d, Rational(0)) : rationals("--l", l);
    if (lin.size() != d) throw UsageError("--l: expected " + std::to_string(d) + " entries");
    const SkewForm form = phi.empty() ? SkewForm::zero(d) : skew("--phi", phi);
    if (form.dim() != d) throw UsageError("--phi: expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
    return ThetaParams(m, lin, form);
}

MoyalParams moyal_params(const std::string &omega, Real hbar) {
    const Matrix<Rational> w = omega.empty() ? Matrix<Rational>{{0, 1}, {-1, 0}}
                                             : matrix<Rational>("--omega", omega, [](const std::string &s) { return parse_rational(s); });
    if (w.rows() % 2 != 0) throw UsageError("--omega: dimension must be even");
    return MoyalParams(w.rows() / 2, w, hbar);
}

GaussianSymbol gaussian_symbol(const std::string &flag, const std::string &text) {
    const Json j = load_json(flag, text);
    GaussianSymbol g;
    try {
        for (std::size_t i = 0; i < 2; ++i) {
            if (j.contains("width")) g.width[i] = real_from_json(j.at("width").at(i));
            if (j.contains("center")) g.center[i] = real_from_json(j.at("center").at(i));
            if (j.contains("mode")) g.mode[i] = real_from_json(j.at("mode").at(i));
        }
    } catch (const Json::exception &e) {
        throw UsageError(flag + ": expected {width, center, mode} (" + e.what() + ")");
    }
    return g;
}

FukayaLine fukaya_line(const std::string &flag, const std::string &text) {
    const Json j = load_json(flag, text);
    try {
        const auto dir = j.at("direction").get<std::vector<std::int64_t>>();
        if (dir.size() != 2) throw UsageError(flag + ": direction needs two entries");
        Point2 offset{Rational(0), Rational(0)};
        if (j.contains("offset")) offset = {rational_from_json(j.at("offset").at(0)), rational_from_json(j.at("offset").at(1))};
        const Rational hol = j.contains("holonomy") ? rational_from_json(j.at("holonomy")) : Rational(0);
        return FukayaLine({dir[0], dir[1]}, offset, hol);
    } catch (const Json::exception &e) {
        throw UsageError(flag + ": expected {direction, offset?, holonomy?} (" + e.what() + ")");
    }
}

Point2 point2(const std::string &flag, const std::string &text) {
    const auto v = rationals(flag, text);
    if (v.size() != 2) throw UsageError(flag + ": expected two coordinates");
    return {v[0], v[1]};
}

WeylLine weyl_line(const std::string &flag, const std::string &text) {
    const auto v = rationals(flag, text);
    if (v.size() != 2 && v.size() != 3) throw UsageError(flag + ": expected alpha,beta[,offset]");
    try {
        return WeylLine(v[0], v[1], v.size() == 3 ? v[2] : Rational(0));
    } catch (const Error &e) {
        throw UsageError(flag + ": " + e.what());
    }
}

// ---------------------------------------------------------------- commands

template <class Opts>
std::shared_ptr<Opts> opts() {
    return std::make_shared<Opts>();
}

Handler morita_graph(CLI::App &app) {
    auto o = std::make_shared<std::string>();
    app.add_option("--phi", *o, "skew form, JSON rows or 'a,b;c,d'")->required();
    return [o](const RunConfig &) {
        const auto g = graph_of(skew("--phi", *o));
        Json basis = Json::array();
        for (const auto &v : g.basis) {
            Json row = Json::array();
            for (const auto &x : v) row.push_back(to_string(x));
            basis.push_back(row);
        }
        return Outcome{Json{{"basis", basis}, {"dimension", g.dimension()}, {"isotropic", g.isotropic()}}, g.isotropic()};
    };
}

Handler morita_act(CLI::App &app) {
    struct O { std::string g, phi; };
    auto o = opts<O>();
    app.add_option("--g", o->g, "2d x 2d integer matrix")->required();
    app.add_option("--phi", o->phi, "skew form")->required();
    return [o](const RunConfig &) {
        const auto m = matrix<Integer>("--g", o->g, [](const std::string &s) { return Integer(s); });
        std::optional<OddSymplecticMatrix> g;
        try {
            g.emplace(m);
        } catch (const Error &e) {
            throw UsageError(std::string("--g: ") + e.what());
        }
        const auto image = act(*g, skew("--phi", o->phi));
        return Outcome{Json{{"phi", skew_to_json(image)}, {"special", g->special()}}};
    };
}

Handler morita_generators(CLI::App &app) {
    auto d = std::make_shared<std::size_t>(2);
    app.add_option("--d", *d, "lattice rank")->check(CLI::Range(1, 8));
    return [d](const RunConfig &) {
        Json list = Json::array();
        bool ok = true;
        for (const auto &g : standard_generators(*d)) {
            ok = ok && preserves_odd_form(g.matrix());
            list.push_back(Json{{"matrix", integer_matrix(g.matrix())}, {"special", g.special()}});
        }
        return Outcome{Json{{"d", *d}, {"generators", list}, {"preserve_odd_form", ok}}, ok};
    };
}

Handler qtorus_multiply(CLI::App &app) {
    struct O { std::string x, y; };
    auto o = opts<O>();
    app.add_option("--x", o->x, "element JSON or file")->required();
    app.add_option("--y", o->y, "element JSON or file")->required();
    return [o](const RunConfig &c) {
        return Outcome{element_to_json(multiply(element("--x", o->x), element("--y", o->y), Execution::parallel), c.precision)};
    };
}

Handler qtorus_star(CLI::App &app) {
    auto x = std::make_shared<std::string>();
    app.add_option("--x", *x, "element JSON or file")->required();
    return [x](const RunConfig &c) { return Outcome{element_to_json(star(element("--x", *x)), c.precision)}; };
}

Handler qtorus_sl2z(CLI::App &app) {
    struct O { std::string g, x; };
    auto o = opts<O>();
    app.add_option("--g", o->g, "a,b,c,d")->required();
    app.add_option("--x", o->x, "rank-2 element")->required();
    return [o](const RunConfig &c) {
        const auto v = ints("--g", o->g);
        if (v.size() != 4) throw UsageError("--g: expected a,b,c,d");
        return Outcome{element_to_json(sl2z_automorphism({v[0], v[1], v[2], v[3]}, element("--x", o->x)), c.precision)};
    };
}

Handler qtorus_point(CLI::App &app) {
    struct O { std::string t, x; };
    auto o = opts<O>();
    app.add_option("--t", o->t, "character values on basis vectors, e.g. 0+1i,1")->required();
    app.add_option("--x", o->x, "element")->required();
    return [o](const RunConfig &c) {
        const auto values = parse_list<Complex>("--t", o->t, [](const std::string &s) { return parse_complex(s); });
        const PointAutomorphism<Complex> t(values);
        return Outcome{Json{{"element", element_to_json(apply_point_automorphism(t, element("--x", o->x)), c.precision)},
                            {"unitary", t.unitary()}}};
    };
}

Handler qtorus_truncate(CLI::App &app) {
    struct O { std::string x; std::int64_t radius = 1; };
    auto o = opts<O>();
    app.add_option("--x", o->x, "element")->required();
    app.add_option("--radius", o->radius, "sup-norm radius")->required()->check(CLI::NonNegativeNumber);
    return [o](const RunConfig &c) {
        const auto t = smooth_truncate(element("--x", o->x), o->radius);
        return Outcome{Json{{"element", element_to_json(t, c.precision)}, {"sup_norm_bound", dec(sup_norm_bound(t), c)}}};
    };
}

struct ThetaOpts {
    std::size_t d = 1;
    std::string omega, l, phi;
};

void theta_flags(CLI::App &app, ThetaOpts &o) {
    app.add_option("--d", o.d, "rank")->required()->check(CLI::Range(1, 4));
    app.add_option("--omega", o.omega, "row-major Gaussian rationals, e.g. 0+2i")->required();
    app.add_option("--l", o.l, "linear term, comma separated");
    app.add_option("--phi", o.phi, "skew form");
}

Handler theta_series_cmd(CLI::App &app) {
    struct O : ThetaOpts { std::int64_t radius = 4; };
    auto o = opts<O>();
    theta_flags(app, *o);
    app.add_option("--radius", o->radius)->required()->check(CLI::PositiveNumber);
    return [o](const RunConfig &c) {
        const auto s = theta_series(theta_params(o->d, o->omega, o->l, o->phi), o->radius);
        return Outcome{Json{{"element", element_to_json(s.element, c.precision)}, {"tail_bound", dec(s.tail_bound, c)}}};
    };
}

Handler theta_txi(CLI::App &app) {
    struct O : ThetaOpts { std::string xi, x; };
    auto o = opts<O>();
    theta_flags(app, *o);
    app.add_option("--xi", o->xi)->required();
    app.add_option("--x", o->x, "element")->required();
    return [o](const RunConfig &c) {
        return Outcome{element_to_json(t_xi(ints("--xi", o->xi), element("--x", o->x), theta_params(o->d, o->omega, o->l, o->phi)),
                                       c.precision)};
    };
}

Handler theta_verify(CLI::App &app) {
    struct O : ThetaOpts { std::string xi; std::int64_t radius = 8; };
    auto o = opts<O>();
    theta_flags(app, *o);
    app.add_option("--xi", o->xi)->required();
    app.add_option("--radius", o->radius)->check(CLI::PositiveNumber);
    return [o](const RunConfig &c) {
        const auto r = verify_transformation_law(theta_params(o->d, o->omega, o->l, o->phi), ints("--xi", o->xi), o->radius);
        const double tol = c.tolerance("theta.law", default_tolerances().at("theta.law"));
        return Outcome{Json{{"convention", to_string(r.convention)},
                            {"window", r.window},
                            {"max_discrepancy", dec(r.max_discrepancy, c)},
                            {"tail_bound", dec(r.tail_bound, c)}},
                       r.max_discrepancy <= tol};
    };
}

Handler moyal_product(CLI::App &app) {
    struct O { std::string f, g, omega, hbar = "0.1"; int kappa = kMoyalModeScale; };
    auto o = opts<O>();
    app.add_option("--f", o->f, "[{m, re, im}]")->required();
    app.add_option("--g", o->g, "[{m, re, im}]")->required();
    app.add_option("--hbar", o->hbar);
    app.add_option("--omega", o->omega, "2n x 2n symplectic form, default [[0,1],[-1,0]]");
    app.add_option("--kappa", o->kappa)->check(CLI::IsMember({-2, -1, 1, 2}));
    return [o](const RunConfig &c) {
        const auto p = moyal_params(o->omega, parse_real(o->hbar));
        return Outcome{Json{{"product", fourier_json(moyal_mode_product(fourier("--f", o->f), fourier("--g", o->g), p, o->kappa), c)}}};
    };
}

Handler moyal_oracle(CLI::App &app) {
    struct O { std::string f, g, hbar = "0.5", x = "0,0"; };
    auto o = opts<O>();
    app.add_option("--f", o->f, "{width, center, mode}")->required();
    app.add_option("--g", o->g, "{width, center, mode}")->required();
    app.add_option("--hbar", o->hbar);
    app.add_option("--x", o->x, "sample point x1,x2");
    return [o](const RunConfig &c) {
        const auto p = moyal_params("", parse_real(o->hbar));
        const auto xs = parse_list<Real>("--x", o->x, [](const std::string &s) { return parse_real(s); });
        if (xs.size() != 2) throw UsageError("--x: expected two coordinates");
        const auto f = gaussian_symbol("--f", o->f), g = gaussian_symbol("--g", o->g);
        const Complex q = moyal_quadrature_oracle(f, g, p, {xs[0], xs[1]});
        const Complex pred = mode_product_prediction(f, g, p, {xs[0], xs[1]}, kMoyalModeScale);
        return Outcome{Json{{"quadrature", complex_json(q, c)},
                            {"mode_product", complex_json(pred, c)},
                            {"relative_mismatch", dec(std::abs(q - pred) / std::max(Real(1e-300), std::abs(q)), c)}}};
    };
}

Handler moyal_check(CLI::App &app) {
    struct O { std::string f, g; };
    auto o = opts<O>();
    app.add_option("--f", o->f)->required();
    app.add_option("--g", o->g)->required();
    return [o](const RunConfig &c) {
        std::vector<Real> hbars;
        for (int k = 0; k <= 9; ++k) hbars.push_back(std::pow(Real(10), -1 - Real(k) / 3));
        const auto r = semiclassical_check(fourier("--f", o->f), fourier("--g", o->g), moyal_params("", 0.1L), hbars);
        Json h = Json::array(), e = Json::array();
        for (std::size_t i = 0; i < r.hbars.size(); ++i) {
            h.push_back(dec(r.hbars[i], c));
            e.push_back(dec(r.errors[i], c));
        }
        const double tol = c.tolerance("moyal.order", default_tolerances().at("moyal.order"));
        return Outcome{Json{{"hbars", h}, {"errors", e}, {"order", dec(r.order, c)}}, std::abs(r.order - 2) <= tol};
    };
}

Handler fukaya_area(CLI::App &app) {
    struct O { std::string a, b, c, omega = "1"; };
    auto o = opts<O>();
    app.add_option("--a", o->a, "x,y")->required();
    app.add_option("--b", o->b, "x,y")->required();
    app.add_option("--c", o->c, "x,y")->required();
    app.add_option("--omega", o->omega);
    return [o](const RunConfig &) {
        return Outcome{Json{{"area", to_string(triangle_area(point2("--a", o->a), point2("--b", o->b), point2("--c", o->c),
                                                              rational("--omega", o->omega)))}}};
    };
}

Handler fukaya_m2(CLI::App &app) {
    struct O { std::string l1, l2, l3, rho = "0+1i", cutoff = "8"; };
    auto o = opts<O>();
    app.add_option("--l1", o->l1, "{direction, offset, holonomy}")->required();
    app.add_option("--l2", o->l2)->required();
    app.add_option("--l3", o->l3)->required();
    app.add_option("--rho", o->rho, "complexified area, Gaussian rational");
    app.add_option("--cutoff", o->cutoff, "area cutoff");
    return [o](const RunConfig &c) {
        const auto s = m2_series(fukaya_line("--l1", o->l1), fukaya_line("--l2", o->l2), fukaya_line("--l3", o->l3),
                                 parse_gaussian(o->rho), rational("--cutoff", o->cutoff));
        Json entries = Json::array();
        for (const auto &e : s.entries) {
            Json points = Json::array();
            for (const auto &p : e.points) points.push_back({to_string(p[0]), to_string(p[1])});
            Json areas = Json::array();
            for (const auto &t : e.terms) areas.push_back(Json{{"area", to_string(t.area)}, {"phase", to_string(t.phase)}});
            entries.push_back(Json{{"points", points}, {"terms", areas}, {"partial_sum", complex_json(e.partial_sum, c)}});
        }
        return Outcome{Json{{"entries", entries}, {"tail_bound", dec(s.tail_bound, c)}, {"min_area_gap", to_string(s.min_area_gap)}}};
    };
}

struct ModuleOpts {
    std::string input;
    int steps = 4096;
};

void module_flags(CLI::App &app, ModuleOpts &o) {
    app.add_option("--input", o.input, "{phi, rank, monodromy: [{k, re, im}]} JSON or file")->required();
    app.add_option("--steps", o.steps, "transport steps per unit time")->check(CLI::Range(8, 1 << 24));
}

Handler foliation_local_system(CLI::App &app) {
    auto o = opts<ModuleOpts>();
    module_flags(app, *o);
    return [o](const RunConfig &c) {
        const auto v = to_local_system(small_module("--input", o->input), o->steps);
        return Outcome{Json{{"rank", v.rank},
                            {"phi", to_decimal(v.phi, c.precision)},
                            {"transport_slope", to_decimal(v.transport_slope, c.precision)},
                            {"steps", v.steps},
                            {"gluing", trig_json(v.gluing, c)},
                            {"quasi_periodicity_residual", to_decimal(quasi_periodicity_residual(v, constant_section(v.rank)), c.precision)}}};
    };
}

Handler foliation_holonomy(CLI::App &app) {
    auto input = std::make_shared<std::string>();
    app.add_option("--input", *input, "local system JSON as printed by `foliation local-system`")->required();
    return [input](const RunConfig &c) {
        const Json j = load_json("--input", *input);
        FLocalSystem v;
        try {
            v.rank = j.at("rank").get<std::size_t>();
            v.phi = static_cast<double>(real_from_json(j.at("phi")));
            v.transport_slope = static_cast<double>(real_from_json(j.at("transport_slope")));
            v.steps = j.at("steps").get<int>();
            v.gluing = TrigMatrix(v.rank, trig_terms(j.at("gluing"), v.rank));
        } catch (const Json::exception &e) {
            throw UsageError(std::string("--input: expected {rank, phi, transport_slope, steps, gluing} (") + e.what() + ")");
        }
        return Outcome{module_json(holonomy(v), c)};
    };
}

Handler foliation_roundtrip(CLI::App &app) {
    auto o = opts<ModuleOpts>();
    module_flags(app, *o);
    return [o](const RunConfig &c) {
        const double tol = c.tolerance("foliation.roundtrip", default_tolerances().at("foliation.roundtrip"));
        const auto r = round_trip(small_module("--input", o->input), o->steps, tol);
        return Outcome{Json{{"residual", to_decimal(r.residual, c.precision)},
                            {"gauge", trig_json(r.gauge, c)},
                            {"certificate", certificate_json(r.certificate, c)}},
                       r.residual <= tol};
    };
}

Handler weyl_module(CLI::App &app) {
    struct O { std::string line, hbar = "1"; std::size_t cutoff = 4; };
    auto o = opts<O>();
    app.add_option("--line", o->line, "alpha,beta[,offset]")->required();
    app.add_option("--hbar", o->hbar);
    app.add_option("--cutoff", o->cutoff)->check(CLI::Range(2, 512));
    return [o](const RunConfig &) {
        const auto m = module_of_line(weyl_line("--line", o->line), o->cutoff, rational("--hbar", o->hbar));
        const auto defect = m.interior_commutator_defect();
        bool zero = true;
        for (std::size_t i = 0; i < defect.rows(); ++i)
            for (std::size_t j = 0; j < defect.cols(); ++j) zero = zero && defect(i, j) == 0;
        return Outcome{Json{{"p", rational_matrix(m.p)}, {"q", rational_matrix(m.q)}, {"interior_commutator_is_hbar", zero}}, zero};
    };
}

Handler weyl_ext(CLI::App &app) {
    struct O { std::string line1, line2, hbar = "1"; std::size_t cutoff = 64; };
    auto o = opts<O>();
    app.add_option("--line1", o->line1, "alpha,beta[,offset]")->required();
    app.add_option("--line2", o->line2, "alpha,beta[,offset]")->required();
    app.add_option("--hbar", o->hbar);
    app.add_option("--cutoff", o->cutoff)->check(CLI::Range(4, 512));
    return [o](const RunConfig &) {
        const auto r = ext_dims(weyl_line("--line1", o->line1), weyl_line("--line2", o->line2), o->cutoff, rational("--hbar", o->hbar));
        return Outcome{Json{{"ext0", r.ext0}, {"ext1", r.ext1}, {"stabilized", r.stabilized}}};
    };
}

Handler modular_eisenstein(CLI::App &app) {
    struct O { int k = 2; std::size_t order = 10; };
    auto o = opts<O>();
    app.add_option("--k", o->k, "weight 2, 4 or 6")->required();
    app.add_option("--order", o->order)->check(CLI::Range(1, 10000));
    return [o](const RunConfig &) { return Outcome{Json{{"coefficients", series_json(eisenstein(o->k, o->order))}}}; };
}

Handler modular_character(CLI::App &app) {
    auto partition = std::make_shared<std::string>();
    app.add_option("--partition", *partition, "parts, e.g. 3,1")->required();
    return [partition](const RunConfig &) {
        const auto v = ints("--partition", *partition);
        Partition lambda(v.begin(), v.end());
        for (std::size_t i = 0; i < lambda.size(); ++i)
            if (lambda[i] < 1 || (i > 0 && lambda[i] > lambda[i - 1])) throw UsageError("--partition: parts must be positive and non-increasing");
        return Outcome{Json{{"f", to_string(transposition_character(lambda))}}};
    };
}

Handler modular_series(CLI::App &app) {
    struct O { long genus = 2; std::size_t order = 10; bool disconnected = false, unlabeled = false; };
    auto o = opts<O>();
    app.add_option("--genus", o->genus)->required()->check(CLI::Range(2, 12));
    app.add_option("--order", o->order)->check(CLI::Range(1, 200));
    app.add_flag("--disconnected", o->disconnected, "include disconnected covers");
    app.add_flag("--unlabeled", o->unlabeled, "divide out the ordering of branch points");
    return [o](const RunConfig &) {
        return Outcome{Json{{"coefficients", series_json(covers_series(o->genus, o->order, !o->disconnected, !o->unlabeled))}}};
    };
}

Handler modular_brute(CLI::App &app) {
    struct O { long genus = 2, degree = 2; };
    auto o = opts<O>();
    app.add_option("--genus", o->genus)->required();
    app.add_option("--degree", o->degree)->required();
    return [o](const RunConfig &) {
        if (o->genus < 2 || o->degree < 1) throw UsageError("--genus/--degree: need genus >= 2 and degree >= 1");
        return Outcome{Json{{"genus", o->genus}, {"degree", o->degree}, {"count", to_string(brute_force_covers(o->genus, o->degree))}}};
    };
}

std::string monomial_name(const QuasiModularMonomial &m) {
    std::string s;
    const char *names[] = {"E2", "E4", "E6"};
    for (std::size_t i = 0; i < 3; ++i)
        if (m[i] > 0) s += (s.empty() ? "" : " ") + std::string(names[i]) + (m[i] > 1 ? "^" + std::to_string(m[i]) : "");
    return s.empty() ? "1" : s;
}

Handler modular_fg(CLI::App &app) {
    struct O { long genus = 2; std::size_t order = 20; };
    auto o = opts<O>();
    app.add_option("--genus", o->genus)->required()->check(CLI::Range(2, 12));
    app.add_option("--order", o->order)->check(CLI::Range(1, 200));
    return [o](const RunConfig &) {
        const auto f = covers_series(o->genus, o->order);
        const std::size_t weight = static_cast<std::size_t>(6 * o->genus - 6);
        Json body{{"coefficients", series_json(f)}};
        try {
            const auto d = quasimodular_decompose(f, weight);
            Json basis = Json::array(), coefficients = Json::object();
            for (const auto &m : d.basis.monomials) {
                basis.push_back(monomial_name(m));
                auto it = d.coefficients.find(m);
                coefficients[monomial_name(m)] = to_string(it == d.coefficients.end() ? Rational(0) : it->second);
            }
            body["decomposition"] = coefficients;
            body["basis"] = basis;
            body["surplus_equations"] = d.surplus_equations;
            body["residual_check"] = "exact";
            return Outcome{body};
        } catch (const NoSolutionError &e) {
            body["witness"] = Json{{"index", e.mismatch_index}, {"expected", to_string(e.expected)}, {"reconstructed", to_string(e.reconstructed)}};
            return Outcome{body, false};
        }
    };
}

Handler dedekind_s(CLI::App &app) {
    struct O { long p = 1, q = 1; };
    auto o = opts<O>();
    app.add_option("--p", o->p)->required();
    app.add_option("--q", o->q)->required();
    return [o](const RunConfig &) {
        std::optional<CoprimePair> pair;
        try {
            pair.emplace(o->p, o->q);
        } catch (const Error &e) {
            throw UsageError(std::string("--p/--q: ") + e.what());
        }
        const Rational direct = dedekind_direct(*pair), recursive = dedekind_recursive(*pair);
        return Outcome{Json{{"direct", to_string(direct)}, {"recursive", to_string(recursive)}}, direct == recursive};
    };
}

Handler dedekind_verify(CLI::App &app) {
    auto range = std::make_shared<long>(200);
    app.add_option("--range", *range)->check(CLI::Range(1L, 100000L));
    return [range](const RunConfig &) {
        const auto r = boundary_modularity_check(*range);
        Json failures = Json::array();
        for (const auto &f : r.failures) failures.push_back(Json{{"identity", f.identity}, {"p", f.p}, {"q", f.q}});
        Json body{{"pairs_checked", r.pairs_checked}, {"failures", failures}, {"plus_sign_failures", r.plus_sign_failures}};
        if (r.plus_sign_witness)
            body["plus_sign_witness"] = Json{{"identity", r.plus_sign_witness->identity}, {"p", r.plus_sign_witness->p}, {"q", r.plus_sign_witness->q}};
        return Outcome{body, r.ok() && !r.plus_sign_witness};
    };
}

struct SyzOpts {
    std::string input;
};

Handler syz_legendre(CLI::App &app) {
    auto o = opts<SyzOpts>();
    app.add_option("--input", o->input, "{grid, values | function, dual} JSON or file")->required();
    return [o](const RunConfig &c) {
        const Json j = load_json("--input", o->input);
        const auto h = grid_function("--input", j);
        Grid dual = h.grid;
        if (j.contains("dual")) dual = grid_from(j.at("dual"));
        const auto star = legendre_transform(h, dual);
        return Outcome{Json{{"grid", grid_json(star.grid, c)}, {"values", values_json(star, c)}}};
    };
}

Handler syz_monge_ampere(CLI::App &app) {
    struct O : SyzOpts { std::string c = "1"; };
    auto o = opts<O>();
    app.add_option("--input", o->input, "{grid, values | function}")->required();
    app.add_option("--c", o->c, "right-hand side constant");
    return [o](const RunConfig &c) {
        const auto h = grid_function("--input", load_json("--input", o->input));
        return Outcome{Json{{"residual", to_decimal(monge_ampere_residual(h, static_cast<double>(parse_real(o->c))), c.precision)}}};
    };
}

Handler syz_duality(CLI::App &app) {
    struct O : SyzOpts { std::string c, lambda_max, lambda_min; };
    auto o = opts<O>();
    app.add_option("--input", o->input, "{grid, values | function, dual}")->required();
    app.add_option("--c", o->c, "Monge-Ampere constant, optional");
    app.add_option("--lambda-max", o->lambda_max, "upper Hessian bound")->required();
    app.add_option("--lambda-min", o->lambda_min, "lower Hessian bound")->required();
    return [o](const RunConfig &c) {
        const Json j = load_json("--input", o->input);
        const auto h = grid_function("--input", j);
        Grid dual = h.grid;
        if (j.contains("dual")) dual = grid_from(j.at("dual"));
        std::optional<double> constant;
        if (!o->c.empty()) constant = static_cast<double>(parse_real(o->c));
        const auto r = duality_volume_check(h, dual, constant, static_cast<double>(parse_real(o->lambda_max)),
                                            static_cast<double>(parse_real(o->lambda_min)));
        auto d = [&](double x) { return to_decimal(x, c.precision); };
        Json body{{"hessian_pairing_defect", d(r.hessian_pairing_defect)},
                  {"hessian_pairing_bound", d(r.hessian_pairing_bound)},
                  {"gradient_pairing_defect", d(r.gradient_pairing_defect)},
                  {"gradient_pairing_bound", d(r.gradient_pairing_bound)},
                  {"dual_density_bound", d(r.dual_density_bound)}};
        bool ok = r.hessian_pairing_defect <= r.hessian_pairing_bound && r.gradient_pairing_defect <= r.gradient_pairing_bound;
        if (r.primal_density_residual) body["primal_density_residual"] = d(*r.primal_density_residual);
        if (r.dual_density_residual) {
            body["dual_density_residual"] = d(*r.dual_density_residual);
            ok = ok && *r.dual_density_residual <= r.dual_density_bound;
        }
        return Outcome{body, ok};
    };
}

// verify-all

struct VerifyOpts {
    std::vector<std::string> suites;
};

Handler verify_all(CLI::App &app, const std::shared_ptr<std::size_t> &jobs) {
    auto o = opts<VerifyOpts>();
    app.add_option("--suite", o->suites, "restrict to these suites")->check(CLI::IsMember(suite_names()));
    return [o, jobs](const RunConfig &c) {
        std::vector<std::string> names;
        for (const auto &n : suite_names())
            if (o->suites.empty() || std::find(o->suites.begin(), o->suites.end(), n) != o->suites.end()) names.push_back(n);
        std::vector<SuiteResult> results(names.size());
        std::vector<std::string> errors(names.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next++) < names.size();) {
                try {
                    results[i] = run_suite(names[i], c);
                } catch (const std::exception &e) {
                    results[i] = SuiteResult{names[i], {CaseResult{"suite_completed", false, Json{{"error", e.what()}}, std::nullopt}}};
                }
            }
        };
        const std::size_t n = std::max<std::size_t>(1, std::min(*jobs, names.size()));
        std::vector<std::thread> pool;
        for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
        worker();
        for (auto &t : pool) t.join();
        bool ok = true;
        for (const auto &r : results) ok = ok && r.passed();
        return Outcome{emit_report("verify-all", results, c), ok};
    };
}

struct Entry {
    CommandInfo info;
    std::function<Handler(CLI::App &)> install;
};

const std::vector<Entry> &entries() {
    static const std::vector<Entry> table{
        {{"morita", "graph", {"graph_of"}, {"morita", "graph", "--phi", "0,1/3;-1/3,0"}}, morita_graph},
        {{"morita", "act", {"act"}, {"morita", "act", "--g", "0,0,1,0;0,0,0,1;1,0,0,0;0,1,0,0", "--phi", "0,1/3;-1/3,0"}}, morita_act},
        {{"morita", "generators", {"standard_generators"}, {"morita", "generators", "--d", "2"}}, morita_generators},
        {{"qtorus", "multiply", {"multiply"},
          {"qtorus", "multiply", "--x", R"({"d":2,"phi":[["0","1/3"],["-1/3","0"]],"terms":[{"n":[1,0],"re":"1","im":"0"}]})",
           "--y", R"({"d":2,"phi":[["0","1/3"],["-1/3","0"]],"terms":[{"n":[0,1],"re":"1","im":"0"}]})"}},
         qtorus_multiply},
        {{"qtorus", "star", {"star"},
          {"qtorus", "star", "--x", R"({"d":2,"phi":[["0","1/3"],["-1/3","0"]],"terms":[{"n":[1,2],"re":"1","im":"2"}]})"}},
         qtorus_star},
        {{"qtorus", "sl2z", {"sl2z_automorphism"},
          {"qtorus", "sl2z", "--g", "1,1,0,1", "--x", R"({"d":2,"phi":[["0","1/3"],["-1/3","0"]],"terms":[{"n":[0,1],"re":"1","im":"0"}]})"}},
         qtorus_sl2z},
        {{"qtorus", "point", {"apply_point_automorphism"},
          {"qtorus", "point", "--t", "0+1i,1", "--x", R"({"d":2,"phi":[["0","1/3"],["-1/3","0"]],"terms":[{"n":[1,1],"re":"1","im":"0"}]})"}},
         qtorus_point},
        {{"qtorus", "truncate", {"smooth_truncate", "sup_norm_bound"},
          {"qtorus", "truncate", "--radius", "1", "--x",
           R"({"d":1,"phi":[["0"]],"terms":[{"n":[0],"re":"1","im":"0"},{"n":[3],"re":"0.5","im":"0"}]})"}},
         qtorus_truncate},
        {{"theta", "series", {"theta_series"}, {"theta", "series", "--d", "1", "--omega", "0+1i", "--radius", "3"}}, theta_series_cmd},
        {{"theta", "txi", {"t_xi"},
          {"theta", "txi", "--d", "1", "--omega", "0+1i", "--xi", "1", "--x", R"({"d":1,"phi":[["0"]],"terms":[{"n":[1],"re":"1","im":"0"}]})"}},
         theta_txi},
        {{"theta", "verify", {"verify_transformation_law"}, {"theta", "verify", "--d", "1", "--omega", "0+2i", "--xi", "1", "--radius", "8"}},
         theta_verify},
        {{"moyal", "product", {"moyal_mode_product"},
          {"moyal", "product", "--f", R"([{"m":[1,0],"re":"1","im":"0"}])", "--g", R"([{"m":[0,1],"re":"1","im":"0"}])", "--hbar", "1/4"}},
         moyal_product},
        {{"moyal", "oracle", {"moyal_quadrature_oracle"},
          {"moyal", "oracle", "--f", R"({"width":["1","2"],"mode":["0.3","0"]})", "--g", R"({"width":["2","1"],"center":["0.1","0"]})",
           "--x", "0.2,-0.1"}},
         moyal_oracle},
        {{"moyal", "check", {"semiclassical_check"},
          {"moyal", "check", "--f", R"([{"m":[1,0],"re":"1","im":"0"},{"m":[0,1],"re":"0.5","im":"0"}])", "--g",
           R"([{"m":[0,1],"re":"1","im":"0"},{"m":[1,1],"re":"0","im":"0.25"}])"}},
         moyal_check},
        {{"fukaya", "area", {"triangle_area"}, {"fukaya", "area", "--a", "0,0", "--b", "1,0", "--c", "0,1/2"}}, fukaya_area},
        {{"fukaya", "m2", {"m2_series"},
          {"fukaya", "m2", "--l1", R"({"direction":[1,0]})", "--l2", R"({"direction":[0,1]})", "--l3", R"({"direction":[1,1]})",
           "--rho", "0+1i", "--cutoff", "8"}},
         fukaya_m2},
        {{"foliation", "local-system", {"to_local_system"},
          {"foliation", "local-system", "--steps", "512", "--input",
           R"({"phi":"0.6180339887498949","rank":1,"monodromy":[{"k":1,"re":[["1"]],"im":[["0"]]}]})"}},
         foliation_local_system},
        {{"foliation", "holonomy", {"holonomy"},
          {"foliation", "holonomy", "--input",
           R"({"rank":1,"phi":"0.6180339887498949","transport_slope":"0.6180339887498949","steps":4096,"gluing":[{"k":1,"re":[["1"]],"im":[["0"]]}]})"}},
         foliation_holonomy},
        {{"foliation", "roundtrip", {"round_trip"},
          {"foliation", "roundtrip", "--input", R"({"phi":"0.7071067811865476","rank":1,"monodromy":[{"k":1,"re":[["1"]],"im":[["0"]]}]})"}},
         foliation_roundtrip},
        {{"weyl", "module", {"module_of_line"}, {"weyl", "module", "--line", "0,1", "--hbar", "1/3", "--cutoff", "3"}}, weyl_module},
        {{"weyl", "ext", {"ext_dims"}, {"weyl", "ext", "--line1", "0,1", "--line2", "1,0", "--hbar", "1", "--cutoff", "8"}}, weyl_ext},
        {{"modular", "eisenstein", {"eisenstein"}, {"modular", "eisenstein", "--k", "4", "--order", "5"}}, modular_eisenstein},
        {{"modular", "character", {"transposition_character"}, {"modular", "character", "--partition", "3,1"}}, modular_character},
        {{"modular", "series", {"covers_series"}, {"modular", "series", "--genus", "2", "--order", "5"}}, modular_series},
        {{"modular", "brute", {"brute_force_covers"}, {"modular", "brute", "--genus", "2", "--degree", "3"}}, modular_brute},
        {{"modular", "fg", {"quasimodular_decompose"}, {"modular", "fg", "--genus", "2", "--order", "20"}}, modular_fg},
        {{"dedekind", "s", {"dedekind_direct", "dedekind_recursive"}, {"dedekind", "s", "--p", "2", "--q", "3"}}, dedekind_s},
        {{"dedekind", "verify", {"boundary_modularity_check"}, {"dedekind", "verify", "--range", "10"}}, dedekind_verify},
        {{"syz", "legendre", {"legendre_transform"},
          {"syz", "legendre", "--input", R"({"grid":{"lo":[-1],"hi":[1],"points":[5]},"function":{"a":[["1"]]}})"}},
         syz_legendre},
        {{"syz", "monge-ampere", {"monge_ampere_residual"},
          {"syz", "monge-ampere", "--c", "1", "--input", R"({"grid":{"lo":[-1,-1],"hi":[1,1],"points":[5,5]},"function":{"a":[["1","0"],["0","1"]]}})"}},
         syz_monge_ampere},
        {{"syz", "duality", {"duality_volume_check"},
          {"syz", "duality", "--c", "1", "--lambda-max", "1", "--lambda-min", "1", "--input",
           R"({"grid":{"lo":[-2,-2],"hi":[2,2],"points":[41,41]},"function":{"a":[["1","0"],["0","1"]]},"dual":{"lo":[-1,-1],"hi":[1,1],"points":[21,21]}})"}},
         syz_duality},
    };
    return table;
}

std::string flatten_tsv(const Json &j, const std::string &path = "") {
    std::string out;
    if (j.is_object() || j.is_array()) {
        if (j.empty()) return path + "\t" + j.dump() + "\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            const std::string key = j.is_object() ? it.key() : std::to_string(i);
            out += flatten_tsv(*it, path.empty() ? key : path + "." + key);
        }
        return out;
    }
    return path + "\t" + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
}

std::string render(const Json &body, const RunConfig &c) {
    if (c.format == RunConfig::Format::json) return body.dump(2) + "\n";
    if (body.contains("cases") && body.contains("suite")) {
        std::string out = "name\tstatus\tresidual\n";
        for (const auto &cs : body.at("cases"))
            out += cs.at("name").get<std::string>() + "\t" + cs.at("status").get<std::string>() + "\t" +
                   (cs.contains("residual") ? cs.at("residual").get<std::string>() : "") + "\n";
        return out;
    }
    return flatten_tsv(body);
}

} // namespace

const std::vector<CommandInfo> &commands() {
    static const std::vector<CommandInfo> list = [] {
        std::vector<CommandInfo> out;
        for (const auto &e : entries()) out.push_back(e.info);
        out.push_back({"verify-all", "", {"emit_report"}, {"verify-all", "--seed", "7"}});
        return out;
    }();
    return list;
}

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app("Quantum tori workbench", "qtorus");
    app.require_subcommand(1);
    RunConfig config;
    std::string format = "json";
    std::vector<std::string> tol_flags;
    auto jobs = std::make_shared<std::size_t>(1);
    std::optional<int> precision_flag;
    app.add_option("--seed", config.seed, "seed for randomized suites");
    app.add_option("--format", format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    app.add_option("--tol", tol_flags, "tolerance override key=value");
    app.add_option("--jobs", *jobs, "worker pool size for verify-all")->check(CLI::Range(1, 256));
    app.add_option("--precision", precision_flag, "significant digits, at least 15");

    Handler handler;
    std::map<std::string, CLI::App *> modules;
    for (const auto &e : entries()) {
        auto &module = modules[e.info.module];
        if (!module) {
            module = app.add_subcommand(e.info.module, e.info.module + " commands");
            module->require_subcommand(1);
            module->fallthrough();
        }
        CLI::App *sub = module->add_subcommand(e.info.name, e.info.operations.front());
        sub->fallthrough();
        auto h = std::make_shared<Handler>(e.install(*sub));
        sub->callback([h, &handler] { handler = *h; });
    }
    CLI::App *verify = app.add_subcommand("verify-all", "run every invariant suite");
    verify->fallthrough();
    auto vh = std::make_shared<Handler>(verify_all(*verify, jobs));
    verify->callback([vh, &handler] { handler = *vh; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        config.format = format == "tsv" ? RunConfig::Format::tsv : RunConfig::Format::json;
        if (precision_flag) config.precision = *precision_flag;
        if (const char *env = std::getenv("QTORUS_PRECISION")) {
            std::size_t used = 0;
            int p = 0;
            try {
                p = std::stoi(env, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used == 0 || env[used] != '\0') throw UsageError(std::string("QTORUS_PRECISION: not an integer '") + env + "'");
            config.precision = p;
        }
        if (config.precision < 15) throw UsageError("precision must be at least 15, got " + std::to_string(config.precision));
        if (config.precision > 40) throw UsageError("precision above 40 is not meaningful for long double output");
        for (const auto &t : tol_flags) {
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw UsageError("--tol: expected key=value, got '" + t + "'");
            const std::string key = t.substr(0, eq);
            if (!default_tolerances().count(key)) throw UsageError("--tol: unknown key '" + key + "'");
            double v = 0;
            try {
                v = std::stod(t.substr(eq + 1));
            } catch (const std::exception &) {
                throw UsageError("--tol: cannot parse value in '" + t + "'");
            }
            if (!(v > 0)) throw UsageError("--tol: tolerance must be positive in '" + t + "'");
            config.tolerances[key] = v;
        }
        const Outcome o = handler(config);
        out << render(o.body, config);
        return o.verified ? 0 : 1;
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::InvalidArgument) {
            err << "usage error: " << e.what() << "\n";
            return 2;
        }
        out << render(Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}, config);
        return 1;
    }
}

} // namespace qtorus::cli
