#include "qtorus/serialization.hpp"

namespace qtorus {

Rational rational_from_json(const Json &j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw Error(ErrorKind::InvalidArgument, "expected a rational string, got " + j.dump());
}

Real real_from_json(const Json &j) {
    if (j.is_string()) return parse_real(j.get<std::string>());
    if (j.is_number()) return j.get<double>();
    throw Error(ErrorKind::InvalidArgument, "expected a decimal string, got " + j.dump());
}

Json skew_to_json(const SkewForm &phi) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < phi.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < phi.dim(); ++j) row.push_back(to_string(phi(i, j)));
        rows.push_back(row);
    }
    return rows;
}

SkewForm skew_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::InvalidArgument, "phi must be a non-empty array of rows");
    const std::size_t d = j.size();
    Matrix<Rational> m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        if (!j[r].is_array() || j[r].size() != d) throw Error(ErrorKind::InvalidArgument, "phi must be square");
        for (std::size_t c = 0; c < d; ++c) m(r, c) = rational_from_json(j[r][c]);
    }
    return SkewForm(m);
}

namespace {

template <class C>
Json element_json(const QTorusElement<C> &x, int digits) {
    Json out;
    out["d"] = x.dim();
    out["phi"] = skew_to_json(x.phi());
    Json terms = Json::array();
    for (const auto &[n, c] : x.terms()) {
        const Complex z = CoefficientTraits<C>::to_complex(c);
        Json t;
        t["n"] = n;
        t["re"] = to_decimal(z.real(), digits);
        t["im"] = to_decimal(z.imag(), digits);
        terms.push_back(t);
    }
    out["terms"] = terms;
    return out;
}

} // namespace

Json element_to_json(const NumericElement &x, int digits) { return element_json(x, digits); }
Json element_to_json(const ExactElement &x, int digits) { return element_json(x, digits); }

NumericElement element_from_json(const Json &j) {
    if (!j.contains("d") || !j.contains("phi") || !j.contains("terms"))
        throw Error(ErrorKind::InvalidArgument, "element JSON needs d, phi and terms");
    const auto d = j.at("d").get<std::size_t>();
    SkewForm phi = skew_from_json(j.at("phi"));
    if (phi.dim() != d) throw Error(ErrorKind::InvalidArgument, "d does not match phi");
    NumericElement x(phi);
    for (const auto &t : j.at("terms")) {
        auto n = t.at("n").get<LatticeVector>();
        if (n.size() != d) throw Error(ErrorKind::InvalidArgument, "term index has wrong rank");
        x.add_term(n, Complex(real_from_json(t.at("re")), real_from_json(t.at("im"))));
    }
    return x;
}

} // namespace qtorus
