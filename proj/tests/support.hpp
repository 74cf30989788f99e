#pragma once

// Random generators shared by the property-style tests.

#include "qtorus/random.hpp"

namespace qtorus::testing {

inline Sampler &sampler() {
    static Sampler s(0x5eed);
    return s;
}

inline std::mt19937_64 &rng() { return sampler().engine(); }

inline long uniform(long lo, long hi) { return sampler().uniform(lo, hi); }
inline Real uniform_real(Real lo, Real hi) { return sampler().uniform_real(lo, hi); }
inline Rational random_rational(long max_num = 9, long max_den = 7) { return sampler().rational(max_num, max_den); }
inline SkewForm random_skew(std::size_t d, long max_num = 9, long max_den = 7) {
    return sampler().skew(d, max_num, max_den);
}
inline LatticeVector random_vector(std::size_t d, long radius) { return sampler().vector(d, radius); }
inline Cyclotomic random_cyclotomic() { return sampler().cyclotomic(); }
inline ExactElement random_exact_element(const SkewForm &phi, long max_terms = 4, long radius = 3) {
    return sampler().exact_element(phi, max_terms, radius);
}
inline NumericElement random_numeric_element(const SkewForm &phi, long max_terms = 4, long radius = 3) {
    return sampler().numeric_element(phi, max_terms, radius);
}
inline OddSymplecticMatrix random_group_element(std::size_t d, int max_len = 4) {
    return sampler().group_element(d, max_len);
}
inline ThetaParams random_theta_params(std::size_t d) { return sampler().theta_params(d); }

} // namespace qtorus::testing
