// Tangency classification for piecewise polynomial vector fields:
// contact multiplicities, visibility, orientation, and the monodromy
// verdict for the origin on {y = 0}.
//
// Visibility bookkeeping. With L = Z^{2k}h(0,0) = X(0,0)^{2k-1} *
// d^{2k-1}Y/dx^{2k-1}(0,0), the textbook convention declares the upper
// contact invisible when L+ < 0 and the lower one invisible when
// L- > 0. A first-return structure exists exactly when the two Lie
// values carry opposite signs; pairs realizing the mirrored pattern
// (L+ > 0, L- < 0) produce the same half-return pairings with every
// arc traversed on the reflected side, and are accepted here as
// monodromic with convention = reversed so callers can tell the two
// apart. Both raw Lie signs are retained for auditing.
#pragma once

#include <optional>
#include <string>

#include "tansing/errors.hpp"
#include "tansing/numbers.hpp"
#include "tansing/poly.hpp"

namespace tansing {

struct ContactResult {
    bool infinite = false;
    int multiplicity = 0; // valid when !infinite
};

enum class SignConvention { standard, reversed };

struct TangencyClassification {
    int k_plus = 0;
    int k_minus = 0;
    int delta = 0; // sign(X+(0,0)); meaningful when orientation_ok
    bool invisible_plus = false;
    bool invisible_minus = false;
    bool orientation_ok = false;
    bool monodromic = false;
    SignConvention convention = SignConvention::standard;
    int lie_sign_plus = 0;  // sign of (Z+)^{2k+} h (0,0)
    int lie_sign_minus = 0; // sign of (Z-)^{2k-} h (0,0)

    // sign of the Lie value for one side; the side's returning arcs live
    // in the half-plane {lie_sign * y < 0}
    int lie_sign(Side s) const { return s == Side::upper ? lie_sign_plus : lie_sign_minus; }
    int k(Side s) const { return s == Side::upper ? k_plus : k_minus; }
};

// Smallest n >= 2 with d^{n-1}Y/dx^{n-1}(0,0) != 0, decided exactly on
// the polynomial; infinite when Y(x,0) is identically zero. The probe
// degree exists for interface stability; deg_x(Y)+1 always suffices for
// polynomials.
template <class F>
ContactResult contact_multiplicity(const PolyVF<F>& field, int probe_degree = -1) {
    if (field_is_zero(field.X.at_origin()))
        throw NotTangential("X(0,0) = 0: the flow is not transversal in x at the origin");
    if (!field_is_zero(field.Y.coeff(0, 0)))
        throw NotTangential("Y(0,0) != 0: the origin is not a contact point");
    const std::vector<F> yx = field.Y.restrict_y0();
    const int limit = probe_degree < 0 ? static_cast<int>(yx.size()) - 1
                                       : std::min<int>(probe_degree, static_cast<int>(yx.size()) - 1);
    for (int m = 1; m <= limit; ++m)
        if (!field_is_zero(yx[static_cast<std::size_t>(m)])) return ContactResult{false, m + 1};
    return ContactResult{true, 0};
}

template <class F>
TangencyClassification classify(const PiecewiseField<F>& field) {
    TangencyClassification cls;

    const ContactResult up = contact_multiplicity(field.upper);
    const ContactResult lo = contact_multiplicity(field.lower);
    if (up.infinite || lo.infinite)
        throw NotMonodromic(std::string("Y(x,0) vanishes identically on the ") +
                            (up.infinite ? "upper" : "lower") + " side (infinite contact)");
    if (up.multiplicity % 2 != 0)
        throw OddMultiplicity("upper contact multiplicity " + std::to_string(up.multiplicity) +
                              " is odd");
    if (lo.multiplicity % 2 != 0)
        throw OddMultiplicity("lower contact multiplicity " + std::to_string(lo.multiplicity) +
                              " is odd");
    cls.k_plus = up.multiplicity / 2;
    cls.k_minus = lo.multiplicity / 2;

    const int sx_plus = field_sign(field.upper.X.at_origin());
    const int sx_minus = field_sign(field.lower.X.at_origin());
    cls.orientation_ok = (sx_plus * sx_minus < 0);
    cls.delta = sx_plus;

    // leading x-derivative of Y(x,0): sign of the coefficient of x^{2k-1}
    const int sy_plus = field_sign(field.upper.Y.coeff(2 * cls.k_plus - 1, 0));
    const int sy_minus = field_sign(field.lower.Y.coeff(2 * cls.k_minus - 1, 0));
    // X(0,0)^{2k-1} carries the sign of X(0,0)
    cls.lie_sign_plus = sx_plus * sy_plus;
    cls.lie_sign_minus = sx_minus * sy_minus;

    const bool paper_pattern = cls.lie_sign_plus < 0 && cls.lie_sign_minus > 0;
    const bool mirrored_pattern = cls.lie_sign_plus > 0 && cls.lie_sign_minus < 0;

    if (paper_pattern || mirrored_pattern) {
        cls.invisible_plus = true;
        cls.invisible_minus = true;
        cls.convention = paper_pattern ? SignConvention::standard : SignConvention::reversed;
    } else {
        cls.invisible_plus = cls.lie_sign_plus < 0;
        cls.invisible_minus = cls.lie_sign_minus > 0;
    }

    cls.monodromic =
        cls.orientation_ok && cls.invisible_plus && cls.invisible_minus && (paper_pattern || mirrored_pattern);
    return cls;
}

} // namespace tansing
